"""
Transition System
유한 전이 시스템 (Kripke 구조) 모델
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from src.exceptions import ParseError

StateSet = FrozenSet[str]


@dataclass(frozen=True)
class TransitionSystem:
    """
    유한 상태 집합, 전이 관계, 원자 명제 라벨

    states는 선언 순서를 유지한다 (보고서 및 열거 순서).
    """

    states: Tuple[str, ...]
    edges: FrozenSet[Tuple[str, str]]
    labels: Tuple[Tuple[str, StateSet], ...] = ()
    name: str = field(default="ts", compare=False)

    def __post_init__(self):
        if not self.states:
            raise ParseError("transition system needs at least one state", self.name)
        known = set(self.states)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ParseError(f"edge {a} -> {b} mentions an unknown state", self.name)
        for prop, members in self.labels:
            if not members <= known:
                raise ParseError(f"label {prop} mentions unknown states {sorted(members - known)}", self.name)

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        edges: Iterable[Tuple[str, str]],
        labels: Optional[Mapping[str, Iterable[str]]] = None,
        name: str = "ts",
    ) -> "TransitionSystem":
        """리스트/딕셔너리 입력으로 생성"""
        return cls(
            states=tuple(dict.fromkeys(states)),
            edges=frozenset((a, b) for a, b in edges),
            labels=tuple(sorted((p, frozenset(ss)) for p, ss in (labels or {}).items())),
            name=name,
        )

    @cached_property
    def state_set(self) -> StateSet:
        return frozenset(self.states)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """networkx 유향 그래프"""
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def _succ(self) -> Dict[str, Tuple[str, ...]]:
        order = {s: i for i, s in enumerate(self.states)}
        return {
            s: tuple(sorted((b for a, b in self.edges if a == s), key=order.__getitem__))
            for s in self.states
        }

    @cached_property
    def _pred(self) -> Dict[str, Tuple[str, ...]]:
        order = {s: i for i, s in enumerate(self.states)}
        return {
            s: tuple(sorted((a for a, b in self.edges if b == s), key=order.__getitem__))
            for s in self.states
        }

    def successors(self, s: str) -> Tuple[str, ...]:
        return self._succ[s]

    def predecessors(self, s: str) -> Tuple[str, ...]:
        return self._pred[s]

    def has_edge(self, a: str, b: str) -> bool:
        return (a, b) in self.edges

    def label(self, prop: str) -> Optional[StateSet]:
        """명제 라벨의 상태 집합 (없으면 None)"""
        for name, members in self.labels:
            if name == prop:
                return members
        return None

    @property
    def label_map(self) -> Dict[str, StateSet]:
        return dict(self.labels)

    def is_total(self) -> bool:
        """모든 상태가 선행자와 후속자를 가진다"""
        return all(self._succ[s] and self._pred[s] for s in self.states)

    def sort_states(self, states: Iterable[str]) -> List[str]:
        order = {s: i for i, s in enumerate(self.states)}
        return sorted(states, key=order.__getitem__)

    def format_states(self, states: Iterable[str]) -> str:
        items = self.sort_states(states)
        return "{" + ",".join(items) + "}" if items else "∅"
