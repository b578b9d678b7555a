"""
Trace Closures
℘(U)⊇ 위의 닫힘 연산자 (합집합 닫힌 고정점 패밀리) 및 시점 이동 추상화 값
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config.defaults import AnalysisDefaults
from src.exceptions import CarrierMismatchError, SubsetCapError
from src.models.transition_system import StateSet
from src.models.universe import TraceSet, TraceUniverse


@dataclass(frozen=True, order=True)
class ShiftGenerator:
    """
    이동 불변 생성자 (N, z, S) = {⟨i,σ⟩ ∈ N : σ(i+z) ∈ S}

    N은 M (reversed=False) 또는 ⟲M. ⊖는 z를 z−1로, ⟲는 (N, z)를 (⟲N, −z)로 보낸다.
    """

    reversed: bool
    shift: int
    states: FrozenSet[str]

    def prev(self) -> "ShiftGenerator":
        return ShiftGenerator(self.reversed, self.shift - 1, self.states)

    def reverse(self) -> "ShiftGenerator":
        return ShiftGenerator(not self.reversed, -self.shift, self.states)

    def __str__(self) -> str:
        model = "⟲M" if self.reversed else "M"
        inner = ",".join(sorted(self.states))
        return f"{model}^{self.shift}↓{{{inner}}}"


class TraceUco:
    """
    생성자 집합의 합집합 폐포로 주어진 ⊇-uco

    apply(X) = X 안에 들어가는 생성자들의 합집합. 생성자가 없으면 λX.∅.
    """

    def __init__(
        self,
        universe: TraceUniverse,
        generators: Sequence[TraceSet],
        name: str = "ρ",
        labels: Optional[Sequence[object]] = None,
    ):
        self.universe = universe
        self.name = name
        unique: Dict[TraceSet, object] = {}
        for k, g in enumerate(generators):
            if g.universe is not universe:
                raise CarrierMismatchError(f"generator of {name} belongs to another universe")
            if g and g not in unique:
                unique[g] = labels[k] if labels is not None else None
        self.generators: List[TraceSet] = list(unique)
        self.labels: List[object] = list(unique.values())
        if self.generators:
            self._matrix = np.stack([g.mask for g in self.generators])
        else:
            self._matrix = np.zeros((0, universe.size), dtype=bool)

    def __repr__(self) -> str:
        return f"TraceUco({self.name}, {len(self.generators)} generators)"

    def apply(self, traces: TraceSet) -> TraceSet:
        """ρ(X) = ∪{g : g ⊆ X}"""
        if traces.universe is not self.universe:
            raise CarrierMismatchError(f"{self.name} applied to a set of another universe")
        if not self.generators:
            return self.universe.empty()
        inside = ~np.any(self._matrix & ~traces.mask, axis=1)
        return TraceSet(self.universe, np.any(self._matrix[inside], axis=0))

    def __call__(self, traces: TraceSet) -> TraceSet:
        return self.apply(traces)

    def is_member(self, traces: TraceSet) -> bool:
        return self.apply(traces) == traces

    def is_constant_empty(self) -> bool:
        return not self.generators

    def members(self, cap: Optional[int] = None) -> List[TraceSet]:
        """
        고정점 패밀리 전체 (∅ 포함)

        Raises:
            SubsetCapError: 패밀리 크기가 cap 초과
        """
        cap = cap or AnalysisDefaults.UCO_ENUMERATION_CAP
        family = {self.universe.empty()}
        for g in self.generators:
            family |= {member | g for member in family}
            if len(family) > cap:
                raise SubsetCapError(f"{self.name} has more than {cap} fixpoints")
        return sorted(family, key=lambda s: (len(s), s.indices.tolist()))

    def family_size(self, cap: Optional[int] = None) -> int:
        return len(self.members(cap))


class RestrictionTraceUco(TraceUco):
    """λX. X ∩ C (고정점 = ℘(C))"""

    def __init__(self, universe: TraceUniverse, carrier: TraceSet, name: str = "ρ"):
        super().__init__(universe, [], name)
        self.carrier = carrier

    def __repr__(self) -> str:
        return f"RestrictionTraceUco({self.name}, |C|={len(self.carrier)})"

    def apply(self, traces: TraceSet) -> TraceSet:
        return traces & self.carrier

    def is_constant_empty(self) -> bool:
        return self.carrier.is_empty()

    @property
    def singleton_generators(self) -> Iterator[TraceSet]:
        for k in self.carrier.indices:
            mask = np.zeros(self.universe.size, dtype=bool)
            mask[k] = True
            yield TraceSet(self.universe, mask)

    def members(self, cap: Optional[int] = None) -> List[TraceSet]:
        cap = cap or AnalysisDefaults.UCO_ENUMERATION_CAP
        if 2 ** len(self.carrier) > cap:
            raise SubsetCapError(f"{self.name} has 2^{len(self.carrier)} fixpoints, above the cap {cap}")
        family = {self.universe.empty()}
        for g in self.singleton_generators:
            family |= {member | g for member in family}
        return sorted(family, key=lambda s: (len(s), s.indices.tolist()))


@dataclass
class ShiftAbstraction:
    """z ↦ {s : M^z↓s ⊆ X} (z ∈ [lo, hi])"""

    lo: int
    hi: int
    values: Dict[int, StateSet] = field(default_factory=dict)

    def __getitem__(self, z: int) -> StateSet:
        return self.values.get(z, frozenset())

    def shifts(self) -> range:
        return range(self.lo, self.hi + 1)

    def threshold(self, state: str) -> Optional[int]:
        """state가 처음 나타나는 z (없으면 None)"""
        for z in self.shifts():
            if state in self[z]:
                return z
        return None

    def rows(self) -> List[Tuple[int, List[str]]]:
        return [(z, sorted(self[z])) for z in self.shifts()]


class PastSequenceAbstraction(ShiftAbstraction):
    """과거 방향 z ∈ [−K, 0]"""

    def __init__(self, depth: int, values: Optional[Dict[int, StateSet]] = None):
        super().__init__(-depth, 0, dict(values or {}))

    @property
    def depth(self) -> int:
        return -self.lo


class BidirectionalAbstraction(ShiftAbstraction):
    """양방향 z ∈ [−K, K]"""

    def __init__(self, depth: int, values: Optional[Dict[int, StateSet]] = None):
        super().__init__(-depth, depth, dict(values or {}))

    @property
    def depth(self) -> int:
        return self.hi


@dataclass(frozen=True)
class PairAbstraction:
    """⟨α∀_M(X), α∀_{⟲M}(X)⟩"""

    forward: StateSet
    backward: StateSet
