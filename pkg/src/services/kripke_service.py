"""
Kripke Service
전이 시스템 변환(pre/post), 구조적 술어(전사성, 단사성, 대칭성, P→)
"""

from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx
from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import SubsetCapError
from src.models.transition_system import StateSet, TransitionSystem


@dataclass(frozen=True)
class PArrowResult:
    """P→(S) 판정 결과 (참이면 증거 (q, r, t, k))"""

    holds: bool
    witness: Optional[Tuple[str, str, str, int]] = None


def totalize(ts: TransitionSystem) -> Tuple[TransitionSystem, List[str]]:
    """
    선행자나 후속자가 없는 상태에만 자기 루프 추가

    Returns:
        (전사 시스템, 자기 루프가 추가된 상태 목록)
    """
    added = [s for s in ts.states if not ts.successors(s) or not ts.predecessors(s)]
    if not added:
        return ts, []
    logger.warning(f"{ts.name}: added self-loops on {added} to make the relation total")
    edges = set(ts.edges) | {(s, s) for s in added}
    return TransitionSystem(ts.states, frozenset(edges), ts.labels, ts.name), added


def reverse_system(ts: TransitionSystem) -> TransitionSystem:
    """역전 시스템 (edges⁻¹)"""
    return TransitionSystem(ts.states, frozenset((b, a) for a, b in ts.edges), ts.labels, f"{ts.name}⁻¹")


def post(ts: TransitionSystem, ys: Iterable[str]) -> StateSet:
    """∃-후속자"""
    return frozenset(b for y in ys for b in ts.successors(y))


def pre(ts: TransitionSystem, ys: Iterable[str]) -> StateSet:
    """∃-선행자"""
    return frozenset(a for y in ys for a in ts.predecessors(y))


def pre_tilde(ts: TransitionSystem, ys: Iterable[str]) -> StateSet:
    """모든 후속자가 ys 안에 있는 상태 (¬pre(¬Y))"""
    target = frozenset(ys)
    return ts.state_set - pre(ts, ts.state_set - target)


def post_tilde(ts: TransitionSystem, ys: Iterable[str]) -> StateSet:
    """모든 선행자가 ys 안에 있는 상태 (¬post(¬Y))"""
    target = frozenset(ys)
    return ts.state_set - post(ts, ts.state_set - target)


def is_injective(ts: TransitionSystem) -> bool:
    """서로 다른 두 선행자를 가진 상태가 없다"""
    return all(len(ts.predecessors(s)) <= 1 for s in ts.states)


def is_symmetric(ts: TransitionSystem) -> bool:
    """r→s이면 s→r"""
    return all((b, a) in ts.edges for a, b in ts.edges)


def reachable(ts: TransitionSystem, s: str) -> StateSet:
    """s에서 0단계 이상으로 도달 가능한 상태"""
    return frozenset(nx.descendants(ts.graph, s)) | {s}


def co_reachable(ts: TransitionSystem, s: str) -> StateSet:
    """0단계 이상으로 s에 도달하는 상태"""
    return frozenset(nx.ancestors(ts.graph, s)) | {s}


def pair_graph(ts: TransitionSystem) -> nx.DiGraph:
    """동기 곱 그래프: (a, b) → (a', b') ⟺ a → a', b → b'"""
    return nx.tensor_product(ts.graph, ts.graph)


def p_arrow(ts: TransitionSystem, subset: Iterable[str]) -> PArrowResult:
    """
    P→(S): q ∈ S, r ∉ S에서 같은 길이 k > 0의 경로로 공통 상태 t에 도달하는가

    곱 그래프에서 모든 (q, r) 쌍을 출발점으로 최단 경로를 구해
    가장 가까운 대각 쌍 (t, t)을 고른다.

    Args:
        ts: 전사 시스템
        subset: 상태 집합 S

    Returns:
        PArrowResult (최소 k 증거)
    """
    inside = frozenset(subset)
    sources = {(q, r) for q in ts.states if q in inside for r in ts.states if r not in inside}
    if not sources:
        return PArrowResult(False)
    distance, paths = nx.multi_source_dijkstra(pair_graph(ts), sources)
    rank = {s: i for i, s in enumerate(ts.states)}
    meets = [(d, rank[node[0]], node) for node, d in distance.items() if node[0] == node[1]]
    if not meets:
        return PArrowResult(False)
    k, _, t = min(meets)
    q, r = paths[t][0]
    return PArrowResult(True, (q, r, t[0], int(k)))


def confluent_pairs(ts: TransitionSystem) -> FrozenSet[FrozenSet[str]]:
    """같은 길이 k ≥ 1 경로로 합류할 수 있는 서로 다른 상태 쌍 (곱 그래프에서 대각의 조상)"""
    graph = pair_graph(ts)
    above: Set[Tuple[str, str]] = set()
    for s in ts.states:
        above |= nx.ancestors(graph, (s, s))
    return frozenset(frozenset(pair) for pair in above if pair[0] != pair[1])


def iter_subsets(states: Tuple[str, ...], cap: Optional[int] = None) -> Iterator[StateSet]:
    """
    상태 부분집합 열거 (크기 순, 선언 순)

    Raises:
        SubsetCapError: 상태 수가 cap 초과
    """
    cap = cap if cap is not None else AnalysisDefaults.subset_cap()
    if len(states) > cap:
        raise SubsetCapError(f"{len(states)} states exceed the subset enumeration cap {cap}")
    for k in range(len(states) + 1):
        for combo in combinations(states, k):
            yield frozenset(combo)


def core_next_states(ts: TransitionSystem, cap: Optional[int] = None) -> List[StateSet]:
    """
    {S : ¬P→(S)} — next-time core에 남는 γ∀(S)의 상태 집합

    Args:
        ts: 전사 시스템
        cap: 부분집합 열거 상한

    Returns:
        상태 집합 리스트 (∅과 전체 집합 포함, 여집합에 닫힘)
    """
    pairs = confluent_pairs(ts)
    result = []
    for subset in iter_subsets(ts.states, cap):
        crossing = any(len(pair & subset) == 1 for pair in pairs)
        if not crossing:
            result.append(subset)
    logger.debug(f"{ts.name}: {len(result)} subsets survive the next-time core")
    return result


def reversal_stable_states(ts: TransitionSystem) -> StateSet:
    """
    M↓s = (⟲M)↓s인 상태 (그래프 기준, 전체 트레이스에 대해 정확)

    s를 지나는 모델 경로가 쓸 수 있는 간선(s →* a인 a→b, 또는 b →* s인 a→b)이
    모두 대칭이어야 한다.
    """
    stable = []
    for s in ts.states:
        forward = reachable(ts, s)
        backward = co_reachable(ts, s)
        if all((b, a) in ts.edges for a, b in ts.edges if a in forward or b in backward):
            stable.append(s)
    return frozenset(stable)
