"""
Trace Service
트레이스 모델, 사영, ∀ 연산자, 전방/후방 폐포, α∀/γ∀/ρ∀와 존재 쌍대, 우주 가설 검사
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import UniverseOverflowError
from src.models.trace import BiLassoTrace, PathKey, Word, reverse_path, state_at
from src.models.transition_system import StateSet, TransitionSystem
from src.models.universe import TraceSet, TraceUniverse
from src.services import kripke_service


def model_traces(ts: TransitionSystem, universe: TraceUniverse, plus: bool = False) -> TraceSet:
    """M ∩ U (plus=True면 M ∩ U⁺)"""
    return universe.model(ts.edges, plus=plus)


def sigma_model(states: Iterable[str], universe: TraceUniverse) -> TraceSet:
    """σ_S (M과 교차하지 않는다)"""
    return universe.sigma(states)


def pi_model(edges: Iterable[Tuple[str, str]], universe: TraceUniverse) -> TraceSet:
    """π_t (M과 교차하지 않는다)"""
    return universe.pi(edges)


def state_projection(traces: TraceSet, state: str) -> TraceSet:
    """X↓s"""
    return traces.project(state)


def shifted_projection(model: TraceSet, state_set: Iterable[str], z: int) -> TraceSet:
    """{⟨i,σ⟩ ∈ N : σ(i+z) ∈ S}"""
    return TraceSet(model.universe, model.mask & model.universe.states_mask(state_set, shift=z))


def past_projection(model: TraceSet, trace: BiLassoTrace, k: int) -> TraceSet:
    """M^{−k}↓⟨i,σ⟩ = {⟨j,τ⟩ ∈ M : τ(j−k) = σ(i−k)}"""
    if k < 0:
        raise ValueError(f"past depth must be non-negative, got {k}")
    return shifted_projection(model, [trace.state_at(trace.present - k)], -k)


def forall_op(guard: TraceSet, traces: TraceSet) -> TraceSet:
    """∀(N, X) = {⟨i,σ⟩ ∈ N : N↓σ_i ⊆ X}"""
    u = guard.universe
    bad_states = np.unique(u.present_state[guard.mask & ~traces.mask])
    ok = ~np.isin(u.present_state, bad_states)
    return TraceSet(u, guard.mask & ok)


# ============================================
# 전방/후방 폐포
# ============================================


def _future_key(key: PathKey, present: int) -> Tuple[Word, Word]:
    """σ(present..)의 정규 전방 lasso (접두, 루프)"""
    u, m, w, o = key
    start = o + len(m)
    prefix = tuple(state_at(key, n) for n in range(present, start))
    phase = (max(present, start) - start) % len(w)
    loop = w[phase:] + w[:phase]
    while prefix and prefix[-1] == loop[-1]:
        loop = loop[-1:] + loop[:-1]
        prefix = prefix[:-1]
    return prefix, loop


@lru_cache(maxsize=16)
def _closure_classes(universe: TraceUniverse, backward: bool) -> np.ndarray:
    """트레이스별 (현재 시점, 미래(또는 과거) 접미) 동치류 번호"""
    classes: Dict[Tuple, int] = {}
    labels = np.empty(universe.size, dtype=np.int64)
    for index in range(universe.size):
        trace = universe.trace_at(index)
        if backward:
            key = (trace.present, _future_key(reverse_path(trace.path), -trace.present))
        else:
            key = (trace.present, _future_key(trace.path, trace.present))
        labels[index] = classes.setdefault(key, len(classes))
    return labels


def _closure(traces: TraceSet, backward: bool) -> TraceSet:
    u = traces.universe
    labels = _closure_classes(u, backward)
    hit = np.isin(labels, labels[traces.mask])
    return TraceSet(u, hit & (u.interior_mask | traces.mask))


def fd_closure(traces: TraceSet) -> TraceSet:
    """우주 안 전방 폐포: 시점 i 이후가 같은 트레이스 추가"""
    return _closure(traces, backward=False)


def bd_closure(traces: TraceSet) -> TraceSet:
    """우주 안 후방 폐포: 시점 i 이전이 같은 트레이스 추가"""
    return _closure(traces, backward=True)


# ============================================
# 보편/존재 검사 추상화
# ============================================


def alpha_forall(traces: TraceSet, model: TraceSet) -> StateSet:
    """α∀(X) = {s : M↓s ⊆ X}"""
    u = model.universe
    bad = np.unique(u.present_state[model.mask & ~traces.mask])
    return frozenset(u.alphabet) - {u.alphabet[c] for c in bad}


def gamma_forall(states: Iterable[str], model: TraceSet) -> TraceSet:
    """γ∀(S) = ∪_{s∈S} M↓s"""
    return shifted_projection(model, states, 0)


def rho_forall(traces: TraceSet, model: TraceSet) -> TraceSet:
    """ρ∀ = γ∀ ∘ α∀"""
    return gamma_forall(alpha_forall(traces, model), model)


def alpha_exists(traces: TraceSet, model: TraceSet) -> StateSet:
    """α∃(X) = {s : M↓s ∩ X ≠ ∅}"""
    return (traces & model).present_states()


def gamma_exists(states: Iterable[str], model: TraceSet) -> TraceSet:
    """γ∃(S) = ¬γ∀(¬S) (U 안의 여집합)"""
    others = frozenset(model.universe.alphabet) - frozenset(states)
    return gamma_forall(others, model).complement()


def rho_exists(traces: TraceSet, model: TraceSet) -> TraceSet:
    """ρ∃ = ¬ ∘ ρ∀ ∘ ¬"""
    return rho_forall(traces.complement(), model).complement()


def shift_interior(traces: TraceSet, steps: int) -> TraceSet:
    """
    U⁺ 집합을 ⊕^steps(음수면 ⊖) 이동 후 U와 교차

    경계 열은 이동 전에 버리므로 U 안의 결과는 정확하다 (|steps| ≤ Δ).
    """
    u = traces.universe
    if abs(steps) > u.bounds.slack:
        raise UniverseOverflowError(f"shift by {steps} exceeds the slack Δ={u.bounds.slack}")
    column = np.arange(u.size) % u.width
    keep = (column >= abs(steps)) if steps > 0 else (column < u.width - abs(steps))
    return TraceSet(u, traces.mask & keep).shift(steps).interior()


def extended_gamma(states: Iterable[str], ts: TransitionSystem, universe: TraceUniverse, z: int = 0) -> TraceSet:
    """M⁺ 위의 {σ(i+z) ∈ S} (경계 이동 계산용)"""
    return shifted_projection(model_traces(ts, universe, plus=True), states, z)


def reversal_agreeing_states(model: TraceSet) -> StateSet:
    """
    {s : M↓s = (⟲M)↓s} (우주 안 계산)

    Raises:
        UniverseOverflowError: 우주 범위가 역전에 닫혀 있지 않은 경우
    """
    u = model.universe
    reversed_model = model.reverse()
    differ = np.unique(u.present_state[model.mask ^ reversed_model.mask])
    return frozenset(u.alphabet) - {u.alphabet[c] for c in differ}


def checked_agreeing_states(ts: TransitionSystem, model: TraceSet) -> StateSet:
    """우주 안 계산과 그래프 기준을 비교하고 우주 결과를 반환"""
    inside = reversal_agreeing_states(model)
    exact = kripke_service.reversal_stable_states(ts)
    if inside != exact:
        logger.warning(
            f"{ts.name}: reversal-agreeing states within {model.universe.name} are "
            f"{ts.format_states(inside)} but the graph criterion gives {ts.format_states(exact)}; "
            f"the universe bounds are too small to separate them"
        )
    return inside


# ============================================
# 우주 가설 검사
# ============================================


@dataclass
class HypothesisReport:
    """|M↓s| ≥ 2 및 ⊕/⊖/⟲ 재교차 검사 결과"""

    holds: bool
    projection_sizes: Dict[str, int] = field(default_factory=dict)
    small_states: List[str] = field(default_factory=list)
    operator_failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


def check_hypothesis(ts: TransitionSystem, universe: TraceUniverse) -> HypothesisReport:
    """
    우주 수준 가설 검사

    1. 모든 상태 s에 대해 |M↓s| ≥ 2
    2. ⊕(M⁺) ∩ U = M, ⊖(M⁺) ∩ U = M
    3. ⟲M이 범위 안이면 ⊕/⊖(⟲M⁺) ∩ U = ⟲M

    Returns:
        HypothesisReport
    """
    model = model_traces(ts, universe)
    plus = model_traces(ts, universe, plus=True)
    report = HypothesisReport(holds=True)
    for s in ts.states:
        size = len(model.project(s))
        report.projection_sizes[s] = size
        if size < 2:
            report.small_states.append(s)

    for name, steps in (("⊕", 1), ("⊖", -1)):
        if shift_interior(plus, steps) != model:
            report.operator_failures.append(f"{name}(M) ∩ U ≠ M")
    try:
        reversed_plus = plus.reverse()
        reversed_model = model.reverse()
        for name, steps in (("⊕", 1), ("⊖", -1)):
            if shift_interior(reversed_plus, steps) != reversed_model:
                report.operator_failures.append(f"{name}(⟲M) ∩ U ≠ ⟲M")
    except UniverseOverflowError:
        report.notes.append("⟲M is outside the universe scope; reversal checks skipped")

    report.holds = not report.small_states and not report.operator_failures
    if not report.holds:
        logger.warning(
            f"hypothesis check failed on {ts.name} in {universe.name}: "
            f"states {report.small_states}, operators {report.operator_failures}; theorem checks may be vacuous"
        )
    return report


# ============================================
# 최선 근사 항등식 (7개 항목)
# ============================================


@dataclass
class AbbrevItem:
    item: int
    identity: str
    holds: bool
    detail: str = ""


def _pairs(subsets: List[StateSet], cap: int) -> Iterable[Tuple[StateSet, StateSet]]:
    if len(subsets) ** 2 <= cap:
        return product(subsets, repeat=2)
    singles = [s for s in subsets if len(s) <= 1]
    return product(singles, subsets)


def check_abbrev(ts: TransitionSystem, universe: TraceUniverse, cap: Optional[int] = None) -> List[AbbrevItem]:
    """
    α∀ ∘ op ∘ γ∀가 상태 의미 절과 일치하는지 항목별 검사

    Args:
        ts: 전사 시스템
        universe: 트레이스 우주 (범위는 역전에 닫혀 있어야 6번 항목 검사)
        cap: 부분집합 열거 상한

    Returns:
        항목별 AbbrevItem 리스트
    """
    model = model_traces(ts, universe)
    subsets = list(kripke_service.iter_subsets(ts.states, cap))
    everything = ts.state_set
    items: List[AbbrevItem] = []

    def record(item: int, identity: str, failures: List[str]) -> None:
        items.append(AbbrevItem(item, identity, not failures, "; ".join(failures[:3])))

    failures = [
        f"S={ts.format_states(S)}" for S in subsets if alpha_forall(sigma_model(S, universe), model) != S
    ]
    record(1, "α∀(σ_S) = S", failures)

    candidates = [frozenset(), frozenset(ts.edges)]
    candidates += [frozenset([e]) for e in sorted(ts.edges)]
    candidates += [frozenset(ts.edges) - {e} for e in sorted(ts.edges)]
    failures = []
    for t in candidates:
        expected = frozenset(s for s in ts.states if all((s, b) in t for b in ts.successors(s)))
        if alpha_forall(pi_model(t, universe), model) != expected:
            failures.append(f"t={sorted(t)}")
    record(2, "α∀(π_t) = {s : ∀s'. s→s' ⇒ (s,s') ∈ t}", failures)

    pair_cap = AnalysisDefaults.UCO_ENUMERATION_CAP
    failures = [
        f"S1={ts.format_states(a)}, S2={ts.format_states(b)}"
        for a, b in _pairs(subsets, pair_cap)
        if alpha_forall(gamma_forall(a, model) | gamma_forall(b, model), model) != a | b
    ]
    record(3, "α∀(γ∀(S1) ∪ γ∀(S2)) = S1 ∪ S2", failures)

    failures = [
        f"S={ts.format_states(S)}"
        for S in subsets
        if alpha_forall(gamma_forall(S, model).complement(), model) != everything - S
    ]
    record(4, "α∀(¬γ∀(S)) = ¬S", failures)

    failures = []
    for S in subsets:
        shifted = shift_interior(extended_gamma(S, ts, universe), 1)
        if alpha_forall(shifted, model) != kripke_service.pre_tilde(ts, S):
            failures.append(f"S={ts.format_states(S)}")
    record(5, "α∀(⊕γ∀(S)) = pre~(S)", failures)

    try:
        agreeing = reversal_agreeing_states(model)
        failures = [
            f"S={ts.format_states(S)}"
            for S in subsets
            if alpha_forall(gamma_forall(S, model).reverse(), model) != S & agreeing
        ]
        record(6, "α∀(⟲γ∀(S)) = {s ∈ S : M↓s = (⟲M)↓s}", failures)
    except UniverseOverflowError:
        items.append(AbbrevItem(6, "α∀(⟲γ∀(S)) = {s ∈ S : M↓s = (⟲M)↓s}", False, "universe scope not closed under ⟲"))

    failures = [
        f"S1={ts.format_states(a)}, S2={ts.format_states(b)}"
        for a, b in _pairs(subsets, pair_cap)
        if alpha_forall(forall_op(gamma_forall(a, model), gamma_forall(b, model)), model) != a & b
    ]
    record(7, "α∀(∀(γ∀(S1), γ∀(S2))) = S1 ∩ S2", failures)

    for entry in items:
        if not entry.holds:
            logger.warning(f"{ts.name}: identity {entry.item} fails within {universe.name}: {entry.detail}")
    return items
