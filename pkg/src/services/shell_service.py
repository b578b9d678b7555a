"""
Shell Service
ρ∀의 next-time/reversal/합집합/부정 complete core·shell, 과거·양방향 추상화, 연산자 집합 shell 선택
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import CrossValidationError, ShellNotExistError, SubsetCapError
from src.models.formula import Formula, Not, Or, Reverse, Var
from src.models.trace_uco import (
    BidirectionalAbstraction,
    PairAbstraction,
    PastSequenceAbstraction,
    RestrictionTraceUco,
    ShiftGenerator,
    TraceUco,
)
from src.models.transition_system import StateSet, TransitionSystem
from src.models.universe import TraceSet, TraceUniverse
from src.services import kripke_service
from src.services.mucalc_service import TraceEngine
from src.services.trace_service import (
    alpha_forall,
    checked_agreeing_states,
    gamma_forall,
    model_traces,
    past_projection,
    rho_forall,
    shift_interior,
    shifted_projection,
)

OPS = ("next", "reverse", "union", "negation", "eventually")


def default_depth(universe: TraceUniverse, depth: Optional[int] = None) -> int:
    """과거 깊이 K (기본 I + O + L)"""
    b = universe.bounds
    return AnalysisDefaults.past_depth(b.loop, b.offset, b.present, depth)


def materialize(generator: ShiftGenerator, ts: TransitionSystem, universe: TraceUniverse) -> TraceSet:
    """(N, z, S)의 U 안 트레이스 집합"""
    model = model_traces(ts, universe)
    if generator.reversed:
        model = model.reverse()
    return shifted_projection(model, generator.states, generator.shift)


def shift_uco(
    generators: Sequence[ShiftGenerator], ts: TransitionSystem, universe: TraceUniverse, name: str
) -> TraceUco:
    sets = [materialize(g, ts, universe) for g in generators]
    return TraceUco(universe, sets, name=name, labels=list(generators))


def rho_forall_uco(ts: TransitionSystem, universe: TraceUniverse) -> TraceUco:
    """ρ∀_M (생성자 M↓s)"""
    gens = [ShiftGenerator(False, 0, frozenset([s])) for s in ts.states]
    return shift_uco(gens, ts, universe, "ρ∀")


# ============================================
# next-time core / shell
# ============================================


def predicate_past_set(ts: TransitionSystem, universe: TraceUniverse, states: Iterable[str], k: int) -> TraceSet:
    """⊖^k γ∀(S) = {⟨i,σ⟩ ∈ M : σ(i−k) ∈ S}"""
    return shifted_projection(model_traces(ts, universe), states, -k)


def core_next(
    ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None, cap: Optional[int] = None
) -> TraceUco:
    """
    next-time complete core: {γ∀(S) : ¬P→(S)}

    모든 부분집합 S에 대해 ⊖^kγ∀(S)가 ρ∀ 고정점인지(k ≤ K)를 P→ 판정과 비교한다.

    Raises:
        SubsetCapError: 상태 수가 상한 초과
        CrossValidationError: 핵심에 남은 S가 ⊖-안정 조건을 어긴 경우
    """
    depth = default_depth(universe, depth)
    model = model_traces(ts, universe)
    kept = kripke_service.core_next_states(ts, cap)
    kept_set = set(kept)
    for subset in kripke_service.iter_subsets(ts.states, cap):
        stable = all(
            rho_forall(past, model) == past
            for past in (predicate_past_set(ts, universe, subset, k) for k in range(depth + 1))
        )
        if subset in kept_set and not stable:
            logger.error(f"{ts.format_states(subset)} kept by the core but ⊖-unstable within {universe.name}")
            raise CrossValidationError(
                f"core_next keeps γ∀({ts.format_states(subset)}) but some ⊖^k image is not a ρ∀ fixpoint"
            )
        if subset not in kept_set and stable:
            logger.warning(
                f"{ts.name}: γ∀({ts.format_states(subset)}) is excluded by P→ but looks ⊖-stable "
                f"within {universe.name}; the universe lacks the confluence witnesses"
            )
    gens = [ShiftGenerator(False, 0, subset) for subset in kept if subset]
    uco = shift_uco(gens, ts, universe, "core⊕")
    logger.info(f"{ts.name}: next-time core keeps {len(kept)} of {2 ** len(ts.states)} state sets")
    return uco


def shell_next(ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None) -> TraceUco:
    """next-time complete shell: 생성자 M^{−k}↓s (k ≤ K)"""
    depth = default_depth(universe, depth)
    gens = [ShiftGenerator(False, -k, frozenset([s])) for k in range(depth + 1) for s in ts.states]
    return shift_uco(gens, ts, universe, "shell⊕")


def shell_next_apply(
    traces: TraceSet, ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None
) -> TraceSet:
    """
    {⟨i,σ⟩ ∈ M : ∃k ≤ K. M^{−k}↓⟨i,σ⟩ ⊆ X} (트레이스별 정의)
    """
    depth = default_depth(universe, depth)
    model = model_traces(ts, universe)
    decided: Dict[Tuple[int, str], bool] = {}
    picked = np.zeros(universe.size, dtype=bool)
    for index in model.indices:
        trace = universe.trace_at(index)
        for k in range(depth + 1):
            key = (k, trace.state_at(trace.present - k))
            if key not in decided:
                decided[key] = past_projection(model, trace, k) <= traces
            if decided[key]:
                picked[index] = True
                break
    return TraceSet(universe, picked)


def alpha_next(
    traces: TraceSet, ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None
) -> PastSequenceAbstraction:
    """α(X)(z) = {s : M^z↓s ⊆ X}, z ∈ [−K, 0]"""
    depth = default_depth(universe, depth)
    model = model_traces(ts, universe)
    values = {
        -k: frozenset(s for s in ts.states if shifted_projection(model, [s], -k) <= traces)
        for k in range(depth + 1)
    }
    return PastSequenceAbstraction(depth, values)


def gamma_next(sigma: PastSequenceAbstraction, ts: TransitionSystem, universe: TraceUniverse) -> TraceSet:
    """γ(Σ) = {⟨i,σ⟩ ∈ M : ∃k. σ(i−k) ∈ Σ(−k)}"""
    model = model_traces(ts, universe)
    result = universe.empty()
    for z in sigma.shifts():
        if sigma[z]:
            result = result | shifted_projection(model, sigma[z], z)
    return result


def alpha_bidirectional(
    traces: TraceSet, ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None
) -> BidirectionalAbstraction:
    """α±(X)(z) = {s : M^z↓s ⊆ X}, z ∈ [−K, K]"""
    depth = default_depth(universe, depth)
    model = model_traces(ts, universe)
    values = {
        z: frozenset(s for s in ts.states if shifted_projection(model, [s], z) <= traces)
        for z in range(-depth, depth + 1)
    }
    return BidirectionalAbstraction(depth, values)


def gamma_bidirectional(
    sigma: BidirectionalAbstraction, ts: TransitionSystem, universe: TraceUniverse, plus: bool = False
) -> TraceSet:
    """γ±(Σ) = ∪_z M^z↓Σ(z) (plus=True면 M⁺ 위에서)"""
    model = model_traces(ts, universe, plus=plus)
    result = universe.empty()
    for z in sigma.shifts():
        if sigma[z]:
            result = result | shifted_projection(model, sigma[z], z)
    return result


@dataclass
class BidirectionalRun:
    """⊕⊖p 형태 계산의 단계별 α± 값"""

    start: BidirectionalAbstraction
    steps: List[Tuple[str, BidirectionalAbstraction]] = field(default_factory=list)
    concrete: Optional[BidirectionalAbstraction] = None

    @property
    def complete(self) -> bool:
        final = self.steps[-1][1] if self.steps else self.start
        return self.concrete is not None and final.values == self.concrete.values


def bidirectional_run(
    traces: TraceSet,
    moves: Sequence[int],
    ts: TransitionSystem,
    universe: TraceUniverse,
    depth: Optional[int] = None,
) -> BidirectionalRun:
    """
    X에서 출발해 이동(+1 = ⊕, −1 = ⊖)을 추상 영역에서 차례로 적용하고
    구체 계산의 α±와 비교한다. 이동은 γ±를 M⁺로 확장해 경계에서 정확하게 계산한다.
    """
    depth = default_depth(universe, depth)
    current = alpha_bidirectional(traces, ts, universe, depth)
    run = BidirectionalRun(start=current)
    extended = _extend_to_plus(traces & model_traces(ts, universe), ts, universe, depth)
    for step in moves:
        name = "⊕" if step > 0 else "⊖"
        moved = shift_interior(gamma_bidirectional(current, ts, universe, plus=True), step)
        current = alpha_bidirectional(moved, ts, universe, depth)
        run.steps.append((name, current))
    # ⊕와 ⊖는 전체 트레이스 위에서 서로 역이므로 구체 결과는 순 이동량만으로 정해진다
    run.concrete = alpha_bidirectional(shift_interior(extended, sum(moves)), ts, universe, depth)
    return run


def _extend_to_plus(traces: TraceSet, ts: TransitionSystem, universe: TraceUniverse, depth: int) -> TraceSet:
    """γ±∘α±로 닫힌 U 집합의 M⁺ 확장"""
    sigma = alpha_bidirectional(traces, ts, universe, depth)
    extended = gamma_bidirectional(sigma, ts, universe, plus=True)
    if extended.interior() != traces:
        raise CrossValidationError("bidirectional run needs a start set fixed by γ±∘α±")
    return extended



# ============================================
# reversal core / shell
# ============================================


def core_reversal(ts: TransitionSystem, universe: TraceUniverse, cap: Optional[int] = None) -> TraceUco:
    """
    reversal complete core: {γ∀(S) : ⟲γ∀(S)도 ρ∀ 고정점}

    Raises:
        CrossValidationError: 고정점 판정과 S ⊆ 역전 일치 상태 판정이 어긋난 경우
    """
    model = model_traces(ts, universe)
    agreeing = checked_agreeing_states(ts, model)
    kept = []
    for subset in kripke_service.iter_subsets(ts.states, cap):
        image = gamma_forall(subset, model).reverse()
        member = rho_forall(image, model) == image
        if member != (subset <= agreeing):
            raise CrossValidationError(
                f"reversal core membership of γ∀({ts.format_states(subset)}) disagrees with the agreeing states"
            )
        if member:
            kept.append(subset)
    gens = [ShiftGenerator(False, 0, s) for s in kept if s]
    logger.info(f"{ts.name}: reversal core keeps {len(kept)} state sets")
    return shift_uco(gens, ts, universe, "core⟲")


def shell_reversal(ts: TransitionSystem, universe: TraceUniverse) -> TraceUco:
    """reversal complete shell: 생성자 {M↓s} ∪ {(⟲M)↓s}"""
    gens = [ShiftGenerator(flag, 0, frozenset([s])) for flag in (False, True) for s in ts.states]
    return shift_uco(gens, ts, universe, "shell⟲")


def alpha_pair(traces: TraceSet, ts: TransitionSystem, universe: TraceUniverse) -> PairAbstraction:
    """α⟲(X) = ⟨α∀_M(X), α∀_{⟲M}(X)⟩"""
    model = model_traces(ts, universe)
    return PairAbstraction(alpha_forall(traces, model), alpha_forall(traces, model.reverse()))


def gamma_pair(pair: PairAbstraction, ts: TransitionSystem, universe: TraceUniverse) -> TraceSet:
    """γ⟲(S1, S2) = γ∀_M(S1) ∪ γ∀_{⟲M}(S2)"""
    model = model_traces(ts, universe)
    return gamma_forall(pair.forward, model) | gamma_forall(pair.backward, model.reverse())


# ============================================
# 합집합 / 부정 / 전체 연산자
# ============================================


def constant_empty(universe: TraceUniverse, name: str) -> TraceUco:
    """λX.∅ (⊇ 순서의 최대 uco)"""
    return TraceUco(universe, [], name=name)


def core_union(universe: TraceUniverse) -> TraceUco:
    return constant_empty(universe, "core∪")


def core_negation(universe: TraceUniverse) -> TraceUco:
    return constant_empty(universe, "core¬")


def core_all(universe: TraceUniverse) -> TraceUco:
    return constant_empty(universe, "core_all")


def shell_union(ts: TransitionSystem, universe: TraceUniverse) -> RestrictionTraceUco:
    """λX. X ∩ M"""
    return RestrictionTraceUco(universe, model_traces(ts, universe), name="shell∪")


def shell_no_reversal(ts: TransitionSystem, universe: TraceUniverse) -> RestrictionTraceUco:
    """⟲ 없는 전체 연산자 shell (λX. X ∩ M)"""
    return RestrictionTraceUco(universe, model_traces(ts, universe), name="shell_no⟲")


def shell_all(ts: TransitionSystem, universe: TraceUniverse) -> RestrictionTraceUco:
    """λX. X ∩ M*, M* = M ∪ ⟲M"""
    model = model_traces(ts, universe)
    return RestrictionTraceUco(universe, model | model.reverse(), name="shell_all")


def shell_next_reversal(ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None) -> TraceUco:
    """⊕와 ⟲ 모두에 대한 shell: 생성자 (N, z, s), N ∈ {M, ⟲M}, |z| ≤ K"""
    depth = default_depth(universe, depth)
    gens = [
        ShiftGenerator(flag, z, frozenset([s]))
        for flag in (False, True)
        for z in range(-depth, depth + 1)
        for s in ts.states
    ]
    return shift_uco(gens, ts, universe, "shell⊕⟲")


def shell_for_ops(
    ts: TransitionSystem, universe: TraceUniverse, ops: Iterable[str], depth: Optional[int] = None
) -> TraceUco:
    """
    연산자 집합에 대한 ρ∀의 complete shell (반환 전 완전성 재검사)

    Raises:
        ShellNotExistError: ∪ 없이 ¬ 또는 F를 요청한 경우
        CrossValidationError: 고른 shell이 재검사를 통과하지 못한 경우
        ValueError: 알 수 없는 연산자
    """
    return verified_shell(ts, universe, ops, depth)[0]


def verified_shell(
    ts: TransitionSystem, universe: TraceUniverse, ops: Iterable[str], depth: Optional[int] = None
) -> Tuple[TraceUco, List["CompletenessCheck"]]:
    """shell과 그 재검사 결과"""
    wanted = list(dict.fromkeys(ops))
    uco = _select_shell(ts, universe, frozenset(wanted), depth)
    return uco, verify_shell(uco, ts, universe, wanted)


def _select_shell(
    ts: TransitionSystem, universe: TraceUniverse, wanted: frozenset, depth: Optional[int]
) -> TraceUco:
    unknown = wanted - set(OPS)
    if unknown:
        raise ValueError(f"unknown operators {sorted(unknown)}; known: {list(OPS)}")
    if "union" in wanted:
        return shell_all(ts, universe) if "reverse" in wanted else shell_no_reversal(ts, universe)
    if wanted & {"negation", "eventually"}:
        missing = sorted(wanted & {"negation", "eventually"})
        raise ShellNotExistError(
            f"no complete shell of ρ∀ exists for {missing} without ∪; run `witness neg` / `witness F` for the witnesses"
        )
    if wanted == {"next", "reverse"}:
        return shell_next_reversal(ts, universe, depth)
    if wanted == {"next"}:
        return shell_next(ts, universe, depth)
    if wanted == {"reverse"}:
        return shell_reversal(ts, universe)
    return rho_forall_uco(ts, universe)


# ============================================
# 완전성 검사
# ============================================


@dataclass
class CompletenessCheck:
    """연산자별 완전성 재검사 결과"""

    op: str
    complete: bool
    method: str
    checked: int = 0
    boundary: int = 0
    witness: Optional[str] = None


def check_shift_closure(uco: TraceUco, ts: TransitionSystem, universe: TraceUniverse, op: str) -> CompletenessCheck:
    """
    이동 생성자 패밀리의 ⊕(adjoint: ⊖g가 고정점) 또는 ⟲(⟲g가 고정점) 완전성

    생성자 표시가 (N, z, S)이고 패밀리가 과거 깊이를 가질 때(최소 z < 0),
    ⊖ 이미지 (N, z−1, S)가 그 깊이 밖이면 경계로 센다.
    """
    shifts = [g.shift for g in uco.labels if isinstance(g, ShiftGenerator)]
    lowest = min(shifts, default=0)
    result = CompletenessCheck(op=op, complete=True, method="adjoint" if op == "next" else "closure")
    for g, label in zip(uco.generators, uco.labels):
        if op == "next":
            if not isinstance(label, ShiftGenerator):
                raise CrossValidationError(f"{uco.name}: next-time check needs shift-labelled generators")
            image = label.prev()
            moved = materialize(image, ts, universe)
            if lowest < 0 and image.shift < lowest and not uco.is_member(moved):
                result.boundary += 1
                continue
        else:
            moved = g.reverse()
        result.checked += 1
        if not uco.is_member(moved):
            result.complete = False
            result.witness = str(label)
            break
    if result.boundary:
        logger.warning(f"{uco.name}: {result.boundary} generators reach the past depth boundary")
    return result


def check_restriction_next(uco: RestrictionTraceUco, ts: TransitionSystem, universe: TraceUniverse) -> CompletenessCheck:
    """λX. X∩C의 ⊕ 완전성: ⊖C ∩ U ⊆ C (C는 M 또는 M*)"""
    model_plus = model_traces(ts, universe, plus=True)
    carrier_plus = model_plus
    if uco.carrier != model_traces(ts, universe):
        carrier_plus = model_plus | model_plus.reverse()
    moved = shift_interior(carrier_plus, -1)
    ok = moved <= uco.carrier
    return CompletenessCheck("next", ok, "adjoint", checked=1, witness=None if ok else "⊖C ⊄ C")


def random_sets(universe: TraceUniverse, count: int, seed: int) -> List[TraceSet]:
    """U 안의 무작위 집합 (밀도도 무작위)"""
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(count):
        density = rng.random()
        sets.append(TraceSet(universe, (rng.random(universe.size) < density) & universe.interior_mask))
    return sets


def candidate_sets(
    uco: TraceUco, universe: TraceUniverse, samples: Optional[int] = None, seed: Optional[int] = None
) -> List[TraceSet]:
    """검사 후보: 작은 우주는 ℘(U) 전체, 아니면 생성자 + 무작위 집합"""
    interior = universe.interior_indices
    if len(interior) <= AnalysisDefaults.EXHAUSTIVE_TRACE_LIMIT:
        sets = []
        for bits in range(1 << len(interior)):
            mask = np.zeros(universe.size, dtype=bool)
            mask[interior[[k for k in range(len(interior)) if bits >> k & 1]]] = True
            sets.append(TraceSet(universe, mask))
        return sets
    samples = samples or AnalysisDefaults.RANDOM_SAMPLES
    seed = AnalysisDefaults.RANDOM_SEED if seed is None else seed
    base = list(uco.generators)
    if isinstance(uco, RestrictionTraceUco):
        base.append(uco.carrier)
    return base + random_sets(universe, samples, seed)


def check_completeness(
    uco: TraceUco,
    ts: TransitionSystem,
    universe: TraceUniverse,
    ops: Iterable[str],
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[CompletenessCheck]:
    """
    연산자별 ρ∘op = ρ∘op∘ρ 재검사

    ∪, ¬, ⟲는 후보 집합 위 전수 비교, ⊕는 adjoint 기준.
    """
    results: List[CompletenessCheck] = []
    candidates: Optional[List[TraceSet]] = None
    for op in ops:
        if op == "next":
            if isinstance(uco, RestrictionTraceUco):
                results.append(check_restriction_next(uco, ts, universe))
            elif uco.is_constant_empty():
                results.append(CompletenessCheck("next", True, "constant"))
            else:
                results.append(check_shift_closure(uco, ts, universe, "next"))
            continue
        if op == "eventually":
            raise ShellNotExistError("completeness for F is reported by the witness reports, not re-checked here")
        candidates = candidates if candidates is not None else candidate_sets(uco, universe, samples, seed)
        result = CompletenessCheck(op=op, complete=True, method="brute-force")
        if op == "union":
            pairs = zip(candidates, candidates[1:] + candidates[:1])
            for x, y in pairs:
                result.checked += 1
                if uco(x | y) != uco(uco(x) | uco(y)):
                    result.complete, result.witness = False, f"X={x.format(3)}, Y={y.format(3)}"
                    break
        else:
            apply_op: Callable[[TraceSet], TraceSet] = (
                (lambda x: x.complement()) if op == "negation" else (lambda x: x.reverse())
            )
            for x in candidates:
                result.checked += 1
                if uco(apply_op(x)) != uco(apply_op(uco(x))):
                    result.complete, result.witness = False, f"X={x.format(3)}"
                    break
        results.append(result)
    for r in results:
        logger.debug(f"{uco.name} vs {r.op}: complete={r.complete} ({r.method}, {r.checked} checks)")
    return results


def verify_shell(
    uco: TraceUco, ts: TransitionSystem, universe: TraceUniverse, ops: Iterable[str], samples: Optional[int] = None
) -> List[CompletenessCheck]:
    """
    요청 연산자 각각에 대한 완전성 재검사 (F는 witness 보고서 몫이라 제외)

    Raises:
        CrossValidationError: 반환하려는 shell이 요청 연산자에 대해 완전하지 않은 경우
    """
    checks = check_completeness(uco, ts, universe, [op for op in ops if op != "eventually"], samples)
    for result in checks:
        if not result.complete:
            logger.error(f"{uco.name} fails {result.op}: {result.witness}")
            raise CrossValidationError(f"{uco.name} is not complete for {result.op}: {result.witness}")
    return checks


# ============================================
# 언어 수준 검사 (μ-없는 조각, 자유 변수 하나)
# ============================================


def language_formulas(ops: Iterable[str], depth: int, var: str = "X") -> List[Formula]:
    """연산자 {∪, ¬, ⟲}로 만든 깊이 ≤ depth 수식 (변수 하나)"""
    wanted = frozenset(ops)
    layers: List[List[Formula]] = [[Var(var)]]
    seen: Set[Formula] = {Var(var)}
    for _ in range(depth):
        fresh: List[Formula] = []
        pool = [f for layer in layers for f in layer]
        for f in layers[-1]:
            if "negation" in wanted:
                fresh.append(Not(f))
            if "reverse" in wanted:
                fresh.append(Reverse(f))
            if "union" in wanted:
                fresh.extend(Or(f, g) for g in pool)
        layers.append([f for f in fresh if not (f in seen or seen.add(f))])
    return [f for layer in layers for f in layer]


@dataclass
class LanguageCheck:
    ops: List[str]
    formulas: int
    checked: int
    complete: bool
    witness: Optional[str] = None


def language_shell_check(
    uco: TraceUco,
    ts: TransitionSystem,
    universe: TraceUniverse,
    ops: Iterable[str],
    depth: int = 2,
    samples: int = 50,
    seed: Optional[int] = None,
) -> LanguageCheck:
    """
    수식 함수 λX.⟦φ⟧(X) 각각에 대해 ρ(⟦φ⟧(X)) = ρ(⟦φ⟧(ρX)) 검사
    """
    ops = [op for op in ops if op in ("union", "negation", "reverse")]
    engine = TraceEngine(ts, universe)
    formulas = language_formulas(ops, depth)
    seed = AnalysisDefaults.RANDOM_SEED if seed is None else seed
    values = list(uco.generators[:samples]) + random_sets(universe, samples, seed)
    result = LanguageCheck(ops=list(ops), formulas=len(formulas), checked=0, complete=True)
    for phi in formulas:
        for x in values:
            concrete = engine.to_set(engine.evaluate(phi, {"X": engine.from_set(x)}))
            abstract = engine.to_set(engine.evaluate(phi, {"X": engine.from_set(uco(x))}))
            result.checked += 1
            if uco(concrete) != uco(abstract):
                result.complete = False
                result.witness = f"{phi} at X={x.format(3)}"
                return result
    return result


# ============================================
# 소형 전수 탐색 (최소성/최대성 검증)
# ============================================


def union_closed_subfamilies(sets: Sequence[TraceSet], cap: int = 1 << 12) -> List[List[TraceSet]]:
    """주어진 집합들 중 ∅을 포함하고 합집합에 닫힌 부분 패밀리 전부"""
    universe = sets[0].universe
    pool = [s for s in dict.fromkeys(sets) if s]
    if 2 ** len(pool) > cap:
        raise SubsetCapError(f"{len(pool)} candidate sets exceed the family enumeration cap")
    families = []
    for bits in range(1 << len(pool)):
        chosen = [pool[k] for k in range(len(pool)) if bits >> k & 1]
        members = set(chosen) | {universe.empty()}
        if all((a | b) in members for a, b in combinations(chosen, 2)):
            families.append(sorted(members, key=lambda s: (len(s), s.indices.tolist())))
    return families


def exhaustive_next_core(ts: TransitionSystem, universe: TraceUniverse, depth: Optional[int] = None) -> List[TraceSet]:
    """
    ρ∀ 패밀리의 합집합 닫힌 부분 패밀리 중 ⊕에 완전한(⊖-안정) 가장 큰 것

    완전성: 모든 원소 Y와 k ≤ K에 대해 ⊖^k Y(술어 계산)가 패밀리 원소.
    """
    depth = default_depth(universe, depth)
    model = model_traces(ts, universe)
    by_states: Dict[TraceSet, StateSet] = {}
    for subset in kripke_service.iter_subsets(ts.states):
        by_states.setdefault(gamma_forall(subset, model), subset)
    best: List[TraceSet] = []
    for family in union_closed_subfamilies(list(by_states)):
        members = set(family)
        stable = all(
            predicate_past_set(ts, universe, by_states[y], k) in members
            for y in family
            if y
            for k in range(1, depth + 1)
        )
        if stable and len(family) > len(best):
            best = family
    return best
