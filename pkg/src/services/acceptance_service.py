"""
Acceptance Service
재현 예제와 소형 모델 속성 검사 묶음 (paper-examples 하위 명령)

각 항목은 기대값과 관측값을 함께 남기고, 불일치는 예외가 아니라 실패 행으로 보고한다.
입력 오류(우주가 너무 작음 등)만 예외로 올라간다.
"""

import random
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import CompletenessError, CrossValidationError, SoundnessViolationError, UniverseTooSmallError
from src.models.transition_system import TransitionSystem
from src.models.universe import TraceUniverse, UniverseBounds
from src.services import kripke_service, shell_service
from src.services.completeness_service import complete_core, complete_shell, exhaustive_core, exhaustive_shell, is_complete
from src.services.lasso_evaluator import evaluate_path
from src.services.lattice_service import make_uco
from src.services.mucalc_service import TraceEngine, is_branchable, required_present_range, trace_sem
from src.services.trace_service import gamma_forall, model_traces
from src.services.witness_service import witness_F_shell, witness_neg_shell
from src.utils.formula_parser import parse_formula
from src.utils.parsers import fixture_path, load_lattice, load_transition_system
from src.utils.small_models import (
    all_small_systems,
    formula_chains,
    formula_corpus,
    ltl_det_chains,
    ltl_det_corpus,
    random_monotone_fn,
    small_lattices,
)

# 속성 검사용 고정 우주 (명령행 경계와 무관)
LTL_DET_BOUNDS = UniverseBounds(3, 2, 1, 4, slack=4)
AGREEMENT_BOUNDS = UniverseBounds(1, 2, 1, 8, slack=4)

EXAMPLE_FORMULA = "G p | F G q"
NEXT_PREV_FORMULA = "()(rev ()(rev p))"


@dataclass
class AcceptanceItem:
    """항목 하나의 판정"""

    item: int
    title: str
    passed: bool
    expected: str = ""
    observed: str = ""
    detail: str = ""


@dataclass
class AcceptanceOptions:
    bounds: UniverseBounds
    depth: Optional[int] = None
    window: int = AnalysisDefaults.WITNESS_WINDOW
    samples: int = AnalysisDefaults.RANDOM_SAMPLES
    seed: int = AnalysisDefaults.RANDOM_SEED
    corpus_depth: int = 3
    functions_per_lattice: int = 12


def _system(name: str) -> TransitionSystem:
    ts, _ = kripke_service.totalize(load_transition_system(fixture_path(name)))
    return ts


def _fmt(ts: TransitionSystem, states) -> str:
    return ts.format_states(states)


def require_bounds(bounds: UniverseBounds) -> None:
    """
    고정 예제 수식이 우주 안에서 정확히 계산되는지 사전 검사

    Raises:
        UniverseTooSmallError: 현재 시점 범위 부족
    """
    for text in (EXAMPLE_FORMULA, NEXT_PREV_FORMULA):
        needed = required_present_range(parse_formula(text), bounds)
        if bounds.present < needed:
            raise UniverseTooSmallError(
                f"universe too small for fixture: {text!r} needs I ≥ {needed}, got {bounds.describe()}"
            )


# ============================================
# 1-3: 고정 예제
# ============================================


def example_first(opts: AcceptanceOptions) -> AcceptanceItem:
    ts = _system("two_state.ts")
    universe = TraceUniverse.for_system(ts, opts.bounds)
    phi = parse_formula(EXAMPLE_FORMULA)
    model = model_traces(ts, universe)
    covers = (trace_sem(phi, ts, universe) & model) == model
    verdict = is_branchable(phi, ts, universe)
    observed = (
        f"⟦φ⟧∩M=M: {covers}, α∀={_fmt(ts, verdict.alpha_side)}, "
        f"state={_fmt(ts, verdict.state_side)}, branchable={verdict.branchable}"
    )
    passed = (
        covers
        and verdict.alpha_side == frozenset({"1", "2"})
        and verdict.state_side == frozenset({"2"})
        and not verdict.branchable
    )
    return AcceptanceItem(
        1, "two-state system: G p | F G q is not branchable", passed,
        "⟦φ⟧∩M=M: True, α∀={1,2}, state={2}, branchable=False", observed,
    )


def sign_plus_core(opts: AcceptanceOptions) -> AcceptanceItem:
    file = load_lattice(fixture_path("sign_plus.lat"))
    lat = file.lattice
    run = complete_core(file.domains["SignPlus"], [file.functions["sq"]])
    removed = [lat.format(y) for y in run.removed]
    notes = " ".join(n for step in run.steps for n in step.notes)
    same = run.result.fixpoints == file.domains["Sign"].fixpoints
    passed = same and removed == ["[0,9]"] and "[-3,3]" in notes
    return AcceptanceItem(
        2, "core of Sign⁺ for sq is Sign", passed,
        "result = Sign, removed [0,9], max preimage [-3,3]",
        f"result = Sign: {same}, removed {removed}, notes: {notes}",
    )


def sign_arithmetic(opts: AcceptanceOptions) -> AcceptanceItem:
    file = load_lattice(fixture_path("sign.lat"))
    lat = file.lattice
    sign = file.domains["Sign"]
    add, mult = file.functions["add"], file.functions["mult"]
    add_verdict = is_complete(sign, add)
    mult_verdict = is_complete(sign, mult)
    x, y = lat.parse("{-1}"), lat.parse("{1}")
    concrete = sign(add(x, y))
    abstract = sign(add(sign(x), sign(y)))
    passed = not add_verdict.complete and concrete != abstract and mult_verdict.complete
    return AcceptanceItem(
        3, "Sign is incomplete for + and complete for ×", passed,
        "+: incomplete at ({-1},{1}); ×: complete",
        f"+: complete={add_verdict.complete}, at ({{-1}},{{1}}): ρ(x+y)={lat.format(concrete)} "
        f"vs ρ(ρx+ρy)={lat.format(abstract)}; ×: complete={mult_verdict.complete}",
        detail=f"first witness found: {tuple(lat.format(a) for a in add_verdict.witness or ())}",
    )


# ============================================
# 4-6: 구조적 성질
# ============================================


def _small_universe_check(opts: AcceptanceOptions, max_states: int, check: Callable, failures: List[str]) -> int:
    """작은 시스템들에서 트레이스 수준 계산을 돌리고 검사한 개수를 돌려준다 (교차 검증 실패는 failures에)"""
    count = 0
    for ts in all_small_systems(max_states):
        try:
            check(ts, TraceUniverse.for_system(ts, opts.bounds))
        except CrossValidationError as e:
            failures.append(f"{ts.name}: {e}")
        count += 1
    return count


def injective_property(opts: AcceptanceOptions) -> AcceptanceItem:
    failures = []
    total = 0
    for ts in all_small_systems(3):
        total += 1
        full = len(kripke_service.core_next_states(ts)) == 2 ** len(ts.states)
        if full != kripke_service.is_injective(ts):
            failures.append(ts.name)
    # 2-상태 이하에서는 트레이스 수준 core_next(⊖-안정성 교차 검사 포함)도 돌린다
    traced = _small_universe_check(opts, 2, lambda ts, u: shell_service.core_next(ts, u, opts.depth), failures)
    return AcceptanceItem(
        4, "injective ⇔ next-time core is the whole ρ∀ family", not failures,
        f"0 mismatches over {total} systems", f"{len(failures)} mismatches {failures[:5]}",
        detail=f"{traced} systems also cross-checked on traces",
    )


def symmetric_property(opts: AcceptanceOptions) -> AcceptanceItem:
    failures = []
    total = 0
    for ts in all_small_systems(3):
        total += 1
        full = kripke_service.reversal_stable_states(ts) == ts.state_set
        if full != kripke_service.is_symmetric(ts):
            failures.append(ts.name)

    def traced(ts: TransitionSystem, universe: TraceUniverse) -> None:
        core = shell_service.core_reversal(ts, universe)
        full = len(core.generators) + 1 == 2 ** len(ts.states)
        if full != kripke_service.is_symmetric(ts):
            failures.append(f"{ts.name} (traces)")

    count = _small_universe_check(opts, 2, traced, failures)
    return AcceptanceItem(
        5, "symmetric ⇔ reversal core is the whole ρ∀ family", not failures,
        f"0 mismatches over {total} systems", f"{len(failures)} mismatches {failures[:5]}",
        detail=f"{count} systems also cross-checked on traces",
    )


def traffic_lights(opts: AcceptanceOptions) -> AcceptanceItem:
    observed = []
    passed = True
    for name, next_full, rev_full in (("traffic_light.ts", True, False), ("traffic_light_abstract.ts", False, True)):
        ts = _system(name)
        universe = TraceUniverse.for_system(ts, opts.bounds)
        core_n = shell_service.core_next(ts, universe, opts.depth)
        core_r = shell_service.core_reversal(ts, universe)
        n_sets = len(core_n.generators) + 1
        r_sets = len(core_r.generators) + 1
        everything = 2 ** len(ts.states)
        if next_full:
            ok = n_sets == everything and r_sets == 1
        else:
            ok = n_sets == 2 and core_n.generators[0] == model_traces(ts, universe) and r_sets == everything
        passed &= ok and next_full == kripke_service.is_injective(ts) and rev_full == kripke_service.is_symmetric(ts)
        observed.append(f"{ts.name}: core⊕ {n_sets} sets, core⟲ {r_sets} sets")
    return AcceptanceItem(
        6, "traffic lights: next-time and reversal cores", passed,
        "traffic_light: core⊕ 8 sets, core⟲ 1 set; abstract: core⊕ {∅, M}, core⟲ 4 sets",
        "; ".join(observed),
    )


# ============================================
# 7-8: 양방향 도메인, 상수 shell/core
# ============================================


def next_prev_example(opts: AcceptanceOptions) -> AcceptanceItem:
    ts = _system("two_state.ts")
    universe = TraceUniverse.for_system(ts, opts.bounds)
    verdict = is_branchable(parse_formula(NEXT_PREV_FORMULA), ts, universe)
    model = model_traces(ts, universe)
    run = shell_service.bidirectional_run(gamma_forall({"1"}, model), [-1, 1], ts, universe, opts.depth)
    final = run.steps[-1][1]
    threshold = final.threshold("1")
    table_ok = threshold is not None and all(
        final[z] == (frozenset({"1"}) if z >= threshold else frozenset()) for z in final.shifts()
    )
    passed = (
        verdict.state_side == frozenset()
        and verdict.alpha_side == frozenset({"1"})
        and run.complete
        and table_ok
        and final[0] == frozenset({"1"})
    )
    return AcceptanceItem(
        7, "⊕⊖p: state semantics loses {1}, the bidirectional domain recovers it", passed,
        "state=∅, α∀={1}; α± table ∅ below the threshold and {1} from it; complete",
        f"state={_fmt(ts, verdict.state_side)}, α∀={_fmt(ts, verdict.alpha_side)}, "
        f"threshold={threshold}, table ok={table_ok}, complete={run.complete}",
    )


def constant_closures(opts: AcceptanceOptions) -> AcceptanceItem:
    failures = []
    checked = 0
    for name in ("two_state.ts", "traffic_light.ts", "traffic_light_abstract.ts", "even_odd.ts"):
        ts = _system(name)
        universe = TraceUniverse.for_system(ts, opts.bounds)
        model = model_traces(ts, universe)
        both = model | model.reverse()
        ucos = {
            "core∪": shell_service.core_union(universe),
            "core¬": shell_service.core_negation(universe),
            "shell∪": shell_service.shell_union(ts, universe),
            "shell_all": shell_service.shell_all(ts, universe),
        }
        for x in shell_service.candidate_sets(ucos["shell∪"], universe, opts.samples, opts.seed):
            checked += 1
            if ucos["core∪"](x) or ucos["core¬"](x):
                failures.append(f"{ts.name}: core not constant ∅")
            if ucos["shell∪"](x) != x & model or ucos["shell_all"](x) != x & both:
                failures.append(f"{ts.name}: shell is not a restriction")
            if failures:
                break
        for uco, ops in ((ucos["shell∪"], ["union", "next"]), (ucos["shell_all"], ["union", "negation", "reverse"])):
            for result in shell_service.check_completeness(uco, ts, universe, ops, opts.samples, opts.seed):
                if not result.complete:
                    failures.append(f"{ts.name}: {uco.name} incomplete for {result.op}")
    return AcceptanceItem(
        8, "constant cores and restriction shells", not failures,
        "cores map every X to ∅; shells are X∩M and X∩(M∪⟲M)",
        f"{checked} sets checked, {len(failures)} failures {failures[:3]}",
    )


# ============================================
# 9: 비존재 증거
# ============================================


def witness_reports(opts: AcceptanceOptions) -> AcceptanceItem:
    w = opts.window
    neg = witness_neg_shell(w)
    ev = neg.closures[0]
    od = neg.closures[1]
    # X ∩ (유지 패리티) = ∅ 이면서 X ≠ ∅ 인 가장 작은 집합이 반례가 된다
    first_odd = -w if w % 2 else 1 - w
    first_even = -w if w % 2 == 0 else 1 - w
    window = list(range(-w, w + 1))
    neg_ok = (
        ev.witness == [first_odd]
        and od.witness == [first_even]
        and neg.join_family == [[], window]
        and neg.join_equals_forall
        and not neg.forall_verdict.complete
        and neg.forall_witness.lhs == [] and neg.forall_witness.rhs == window
    )

    ev_report = witness_F_shell(w)
    f_ok = (
        ev_report.all_complete
        and len(ev_report.closures) == 2 * w + 1
        and ev_report.join_family == [[], [w], window]
        and ev_report.boundary_artifact == [w]
        and not ev_report.forall_verdict.complete
        and ev_report.forall_witness.lhs == window and ev_report.forall_witness.rhs == []
    )
    return AcceptanceItem(
        9, f"¬ and F witness reports on the window [-{w}, {w}]", neg_ok and f_ok,
        f"¬: join = {{∅, window}} = ρ∀ family, ρ_ev/ρ_od refuted at [{first_odd}]/[{first_even}], ρ∀ incomplete; "
        f"F: every ρ_k complete, join = {{∅, [{w}], window}}, ρ∀ incomplete",
        f"¬: ρ_ev {ev.complete} {ev.witness}, ρ_od {od.complete} {od.witness}, join={neg.join_family}; "
        f"F: {sum(c.complete for c in ev_report.closures)}/{len(ev_report.closures)} complete, "
        f"boundary={ev_report.boundary_artifact}",
        detail="the evens/odds closures fail on nonempty X that miss their parity",
    )


# ============================================
# 10-12: 말뭉치 속성 검사
# ============================================


def ltl_det_branchable(opts: AcceptanceOptions, max_states: int = 3) -> AcceptanceItem:
    atoms = ["p", "q"]
    formulas = list(dict.fromkeys(ltl_det_corpus(atoms, 1) + ltl_det_chains(atoms, opts.corpus_depth)))
    failures = []
    systems = 0
    for ts in all_small_systems(max_states):
        systems += 1
        universe = TraceUniverse.for_system(ts, LTL_DET_BOUNDS, include_reversed=False)
        engine = TraceEngine(ts, universe)
        for phi in formulas:
            try:
                if not is_branchable(phi, ts, universe, engine=engine).branchable:
                    failures.append(f"{phi} on {ts.name}")
            except SoundnessViolationError as e:
                failures.append(f"{phi} on {ts.name}: {e}")
    return AcceptanceItem(
        10, "LTL_det formulas are branchable", not failures,
        "every formula branchable", f"{len(failures)} failures {failures[:3]}",
        detail=f"{len(formulas)} formulas (depth ≤ {opts.corpus_depth}, exhaustive) × {systems} total systems",
    )


def engine_agreement(opts: AcceptanceOptions) -> AcceptanceItem:
    ts = _system("two_state.ts")
    universe = TraceUniverse.for_system(ts, AGREEMENT_BOUNDS)
    engine = TraceEngine(ts, universe)
    model = model_traces(ts, universe)
    unary = ("not", "next", "reverse", "eventually", "always")
    binary = ("or", "until")
    corpus = formula_corpus(["p", "q"], min(opts.corpus_depth, 2), unary, binary)
    corpus += formula_chains(["p", "q"], opts.corpus_depth, unary, binary)
    formulas = list(dict.fromkeys(corpus))

    indices = model.indices
    paths = universe.path_of[indices]
    presents = universe.presents[indices]
    rows_by_path = {int(path): np.flatnonzero(paths == path) for path in np.unique(paths)}
    memo: dict = {}
    failures = []
    for phi in formulas:
        inside = trace_sem(phi, ts, universe, engine=engine).mask[indices]
        for path, rows in rows_by_path.items():
            seq = evaluate_path(phi, universe.paths[path], ts, memo)
            expected = np.array([seq.at(int(presents[r])) for r in rows])
            if not np.array_equal(expected, inside[rows]):
                failures.append(str(phi))
                break
    return AcceptanceItem(
        11, "per-trace evaluation agrees with the set engine", not failures,
        "0 disagreements", f"{len(failures)} disagreements {failures[:3]}",
        detail=f"{len(formulas)} formulas (depth ≤ {opts.corpus_depth}, exhaustive) × {len(indices)} model traces",
    )


def shell_core_minimality(opts: AcceptanceOptions) -> AcceptanceItem:
    rng = random.Random(opts.seed)
    failures = []
    runs = 0
    for lat in small_lattices():
        elements = lat.elements()
        for k in range(opts.functions_per_lattice):
            f = random_monotone_fn(lat, rng, name=f"f{k}")
            rho = make_uco(rng.sample(elements, rng.randint(0, len(elements))), lat, name="ρ")
            runs += 1
            try:
                shell = complete_shell(rho, [f]).result.fixpoints
                if shell != exhaustive_shell(rho, [f]):
                    failures.append(f"{lat.name}/{f.name}: shell")
                core = complete_core(rho, [f]).result.fixpoints
                if core != exhaustive_core(rho, [f]):
                    failures.append(f"{lat.name}/{f.name}: core")
            except CompletenessError as e:
                failures.append(f"{lat.name}/{f.name}: {e}")
    return AcceptanceItem(
        12, "shell/core engine matches exhaustive family search", not failures,
        "0 mismatches", f"{len(failures)} mismatches {failures[:3]}",
        detail=f"{runs} (lattice, function, domain) triples",
    )


ITEMS: List[Callable[[AcceptanceOptions], AcceptanceItem]] = [
    example_first,
    sign_plus_core,
    sign_arithmetic,
    injective_property,
    symmetric_property,
    traffic_lights,
    next_prev_example,
    constant_closures,
    witness_reports,
    ltl_det_branchable,
    engine_agreement,
    shell_core_minimality,
]


def run_acceptance(opts: AcceptanceOptions, only: Optional[List[int]] = None) -> List[AcceptanceItem]:
    """
    재현 항목 실행

    Args:
        opts: 우주 경계, 과거 깊이, 증거 창, 표본 수
        only: 실행할 항목 번호 (없으면 전부)

    Raises:
        UniverseTooSmallError: 고정 예제가 우주에 들어가지 않는 경우
    """
    require_bounds(opts.bounds)
    results = []
    for number, item in enumerate(ITEMS, start=1):
        if only and number not in only:
            continue
        logger.info(f"acceptance item {number}: {item.__name__}")
        result = item(opts)
        if not result.passed:
            logger.warning(f"item {number} failed: expected {result.expected}; observed {result.observed}")
        results.append(result)
    return results
