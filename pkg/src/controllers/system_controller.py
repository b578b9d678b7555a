"""
System Controller
전이 시스템 분석(analyze)과 수식 검사(check) 핸들러
"""

from typing import Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from src.dto.reports import AbbrevRow, AnalyzeReport, CheckReport, FormulaRow, ShellRow
from src.dto.run_config import RunConfig
from src.exceptions import CompletenessError, ConfigurationError, SubsetCapError
from src.models.formula import Formula, format_formula
from src.models.transition_system import StateSet, TransitionSystem
from src.models.universe import TraceUniverse
from src.services import kripke_service, shell_service
from src.services.mucalc_service import TraceEngine, is_branchable, is_ltl_det
from src.services.trace_service import HypothesisReport, check_abbrev, check_hypothesis, model_traces
from src.utils.formula_parser import load_formulas, parse_formula
from src.utils.parsers import load_transition_system


def load_system(config: RunConfig) -> Tuple[TransitionSystem, List[str], TraceUniverse]:
    """
    첫 입력 파일을 읽어 전체화하고 우주를 만든다

    Raises:
        ConfigurationError: 입력 파일이 없는 경우
        ParseError: .ts 문법 오류
    """
    if not config.inputs:
        raise ConfigurationError(f"{config.subcommand} needs a transition system file")
    ts, added = kripke_service.totalize(load_transition_system(config.inputs[0]))
    universe = TraceUniverse.for_system(ts, config.universe_bounds())
    return ts, added, universe


def _state_lists(ts: TransitionSystem, sets: Iterable[StateSet]) -> List[List[str]]:
    return [ts.sort_states(s) for s in sets]


def _hypothesis_notes(hypothesis: HypothesisReport) -> List[str]:
    small = [f"|M↓{s}| < 2" for s in hypothesis.small_states]
    return small + hypothesis.operator_failures + hypothesis.notes


def _core_next_verdict(ts: TransitionSystem, kept: Sequence[StateSet]) -> str:
    if len(kept) == 2 ** len(ts.states):
        return "core for next-time: ρ∀ itself (every γ∀(S) survives)"
    if len(kept) <= 2:
        return "core for next-time: trivial {∅, M}"
    return f"core for next-time: {len(kept)} of {2 ** len(ts.states)} state sets survive"


def analyze(config: RunConfig, ops: Optional[Sequence[str]] = None) -> AnalyzeReport:
    """
    전이 시스템 분석

    전체화 차이, 우주 가설, 단사성/대칭성, next-time/reversal core, 최선 근사 항목,
    (요청 시) 연산자 집합 shell과 그 완전성을 모은다.

    Args:
        config: 실행 설정 (inputs[0] = .ts 파일)
        ops: shell을 계산할 연산자 이름들 (없으면 생략)

    Returns:
        AnalyzeReport
    """
    try:
        ts, added, universe = load_system(config)
        depth = config.past_depth()

        hypothesis = check_hypothesis(ts, universe)
        injective = kripke_service.is_injective(ts)
        symmetric = kripke_service.is_symmetric(ts)

        core_next = shell_service.core_next(ts, universe, depth, config.cap)
        kept_next = kripke_service.core_next_states(ts, config.cap)
        core_rev = shell_service.core_reversal(ts, universe, config.cap)
        kept_rev = [frozenset()] + [label.states for label in core_rev.labels]
        logger.debug(f"{core_next.name}: {len(core_next.generators)} generators")

        report = AnalyzeReport(
            system=ts.name,
            states=list(ts.states),
            bounds=universe.bounds.describe(),
            totalized=list(added),
            hypothesis_holds=hypothesis.holds,
            hypothesis_notes=_hypothesis_notes(hypothesis),
            injective=injective,
            symmetric=symmetric,
            core_next_states=_state_lists(ts, kept_next),
            core_next_full=len(kept_next) == 2 ** len(ts.states),
            core_next_trivial=len(kept_next) <= 2,
            reversal_stable=ts.sort_states(kripke_service.reversal_stable_states(ts)),
            core_reversal_states=_state_lists(ts, kept_rev),
            core_reversal_full=len(kept_rev) == 2 ** len(ts.states),
            abbrev=[AbbrevRow(item=i.item, identity=i.identity, holds=i.holds, detail=i.detail)
                    for i in check_abbrev(ts, universe, config.cap)],
        )

        if injective:
            report.verdicts.append("injective: yes ⇒ ρ∀ complete for next-time")
        else:
            report.verdicts.append("injective: no ⇒ ρ∀ incomplete for next-time")
        report.verdicts.append(_core_next_verdict(ts, kept_next))
        if symmetric:
            report.verdicts.append("symmetric: yes ⇒ ρ∀ complete for reversal")
        else:
            report.verdicts.append("symmetric: no ⇒ ρ∀ incomplete for reversal")
        if len(kept_rev) == 1:
            report.verdicts.append("core for reversal: trivial {∅}")
        if not hypothesis.holds:
            report.verdicts.append("warning: universe hypothesis fails; theorem checks may be vacuous")

        if ops:
            report.shells.append(_shell_row(ts, universe, ops, depth))

        logger.info(f"analyze {ts.name}: injective={injective}, symmetric={symmetric}")
        return report

    except CompletenessError as e:
        logger.error(f"analyze failed: {e}")
        raise


def _shell_row(ts: TransitionSystem, universe: TraceUniverse, ops: Sequence[str], depth: int) -> ShellRow:
    uco, checks = shell_service.verified_shell(ts, universe, ops, depth)
    try:
        size: Optional[int] = uco.family_size()
    except SubsetCapError:
        size = None
    return ShellRow(
        ops=list(ops),
        name=uco.name,
        description=repr(uco),
        family_size=size,
        checks={c.op: c.complete for c in checks},
    )


def collect_formulas(texts: Sequence[str], files: Sequence[str]) -> List[Formula]:
    """
    Raises:
        ConfigurationError: 수식이 하나도 없는 경우
    """
    formulas = [parse_formula(t) for t in texts]
    for path in files:
        formulas += load_formulas(path)
    if not formulas:
        raise ConfigurationError("check needs --formula or --formula-file")
    return formulas


def check(config: RunConfig, formulas: Sequence[Formula]) -> CheckReport:
    """
    수식별 트레이스 의미, 상태 의미, branchability, LTL_det 소속

    Raises:
        UniverseTooSmallError: 수식 깊이에 비해 현재 시점 범위가 좁은 경우
    """
    try:
        ts, _, universe = load_system(config)
        engine = TraceEngine(ts, universe)
        report = CheckReport(
            system=ts.name,
            bounds=universe.bounds.describe(),
            universe_size=int(universe.interior_mask.sum()),
            model_size=len(model_traces(ts, universe)),
        )
        for phi in formulas:
            verdict = is_branchable(phi, ts, universe, engine=engine)
            report.rows.append(
                FormulaRow(
                    formula=format_formula(phi),
                    trace_count=verdict.trace_count,
                    model_count=verdict.model_count,
                    alpha=ts.sort_states(verdict.alpha_side),
                    state=ts.sort_states(verdict.state_side),
                    difference=ts.sort_states(verdict.difference),
                    branchable=verdict.branchable,
                    ltl_det=is_ltl_det(phi),
                )
            )
            logger.info(f"{phi}: branchable={verdict.branchable}")
        return report

    except CompletenessError as e:
        logger.error(f"check failed: {e}")
        raise
