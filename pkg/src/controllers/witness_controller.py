"""
Witness Controller
¬ / F complete shell 비존재 증거 보고서(witness) 핸들러
"""

from loguru import logger

from src.dto.reports import ClosureRow, WitnessResult
from src.dto.run_config import RunConfig
from src.exceptions import CompletenessError, ConfigurationError
from src.services.witness_service import ClosureVerdict, WitnessReport, witness_F_shell, witness_neg_shell


def _row(verdict: ClosureVerdict) -> ClosureRow:
    return ClosureRow(
        name=verdict.name,
        complete=verdict.complete,
        fixpoints=verdict.fixpoints,
        witness=verdict.witness,
        lhs=verdict.lhs,
        rhs=verdict.rhs,
    )


def to_result(report: WitnessReport) -> WitnessResult:
    return WitnessResult(
        operator=report.operator,
        window=report.window,
        traces=report.traces,
        closures=[_row(c) for c in report.closures],
        join_family=report.join_family,
        forall_family=report.forall_family,
        join_equals_forall=report.join_equals_forall,
        forall_verdict=_row(report.forall_verdict),
        forall_witness=_row(report.forall_witness),
        boundary_artifact=report.boundary_artifact,
        notes=report.notes,
    )


def witness(config: RunConfig, operator: str) -> WitnessResult:
    """
    비존재 증거 보고서

    Args:
        config: 실행 설정 (window 사용)
        operator: "neg" | "F"

    Raises:
        ConfigurationError: 알 수 없는 연산자, 창 범위 밖
    """
    try:
        if operator == "neg":
            report = witness_neg_shell(config.window)
        elif operator == "F":
            report = witness_F_shell(config.window)
        else:
            raise ConfigurationError(f"witness operator must be neg or F, got {operator!r}")
        return to_result(report)

    except CompletenessError as e:
        logger.error(f"witness failed: {e}")
        raise
