"""
Lattice Controller
유한 격자 위 complete shell/core 계산(shellcore) 핸들러
"""

from typing import Sequence

from loguru import logger

from src.dto.reports import ShellCoreResult, StepRow
from src.dto.run_config import RunConfig
from src.exceptions import CompletenessError, ConfigurationError
from src.services.completeness_service import complete_core, complete_shell, function_by_name, is_complete
from src.utils.parsers import LatticeFile, load_lattice


def _domain(file: LatticeFile, name: str):
    try:
        return file.domains[name]
    except KeyError as e:
        raise ConfigurationError(f"unknown domain {name!r}; known: {sorted(file.domains)}") from e


def _result_name(file: LatticeFile, fixpoints, fallback: str) -> str:
    """결과 패밀리가 파일 안의 이름 붙은 도메인과 같으면 그 이름"""
    for name, uco in file.domains.items():
        if uco.fixpoints == fixpoints:
            return name
    return fallback


def shellcore(config: RunConfig, functions: Sequence[str], domain: str, mode: str) -> ShellCoreResult:
    """
    shell/core 반복 실행

    Args:
        config: 실행 설정 (inputs[0] = .lat 파일)
        functions: 함수 이름들 (F)
        domain: 출발 도메인 이름
        mode: "shell" | "core"

    Returns:
        ShellCoreResult (라운드별 변화, 최종 패밀리)

    Raises:
        ConfigurationError: 입력 누락, 알 수 없는 이름/모드
        LatticeError: 알 수 없는 함수
    """
    try:
        if not config.inputs:
            raise ConfigurationError("shellcore needs a lattice file")
        if mode not in ("shell", "core"):
            raise ConfigurationError(f"mode must be shell or core, got {mode!r}")
        file = load_lattice(config.inputs[0])
        lat = file.lattice
        rho = _domain(file, domain)
        fns = [function_by_name(file.functions, name) for name in functions]

        verdicts = {f.name: is_complete(rho, f).complete for f in fns}
        run = complete_shell(rho, fns) if mode == "shell" else complete_core(rho, fns)

        result = ShellCoreResult(
            lattice=lat.name,
            mode=mode,
            functions=[f.name for f in fns],
            domain=domain,
            input_family=[lat.format(y) for y in rho.sorted_fixpoints()],
            result_family=[lat.format(y) for y in run.result.sorted_fixpoints()],
            result_name=_result_name(file, run.result.fixpoints, f"{mode}({domain})"),
            already_complete=run.already_complete,
            added=[lat.format(y) for y in run.added],
            removed=[lat.format(y) for y in run.removed],
            steps=[
                StepRow(
                    index=step.index,
                    added=[lat.format(y) for y in step.added],
                    removed=[lat.format(y) for y in step.removed],
                    notes=list(step.notes),
                )
                for step in run.steps
            ],
            verdicts=verdicts,
        )
        logger.info(f"{mode} of {domain} for {result.functions}: {result.result_name}")
        return result

    except CompletenessError as e:
        logger.error(f"shellcore failed: {e}")
        raise
