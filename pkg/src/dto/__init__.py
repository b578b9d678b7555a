"""
DTO Module
CLI 실행 설정과 하위 명령 보고서
"""

from .reports import (
    AcceptanceRow,
    AnalyzeReport,
    CheckReport,
    ClosureRow,
    PaperExamplesReport,
    ShellCoreResult,
    WitnessResult,
)
from .run_config import RunConfig

__all__ = [
    "AcceptanceRow",
    "AnalyzeReport",
    "CheckReport",
    "ClosureRow",
    "PaperExamplesReport",
    "ShellCoreResult",
    "WitnessResult",
    "RunConfig",
]
