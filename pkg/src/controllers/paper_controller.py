"""
Paper Examples Controller
재현 예제 묶음(paper-examples) 핸들러
"""

from typing import List, Optional

from loguru import logger

from src.dto.reports import AcceptanceRow, PaperExamplesReport
from src.dto.run_config import RunConfig
from src.exceptions import CompletenessError
from src.services.acceptance_service import AcceptanceOptions, run_acceptance


def paper_examples(config: RunConfig, only: Optional[List[int]] = None) -> PaperExamplesReport:
    """
    재현 항목 전체 실행

    Returns:
        PaperExamplesReport (passed가 False면 CLI 종료 코드 1)

    Raises:
        UniverseTooSmallError: 경계가 예제보다 작은 경우
    """
    bounds = config.universe_bounds()
    opts = AcceptanceOptions(bounds=bounds, depth=config.depth, window=config.window)
    try:
        items = run_acceptance(opts, only)
    except CompletenessError as e:
        logger.error(f"paper-examples aborted: {e}")
        raise

    report = PaperExamplesReport(
        bounds=bounds.describe(),
        window=config.window,
        rows=[
            AcceptanceRow(
                item=i.item, title=i.title, passed=i.passed, expected=i.expected, observed=i.observed, detail=i.detail
            )
            for i in items
        ],
    )
    logger.info(f"paper-examples: {sum(r.passed for r in report.rows)}/{len(report.rows)} passed")
    return report
