"""
Run Config DTO
CLI 실행 설정 (우주 경계, 과거 깊이, 열거 상한, 출력 형식)
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from src.config.defaults import AnalysisDefaults
from src.models.universe import UniverseBounds


class RunConfig(BaseModel):
    """CLI 실행 설정 DTO"""

    subcommand: Literal["analyze", "check", "shellcore", "witness", "paper-examples"] = Field(
        ..., description="실행할 하위 명령"
    )
    inputs: List[str] = Field(default_factory=list, description="입력 파일 경로")
    bounds: Tuple[int, int, int, int] = Field(
        default_factory=AnalysisDefaults.bounds, description="우주 경계 (L, B, O, I)"
    )
    slack: int = Field(default_factory=AnalysisDefaults.slack, description="U⁺ 여유 Δ", ge=1)
    depth: Optional[int] = Field(default=None, description="과거 깊이 K (없으면 I + O + L)", ge=0)
    cap: int = Field(default_factory=AnalysisDefaults.subset_cap, description="상태 부분집합 열거 상한", ge=1)
    format: Literal["text", "structured"] = Field(default="text", description="출력 형식")
    window: int = Field(default=AnalysisDefaults.WITNESS_WINDOW, description="비존재 증거 창 W", ge=1, le=10)

    @field_validator("bounds")
    @classmethod
    def _check_bounds(cls, value: Tuple[int, int, int, int]) -> Tuple[int, int, int, int]:
        loop, middle, offset, present = value
        if loop < 1:
            raise ValueError(f"loop length L must be positive, got {loop}")
        if min(middle, offset, present) < 0:
            raise ValueError(f"B, O, I must be non-negative, got {value}")
        return value

    def universe_bounds(self) -> UniverseBounds:
        loop, middle, offset, present = self.bounds
        return UniverseBounds(loop, middle, offset, present, self.slack)

    def past_depth(self) -> int:
        loop, _, offset, present = self.bounds
        return AnalysisDefaults.past_depth(loop, offset, present, self.depth)

    class Config:
        json_schema_extra = {
            "example": {
                "subcommand": "check",
                "inputs": ["fixtures/two_state.ts"],
                "bounds": [3, 2, 2, 11],
                "slack": 4,
                "depth": None,
                "cap": 12,
                "format": "text",
                "window": 8,
            }
        }
