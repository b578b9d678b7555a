"""
Environment Configuration
환경 변수 중앙 관리 (dotenv 사용)
"""

import os
from dotenv import load_dotenv
from pathlib import Path

# .env 파일 로드 (프로젝트 루트에서)
PROJECT_ROOT = Path(__file__).parent.parent.parent
env_path = PROJECT_ROOT / ".env"
load_dotenv(dotenv_path=env_path)


class EnvConfig:
    """환경 변수 설정 클래스"""

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # 트레이스 우주 경계 "L,B,O,I" (루프 길이, 중간 길이, 오프셋 범위, 현재 시점 범위)
    TRACE_BOUNDS = os.getenv("TRACE_BOUNDS", "3,2,2,11")
    TRACE_SLACK = int(os.getenv("TRACE_SLACK", "4"))

    # 과거 깊이 K (비어 있으면 우주 경계에서 유도)
    PAST_DEPTH = os.getenv("PAST_DEPTH") or None

    # 열거 상한
    SUBSET_CAP = int(os.getenv("SUBSET_CAP", "12"))
    LATTICE_CHECK_CAP = int(os.getenv("LATTICE_CHECK_CAP", "65536"))

    # 무작위 교차 검증
    RANDOM_SAMPLES = int(os.getenv("RANDOM_SAMPLES", "1000"))
    RANDOM_SEED = int(os.getenv("RANDOM_SEED", "7"))

    # 예제 입력 디렉터리
    FIXTURES_DIR = os.getenv("FIXTURES_DIR") or str(PROJECT_ROOT / "fixtures")

    @classmethod
    def parse_bounds(cls, text: str | None = None) -> tuple[int, int, int, int]:
        """
        "L,B,O,I" 문자열을 정수 4-튜플로 변환

        Args:
            text: 경계 문자열 (None이면 TRACE_BOUNDS)

        Returns:
            (L, B, O, I)

        Raises:
            ValueError: 형식이 잘못된 경우
        """
        raw = text if text is not None else cls.TRACE_BOUNDS
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 4:
            raise ValueError(f"bounds must be 'L,B,O,I', got {raw!r}")
        return tuple(int(p) for p in parts)  # type: ignore[return-value]

    @classmethod
    def validate(cls) -> list[str]:
        """환경 변수 검증 (문제 목록 반환)"""
        problems = []

        try:
            loop, middle, offset, present = cls.parse_bounds()
            if loop < 1 or offset < 0 or middle < 0 or present < 0:
                problems.append("TRACE_BOUNDS must have L >= 1 and non-negative B, O, I")
        except ValueError as e:
            problems.append(f"TRACE_BOUNDS: {e}")

        if cls.TRACE_SLACK < 1:
            problems.append("TRACE_SLACK must be >= 1")

        if cls.PAST_DEPTH is not None and not cls.PAST_DEPTH.strip().isdigit():
            problems.append("PAST_DEPTH must be a non-negative integer")

        if cls.SUBSET_CAP < 1:
            problems.append("SUBSET_CAP must be >= 1")

        if cls.LOG_LEVEL.upper() not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            problems.append(f"LOG_LEVEL {cls.LOG_LEVEL!r} is not a loguru level")

        return problems
