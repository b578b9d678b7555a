"""
Analysis Defaults
분석 엔진 기본 상수 (우주 경계, 열거 상한, 예제 파라미터)
"""

from typing import Optional

from src.config.env import EnvConfig


class AnalysisDefaults:
    """
    분석 기본값

    설정 원칙:
    1. 모든 논문 예제 값이 우주 U 내부에 오도록 경계를 잡는다
    2. 열거 상한을 넘으면 표본 추출 대신 명시적 오류
    3. 환경 변수가 있으면 환경 변수 우선
    """

    # ============================================
    # 트레이스 우주 경계
    # ============================================
    # L: 루프 최대 길이, B: 중간 부분 최대 길이
    # O: 오프셋 범위 [-O, O], I: 현재 시점 범위 [-I, I]
    # 3-상태 신호등 주기(3)와 주기 접기 여유 때문에 L=3, I=11

    LOOP_LENGTH = 3
    MIDDLE_LENGTH = 2
    OFFSET_RANGE = 2
    PRESENT_RANGE = 11
    SLACK = 4  # U⁺ = 현재 시점 범위 ± SLACK

    # ============================================
    # 열거 상한
    # ============================================
    SUBSET_CAP = 12  # 상태 부분집합 열거 (2^12)
    LATTICE_CHECK_CAP = EnvConfig.LATTICE_CHECK_CAP or 1 << 16  # 단조성/가법성 전수 비교 횟수
    UCO_ENUMERATION_CAP = 1 << 12  # 닫힘 연산자 패밀리 멤버 열거

    # ============================================
    # 교차 검증 표본
    # ============================================
    RANDOM_SAMPLES = EnvConfig.RANDOM_SAMPLES or 1000
    RANDOM_SEED = EnvConfig.RANDOM_SEED
    EXHAUSTIVE_TRACE_LIMIT = 12  # 내부 트레이스가 이 이하이면 ℘(U) 전수 검사

    # ============================================
    # 예제 파라미터
    # ============================================
    SATURATION = 10  # Sign 예제 정수 범위 [-N, N]
    WITNESS_WINDOW = 8  # 부정/F 비존재 증거 창 [-W, W]

    @classmethod
    def bounds(cls) -> tuple[int, int, int, int]:
        """우주 경계 반환 (환경 변수 우선)"""
        try:
            return EnvConfig.parse_bounds()
        except ValueError:
            return (cls.LOOP_LENGTH, cls.MIDDLE_LENGTH, cls.OFFSET_RANGE, cls.PRESENT_RANGE)

    @classmethod
    def slack(cls) -> int:
        """U⁺ 여유 반환"""
        return EnvConfig.TRACE_SLACK if EnvConfig.TRACE_SLACK >= 1 else cls.SLACK

    @classmethod
    def past_depth(cls, loop: int, offset: int, present: int, override: Optional[int] = None) -> int:
        """
        과거 깊이 K 기본값

        현재 시점에서 왼쪽 주기 영역까지 닿고 한 주기를 더 본다.

        Args:
            loop: 루프 최대 길이 L
            offset: 오프셋 범위 O
            present: 현재 시점 범위 I
            override: 명시적 K (있으면 그대로 사용)

        Returns:
            K
        """
        if override is not None:
            return override
        if EnvConfig.PAST_DEPTH is not None and EnvConfig.PAST_DEPTH.strip().isdigit():
            return int(EnvConfig.PAST_DEPTH)
        return present + offset + loop

    @classmethod
    def subset_cap(cls) -> int:
        """상태 부분집합 열거 상한"""
        return EnvConfig.SUBSET_CAP or cls.SUBSET_CAP
