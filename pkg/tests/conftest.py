"""
Pytest Configuration
테스트 공통 설정 및 Fixtures
"""

import os

import pytest
from hypothesis import HealthCheck, settings

# 테스트 환경 변수 설정 (src 임포트 전에)
os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("TRACE_BOUNDS", "3,2,2,11")
os.environ.setdefault("TRACE_SLACK", "4")
os.environ.setdefault("SUBSET_CAP", "12")
os.environ.setdefault("RANDOM_SAMPLES", "200")
os.environ.setdefault("RANDOM_SEED", "7")

from src.models.universe import TraceUniverse, UniverseBounds  # noqa: E402
from src.services.kripke_service import totalize  # noqa: E402
from src.utils.parsers import fixture_path, load_lattice, load_transition_system  # noqa: E402

# Hypothesis 프로필: 기본은 fast, CI에서는 HYPOTHESIS_PROFILE=standard
settings.register_profile(
    "fast",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "standard",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

DEFAULT_BOUNDS = UniverseBounds(3, 2, 2, 11, slack=4)
SMALL_BOUNDS = UniverseBounds(1, 2, 1, 8, slack=4)


def load_system(name: str):
    """예제 .ts 파일을 읽어 전체화"""
    ts, _ = totalize(load_transition_system(fixture_path(name)))
    return ts


@pytest.fixture(scope="session")
def default_bounds():
    """예제 값이 모두 들어가는 기본 우주 경계"""
    return DEFAULT_BOUNDS


@pytest.fixture(scope="session")
def small_bounds():
    """루프 길이 1의 작은 우주 경계 (두 상태 시스템용)"""
    return SMALL_BOUNDS


@pytest.fixture(scope="session")
def two_state():
    """1 → 2, 두 상태 모두 자기 루프"""
    return load_system("two_state.ts")


@pytest.fixture(scope="session")
def traffic_light():
    """red → green → yellow → red"""
    return load_system("traffic_light.ts")


@pytest.fixture(scope="session")
def traffic_abstract():
    """신호등의 {red}, {green, yellow} 분할 추상 시스템"""
    return load_system("traffic_light_abstract.ts")


@pytest.fixture(scope="session")
def even_odd():
    """짝/홀 두 상태 순환"""
    return load_system("even_odd.ts")


@pytest.fixture(scope="session")
def two_state_universe(two_state):
    """두 상태 시스템의 기본 우주"""
    return TraceUniverse.for_system(two_state, DEFAULT_BOUNDS)


@pytest.fixture(scope="session")
def two_state_small_universe(two_state):
    """두 상태 시스템의 작은 우주"""
    return TraceUniverse.for_system(two_state, SMALL_BOUNDS)


@pytest.fixture(scope="session")
def sign_file():
    """[-10, 10] 정수 멱집합과 Sign 도메인"""
    return load_lattice(fixture_path("sign.lat"))


@pytest.fixture(scope="session")
def sign_plus_file():
    """Sign⁺ 도메인 (Sign ∪ {[0,9]} 계열)"""
    return load_lattice(fixture_path("sign_plus.lat"))


@pytest.fixture(scope="session")
def diamond_file():
    """4원소 다이아몬드 격자"""
    return load_lattice(fixture_path("diamond.lat"))
