"""
Custom Exceptions
완전성 분석 도구 전용 예외 클래스
"""

from typing import Any, Optional


class CompletenessError(Exception):
    """완전성 분석 기본 예외"""
    pass


class ConfigurationError(CompletenessError):
    """설정 오류 예외"""
    pass


class ParseError(CompletenessError):
    """입력 파일 파싱 실패 예외"""

    def __init__(self, message: str, source: str = "<text>", line: Optional[int] = None):
        self.source = source
        self.line = line
        location = f"{source}:{line}" if line is not None else source
        super().__init__(f"{location}: {message}")


class LatticeError(CompletenessError):
    """격자 구성 오류 예외 (순서 관계, meet/join 부재)"""
    pass


class CarrierMismatchError(LatticeError):
    """서로 다른 격자 위의 값을 섞어 쓴 경우"""
    pass


class NonMonotoneError(LatticeError):
    """단조성 위반 예외 (반례 쌍 포함)"""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class NonAdditiveError(LatticeError):
    """가법성 위반 예외 (반례 쌍 포함)"""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class SubsetCapError(CompletenessError):
    """부분집합 열거 상한 초과 예외"""
    pass


class UniverseOverflowError(CompletenessError):
    """트레이스가 내부 우주(U⁺) 밖으로 나간 경우"""

    def __init__(self, message: str, trace: Any = None):
        self.trace = trace
        super().__init__(message)


class UniverseTooSmallError(CompletenessError):
    """우주 경계가 요청한 계산에 비해 너무 작은 경우"""
    pass


class FormulaSyntaxError(CompletenessError):
    """수식 문법 오류 예외"""

    def __init__(self, message: str, position: int = 0):
        self.position = position
        super().__init__(f"{message} (position {position})")


class MonotonicityViolationError(CompletenessError):
    """고정점 변수가 홀수 번 부정 아래에 나타난 경우"""

    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"fixpoint variable {variable} occurs under an odd number of negations")


class UnsupportedFormulaError(CompletenessError):
    """평가기가 지원하지 않는 수식 구성"""
    pass


class SoundnessViolationError(CompletenessError):
    """상태 의미가 트레이스 의미의 추상보다 큰 경우 (내부 버그)"""
    pass


class CrossValidationError(CompletenessError):
    """두 독립 계산 결과가 어긋난 경우 (내부 버그)"""
    pass


class ShellNotExistError(CompletenessError):
    """완전 shell이 존재하지 않는 연산자 집합 요청"""
    pass
