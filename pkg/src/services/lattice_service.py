"""
Lattice Service
Moore 폐포, uco 연산, 고정점 반복, Galois 수반(right adjoint) 계산
"""

from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Tuple

from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import (
    CarrierMismatchError,
    LatticeError,
    NonAdditiveError,
    NonMonotoneError,
    SubsetCapError,
)
from src.models.lattice import Element, Lattice, MonotoneFn, PowersetLattice, Uco


def moore_closure(family: Iterable[Element], lat: Lattice) -> FrozenSet[Element]:
    """
    family를 포함하는 가장 작은 meet-닫힌 집합

    Args:
        family: 격자 원소 집합
        lat: 격자

    Returns:
        Moore 폐포 (top 포함)
    """
    closed = {lat.top}
    pending = [lat.require(x) for x in family]
    while pending:
        x = pending.pop()
        if x in closed:
            continue
        # 새 원소와 기존 원소의 meet만 추가로 생긴다
        fresh = {lat.meet(x, y) for y in closed}
        closed.add(x)
        pending.extend(m for m in fresh if m not in closed)
    return frozenset(closed)


def make_uco(family: Iterable[Element], lat: Lattice, name: str = "ρ") -> Uco:
    """family의 Moore 폐포로 uco 생성"""
    return Uco(carrier=lat, fixpoints=moore_closure(family, lat), name=name)


def identity_uco(lat: Lattice, cap: Optional[int] = None) -> Uco:
    """항등 uco (모든 원소가 고정점)"""
    return Uco(carrier=lat, fixpoints=frozenset(lat.elements(cap or AnalysisDefaults.LATTICE_CHECK_CAP)), name="id")


def top_uco(lat: Lattice) -> Uco:
    """가장 추상적인 uco {⊤}"""
    return Uco(carrier=lat, fixpoints=frozenset([lat.top]), name="⊤")


def uco_apply(rho: Uco, x: Element) -> Element:
    """x 이상의 가장 작은 고정점"""
    return rho.apply(rho.carrier.require(x))


def _same_carrier(a: Uco, b: Uco) -> Lattice:
    if a.carrier is not b.carrier:
        raise CarrierMismatchError(f"uco {a.name} and {b.name} live on different lattices")
    return a.carrier


def uco_join(a: Uco, b: Uco) -> Uco:
    """uco 격자의 join: 고정점 집합의 교집합"""
    lat = _same_carrier(a, b)
    return Uco(carrier=lat, fixpoints=a.fixpoints & b.fixpoints, name=f"{a.name}⊔{b.name}")


def uco_meet(a: Uco, b: Uco) -> Uco:
    """uco 격자의 meet (reduced product): 합집합의 Moore 폐포"""
    lat = _same_carrier(a, b)
    return Uco(carrier=lat, fixpoints=moore_closure(a.fixpoints | b.fixpoints, lat), name=f"{a.name}⊓{b.name}")


def uco_leq(a: Uco, b: Uco) -> bool:
    """a ⊑ b (a가 더 정밀) ⇔ fix(b) ⊆ fix(a)"""
    _same_carrier(a, b)
    return b.fixpoints <= a.fixpoints


def lfp(f: MonotoneFn, lat: Lattice, start: Optional[Element] = None) -> Element:
    """
    bottom에서 시작하는 상승 반복으로 최소 고정점 계산

    Raises:
        NonMonotoneError: 반복 중 상승이 깨진 경우
    """
    x = lat.bottom if start is None else start
    steps = 0
    while True:
        y = f(x)
        if y == x:
            logger.debug(f"lfp({f.name}) reached after {steps} steps")
            return x
        if not lat.leq(x, y):
            raise NonMonotoneError(
                f"{f.name} is not monotone: iteration went from {lat.format(x)} to {lat.format(y)}",
                witness=(x, y),
            )
        x = y
        steps += 1


def gfp(f: MonotoneFn, lat: Lattice, start: Optional[Element] = None) -> Element:
    """top에서 시작하는 하강 반복으로 최대 고정점 계산"""
    x = lat.top if start is None else start
    steps = 0
    while True:
        y = f(x)
        if y == x:
            logger.debug(f"gfp({f.name}) reached after {steps} steps")
            return x
        if not lat.leq(y, x):
            raise NonMonotoneError(
                f"{f.name} is not monotone: iteration went from {lat.format(x)} to {lat.format(y)}",
                witness=(x, y),
            )
        x = y
        steps += 1


def _enumerable(lat: Lattice, arity: int, cap: int) -> bool:
    return lat.size ** (arity + 1) <= cap


def find_monotonicity_violation(
    f: MonotoneFn, lat: Lattice, cap: Optional[int] = None
) -> Optional[Tuple[Tuple[Element, ...], Tuple[Element, ...]]]:
    """
    단조성 전수 검사

    Returns:
        위반하는 인자 튜플 쌍 (args_small, args_large) 또는 None

    Raises:
        SubsetCapError: 비교 횟수가 상한 초과이고 구성상 단조가 아닌 경우
    """
    cap = cap or AnalysisDefaults.LATTICE_CHECK_CAP
    if not _enumerable(lat, f.arity, cap):
        if f.additive:
            return None  # 점 함수의 상은 구성상 단조
        raise SubsetCapError(f"monotonicity check for {f.name} exceeds {cap} comparisons")
    elements = lat.elements()
    for args in product(elements, repeat=f.arity):
        value = f(*args)
        for position in range(f.arity):
            for y in elements:
                if y == args[position] or not lat.leq(args[position], y):
                    continue
                bigger = args[:position] + (y,) + args[position + 1:]
                if not lat.leq(value, f(*bigger)):
                    return args, bigger
    return None


def check_monotone(f: MonotoneFn, lat: Lattice, cap: Optional[int] = None) -> None:
    """단조가 아니면 NonMonotoneError"""
    violation = find_monotonicity_violation(f, lat, cap)
    if violation is not None:
        small, large = violation
        raise NonMonotoneError(
            f"{f.name} is not monotone: {_fmt_args(lat, small)} ≤ {_fmt_args(lat, large)} "
            f"but images are not ordered",
            witness=violation,
        )


def find_additivity_violation(f: MonotoneFn, lat: Lattice) -> Optional[Tuple[Element, Element]]:
    """
    단항 함수의 가법성(bottom 및 이항 join 보존) 전수 검사

    Returns:
        f(a ∨ b) ≠ f(a) ∨ f(b)인 (a, b), bottom 위반이면 (bottom, bottom), 없으면 None
    """
    if f(lat.bottom) != lat.bottom:
        return (lat.bottom, lat.bottom)
    elements = lat.elements()
    images = {x: f(x) for x in elements}
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if images[lat.join(a, b)] != lat.join(images[a], images[b]):
                return (a, b)
    return None


def right_adjoint(f: MonotoneFn, lat: Lattice, cap: Optional[int] = None) -> MonotoneFn:
    """
    가법 함수의 right adjoint f^r(y) = ∨{x : f(x) ≤ y}

    Args:
        f: 단항 가법 함수
        lat: 격자
        cap: 전수 검사 비교 상한

    Returns:
        f^r (MonotoneFn)

    Raises:
        NonAdditiveError: 가법성 위반 (반례 쌍 포함)
        SubsetCapError: 열거 불가능하고 가법성이 구성상 보장되지 않은 경우
    """
    if f.arity != 1:
        raise LatticeError(f"right adjoint needs a unary function, {f.name} has arity {f.arity}")
    cap = cap or AnalysisDefaults.LATTICE_CHECK_CAP

    if lat.size * lat.size <= cap:
        witness = find_additivity_violation(f, lat)
        if witness is not None:
            a, b = witness
            raise NonAdditiveError(
                f"{f.name} is not additive: f({lat.format(a)} ∨ {lat.format(b)}) ≠ f({lat.format(a)}) ∨ f({lat.format(b)})",
                witness=witness,
            )
        elements = lat.elements()
        images = {x: f(x) for x in elements}
        table = {
            (y,): lat.join_all(x for x in elements if lat.leq(images[x], y))
            for y in elements
        }
        return MonotoneFn(name=f"{f.name}^r", lattice=lat, arity=1, table=table)

    if not f.additive or not isinstance(lat, PowersetLattice):
        raise SubsetCapError(f"right adjoint of {f.name} needs enumeration beyond {cap} comparisons")
    return MonotoneFn(name=f"{f.name}^r", lattice=lat, arity=1, func=atomwise_adjoint(f, lat))


def atomwise_adjoint(f: MonotoneFn, lat: PowersetLattice) -> Callable[[Element], Element]:
    """
    멱집합 격자에서 원자 단위로 계산하는 right adjoint

    ⊆ 순서: f^r(Y) = {a : f({a}) ⊆ Y}
    ⊇ 순서: f^r(Y) = {a : f(full∖{a}) ⊉ Y}
    """
    if lat.order == "subset":
        singles = {a: f(frozenset([a])) for a in lat.atoms}
        return lambda y: frozenset(a for a in lat.atoms if singles[a] <= y)
    coatoms = {a: f(lat.full - {a}) for a in lat.atoms}
    return lambda y: frozenset(a for a in lat.atoms if not coatoms[a] >= y)


def max_preimages(f: MonotoneFn, y: Element, lat: Lattice, cap: Optional[int] = None) -> Tuple[Element, ...]:
    """
    max{x : f(x) ≤ y} (단항 함수)

    가법이면 f^r(y) 하나, 아니면 전체 원소를 거른 뒤 지배되는 원소 제거.
    """
    cap = cap or AnalysisDefaults.LATTICE_CHECK_CAP
    if f.additive and isinstance(lat, PowersetLattice) and lat.order == "subset":
        return (atomwise_adjoint(f, lat)(y),)
    elements = lat.elements(cap)
    return tuple(lat.maximal(x for x in elements if lat.leq(f(x), y)))


# ============================================
# 정수 점 함수 (포화 산술)
# ============================================

def _clamp(value: int, bound: int) -> int:
    return max(-bound, min(bound, value))


POINT_BUILTINS: Dict[str, Tuple[int, Callable[..., int]]] = {
    "add": (2, lambda a, b: a + b),
    "mul": (2, lambda a, b: a * b),
    "sq": (1, lambda a: a * a),
    "neg": (1, lambda a: -a),
    "id": (1, lambda a: a),
}


def saturating_point(builtin: str, bound: int) -> Tuple[int, Callable[..., str]]:
    """
    포화 산술 점 함수 (결과를 [-bound, bound]로 자름, 부호 보존)

    Returns:
        (arity, 원자 문자열 → 원자 문자열 함수)
    """
    if builtin not in POINT_BUILTINS:
        raise LatticeError(f"unknown builtin {builtin!r}; expected one of {sorted(POINT_BUILTINS)}")
    arity, op = POINT_BUILTINS[builtin]

    def point(*atoms: str) -> str:
        return str(_clamp(op(*(int(a) for a in atoms)), bound))

    return arity, point


def lift_point_fn(lat: PowersetLattice, name: str, arity: int, point: Callable[..., str]) -> MonotoneFn:
    """
    점 함수를 집합 상(image) 함수로 올림: f(X1..Xn) = {p(a1..an) : ai ∈ Xi}

    ⊆ 순서에서는 각 인자에 대해 가법.
    """
    def image(*sets: Element) -> Element:
        return frozenset(point(*combo) for combo in product(*sets))

    return MonotoneFn(
        name=name,
        lattice=lat,
        arity=arity,
        func=image,
        additive=lat.order == "subset",
        point=point,
    )


def _fmt_args(lat: Lattice, args: Tuple[Element, ...]) -> str:
    return "(" + ", ".join(lat.format(a) for a in args) + ")"
