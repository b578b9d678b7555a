"""
Formula AST
μ*-미적분 수식 트리 (핵심 생성자 + 파생 연산자)

핵심: StateProp, TransProp, Var, Next, Reverse, Or, Not, Mu, Nu, ForallGuarded
파생: And, Implies, Prev, Eventually(F), Always(G), Once, Historically, Until(U), WeakUntil(W)
"""

from dataclasses import dataclass
from itertools import count
from typing import FrozenSet, Iterator, Optional, Set, Tuple

from src.exceptions import FormulaSyntaxError, MonotonicityViolationError

Edge = Tuple[str, str]


class Formula:
    """수식 노드 기본 클래스"""

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def walk(self) -> Iterator["Formula"]:
        yield self
        for child in self.children():
            yield from child.walk()

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


def _fmt_states(states: FrozenSet[str]) -> str:
    return "{" + ",".join(sorted(states)) + "}"


@dataclass(frozen=True)
class StateProp(Formula):
    """σ_S: 라벨 이름 또는 명시적 상태 집합"""

    name: Optional[str] = None
    states: Optional[FrozenSet[str]] = None

    def __str__(self) -> str:
        return self.name if self.name is not None else f"[S:{_fmt_states(self.states or frozenset())}]"


@dataclass(frozen=True)
class TransProp(Formula):
    """π_t: 명시적 전이 집합"""

    edges: FrozenSet[Edge]

    def __str__(self) -> str:
        inner = ",".join(f"{a}->{b}" for a, b in sorted(self.edges))
        return f"[T:{{{inner}}}]"


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Next(_Unary):
    """⊕"""

    def __str__(self) -> str:
        return f"(){self.arg}"


@dataclass(frozen=True)
class Reverse(_Unary):
    """⟲"""

    def __str__(self) -> str:
        return f"rev {self.arg}"


@dataclass(frozen=True)
class Not(_Unary):
    def __str__(self) -> str:
        return f"!{self.arg}"


@dataclass(frozen=True)
class Or(_Binary):
    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    body: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.body,)

    def __str__(self) -> str:
        return f"(mu {self.var}. {self.body})"


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.body,)

    def __str__(self) -> str:
        return f"(nu {self.var}. {self.body})"


@dataclass(frozen=True)
class ForallGuarded(_Unary):
    """λX.∀(N, X), guard가 None이면 N = M"""

    guard: Optional[object] = None

    def __str__(self) -> str:
        return f"A {self.arg}"


# 파생 연산자


@dataclass(frozen=True)
class And(_Binary):
    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Implies(_Binary):
    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Prev(_Unary):
    """⊖ = ⟲⊕⟲"""

    def __str__(self) -> str:
        return f"P {self.arg}"


@dataclass(frozen=True)
class Eventually(_Unary):
    """F"""

    def __str__(self) -> str:
        return f"F {self.arg}"


@dataclass(frozen=True)
class Always(_Unary):
    """G"""

    def __str__(self) -> str:
        return f"G {self.arg}"


@dataclass(frozen=True)
class Once(_Unary):
    """과거 F = ⟲F⟲"""

    def __str__(self) -> str:
        return f"O {self.arg}"


@dataclass(frozen=True)
class Historically(_Unary):
    """과거 G = ⟲G⟲"""

    def __str__(self) -> str:
        return f"H {self.arg}"


@dataclass(frozen=True)
class Until(_Binary):
    def __str__(self) -> str:
        return f"({self.left} U {self.right})"


@dataclass(frozen=True)
class WeakUntil(_Binary):
    def __str__(self) -> str:
        return f"({self.left} W {self.right})"


SUGAR = (And, Implies, Prev, Eventually, Always, Once, Historically, Until, WeakUntil)
TEMPORAL = (Next, Prev, Eventually, Always, Once, Historically, Until, WeakUntil, Mu, Nu)


def format_formula(phi: Formula) -> str:
    """바깥 괄호 없이 출력 (`G p | F G q`)"""
    text = str(phi)
    if isinstance(phi, (_Binary, Mu, Nu)):
        return text[1:-1]
    return text


def expand(phi: Formula, fresh: Optional[Iterator[int]] = None) -> Formula:
    """
    파생 연산자를 핵심 생성자로 전개

    F X = μY. X ∨ ⊕Y, G X = νY. X ∧ ⊕Y, φ U ψ = μY. ψ ∨ (φ ∧ ⊕Y),
    φ W ψ = νY. ψ ∨ (φ ∧ ⊕Y), ⊖ = ⟲⊕⟲, 과거 변형은 ⟲로 감싼다.
    """
    fresh = fresh if fresh is not None else count()

    def var() -> str:
        return f"_Y{next(fresh)}"

    def conj(a: Formula, b: Formula) -> Formula:
        return Not(Or(Not(a), Not(b)))

    def go(node: Formula) -> Formula:
        if isinstance(node, (StateProp, TransProp, Var)):
            return node
        if isinstance(node, Next):
            return Next(go(node.arg))
        if isinstance(node, Reverse):
            return Reverse(go(node.arg))
        if isinstance(node, Not):
            return Not(go(node.arg))
        if isinstance(node, Or):
            return Or(go(node.left), go(node.right))
        if isinstance(node, Mu):
            return Mu(node.var, go(node.body))
        if isinstance(node, Nu):
            return Nu(node.var, go(node.body))
        if isinstance(node, ForallGuarded):
            return ForallGuarded(go(node.arg), node.guard)
        if isinstance(node, And):
            return conj(go(node.left), go(node.right))
        if isinstance(node, Implies):
            return Or(Not(go(node.left)), go(node.right))
        if isinstance(node, Prev):
            return Reverse(Next(Reverse(go(node.arg))))
        if isinstance(node, Eventually):
            y = var()
            return Mu(y, Or(go(node.arg), Next(Var(y))))
        if isinstance(node, Always):
            y = var()
            return Nu(y, conj(go(node.arg), Next(Var(y))))
        if isinstance(node, Once):
            return Reverse(go(Eventually(Reverse(node.arg))))
        if isinstance(node, Historically):
            return Reverse(go(Always(Reverse(node.arg))))
        if isinstance(node, (Until, WeakUntil)):
            y = var()
            body = Or(go(node.right), conj(go(node.left), Next(Var(y))))
            return Mu(y, body) if isinstance(node, Until) else Nu(y, body)
        raise TypeError(f"unknown formula node {type(node).__name__}")

    return go(phi)


def free_vars(phi: Formula) -> FrozenSet[str]:
    """자유 변수"""
    if isinstance(phi, Var):
        return frozenset([phi.name])
    if isinstance(phi, (Mu, Nu)):
        return free_vars(phi.body) - {phi.var}
    found: Set[str] = set()
    for child in phi.children():
        found |= free_vars(child)
    return frozenset(found)


def check_monotone(phi: Formula) -> None:
    """
    고정점 변수가 짝수 개의 부정 아래에만 나타나는지 검사 (전개 후)

    Raises:
        MonotonicityViolationError: 홀수 개 부정 아래 출현
    """

    def go(node: Formula, parity: dict) -> None:
        if isinstance(node, Var):
            if parity.get(node.name, 0) % 2:
                raise MonotonicityViolationError(node.name)
            return
        if isinstance(node, Not):
            go(node.arg, {k: v + 1 for k, v in parity.items()})
            return
        if isinstance(node, (Mu, Nu)):
            go(node.body, {**parity, node.var: 0})
            return
        for child in node.children():
            go(child, parity)

    go(expand(phi), {})


def temporal_depth(phi: Formula) -> int:
    """시간 연산자(⊕, ⊖, F, G, U, W, 과거 변형, μ/ν) 중첩 깊이"""
    below = max((temporal_depth(c) for c in phi.children()), default=0)
    return below + 1 if isinstance(phi, TEMPORAL) else below


def syntactic_depth(phi: Formula) -> int:
    """연산자 중첩 깊이 (원자 = 0)"""
    return max((syntactic_depth(c) + 1 for c in phi.children()), default=0)


def has_reversal(phi: Formula) -> bool:
    return any(isinstance(n, (Reverse, Prev, Once, Historically)) for n in phi.walk())


def is_fixpoint_free(phi: Formula) -> bool:
    """원시 μ/ν, 변수, ∀ 가드가 없다 (파생 연산자는 허용)"""
    return not any(isinstance(n, (Mu, Nu, Var, ForallGuarded)) for n in phi.walk())


def prop_states(prop: StateProp, ts) -> FrozenSet[str]:
    """
    명제의 상태 집합 (명시 집합 → 라벨 → 같은 이름의 상태 순)

    Raises:
        FormulaSyntaxError: 라벨도 상태도 아닌 이름
    """
    if prop.states is not None:
        return prop.states
    labelled = ts.label(prop.name)
    if labelled is not None:
        return labelled
    if prop.name in ts.state_set:
        return frozenset([prop.name])
    raise FormulaSyntaxError(f"unknown proposition {prop.name!r} for {ts.name}")
