"""
Lasso Evaluator
단일 bi-lasso 트레이스 위의 정확한 수식 평가 (집합 엔진의 독립 검증용)
"""

from dataclasses import dataclass
from math import lcm
from typing import Callable, Dict, Optional, Tuple

from src.exceptions import UnsupportedFormulaError
from src.models.formula import (
    Always,
    And,
    Eventually,
    ForallGuarded,
    Formula,
    Historically,
    Implies,
    Mu,
    Next,
    Not,
    Nu,
    Once,
    Or,
    Prev,
    Reverse,
    StateProp,
    TransProp,
    Until,
    Var,
    WeakUntil,
    prop_states,
)
from src.models.trace import BiLassoTrace, PathKey, reverse_path, state_at
from src.models.transition_system import TransitionSystem


@dataclass(frozen=True)
class BoolSeq:
    """
    궁극적 양방향 주기 bool 수열 f: ℤ → bool

    f(n) = left[(n − lo) mod |left|] (n < lo), mid[n − lo] (lo ≤ n < hi),
    right[(n − hi) mod |right|] (n ≥ hi)
    """

    lo: int
    hi: int
    left: Tuple[bool, ...]
    mid: Tuple[bool, ...]
    right: Tuple[bool, ...]

    def at(self, n: int) -> bool:
        if n < self.lo:
            return self.left[(n - self.lo) % len(self.left)]
        if n < self.hi:
            return self.mid[n - self.lo]
        return self.right[(n - self.hi) % len(self.right)]

    @classmethod
    def tabulate(cls, fn: Callable[[int], bool], lo: int, hi: int, left_period: int, right_period: int) -> "BoolSeq":
        """fn이 lo 왼쪽에서 left_period, hi 오른쪽에서 right_period 주기일 때의 표현"""
        return cls(
            lo,
            hi,
            tuple(fn(lo - left_period + k) for k in range(left_period)),
            tuple(fn(n) for n in range(lo, hi)),
            tuple(fn(hi + k) for k in range(right_period)),
        )

    def combine(self, other: "BoolSeq", op: Callable[[bool, bool], bool]) -> "BoolSeq":
        return BoolSeq.tabulate(
            lambda n: op(self.at(n), other.at(n)),
            min(self.lo, other.lo),
            max(self.hi, other.hi),
            lcm(len(self.left), len(other.left)),
            lcm(len(self.right), len(other.right)),
        )

    def negate(self) -> "BoolSeq":
        flip = lambda xs: tuple(not x for x in xs)  # noqa: E731
        return BoolSeq(self.lo, self.hi, flip(self.left), flip(self.mid), flip(self.right))

    def next(self) -> "BoolSeq":
        """g(n) = f(n+1)"""
        return BoolSeq(self.lo - 1, self.hi - 1, self.left, self.mid, self.right)

    def reverse(self) -> "BoolSeq":
        """g(n) = f(−n)"""
        return BoolSeq(
            -self.hi + 1,
            -self.lo + 1,
            tuple(reversed(self.right)),
            tuple(reversed(self.mid)),
            tuple(reversed(self.left)),
        )


def until(hold: BoolSeq, goal: BoolSeq, weak: bool) -> BoolSeq:
    """
    hold U goal (weak면 W)

    오른쪽 주기 영역에서 두 바퀴 역방향 전파로 고정점을 구하고,
    중간과 왼쪽 한 주기를 더 펼친 뒤 그 왼쪽을 새 주기로 쓴다.
    """
    lo = min(hold.lo, goal.lo)
    hi = max(hold.hi, goal.hi)
    pl = lcm(len(hold.left), len(goal.left))
    pr = lcm(len(hold.right), len(goal.right))

    ring = [weak] * pr
    for _ in range(2):
        for k in reversed(range(pr)):
            n = hi + k
            ring[k] = goal.at(n) or (hold.at(n) and ring[(k + 1) % pr])

    values = {}
    after = ring[0]
    for n in reversed(range(lo - 2 * pl, hi)):
        after = goal.at(n) or (hold.at(n) and after)
        values[n] = after
    new_lo = lo - pl
    return BoolSeq(
        new_lo,
        hi,
        tuple(values[new_lo - pl + k] for k in range(pl)),
        tuple(values[n] for n in range(new_lo, hi)),
        tuple(ring),
    )


def _constant(value: bool) -> BoolSeq:
    return BoolSeq(0, 0, (value,), (), (value,))


def _state_seq(key: PathKey, predicate: Callable[[str], bool]) -> BoolSeq:
    u, m, w, o = key
    return BoolSeq(o, o + len(m), tuple(map(predicate, u)), tuple(map(predicate, m)), tuple(map(predicate, w)))


def evaluate_path(
    phi: Formula, key: PathKey, ts: TransitionSystem, memo: Optional[Dict[Tuple[Formula, PathKey], BoolSeq]] = None
) -> BoolSeq:
    """
    경로 위 모든 시점의 진릿값 (memo는 여러 수식이 같은 경로를 평가할 때 공유)

    Raises:
        UnsupportedFormulaError: 원시 μ/ν, 변수, ∀ 가드
    """
    u, m, w, o = key

    def compute(node: Formula) -> BoolSeq:
        if isinstance(node, StateProp):
            states = prop_states(node, ts)
            return _state_seq(key, lambda s: s in states)
        if isinstance(node, TransProp):
            return BoolSeq.tabulate(
                lambda n: (state_at(key, n), state_at(key, n + 1)) in node.edges, o - 1, o + len(m), len(u), len(w)
            )
        if isinstance(node, Not):
            return go(node.arg).negate()
        if isinstance(node, Or):
            return go(node.left).combine(go(node.right), lambda a, b: a or b)
        if isinstance(node, And):
            return go(node.left).combine(go(node.right), lambda a, b: a and b)
        if isinstance(node, Implies):
            return go(node.left).combine(go(node.right), lambda a, b: (not a) or b)
        if isinstance(node, Next):
            return go(node.arg).next()
        if isinstance(node, Reverse):
            # ⟨n,σ⟩ ⊨ ⟲φ ⟺ ⟨−n, λk.σ(−k)⟩ ⊨ φ
            return evaluate_path(node.arg, reverse_path(key), ts, memo).reverse()
        if isinstance(node, Prev):
            return go(node.arg).reverse().next().reverse()
        if isinstance(node, Eventually):
            return until(_constant(True), go(node.arg), weak=False)
        if isinstance(node, Always):
            return until(go(node.arg), _constant(False), weak=True)
        if isinstance(node, Once):
            return until(_constant(True), go(node.arg).reverse(), weak=False).reverse()
        if isinstance(node, Historically):
            return until(go(node.arg).reverse(), _constant(False), weak=True).reverse()
        if isinstance(node, (Until, WeakUntil)):
            return until(go(node.left), go(node.right), weak=isinstance(node, WeakUntil))
        if isinstance(node, (Mu, Nu, Var, ForallGuarded)):
            raise UnsupportedFormulaError(f"per-trace evaluation does not support {type(node).__name__} in {phi}")
        raise UnsupportedFormulaError(f"unknown formula node {type(node).__name__}")

    def go(node: Formula) -> BoolSeq:
        if memo is None:
            return compute(node)
        if (node, key) not in memo:
            memo[node, key] = compute(node)
        return memo[node, key]

    return go(phi)


def eval_on_trace(phi: Formula, trace: BiLassoTrace, ts: TransitionSystem) -> bool:
    """⟨i,σ⟩ ⊨ φ"""
    return evaluate_path(phi, trace.path, ts).at(trace.present)
