"""
Mu-Calculus Service
트레이스 집합 의미(주기 접기 엔진), 상태 기반 추상 의미, 분기 가능성, LTL_det 인식
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from src.exceptions import (
    FormulaSyntaxError,
    SoundnessViolationError,
    UnsupportedFormulaError,
    UniverseOverflowError,
    UniverseTooSmallError,
)
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
    format_formula,
    free_vars,
    has_reversal,
    prop_states,
    temporal_depth,
)
from src.models.transition_system import StateSet, TransitionSystem
from src.models.universe import TraceSet, TraceUniverse
from src.services import kripke_service
from src.services.trace_service import alpha_forall, checked_agreeing_states, model_traces

Env = Mapping[str, TraceSet]
StateEnv = Mapping[str, StateSet]


def required_present_range(phi: Formula, bounds) -> int:
    """주기 접기가 정확하기 위한 최소 현재 시점 범위 I"""
    if temporal_depth(phi) == 0:
        return 0
    if has_reversal(phi):
        return bounds.offset + bounds.loop * (temporal_depth(phi) + 1)
    return bounds.offset + bounds.loop


class TraceEngine:
    """
    U 내부 트레이스 위의 집합 의미 엔진

    집합은 내부 위치(경로별 2I+1칸) bool 배열로 다룬다. ⊕는 현재 시점 I에서
    오른쪽 주기 p만큼 접어 I+1−p를 읽고, ⟲는 역전 경로의 −i 위치를 읽는다.
    """

    def __init__(self, ts: TransitionSystem, universe: TraceUniverse):
        self.ts = ts
        self.universe = universe
        u = universe
        present = u.bounds.present
        row = 2 * present + 1
        self.index = u.interior_indices
        presents = u.presents[self.index]
        paths = u.path_of[self.index]

        after = presents + 1
        after = np.where(after > present, after - u.right_period[paths], after)
        self.advance = paths * row + after + present

        target = u.reversed_path_index[paths]
        self.rev = np.where(target >= 0, target * row + (-presents) + present, -1)

        self.present_state = u.present_state[self.index]
        self.next_state = u.state_at_shift(1)[self.index]
        self.model = u.path_mask(ts.edges)[paths]
        self.size = len(self.index)
        # 닫힌 부분식 결과 (env 없이 평가한 것만)
        self.memo: Dict[Formula, np.ndarray] = {}
        self.state_memo: Dict[Tuple[Formula, Optional[StateSet]], StateSet] = {}
        self._model: Optional[TraceSet] = None

    @property
    def model_set(self) -> TraceSet:
        """M ∩ U (한 번만 계산)"""
        if self._model is None:
            self._model = model_traces(self.ts, self.universe)
        return self._model

    # 변환

    def to_set(self, mask: np.ndarray) -> TraceSet:
        full = np.zeros(self.universe.size, dtype=bool)
        full[self.index[mask]] = True
        return TraceSet(self.universe, full)

    def from_set(self, traces: TraceSet) -> np.ndarray:
        return traces.mask[self.index]

    def next(self, x: np.ndarray) -> np.ndarray:
        return x[self.advance]

    def reverse(self, x: np.ndarray) -> np.ndarray:
        if np.any(self.rev < 0):
            missing = self.universe.trace_at(int(self.index[np.flatnonzero(self.rev < 0)[0]]))
            raise UniverseOverflowError(f"⟲ leaves the scope of {self.universe.name} at {missing}", missing)
        return x[self.rev]

    def states(self, states: FrozenSet[str]) -> np.ndarray:
        codes = [self.universe.state_index[s] for s in states if s in self.universe.state_index]
        return np.isin(self.present_state, codes)

    def forall(self, guard: np.ndarray, x: np.ndarray) -> np.ndarray:
        bad = np.unique(self.present_state[guard & ~x])
        return guard & ~np.isin(self.present_state, bad)

    def _fix(self, step: Callable[[np.ndarray], np.ndarray], start: bool) -> np.ndarray:
        current = np.full(self.size, start, dtype=bool)
        rounds = 0
        while True:
            following = step(current)
            rounds += 1
            if np.array_equal(following, current):
                logger.debug(f"fixpoint reached after {rounds} rounds")
                return current
            current = following

    def evaluate(self, phi: Formula, env: Optional[Dict[str, np.ndarray]] = None) -> np.ndarray:
        """
        φ의 내부 위치 bool 배열

        Raises:
            FormulaSyntaxError: 자유 변수가 env에 없음
        """
        env = dict(env or {})

        def compute(node: Formula, scope: Dict[str, np.ndarray]) -> np.ndarray:
            if isinstance(node, StateProp):
                return self.states(prop_states(node, self.ts))
            if isinstance(node, TransProp):
                n = len(self.universe.alphabet)
                table = np.zeros((n, n), dtype=bool)
                for a, b in node.edges:
                    if a in self.universe.state_index and b in self.universe.state_index:
                        table[self.universe.state_index[a], self.universe.state_index[b]] = True
                return table[self.present_state, self.next_state]
            if isinstance(node, Var):
                if node.name not in scope:
                    raise FormulaSyntaxError(f"free variable {node.name} has no value")
                return scope[node.name]
            if isinstance(node, Not):
                return ~go(node.arg, scope)
            if isinstance(node, Or):
                return go(node.left, scope) | go(node.right, scope)
            if isinstance(node, And):
                return go(node.left, scope) & go(node.right, scope)
            if isinstance(node, Implies):
                return ~go(node.left, scope) | go(node.right, scope)
            if isinstance(node, Next):
                return self.next(go(node.arg, scope))
            if isinstance(node, Reverse):
                return self.reverse(go(node.arg, scope))
            if isinstance(node, Prev):
                return self.reverse(self.next(self.reverse(go(node.arg, scope))))
            if isinstance(node, (Mu, Nu)):
                return self._fix(lambda x: go(node.body, {**scope, node.var: x}), start=isinstance(node, Nu))
            if isinstance(node, ForallGuarded):
                guard = self.model if node.guard is None else self.from_set(node.guard)
                return self.forall(guard, go(node.arg, scope))
            if isinstance(node, Eventually):
                arg = go(node.arg, scope)
                return self._fix(lambda x: arg | self.next(x), start=False)
            if isinstance(node, Always):
                arg = go(node.arg, scope)
                return self._fix(lambda x: arg & self.next(x), start=True)
            if isinstance(node, (Until, WeakUntil)):
                hold = go(node.left, scope)
                goal = go(node.right, scope)
                return self._fix(lambda x: goal | (hold & self.next(x)), start=isinstance(node, WeakUntil))
            if isinstance(node, Once):
                arg = self.reverse(go(node.arg, scope))
                return self.reverse(self._fix(lambda x: arg | self.next(x), start=False))
            if isinstance(node, Historically):
                arg = self.reverse(go(node.arg, scope))
                return self.reverse(self._fix(lambda x: arg & self.next(x), start=True))
            raise FormulaSyntaxError(f"unknown formula node {type(node).__name__}")

        def go(node: Formula, scope: Dict[str, np.ndarray]) -> np.ndarray:
            if scope:
                return compute(node, scope)
            if node not in self.memo:
                self.memo[node] = compute(node, scope)
            return self.memo[node]

        return go(phi, env)


def trace_sem(
    phi: Formula,
    ts: TransitionSystem,
    universe: TraceUniverse,
    env: Optional[Env] = None,
    engine: Optional[TraceEngine] = None,
) -> TraceSet:
    """
    ⟦φ⟧ ⊆ U (σ_S, π_t는 M과 교차하지 않는다)

    Args:
        phi: 닫힌 수식 (또는 env가 자유 변수를 덮는 수식)
        ts: 전사 시스템
        universe: 트레이스 우주
        env: 변수 → TraceSet

    Raises:
        UniverseTooSmallError: 현재 시점 범위가 주기 접기에 부족
    """
    needed = required_present_range(phi, universe.bounds)
    if universe.bounds.present < needed:
        logger.error(f"{phi}: present range I={universe.bounds.present} is below the required {needed}")
        raise UniverseTooSmallError(
            f"universe too small for fixture: {phi} needs I ≥ {needed}, got {universe.bounds.describe()}"
        )
    engine = engine or TraceEngine(ts, universe)
    values = {name: engine.from_set(traces) for name, traces in (env or {}).items()}
    missing = free_vars(phi) - set(values)
    if missing:
        raise FormulaSyntaxError(f"free variables {sorted(missing)} have no value")
    return engine.to_set(engine.evaluate(phi, values))


def state_sem(
    phi: Formula,
    ts: TransitionSystem,
    env: Optional[StateEnv] = None,
    agreeing: Optional[StateSet] = None,
    memo: Optional[Dict[Tuple[Formula, Optional[StateSet]], StateSet]] = None,
) -> StateSet:
    """
    상태 기반 추상 의미 ⟦φ⟧∀

    Args:
        phi: 수식
        ts: 전사 시스템
        env: 변수 → 상태 집합
        agreeing: {s : M↓s = (⟲M)↓s} (⟲ 절, 없으면 그래프 기준)
        memo: 닫힌 부분식 결과 캐시 (같은 ts에서만 공유)

    Returns:
        상태 집합
    """
    everything = ts.state_set
    if agreeing is not None:
        stable = agreeing
    else:
        stable = kripke_service.reversal_stable_states(ts) if has_reversal(phi) else everything

    def pre_tilde(states: StateSet) -> StateSet:
        return kripke_service.pre_tilde(ts, states)

    def fix(step: Callable[[StateSet], StateSet], start: StateSet) -> StateSet:
        current = start
        while True:
            following = step(current)
            if following == current:
                return current
            current = following

    def compute(node: Formula, scope: Dict[str, StateSet]) -> StateSet:
        if isinstance(node, StateProp):
            return frozenset(prop_states(node, ts))
        if isinstance(node, TransProp):
            return frozenset(s for s in ts.states if all((s, b) in node.edges for b in ts.successors(s)))
        if isinstance(node, Var):
            if node.name not in scope:
                raise FormulaSyntaxError(f"free variable {node.name} has no value")
            return scope[node.name]
        if isinstance(node, Not):
            return everything - go(node.arg, scope)
        if isinstance(node, Or):
            return go(node.left, scope) | go(node.right, scope)
        if isinstance(node, And):
            return go(node.left, scope) & go(node.right, scope)
        if isinstance(node, Implies):
            return (everything - go(node.left, scope)) | go(node.right, scope)
        if isinstance(node, Next):
            return pre_tilde(go(node.arg, scope))
        if isinstance(node, Reverse):
            return go(node.arg, scope) & stable
        if isinstance(node, Prev):
            return stable & pre_tilde(stable & go(node.arg, scope))
        if isinstance(node, (Mu, Nu)):
            start = everything if isinstance(node, Nu) else frozenset()
            return fix(lambda x: go(node.body, {**scope, node.var: x}), start)
        if isinstance(node, ForallGuarded):
            if node.guard is not None:
                raise UnsupportedFormulaError("state semantics supports only the model guard A")
            return go(node.arg, scope)
        if isinstance(node, Eventually):
            arg = go(node.arg, scope)
            return fix(lambda x: arg | pre_tilde(x), frozenset())
        if isinstance(node, Always):
            arg = go(node.arg, scope)
            return fix(lambda x: arg & pre_tilde(x), everything)
        if isinstance(node, (Until, WeakUntil)):
            hold = go(node.left, scope)
            goal = go(node.right, scope)
            start = everything if isinstance(node, WeakUntil) else frozenset()
            return fix(lambda x: goal | (hold & pre_tilde(x)), start)
        if isinstance(node, Once):
            arg = stable & go(node.arg, scope)
            return stable & fix(lambda x: arg | pre_tilde(x), frozenset())
        if isinstance(node, Historically):
            arg = stable & go(node.arg, scope)
            return stable & fix(lambda x: arg & pre_tilde(x), everything)
        raise FormulaSyntaxError(f"unknown formula node {type(node).__name__}")

    def go(node: Formula, scope: Dict[str, StateSet]) -> StateSet:
        if scope or memo is None:
            return compute(node, scope)
        key = (node, agreeing)
        if key not in memo:
            memo[key] = compute(node, scope)
        return memo[key]

    return go(phi, dict(env or {}))


@dataclass
class BranchabilityVerdict:
    """α∀(⟦φ⟧)와 ⟦φ⟧∀ 비교 결과"""

    branchable: bool
    formula: str
    alpha_side: StateSet
    state_side: StateSet
    difference: StateSet = field(default_factory=frozenset)
    bounds: str = ""
    trace_count: int = 0
    model_count: int = 0


def is_branchable(
    phi: Formula,
    ts: TransitionSystem,
    universe: TraceUniverse,
    engine: Optional[TraceEngine] = None,
) -> BranchabilityVerdict:
    """
    α∀(⟦φ⟧_trace) = ⟦φ⟧∀_state 판정

    Raises:
        SoundnessViolationError: ⟦φ⟧∀ ⊄ α∀(⟦φ⟧) (내부 버그)
    """
    model = engine.model_set if engine is not None else model_traces(ts, universe)
    traces = trace_sem(phi, ts, universe, engine=engine)
    alpha = alpha_forall(traces, model)
    agreeing = checked_agreeing_states(ts, model) if has_reversal(phi) else None
    state = state_sem(phi, ts, agreeing=agreeing, memo=engine.state_memo if engine is not None else None)
    if not state <= alpha:
        logger.error(f"{phi}: state semantics {sorted(state)} exceeds α∀ {sorted(alpha)}")
        raise SoundnessViolationError(
            f"state semantics of {phi} is not below α∀ of its trace semantics: "
            f"{ts.format_states(state)} ⊄ {ts.format_states(alpha)}"
        )
    return BranchabilityVerdict(
        branchable=alpha == state,
        formula=format_formula(phi),
        alpha_side=alpha,
        state_side=state,
        difference=alpha - state,
        bounds=universe.bounds.describe(),
        trace_count=len(traces),
        model_count=len(traces & model),
    )


# ============================================
# LTL_det 문법 인식
# ============================================


def _literal(phi: Formula) -> Optional[Formula]:
    """σ_S 또는 ¬σ_S이면 그 σ_S"""
    if isinstance(phi, StateProp):
        return phi
    if isinstance(phi, Not) and isinstance(phi.arg, StateProp):
        return phi.arg
    return None


def _is_complement(a: Formula, b: Formula) -> bool:
    return isinstance(b, Not) and b.arg == a and isinstance(a, StateProp)


def _guarded(left: Formula, right: Formula) -> Optional[tuple]:
    """
    (σ ∧ φ1) ∨ (¬σ ∧ φ2) 형태면 (φ1, φ2), 좌우 순서 무관
    """
    if not (isinstance(left, And) and isinstance(right, And)):
        return None
    for guard, body in ((left.left, left.right), (left.right, left.left)):
        for other_guard, other_body in ((right.left, right.right), (right.right, right.left)):
            if _is_complement(guard, other_guard) or _is_complement(other_guard, guard):
                return body, other_body
    return None


def is_ltl_det(phi: Formula) -> bool:
    """
    LTL_det 문법 소속 (구문적)

    φ ::= σ_S | ¬σ_S | φ ∧ φ | (σ∧φ) ∨ (¬σ∧φ) | ⊕φ | (σ∧φ) U (¬σ∧φ) | (σ∧φ) W (¬σ∧φ)
    F σ_S와 G φ는 각각 U, W 인스턴스로 받아들인다.
    """
    if _literal(phi) is not None:
        return True
    if isinstance(phi, And):
        return is_ltl_det(phi.left) and is_ltl_det(phi.right)
    if isinstance(phi, Next):
        return is_ltl_det(phi.arg)
    if isinstance(phi, (Or, Until, WeakUntil)):
        parts = _guarded(phi.left, phi.right)
        return parts is not None and all(is_ltl_det(p) for p in parts)
    if isinstance(phi, Eventually):
        # F σ = (¬σ ∧ true) U (σ ∧ true)
        return isinstance(phi.arg, StateProp)
    if isinstance(phi, Always):
        # G φ = φ W false
        return is_ltl_det(phi.arg)
    return False
