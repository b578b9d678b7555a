"""
Witness Service
단일 상태 시스템의 창 [-W, W] 위에서 ¬ / F complete shell 비존재 증거 보고서

트레이스 ⟨i, λn.•⟩는 정수 i로, 트레이스 집합은 비트 (i + W)의 정수 마스크로 다룬다.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import ConfigurationError
from src.models.transition_system import TransitionSystem
from src.models.universe import TraceUniverse, UniverseBounds
from src.services.trace_service import alpha_forall, model_traces

MAX_WINDOW = 10  # 2^(2W+1) 집합 전수


def single_state_system() -> TransitionSystem:
    return TransitionSystem.build(["•"], [("•", "•")], name="single")


def window_universe(window: int) -> TraceUniverse:
    """상수 경로 하나, 현재 시점 [-W, W]"""
    return TraceUniverse.for_system(single_state_system(), UniverseBounds(1, 0, 0, window, slack=1))


class Window:
    """[-W, W]의 부분집합 (정수 마스크) 전체 위 벡터 연산"""

    def __init__(self, window: int):
        if not 1 <= window <= MAX_WINDOW:
            raise ConfigurationError(f"witness window must lie in [1, {MAX_WINDOW}], got {window}")
        self.window = window
        self.bits = 2 * window + 1
        self.full = (1 << self.bits) - 1
        self.sets = np.arange(1 << self.bits, dtype=np.int64)
        positions = np.arange(-window, window + 1)
        self.even = self.mask_of(positions[positions % 2 == 0])
        self.odd = self.mask_of(positions[positions % 2 != 0])

    def mask_of(self, points) -> int:
        mask = 0
        for z in points:
            mask |= 1 << (int(z) + self.window)
        return mask

    def points(self, mask: int) -> List[int]:
        return [k - self.window for k in range(self.bits) if int(mask) >> k & 1]

    def interval(self, lo: int, hi: int) -> int:
        return self.mask_of(range(lo, hi + 1))

    def negate(self, xs: np.ndarray) -> np.ndarray:
        return self.full ^ xs

    def eventually(self, xs: np.ndarray) -> np.ndarray:
        """F(X) = {i : ∃j ≥ i. j ∈ X} = [-W, max X]"""
        smeared = xs.copy()
        shift = 1
        while shift < self.bits:
            smeared |= smeared >> shift
            shift *= 2
        return smeared

    def restrict_closure(self, keep: int) -> Callable[[np.ndarray], np.ndarray]:
        """X = 창이면 창, 아니면 X ∩ keep"""
        return lambda xs: np.where(xs == self.full, self.full, xs & keep)

    def rho_forall(self) -> Callable[[np.ndarray], np.ndarray]:
        return self.restrict_closure(0)

    def fixpoints(self, rho: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        return self.sets[rho(self.sets) == self.sets]


@dataclass
class ClosureVerdict:
    """창 위 닫힘 연산자 하나의 완전성 판정"""

    name: str
    complete: bool
    fixpoints: int
    witness: Optional[List[int]] = None
    lhs: Optional[List[int]] = None
    rhs: Optional[List[int]] = None


@dataclass
class WitnessReport:
    """비존재 증거 보고서"""

    operator: str
    window: int
    traces: int
    closures: List[ClosureVerdict] = field(default_factory=list)
    join_family: List[List[int]] = field(default_factory=list)
    forall_family: List[List[int]] = field(default_factory=list)
    join_equals_forall: bool = False
    forall_verdict: Optional[ClosureVerdict] = None
    forall_witness: Optional[ClosureVerdict] = None
    boundary_artifact: Optional[List[int]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def all_complete(self) -> bool:
        return all(c.complete for c in self.closures)


def check_window_completeness(
    win: Window,
    name: str,
    rho: Callable[[np.ndarray], np.ndarray],
    op: Callable[[np.ndarray], np.ndarray],
) -> ClosureVerdict:
    """모든 X ⊆ 창에 대해 ρ(op X) = ρ(op ρX), 실패 시 가장 작은 정수 마스크 X를 증거로"""
    lhs = rho(op(win.sets))
    rhs = rho(op(rho(win.sets)))
    bad = np.flatnonzero(lhs != rhs)
    verdict = ClosureVerdict(name=name, complete=len(bad) == 0, fixpoints=len(win.fixpoints(rho)))
    if len(bad):
        x = int(bad[0])
        verdict.witness = win.points(x)
        verdict.lhs = win.points(lhs[x])
        verdict.rhs = win.points(rhs[x])
    return verdict


def forall_at(win: Window, name: str, op: Callable[[np.ndarray], np.ndarray], x: int) -> ClosureVerdict:
    """ρ∀의 지정 집합 X에서의 비교"""
    rho = win.rho_forall()
    xs = np.array([x], dtype=np.int64)
    lhs, rhs = int(rho(op(xs))[0]), int(rho(op(rho(xs)))[0])
    return ClosureVerdict(name, lhs == rhs, len(win.fixpoints(rho)), win.points(x), win.points(lhs), win.points(rhs))


def _join_family(win: Window, closures: List[Callable[[np.ndarray], np.ndarray]]) -> np.ndarray:
    """⊇-uco 합(join)의 고정점 = 각 고정점 패밀리의 교집합"""
    common = np.ones(len(win.sets), dtype=bool)
    for rho in closures:
        common &= rho(win.sets) == win.sets
    return win.sets[common]


def _base_report(win: Window, operator: str) -> WitnessReport:
    universe = window_universe(win.window)
    ts = single_state_system()
    model = model_traces(ts, universe)
    traces = len(universe.interior() & model)
    if traces != win.bits:
        raise ConfigurationError(f"windowed universe has {traces} traces, expected {win.bits}")
    # ρ∀의 고정점은 ∅과 창뿐이다
    if alpha_forall(universe.interior() - universe.of([universe.trace_at(int(universe.interior_indices[0]))]), model):
        raise ConfigurationError("windowed universe does not reproduce the two-point ρ∀ family")
    report = WitnessReport(operator=operator, window=win.window, traces=traces)
    report.forall_family = [win.points(x) for x in win.fixpoints(win.rho_forall())]
    return report


def witness_neg_shell(window: Optional[int] = None) -> WitnessReport:
    """
    ¬에 대한 ρ∀ complete shell 비존재 증거

    ρ_ev, ρ_od의 ¬ 완전성, 두 닫힘의 합 패밀리 = ρ∀ 패밀리, ρ∀의 ¬ 불완전성을 계산한다.
    """
    win = Window(AnalysisDefaults.WITNESS_WINDOW if window is None else window)
    report = _base_report(win, "neg")
    closures = {"ρ_ev": win.restrict_closure(win.even), "ρ_od": win.restrict_closure(win.odd)}
    for name, rho in closures.items():
        report.closures.append(check_window_completeness(win, name, rho, win.negate))
    join = _join_family(win, list(closures.values()))
    report.join_family = [win.points(x) for x in join]
    report.join_equals_forall = report.join_family == report.forall_family

    report.forall_verdict = check_window_completeness(win, "ρ∀", win.rho_forall(), win.negate)
    report.forall_witness = forall_at(win, "ρ∀", win.negate, win.full ^ win.mask_of([0]))

    for verdict in report.closures:
        if not verdict.complete:
            # X ∩ 짝수(홀수) = ∅ 이지만 X ≠ ∅ 인 집합에서 ¬ρ(X)가 창 전체가 된다
            report.notes.append(
                f"{verdict.name} is incomplete for ¬ on the window: X={verdict.witness} gives "
                f"ρ(¬X)={_short(win, verdict.lhs)} but ρ(¬ρX)={_short(win, verdict.rhs)}"
            )
    logger.info(
        f"neg witness W={win.window}: "
        + ", ".join(f"{c.name} complete={c.complete}" for c in report.closures)
        + f", join=ρ∀ family: {report.join_equals_forall}"
    )
    return report


def witness_F_shell(window: Optional[int] = None) -> WitnessReport:
    """
    F에 대한 ρ∀ complete shell 비존재 증거

    ρ_k (k ∈ [-W, W]) 각각의 F 완전성, 합 패밀리, ρ∀의 F 불완전성을 계산한다.
    창 위에서는 합 패밀리에 경계 집합 {W}가 남는다.
    """
    win = Window(AnalysisDefaults.WITNESS_WINDOW if window is None else window)
    report = _base_report(win, "F")
    closures = []
    for k in range(-win.window, win.window + 1):
        rho = win.restrict_closure(win.interval(k, win.window))
        closures.append(rho)
        report.closures.append(check_window_completeness(win, f"ρ_{k}", rho, win.eventually))
    join = _join_family(win, closures)
    report.join_family = [win.points(x) for x in join]
    report.join_equals_forall = report.join_family == report.forall_family
    if not report.join_equals_forall:
        extra = [s for s in report.join_family if s not in report.forall_family]
        report.boundary_artifact = extra[0] if len(extra) == 1 else None
        report.notes.append(f"join family keeps the boundary set(s) {extra}; on ℤ the family collapses to ρ∀")

    report.forall_verdict = check_window_completeness(win, "ρ∀", win.rho_forall(), win.eventually)
    report.forall_witness = forall_at(win, "ρ∀", win.eventually, win.interval(1, win.window))
    logger.info(
        f"F witness W={win.window}: {sum(c.complete for c in report.closures)}/{len(report.closures)} ρ_k complete, "
        f"boundary={report.boundary_artifact}"
    )
    return report


def _short(win: Window, points: Optional[List[int]]) -> str:
    if points is None:
        return "-"
    return "window" if len(points) == win.bits else str(points)
