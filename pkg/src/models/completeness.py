"""
Completeness Results
완전성 판정 및 shell/core 반복 결과 모델
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from src.models.lattice import Element, Uco


@dataclass
class CompletenessVerdict:
    """ρ ∘ f = ρ ∘ f ∘ ρ 판정 결과"""

    complete: bool
    function: str
    witness: Optional[Tuple[Element, ...]] = None  # 실패 시 인자 튜플
    concrete_side: Optional[Element] = None  # ρ(f(x))
    abstract_side: Optional[Element] = None  # ρ(f(ρ(x)))
    method: str = "exhaustive"  # exhaustive | adjoint


@dataclass
class IterationStep:
    """shell/core 반복 한 라운드"""

    index: int
    added: List[Element] = field(default_factory=list)
    removed: List[Element] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


@dataclass
class ShellCoreReport:
    """complete shell/core 계산 결과"""

    mode: str  # shell | core
    functions: List[str]
    input: Uco
    result: Uco
    steps: List[IterationStep] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def already_complete(self) -> bool:
        return self.result.fixpoints == self.input.fixpoints

    @property
    def removed(self) -> List[Element]:
        return [y for step in self.steps for y in step.removed]

    @property
    def added(self) -> List[Element]:
        return [y for step in self.steps for y in step.added]


@dataclass
class FixpointTransfer:
    """lfp/gfp 완전성 전이 검사 결과"""

    holds: bool
    lfp_abstracted: Element  # ρ(lfp(f))
    lfp_abstract: Element  # lfp(ρ ∘ f)
    gfp_abstracted: Element  # ρ(gfp(f))
    gfp_abstract: Element  # gfp(ρ ∘ f)
    differing: List[str] = field(default_factory=list)
