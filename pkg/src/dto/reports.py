"""
Report DTOs
하위 명령별 결과 보고서 (텍스트 렌더링 + 구조화 JSON 출력)

구조화 출력은 model_dump_json()이고, model_validate_json()으로 되읽으면 같은 판정을 재현한다.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


def _set(items: List[str]) -> str:
    return "{" + ", ".join(items) + "}"


def _family(sets: List[List[str]], limit: int = 16) -> str:
    shown = ", ".join("∅" if not s else _set(s) for s in sets[:limit])
    more = f", … (+{len(sets) - limit})" if len(sets) > limit else ""
    return "{" + shown + more + "}"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


class ReportBase(BaseModel):
    """텍스트/구조화 출력 공통"""

    def to_text(self) -> str:
        return "\n".join(self.lines())

    def lines(self) -> List[str]:
        raise NotImplementedError

    def render(self, fmt: str) -> str:
        return self.model_dump_json(indent=2) if fmt == "structured" else self.to_text()


# ============================================
# analyze
# ============================================


class AbbrevRow(BaseModel):
    item: int = Field(..., description="항목 번호 (1-7)")
    identity: str = Field(..., description="검사한 항등식")
    holds: bool
    detail: str = ""


class ShellRow(BaseModel):
    """--ops로 요청한 shell 하나"""

    ops: List[str]
    name: str
    description: str
    family_size: Optional[int] = Field(None, description="열거 가능한 경우 고정점 패밀리 크기")
    checks: Dict[str, bool] = Field(default_factory=dict, description="연산자별 완전성 재검사")


class AnalyzeReport(ReportBase):
    """analyze 결과"""

    system: str
    states: List[str]
    bounds: str
    totalized: List[str] = Field(default_factory=list, description="자기 루프가 추가된 상태")
    hypothesis_holds: bool
    hypothesis_notes: List[str] = Field(default_factory=list)
    injective: bool
    symmetric: bool
    core_next_states: List[List[str]] = Field(default_factory=list)
    core_next_full: bool
    core_next_trivial: bool
    reversal_stable: List[str] = Field(default_factory=list)
    core_reversal_states: List[List[str]] = Field(default_factory=list)
    core_reversal_full: bool
    abbrev: List[AbbrevRow] = Field(default_factory=list)
    shells: List[ShellRow] = Field(default_factory=list)
    verdicts: List[str] = Field(default_factory=list)

    def lines(self) -> List[str]:
        out = [f"system: {self.system} ({len(self.states)} states)", f"universe: {self.bounds}"]
        if self.totalized:
            out.append(f"totalized: added self-loops on {_set(self.totalized)}")
        else:
            out.append("totalized: already total")
        out.append(f"hypothesis: {'holds' if self.hypothesis_holds else 'FAILS'}")
        out += [f"  note: {n}" for n in self.hypothesis_notes]
        out.append(f"injective: {_yes(self.injective)}")
        out.append(f"symmetric: {_yes(self.symmetric)}")
        out.append(f"core_next states: {_family(self.core_next_states)}")
        out.append(f"reversal-stable states: {_set(self.reversal_stable)}")
        out.append(f"core_reversal states: {_family(self.core_reversal_states)}")
        for row in self.abbrev:
            mark = "ok" if row.holds else "FAILS"
            out.append(f"  [{row.item}] {row.identity}: {mark}" + (f" ({row.detail})" if row.detail else ""))
        for shell in self.shells:
            size = "" if shell.family_size is None else f", {shell.family_size} fixpoints"
            checks = ", ".join(f"{op}={_yes(ok)}" for op, ok in shell.checks.items())
            out.append(f"shell for {{{', '.join(shell.ops)}}}: {shell.description}{size}; complete: {checks}")
        out += self.verdicts
        return out


# ============================================
# check
# ============================================


class FormulaRow(BaseModel):
    formula: str
    trace_count: int = Field(..., description="|⟦φ⟧| (U 안)")
    model_count: int = Field(..., description="|⟦φ⟧ ∩ M|")
    alpha: List[str] = Field(..., description="α∀(⟦φ⟧)")
    state: List[str] = Field(..., description="⟦φ⟧∀ 상태 의미")
    difference: List[str] = Field(default_factory=list)
    branchable: bool
    ltl_det: bool


class CheckReport(ReportBase):
    """check 결과"""

    system: str
    bounds: str
    universe_size: int
    model_size: int
    rows: List[FormulaRow] = Field(default_factory=list)

    def lines(self) -> List[str]:
        out = [f"system: {self.system}", f"universe: {self.bounds} ({self.universe_size} traces, |M| = {self.model_size})"]
        for row in self.rows:
            out.append(f"formula: {row.formula}")
            out.append(f"  trace semantics: {row.trace_count} traces, {row.model_count} in M")
            out.append(f"  α∀ = {_set(row.alpha) if row.alpha else '∅'}")
            out.append(f"  state = {_set(row.state) if row.state else '∅'}")
            verdict = "YES" if row.branchable else f"NO (lost: {_set(row.difference)})"
            out.append(f"  branchable: {verdict}")
            out.append(f"  LTL_det: {_yes(row.ltl_det)}")
        return out

    @property
    def all_branchable(self) -> bool:
        return all(r.branchable for r in self.rows)


# ============================================
# shellcore
# ============================================


class StepRow(BaseModel):
    index: int
    added: List[str] = Field(default_factory=list)
    removed: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class ShellCoreResult(ReportBase):
    """shellcore 결과"""

    lattice: str
    mode: str = Field(..., description="shell | core")
    functions: List[str]
    domain: str
    input_family: List[str]
    result_family: List[str]
    result_name: str
    already_complete: bool
    added: List[str] = Field(default_factory=list)
    removed: List[str] = Field(default_factory=list)
    steps: List[StepRow] = Field(default_factory=list)
    verdicts: Dict[str, bool] = Field(default_factory=dict, description="입력 도메인의 함수별 완전성")

    def lines(self) -> List[str]:
        out = [
            f"lattice: {self.lattice}",
            f"{self.mode} of {self.domain} for {{{', '.join(self.functions)}}}",
            f"input family: {_set(self.input_family)}",
        ]
        out += [f"{self.domain} complete for {fn}: {_yes(ok)}" for fn, ok in self.verdicts.items()]
        for step in self.steps:
            parts = []
            if step.added:
                parts.append(f"added {_set(step.added)}")
            if step.removed:
                parts.append(f"removed {_set(step.removed)}")
            out.append(f"  round {step.index}: " + ("; ".join(parts) or "no change"))
            out += [f"    {note}" for note in step.notes]
        if self.already_complete:
            out.append(f"already complete; result = {self.result_name}")
        else:
            changes = []
            if self.removed:
                changes.append(f"removed: {', '.join(self.removed)}")
            if self.added:
                changes.append(f"added: {', '.join(self.added)}")
            out.append(f"result = {self.result_name} ({'; '.join(changes)})")
        out.append(f"result family: {_set(self.result_family)}")
        return out


# ============================================
# witness
# ============================================


class ClosureRow(BaseModel):
    name: str
    complete: bool
    fixpoints: int
    witness: Optional[List[int]] = None
    lhs: Optional[List[int]] = None
    rhs: Optional[List[int]] = None


class WitnessResult(ReportBase):
    """witness neg|F 결과"""

    operator: str
    window: int
    traces: int
    closures: List[ClosureRow] = Field(default_factory=list)
    join_family: List[List[int]] = Field(default_factory=list)
    forall_family: List[List[int]] = Field(default_factory=list)
    join_equals_forall: bool
    forall_verdict: ClosureRow
    forall_witness: ClosureRow
    boundary_artifact: Optional[List[int]] = None
    notes: List[str] = Field(default_factory=list)

    def _points(self, points: Optional[List[int]]) -> str:
        if points is None:
            return "-"
        if len(points) == self.traces:
            return "window"
        return "∅" if not points else "{" + ", ".join(map(str, points)) + "}"

    def lines(self) -> List[str]:
        op = "¬" if self.operator == "neg" else "F"
        out = [f"witness for {op}: window [-{self.window}, {self.window}] ({self.traces} traces)"]
        for row in self.closures:
            line = f"  {row.name}: complete={_yes(row.complete)} ({row.fixpoints} fixpoints)"
            if not row.complete:
                line += f", X={self._points(row.witness)}"
            out.append(line)
        out.append("join family: {" + ", ".join(self._points(s) for s in self.join_family) + "}")
        out.append(f"join family = ρ∀ family: {_yes(self.join_equals_forall)}")
        if self.boundary_artifact is not None:
            out.append(f"boundary artifact: {self._points(self.boundary_artifact)}")
        w = self.forall_witness
        out.append(
            f"ρ∀ complete for {op}: {_yes(self.forall_verdict.complete)}; "
            f"X={self._points(w.witness)}: ρ∀({op}X)={self._points(w.lhs)} vs ρ∀({op}ρ∀X)={self._points(w.rhs)}"
        )
        out += [f"note: {n}" for n in self.notes]
        return out


# ============================================
# paper-examples
# ============================================


class AcceptanceRow(BaseModel):
    item: int
    title: str
    passed: bool
    expected: str = ""
    observed: str = ""
    detail: str = ""


class PaperExamplesReport(ReportBase):
    """재현 예제 묶음 결과"""

    bounds: str
    window: int
    rows: List[AcceptanceRow] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def lines(self) -> List[str]:
        out = [f"universe: {self.bounds}; witness window {self.window}"]
        for row in self.rows:
            out.append(f"[{'PASS' if row.passed else 'FAIL'}] {row.item:>2}. {row.title}")
            if not row.passed:
                out.append(f"       expected: {row.expected}")
                out.append(f"       observed: {row.observed}")
            if row.detail:
                out.append(f"       {row.detail}")
        failed = [r.item for r in self.rows if not r.passed]
        out.append(f"{len(self.rows) - len(failed)}/{len(self.rows)} passed" + (f"; failed: {failed}" if failed else ""))
        return out
