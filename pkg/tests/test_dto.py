"""
DTO 테스트
"""

import pytest
from pydantic import ValidationError

from src.dto.reports import (
    AbbrevRow,
    AcceptanceRow,
    AnalyzeReport,
    CheckReport,
    FormulaRow,
    PaperExamplesReport,
    ShellCoreResult,
    ShellRow,
    StepRow,
)
from src.dto.run_config import RunConfig


def make_check_report() -> CheckReport:
    return CheckReport(
        system="two_state",
        bounds="L=3,B=2,O=2,I=11,Δ=4",
        universe_size=40,
        model_size=12,
        rows=[
            FormulaRow(
                formula="G p | F G q",
                trace_count=20,
                model_count=12,
                alpha=["1", "2"],
                state=["2"],
                difference=["1"],
                branchable=False,
                ltl_det=False,
            ),
            FormulaRow(
                formula="F q",
                trace_count=18,
                model_count=8,
                alpha=["2"],
                state=["2"],
                branchable=True,
                ltl_det=True,
            ),
        ],
    )


class TestRunConfig:
    """RunConfig 검증 테스트"""

    def test_defaults(self):
        """conftest 환경 값: L=3, B=2, O=2, I=11, Δ=4"""
        config = RunConfig(subcommand="check", inputs=["a.ts"])

        assert config.bounds == (3, 2, 2, 11)
        assert config.slack == 4
        assert config.window == 8
        assert config.format == "text"

    def test_past_depth_default(self):
        """K = I + O + L"""
        assert RunConfig(subcommand="check").past_depth() == 16
        assert RunConfig(subcommand="check", depth=5).past_depth() == 5

    def test_universe_bounds(self):
        bounds = RunConfig(subcommand="analyze", bounds=(1, 2, 1, 8), slack=2).universe_bounds()

        assert (bounds.loop, bounds.middle, bounds.offset, bounds.present) == (1, 2, 1, 8)
        assert bounds.slack == 2

    @pytest.mark.parametrize(
        "values",
        [
            {"bounds": (0, 2, 2, 11)},
            {"bounds": (3, -1, 2, 11)},
            {"slack": 0},
            {"window": 0},
            {"window": 11},
            {"cap": 0},
            {"format": "yaml"},
        ],
    )
    def test_invalid(self, values):
        with pytest.raises(ValidationError):
            RunConfig(subcommand="check", **values)

    def test_unknown_subcommand(self):
        with pytest.raises(ValidationError):
            RunConfig(subcommand="serve")


class TestCheckReport:
    """CheckReport 렌더링 테스트"""

    def test_text(self):
        lines = make_check_report().lines()

        assert lines[0] == "system: two_state"
        assert "  α∀ = {1, 2}" in lines
        assert "  branchable: NO (lost: {1})" in lines
        assert "  branchable: YES" in lines
        assert "  LTL_det: yes" in lines

    def test_all_branchable(self):
        report = make_check_report()
        assert not report.all_branchable

        report.rows = report.rows[1:]
        assert report.all_branchable

    def test_structured_roundtrip(self):
        """구조화 출력을 되읽으면 같은 판정"""
        report = make_check_report()
        restored = CheckReport.model_validate_json(report.render("structured"))

        assert restored == report
        assert restored.rows[0].difference == ["1"]


class TestShellCoreResult:
    """ShellCoreResult 렌더링 테스트"""

    def test_core_lines(self):
        result = ShellCoreResult(
            lattice="Int",
            mode="core",
            functions=["sq"],
            domain="SignPlus",
            input_family=["[-10,0]", "[0]", "[0,9]", "[0,10]", "top"],
            result_family=["[-10,0]", "[0]", "[0,10]", "top"],
            result_name="Sign",
            already_complete=False,
            removed=["[0,9]"],
            steps=[
                StepRow(index=1, removed=["[0,9]"], notes=["max preimage [-3,3]"]),
                StepRow(index=2),
            ],
            verdicts={"sq": False},
        )
        lines = result.lines()

        assert lines[1] == "core of SignPlus for {sq}"
        assert "SignPlus complete for sq: no" in lines
        assert "  round 1: removed {[0,9]}" in lines
        assert "    max preimage [-3,3]" in lines
        assert "  round 2: no change" in lines
        assert "result = Sign (removed: [0,9])" in lines

    def test_already_complete(self):
        result = ShellCoreResult(
            lattice="Int",
            mode="shell",
            functions=["mult"],
            domain="Sign",
            input_family=[],
            result_family=[],
            result_name="Sign",
            already_complete=True,
        )
        assert "already complete; result = Sign" in result.lines()


class TestAnalyzeReport:
    """AnalyzeReport 렌더링 테스트"""

    def test_lines(self):
        report = AnalyzeReport(
            system="traffic_light",
            states=["red", "green", "yellow"],
            bounds="L=3,B=0,O=0,I=3,Δ=2",
            hypothesis_holds=True,
            injective=True,
            symmetric=False,
            core_next_states=[[], ["red"]],
            core_next_full=False,
            core_next_trivial=True,
            core_reversal_full=False,
            abbrev=[AbbrevRow(item=1, identity="α(⊕X) = pre(α X)", holds=False, detail="X = M↓red")],
            shells=[ShellRow(ops=["next"], name="shell⊕", description="shell⊕ (6 generators)", checks={"next": True})],
            verdicts=["injective: yes ⇒ ρ∀ complete for next-time"],
        )
        lines = report.lines()

        assert lines[0] == "system: traffic_light (3 states)"
        assert "totalized: already total" in lines
        assert "core_next states: {∅, {red}}" in lines
        assert "  [1] α(⊕X) = pre(α X): FAILS (X = M↓red)" in lines
        assert "shell for {next}: shell⊕ (6 generators); complete: next=yes" in lines
        assert lines[-1].startswith("injective: yes")

    def test_long_family_is_truncated(self):
        report = AnalyzeReport(
            system="big",
            states=[],
            bounds="",
            hypothesis_holds=True,
            injective=True,
            symmetric=True,
            core_next_states=[[str(i)] for i in range(20)],
            core_next_full=True,
            core_next_trivial=False,
            core_reversal_full=True,
        )
        line = next(l for l in report.lines() if l.startswith("core_next states"))
        assert line.endswith(", … (+4)}")


class TestPaperExamplesReport:
    """PaperExamplesReport 렌더링 테스트"""

    def test_failures_listed(self):
        report = PaperExamplesReport(
            bounds="L=3,B=2,O=2,I=11,Δ=4",
            window=8,
            rows=[
                AcceptanceRow(item=1, title="first", passed=True),
                AcceptanceRow(item=2, title="second", passed=False, expected="a", observed="b"),
            ],
        )
        lines = report.lines()

        assert not report.passed
        assert "[FAIL]  2. second" in lines
        assert "       expected: a" in lines
        assert lines[-1] == "1/2 passed; failed: [2]"

    def test_all_passed(self):
        report = PaperExamplesReport(bounds="", window=8, rows=[AcceptanceRow(item=1, title="only", passed=True)])

        assert report.passed
        assert report.lines()[-1] == "1/1 passed"
