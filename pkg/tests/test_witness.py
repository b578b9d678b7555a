"""
Witness Service 테스트
"""

import pytest

from src.exceptions import ConfigurationError
from src.services.witness_service import MAX_WINDOW, Window, witness_F_shell, witness_neg_shell


@pytest.fixture(scope="module")
def neg_report():
    return witness_neg_shell(8)


@pytest.fixture(scope="module")
def f_report():
    return witness_F_shell(8)


class TestWindow:
    """Window 마스크 연산 테스트"""

    def test_points(self):
        win = Window(2)
        assert win.bits == 5
        assert win.points(win.mask_of([-2, 0, 2])) == [-2, 0, 2]
        assert win.points(win.interval(1, 2)) == [1, 2]

    def test_eventually(self):
        """F(X) = [-W, max X]"""
        win = Window(3)
        xs = win.sets[[0, win.mask_of([-1]), win.mask_of([-3, 2])]]
        assert [win.points(x) for x in win.eventually(xs)] == [[], [-3, -2, -1], [-3, -2, -1, 0, 1, 2]]

    def test_rho_forall_fixpoints(self):
        """ρ∀의 고정점은 ∅과 창"""
        win = Window(2)
        assert [win.points(x) for x in win.fixpoints(win.rho_forall())] == [[], [-2, -1, 0, 1, 2]]

    @pytest.mark.parametrize("window", [0, MAX_WINDOW + 1])
    def test_window_range(self, window):
        with pytest.raises(ConfigurationError):
            Window(window)


class TestNegWitness:
    """¬ shell 비존재 증거 테스트 (W = 8)"""

    def test_trace_count(self, neg_report):
        assert neg_report.traces == 17
        assert [c.name for c in neg_report.closures] == ["ρ_ev", "ρ_od"]

    def test_parity_closures_fail_on_window(self, neg_report):
        """X ∩ 짝수 = ∅인 비지 않은 X에서 깨진다"""
        ev, od = neg_report.closures

        assert not ev.complete and ev.witness == [-7]
        assert not od.complete and od.witness == [-8]
        assert ev.lhs == list(range(-8, 9, 2))
        assert ev.rhs == list(range(-8, 9))

    def test_join_is_forall_family(self, neg_report):
        assert neg_report.join_family == [[], list(range(-8, 9))]
        assert neg_report.join_equals_forall

    def test_forall_incomplete(self, neg_report):
        """X = 창 ∖ {0}: ρ∀(¬X) = ∅, ρ∀(¬ρ∀X) = 창"""
        witness = neg_report.forall_witness

        assert not neg_report.forall_verdict.complete
        assert not witness.complete
        assert witness.lhs == []
        assert witness.rhs == list(range(-8, 9))

    def test_notes_explain_failures(self, neg_report):
        assert len(neg_report.notes) == 2
        assert "ρ_ev" in neg_report.notes[0]

    @pytest.mark.parametrize("window", [2, 3, 5])
    def test_first_witness_by_parity(self, window):
        """ρ_ev는 첫 홀수 점, ρ_od는 첫 짝수 점에서 깨진다"""
        report = witness_neg_shell(window)
        ev, od = report.closures
        first_odd = -window if window % 2 else -window + 1
        first_even = -window + 1 if window % 2 else -window

        assert ev.witness == [first_odd]
        assert od.witness == [first_even]
        assert report.join_equals_forall


class TestFWitness:
    """F shell 비존재 증거 테스트 (W = 8)"""

    def test_every_rho_k_complete(self, f_report):
        assert len(f_report.closures) == 17
        assert f_report.all_complete

    def test_join_keeps_boundary(self, f_report):
        """창 위 합 패밀리에는 {W}가 남는다"""
        assert f_report.join_family == [[], [8], list(range(-8, 9))]
        assert not f_report.join_equals_forall
        assert f_report.boundary_artifact == [8]

    def test_forall_incomplete(self, f_report):
        """X = [1, W]: ρ∀(F X) = 창, ρ∀(F ρ∀X) = ∅"""
        witness = f_report.forall_witness

        assert not f_report.forall_verdict.complete
        assert witness.lhs == list(range(-8, 9))
        assert witness.rhs == []

    @pytest.mark.parametrize("window", [1, 4])
    def test_boundary_is_window_edge(self, window):
        report = witness_F_shell(window)
        assert report.all_complete
        assert report.boundary_artifact == [window]

    def test_default_window(self):
        assert witness_F_shell().window == 8
