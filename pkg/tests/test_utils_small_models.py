"""
Small Models 테스트
"""

from src.models.formula import Reverse, StateProp, Until, is_fixpoint_free, temporal_depth
from src.services.mucalc_service import is_ltl_det
from src.utils.small_models import enumerate_total_systems, formula_chains, ltl_det_chains, ltl_det_corpus

p = StateProp(name="p")
q = StateProp(name="q")


class TestEnumerateTotalSystems:
    """전체 시스템 열거 테스트"""

    def test_counts(self):
        assert len(list(enumerate_total_systems(1))) == 1
        assert len(list(enumerate_total_systems(2))) == 7

    def test_every_state_has_predecessor(self):
        for ts in enumerate_total_systems(2):
            assert ts.is_total(), ts.name

    def test_labels(self):
        ts = next(enumerate_total_systems(2))
        assert ts.label("p") == frozenset({"1"})
        assert ts.label("q") == frozenset({"2"})


class TestLtlDetChains:
    """LTL_det 사슬 말뭉치 테스트"""

    def test_layer_sizes(self):
        """층마다 6배 (첫 층은 F σ 2개 추가)"""
        assert len(ltl_det_chains(["p", "q"], 1)) == 4 + 26
        assert len(ltl_det_chains(["p", "q"], 2)) == 4 + 26 + 156

    def test_all_in_grammar(self):
        for phi in ltl_det_chains(["p", "q"], 2):
            assert is_ltl_det(phi), str(phi)

    def test_reaches_depth_three(self):
        formulas = ltl_det_chains(["p", "q"], 3)

        assert max(temporal_depth(phi) for phi in formulas) == 3
        assert len(formulas) == len(set(formulas))

    def test_corpus_in_grammar(self):
        for phi in ltl_det_corpus(["p", "q"], 1):
            assert is_ltl_det(phi), str(phi)


class TestFormulaChains:
    """μ-없는 사슬 말뭉치 테스트"""

    def test_layer_sizes(self):
        """단항 5개 × 2 + 이항 2개 × 순서쌍 4개 (중복 제거)"""
        assert len(formula_chains(["p", "q"], 1)) == 2 + 10 + 8

    def test_binary_both_orders(self):
        formulas = set(formula_chains(["p", "q"], 1))

        assert Until(p, q) in formulas and Until(q, p) in formulas
        assert Reverse(p) in formulas

    def test_fixpoint_free(self):
        assert all(is_fixpoint_free(phi) for phi in formula_chains(["p", "q"], 2))
