"""
Acceptance Service 테스트
"""

import pytest

from src.exceptions import UniverseTooSmallError
from src.models.universe import UniverseBounds
from src.services import acceptance_service
from src.services.acceptance_service import AcceptanceOptions, require_bounds, run_acceptance


@pytest.fixture(scope="module")
def opts(default_bounds):
    return AcceptanceOptions(bounds=default_bounds, window=4, samples=20, corpus_depth=2, functions_per_lattice=2)


class TestFixedExamples:
    """고정 예제 항목 테스트"""

    def test_first_example(self, opts):
        item = acceptance_service.example_first(opts)

        assert item.item == 1
        assert item.passed, item.observed

    def test_sign_plus_core(self, opts):
        item = acceptance_service.sign_plus_core(opts)
        assert item.passed, item.observed

    def test_next_prev(self, opts):
        item = acceptance_service.next_prev_example(opts)
        assert item.passed, item.observed

    def test_witness_reports(self, opts):
        """창 W = 4에서 패리티 반례와 경계 산물"""
        item = acceptance_service.witness_reports(opts)

        assert item.passed, item.observed
        assert "[-3]/[-4]" in item.expected


class TestCorpusChecks:
    """말뭉치 속성 검사 항목 테스트 (축소 설정)"""

    def test_ltl_det_single_state(self, opts):
        """상태 1개 시스템들만"""
        item = acceptance_service.ltl_det_branchable(opts, max_states=1)
        assert item.passed, item.observed

    def test_ltl_det_two_states(self, opts):
        """상태 2개 이하의 전체 시스템 (선행자 없는 상태가 있는 시스템은 제외)"""
        item = acceptance_service.ltl_det_branchable(opts, max_states=2)

        assert item.passed, item.observed
        assert "exhaustive" in item.detail

    def test_engine_agreement_with_reversal(self, opts):
        """⟲를 포함한 깊이 ≤ 2 수식도 트레이스별 평가와 일치"""
        item = acceptance_service.engine_agreement(opts)

        assert item.item == 11
        assert item.passed, item.observed

    def test_shell_core_minimality(self, opts):
        item = acceptance_service.shell_core_minimality(opts)

        assert item.passed, item.observed
        assert item.detail.endswith("triples")


class TestRunAcceptance:
    """run_acceptance 테스트"""

    def test_only(self, opts):
        items = run_acceptance(opts, only=[2, 9])
        assert [i.item for i in items] == [2, 9]

    def test_require_bounds(self):
        """G p ∨ F G q는 I ≥ O + L 필요"""
        with pytest.raises(UniverseTooSmallError):
            require_bounds(UniverseBounds(3, 2, 2, 4, slack=4))

    def test_require_bounds_reversal(self):
        """⊕⟲⊕⟲ 중첩은 I ≥ O + 3L 필요"""
        require_bounds(UniverseBounds(3, 2, 2, 11, slack=4))
        with pytest.raises(UniverseTooSmallError):
            require_bounds(UniverseBounds(3, 2, 2, 10, slack=4))

    def test_items_numbered(self):
        assert len(acceptance_service.ITEMS) == 12
