"""
Shell Service 테스트
"""

import pytest

from src.exceptions import CrossValidationError, ShellNotExistError
from src.models.trace_uco import PairAbstraction, RestrictionTraceUco, ShiftGenerator
from src.models.universe import TraceUniverse, UniverseBounds
from src.services import shell_service
from src.services.trace_service import gamma_forall, model_traces

CYCLE_BOUNDS = UniverseBounds(3, 0, 0, 3, slack=2)
ABSTRACT_BOUNDS = UniverseBounds(2, 1, 1, 4, slack=2)


@pytest.fixture(scope="module")
def traffic_universe(traffic_light):
    return TraceUniverse.for_system(traffic_light, CYCLE_BOUNDS)


@pytest.fixture(scope="module")
def abstract_universe(traffic_abstract):
    return TraceUniverse.for_system(traffic_abstract, ABSTRACT_BOUNDS)


@pytest.fixture
def model(two_state, two_state_small_universe):
    return model_traces(two_state, two_state_small_universe)


class TestNextCore:
    """next-time complete core 테스트"""

    def test_two_state_keeps_only_model(self, two_state, two_state_small_universe, model):
        """{∅, {1,2}}: 생성자는 M 하나"""
        core = shell_service.core_next(two_state, two_state_small_universe)

        assert core.generators == [model]
        assert core.labels[0].states == frozenset({"1", "2"})

    def test_injective_keeps_everything(self, traffic_light, traffic_universe):
        """단사 시스템: 비지 않은 부분집합 7개 모두 생성자"""
        core = shell_service.core_next(traffic_light, traffic_universe)
        assert len(core.generators) == 7

    def test_core_complete_for_next(self, two_state, two_state_small_universe):
        core = shell_service.core_next(two_state, two_state_small_universe)
        (result,) = shell_service.check_completeness(core, two_state, two_state_small_universe, ["next"])

        assert result.complete
        assert result.method == "adjoint"

    def test_rho_forall_incomplete_for_next(self, two_state, two_state_small_universe):
        """⊖M↓1에는 2에 있는 트레이스 일부가 들어간다"""
        rho = shell_service.rho_forall_uco(two_state, two_state_small_universe)
        (result,) = shell_service.check_completeness(rho, two_state, two_state_small_universe, ["next"])

        assert not result.complete
        assert result.witness == "M^0↓{1}"

    def test_exhaustive_core(self, two_state, two_state_small_universe, model):
        """전수 탐색도 {∅, M}"""
        best = shell_service.exhaustive_next_core(two_state, two_state_small_universe)
        assert best == [two_state_small_universe.empty(), model]


class TestNextShell:
    """next-time complete shell 테스트"""

    def test_generator_count(self, two_state, two_state_small_universe):
        shell = shell_service.shell_next(two_state, two_state_small_universe, depth=2)
        assert set(shell.labels) <= {ShiftGenerator(False, -k, frozenset([s])) for k in range(3) for s in "12"}

    def test_matches_trace_definition(self, two_state, two_state_small_universe):
        """생성자 폐포 = 트레이스별 정의"""
        u = two_state_small_universe
        shell = shell_service.shell_next(two_state, u, depth=3)
        for x in shell_service.random_sets(u, 6, seed=11):
            assert shell(x) == shell_service.shell_next_apply(x, two_state, u, depth=3)

    def test_complete_with_boundary(self, two_state, two_state_small_universe):
        """가장 깊은 생성자의 ⊖ 이미지는 경계로 센다"""
        shell = shell_service.shell_next(two_state, two_state_small_universe, depth=3)
        (result,) = shell_service.check_completeness(shell, two_state, two_state_small_universe, ["next"])

        assert result.complete
        assert result.boundary >= 1

    def test_alpha_gamma_next(self, two_state, two_state_small_universe, model):
        """α(M↓1)은 z = 0에서만 {1}"""
        u = two_state_small_universe
        sigma = shell_service.alpha_next(model.project("1"), two_state, u, depth=3)

        assert sigma.depth == 3
        assert sigma[0] == frozenset({"1"})
        assert all(not sigma[z] for z in range(-3, 0))
        assert shell_service.gamma_next(sigma, two_state, u) == model.project("1")


class TestBidirectional:
    """양방향 추상화 테스트"""

    def test_next_prev_run(self, two_state, two_state_universe):
        """⊕⊖γ∀({1}): 추상 계산이 구체 계산과 일치, z = 0에 {1}"""
        model = model_traces(two_state, two_state_universe)
        run = shell_service.bidirectional_run(gamma_forall({"1"}, model), [-1, 1], two_state, two_state_universe)
        final = run.steps[-1][1]

        assert [name for name, _ in run.steps] == ["⊖", "⊕"]
        assert run.complete
        assert final[0] == frozenset({"1"})

    def test_alpha_gamma_roundtrip(self, two_state, two_state_small_universe, model):
        u = two_state_small_universe
        sigma = shell_service.alpha_bidirectional(model.project("2"), two_state, u, depth=2)

        assert sigma.depth == 2
        assert shell_service.gamma_bidirectional(sigma, two_state, u) == model.project("2")


class TestReversal:
    """reversal core / shell 테스트"""

    def test_core_two_state_is_constant(self, two_state, two_state_small_universe):
        """역전 일치 상태가 없으면 λX.∅"""
        core = shell_service.core_reversal(two_state, two_state_small_universe)
        assert core.is_constant_empty()

    def test_core_symmetric_keeps_everything(self, traffic_abstract, abstract_universe):
        core = shell_service.core_reversal(traffic_abstract, abstract_universe)
        assert len(core.generators) == 3

    def test_shell_complete(self, two_state, two_state_small_universe):
        shell = shell_service.shell_reversal(two_state, two_state_small_universe)
        (result,) = shell_service.check_completeness(
            shell, two_state, two_state_small_universe, ["reverse"], samples=20
        )

        assert len(shell.generators) == 4
        assert result.complete

    def test_pair_abstraction(self, two_state, two_state_small_universe, model):
        """α⟲(M) = ⟨{1,2}, ∅⟩"""
        u = two_state_small_universe
        pair = shell_service.alpha_pair(model, two_state, u)

        assert pair == PairAbstraction(frozenset({"1", "2"}), frozenset())
        assert shell_service.gamma_pair(pair, two_state, u) == model


class TestConstantAndRestriction:
    """상수 core와 제한 shell 테스트"""

    def test_constant_cores(self, two_state_small_universe):
        u = two_state_small_universe
        for core in (shell_service.core_union(u), shell_service.core_negation(u), shell_service.core_all(u)):
            assert core.is_constant_empty()
            assert core(u.interior()) == u.empty()

    def test_union_shell(self, two_state, two_state_small_universe, model):
        shell = shell_service.shell_union(two_state, two_state_small_universe)
        assert shell(two_state_small_universe.interior()) == model

    def test_shell_all_carrier(self, two_state, two_state_small_universe, model):
        """M* = M ∪ ⟲M"""
        shell = shell_service.shell_all(two_state, two_state_small_universe)
        assert shell.carrier == model | model.reverse()

    def test_restriction_complete(self, two_state, two_state_universe):
        shell = shell_service.shell_all(two_state, two_state_universe)
        results = shell_service.check_completeness(
            shell, two_state, two_state_universe, ["union", "negation", "reverse", "next"], samples=20
        )
        assert all(r.complete for r in results), [(r.op, r.witness) for r in results if not r.complete]

    def test_language_check(self, two_state, two_state_small_universe):
        """∪, ¬, ⟲ 수식 함수 전체에 대해 완전"""
        shell = shell_service.shell_all(two_state, two_state_small_universe)
        check = shell_service.language_shell_check(
            shell, two_state, two_state_small_universe, ["union", "negation", "reverse"], depth=2, samples=5
        )

        assert check.complete
        assert check.formulas == len(shell_service.language_formulas(["union", "negation", "reverse"], 2))


class TestShellForOps:
    """연산자 집합 → shell 선택 테스트"""

    @pytest.mark.parametrize(
        "ops, name",
        [
            ([], "ρ∀"),
            (["next"], "shell⊕"),
            (["reverse"], "shell⟲"),
            (["next", "reverse"], "shell⊕⟲"),
            (["union"], "shell_no⟲"),
            (["union", "negation", "next"], "shell_no⟲"),
            (["union", "reverse"], "shell_all"),
        ],
    )
    def test_selection(self, two_state, two_state_small_universe, ops, name):
        shell = shell_service.shell_for_ops(two_state, two_state_small_universe, ops, depth=2)
        assert shell.name == name

    def test_union_negation_reverse_verified(self, two_state, two_state_small_universe):
        """∪, ¬, ⟲ 요청은 shell_all이고 재검사를 모두 통과"""
        shell, checks = shell_service.verified_shell(
            two_state, two_state_small_universe, ["union", "negation", "reverse"]
        )

        assert shell.name == "shell_all"
        assert [c.op for c in checks] == ["union", "negation", "reverse"]
        assert all(c.complete for c in checks)

    def test_verify_shell_rejects_incomplete(self, two_state, two_state_small_universe):
        """ρ∀는 ⊕에 대해 완전하지 않다"""
        rho = shell_service.rho_forall_uco(two_state, two_state_small_universe)
        with pytest.raises(CrossValidationError):
            shell_service.verify_shell(rho, two_state, two_state_small_universe, ["next"])

    def test_union_gives_restriction(self, two_state, two_state_small_universe):
        shell = shell_service.shell_for_ops(two_state, two_state_small_universe, ["union", "eventually"])
        assert isinstance(shell, RestrictionTraceUco)

    @pytest.mark.parametrize("ops", [["negation"], ["eventually", "next"]])
    def test_no_shell_without_union(self, two_state, two_state_small_universe, ops):
        with pytest.raises(ShellNotExistError):
            shell_service.shell_for_ops(two_state, two_state_small_universe, ops)

    def test_unknown_operator(self, two_state, two_state_small_universe):
        with pytest.raises(ValueError):
            shell_service.shell_for_ops(two_state, two_state_small_universe, ["bogus"])

    def test_eventually_not_rechecked(self, two_state, two_state_small_universe):
        shell = shell_service.shell_union(two_state, two_state_small_universe)
        with pytest.raises(ShellNotExistError):
            shell_service.check_completeness(shell, two_state, two_state_small_universe, ["eventually"])
