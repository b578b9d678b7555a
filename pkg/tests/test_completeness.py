"""
Completeness 테스트
"""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.exceptions import CompletenessError, LatticeError
from src.services.completeness_service import (
    check_fixpoint_transfer,
    complete_core,
    complete_shell,
    exhaustive_core,
    exhaustive_shell,
    function_by_name,
    is_complete,
    l_transform,
    meet_closed_families,
    r_transform,
)
from src.services.lattice_service import make_uco
from src.utils.small_models import random_monotone_fn, small_lattices


@pytest.fixture
def diamond(diamond_file):
    return diamond_file.lattice


@pytest.fixture
def f_diamond(diamond_file):
    return diamond_file.functions["f"]


class TestIsComplete:
    """is_complete 테스트"""

    def test_sign_incomplete_for_add(self, sign_file):
        """Sign은 +에 대해 불완전, 첫 단원소 반례는 ({-1}, {1})"""
        lat = sign_file.lattice
        verdict = is_complete(sign_file.domains["Sign"], sign_file.functions["add"])

        assert not verdict.complete
        assert verdict.method == "singleton"
        assert verdict.witness == (frozenset({"-1"}), frozenset({"1"}))
        assert lat.format(verdict.concrete_side) == "[0]"
        assert verdict.abstract_side == lat.top

    def test_sign_point_counterexample(self, sign_file):
        """x={-1}, y={1}: ρ(x+y) = [0] 이지만 ρ(ρx+ρy) = top"""
        lat = sign_file.lattice
        sign = sign_file.domains["Sign"]
        add = sign_file.functions["add"]
        x, y = lat.parse("{-1}"), lat.parse("{1}")

        assert lat.format(sign(add(x, y))) == "[0]"
        assert sign(add(sign(x), sign(y))) == lat.top

    def test_sign_complete_for_mult(self, sign_file):
        """Sign은 ×에 대해 완전 (adjoint 기준)"""
        verdict = is_complete(sign_file.domains["Sign"], sign_file.functions["mult"])

        assert verdict.complete
        assert verdict.method == "adjoint"

    def test_diamond_exhaustive(self, diamond_file, f_diamond):
        """작은 격자는 전수 검사"""
        verdict = is_complete(diamond_file.domains["Ra"], f_diamond)

        assert verdict.complete
        assert verdict.method == "exhaustive"

    def test_diamond_incomplete(self, diamond, f_diamond):
        """{b, top}: ρ(f(bot)) = b, ρ(f(ρ(bot))) = top"""
        rho = make_uco(["b"], diamond)
        verdict = is_complete(rho, f_diamond)

        assert not verdict.complete
        assert verdict.witness == ("bot",)
        assert verdict.concrete_side == "b"
        assert verdict.abstract_side == "top"


class TestShellCore:
    """complete shell / core 반복 테스트"""

    def test_core_of_sign_plus(self, sign_plus_file):
        """Sign⁺의 sq core는 [0,9]를 제거한 Sign"""
        lat = sign_plus_file.lattice
        run = complete_core(sign_plus_file.domains["SignPlus"], [sign_plus_file.functions["sq"]])

        assert run.result.fixpoints == sign_plus_file.domains["Sign"].fixpoints
        assert [lat.format(y) for y in run.removed] == ["[0,9]"]
        notes = " ".join(n for step in run.steps for n in step.notes)
        assert "[-3,3]" in notes

    def test_shell_of_sign_for_mult(self, sign_file):
        """×에 대해 이미 완전하면 shell = 입력"""
        run = complete_shell(sign_file.domains["Sign"], [sign_file.functions["mult"]])

        assert run.already_complete
        assert run.added == []

    def test_diamond_shell(self, diamond, f_diamond):
        """{b, top}의 shell은 bot을 더한다"""
        run = complete_shell(make_uco(["b"], diamond), [f_diamond])

        assert run.result.fixpoints == frozenset({"bot", "b", "top"})
        assert run.added == ["bot"]

    def test_diamond_core(self, diamond, f_diamond):
        """{b, top}의 core는 {top}"""
        run = complete_core(make_uco(["b"], diamond), [f_diamond])

        assert run.result.fixpoints == frozenset({"top"})
        assert run.removed == ["b"]

    def test_transforms(self, diamond, f_diamond):
        """L_F는 b를 버리고, R_F는 bot을 더한다"""
        rho = make_uco(["b"], diamond)

        assert "b" not in l_transform(rho, [f_diamond])
        assert "bot" in r_transform(rho, [f_diamond]).fixpoints

    def test_meet_closed_families(self, diamond):
        """다이아몬드 위 uco는 7개"""
        families = meet_closed_families(diamond)

        assert len(families) == 7
        assert frozenset({"a", "b", "top"}) not in families

    def test_exhaustive_agrees_on_diamond(self, diamond, f_diamond):
        rho = make_uco(["b"], diamond)
        assert exhaustive_shell(rho, [f_diamond]) == frozenset({"bot", "b", "top"})
        assert exhaustive_core(rho, [f_diamond]) == frozenset({"top"})

    @given(seed=st.integers(min_value=0, max_value=100_000))
    def test_engine_matches_exhaustive(self, seed):
        """무작위 단조 함수와 도메인에서 반복 결과 = 전수 탐색 결과"""
        rng = random.Random(seed)
        lat = rng.choice(small_lattices())
        elements = lat.elements()
        f = random_monotone_fn(lat, rng)
        rho = make_uco(rng.sample(elements, rng.randint(0, len(elements))), lat)

        assert complete_shell(rho, [f]).result.fixpoints == exhaustive_shell(rho, [f])
        expected_core = exhaustive_core(rho, [f])
        if expected_core is None:
            with pytest.raises(CompletenessError):
                complete_core(rho, [f])
        else:
            assert complete_core(rho, [f]).result.fixpoints == expected_core


class TestFixpointTransfer:
    """lfp/gfp 전이 테스트"""

    def test_transfer_holds(self, diamond_file, f_diamond):
        result = check_fixpoint_transfer(diamond_file.domains["Ra"], f_diamond)

        assert result.holds
        assert result.lfp_abstracted == result.lfp_abstract == "a"
        assert result.gfp_abstracted == result.gfp_abstract == "top"

    def test_requires_completeness(self, diamond, f_diamond):
        """불완전한 도메인은 반례와 함께 거부"""
        with pytest.raises(CompletenessError) as exc:
            check_fixpoint_transfer(make_uco(["b"], diamond), f_diamond)
        assert "bot" in str(exc.value)

    @given(seed=st.integers(min_value=0, max_value=100_000))
    def test_transfer_on_complete_shells(self, seed):
        """shell은 완전하므로 전이가 성립"""
        rng = random.Random(seed)
        lat = rng.choice(small_lattices())
        f = random_monotone_fn(lat, rng)
        rho = complete_shell(make_uco(rng.sample(lat.elements(), 2), lat), [f]).result

        assert check_fixpoint_transfer(rho, f).holds


class TestFunctionLookup:
    def test_unknown_function(self, sign_file):
        with pytest.raises(LatticeError):
            function_by_name(sign_file.functions, "div")
