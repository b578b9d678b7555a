"""
Trace 및 Universe 테스트
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.exceptions import CarrierMismatchError, ParseError, UniverseOverflowError
from src.models.trace import BiLassoTrace, canonical_path, is_periodic, primitive_root
from src.models.universe import TraceUniverse
from src.services.trace_service import (
    alpha_exists,
    alpha_forall,
    bd_closure,
    check_abbrev,
    check_hypothesis,
    fd_closure,
    forall_op,
    gamma_exists,
    gamma_forall,
    model_traces,
    past_projection,
    pi_model,
    rho_exists,
    rho_forall,
    shift_interior,
    state_projection,
)
from src.utils.parsers import parse_trace

loops = st.lists(st.sampled_from("ab"), min_size=1, max_size=3)
middles = st.lists(st.sampled_from("ab"), max_size=2)


@st.composite
def traces(draw):
    return BiLassoTrace.of(
        draw(loops),
        draw(middles),
        draw(loops),
        draw(st.integers(min_value=-3, max_value=3)),
        draw(st.integers(min_value=-6, max_value=6)),
    )


class TestCanonicalForm:
    """bi-lasso 정규형 테스트"""

    def test_primitive_root(self):
        assert primitive_root("abab") == ("a", "b")
        assert primitive_root("aaa") == ("a",)
        assert primitive_root("aba") == ("a", "b", "a")

    def test_periodic_path(self):
        """순수 주기 경로는 o = 0"""
        key = canonical_path("a", "", "a", 3)
        assert key == (("a",), (), ("a",), 0)
        assert is_periodic(key)

    def test_middle_absorbed(self):
        """중간 문자는 루프에 흡수"""
        assert canonical_path("1", "12", "2", 0) == (("1",), (), ("2",), 1)

    def test_state_at(self):
        trace = BiLassoTrace.of("1", "", "2", offset=0, present=0)
        assert trace.window(-2, 2) == ["1", "1", "2", "2"]
        assert trace.present_state == "2"

    @given(
        left=loops,
        middle=middles,
        right=loops,
        offset=st.integers(min_value=-3, max_value=3),
    )
    def test_canonical_keeps_states(self, left, middle, right, offset):
        """정규화는 σ를 바꾸지 않는다"""
        raw = BiLassoTrace(tuple(left), tuple(middle), tuple(right), offset, 0)
        canonical = raw.canonicalize()
        assert canonical.window(-12, 12) == raw.window(-12, 12)
        assert canonical.canonicalize() == canonical

    @given(trace=traces())
    def test_reverse_involution(self, trace):
        """⟲⟲ = id, ⟲σ(k) = σ(−k)"""
        reversed_trace = trace.reversed()
        assert reversed_trace.reversed() == trace
        assert reversed_trace.present == -trace.present
        assert all(reversed_trace.state_at(-n) == trace.state_at(n) for n in range(-10, 11))

    @given(trace=traces(), delta=st.integers(min_value=-4, max_value=4))
    def test_shift(self, trace, delta):
        assert trace.shifted(delta).present_state == trace.state_at(trace.present + delta)


class TestTraceLiteral:
    """트레이스 리터럴 파싱 테스트"""

    def test_parse(self):
        trace = parse_trace("^(1) (2)^ @0 !0")
        assert trace == BiLassoTrace.of("1", "", "2", 0, 0)

    def test_parse_multichar_states(self):
        trace = parse_trace("^(red green yellow) (red green yellow)^ @0 !1")
        assert trace.present_state == "green"

    @given(trace=traces())
    def test_format_parse(self, trace):
        assert parse_trace(trace.format()) == trace

    def test_empty_loop(self):
        with pytest.raises(ParseError):
            parse_trace("^() (2)^ @0 !0")

    def test_not_a_literal(self):
        with pytest.raises(ParseError):
            parse_trace("1 2 3")


class TestUniverse:
    """TraceUniverse / TraceSet 테스트"""

    def test_index_roundtrip(self, two_state_small_universe):
        u = two_state_small_universe
        for index in (0, u.size // 2, u.size - 1):
            assert u.index_of(u.trace_at(index)) == index

    def test_interior_size(self, two_state_small_universe):
        """경로마다 2I+1개"""
        u = two_state_small_universe
        assert len(u.interior()) == len(u.paths) * (2 * u.bounds.present + 1)

    def test_overflow(self, two_state_small_universe):
        u = two_state_small_universe
        far = BiLassoTrace.of("1", "", "1", 0, u.bounds.outer + 1)
        with pytest.raises(UniverseOverflowError):
            u.index_of(far)
        assert far not in u.everything()

    def test_next_prev_inverse(self, two_state_small_universe):
        u = two_state_small_universe
        x = u.sigma({"1"})
        assert x.next().prev() == x
        assert x.prev().next() == x

    def test_next_moves_present(self, two_state_small_universe):
        """⊕X는 다음 시점이 X인 트레이스"""
        u = two_state_small_universe
        trace = BiLassoTrace.of("1", "", "2", 0, -1)
        moved = u.of([trace]).next()
        assert list(moved) == [trace.shifted(-1)]

    def test_reverse_involution(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe)
        assert model.reverse().reverse() == model
        assert model.reverse() != model

    def test_complement(self, two_state_small_universe):
        u = two_state_small_universe
        assert u.empty().complement() == u.interior()
        assert u.sigma({"1"}).complement() == u.sigma({"2"})

    def test_universe_mismatch(self, two_state, two_state_small_universe, default_bounds):
        other = TraceUniverse.for_system(two_state, default_bounds)
        with pytest.raises(CarrierMismatchError):
            _ = two_state_small_universe.empty() | other.empty()

    def test_shift_interior_limit(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe, plus=True)
        with pytest.raises(UniverseOverflowError):
            shift_interior(model, two_state_small_universe.bounds.slack + 1)


class TestAbstractions:
    """α∀ / γ∀ / ρ∀ 및 존재 쌍대 테스트"""

    def test_alpha_forall(self, two_state, two_state_small_universe):
        u = two_state_small_universe
        model = model_traces(two_state, u)
        assert alpha_forall(model, model) == frozenset({"1", "2"})
        assert alpha_forall(u.sigma({"1"}), model) == frozenset({"1"})
        assert alpha_forall(u.empty(), model) == frozenset()

    def test_gamma_forall(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe)
        assert gamma_forall({"1"}, model) == model.project("1")

    def test_rho_forall_closure(self, two_state, two_state_small_universe):
        """ρ∀는 M 안에서 확장적이고 멱등"""
        u = two_state_small_universe
        model = model_traces(two_state, u)
        x = u.sigma({"1"}) | (model & u.sigma({"2"})).next().interior()
        once = rho_forall(x, model)
        assert rho_forall(once, model) == once

    def test_existential_duals(self, two_state, two_state_small_universe):
        u = two_state_small_universe
        model = model_traces(two_state, u)
        assert alpha_exists(u.sigma({"1"}), model) == frozenset({"1"})
        assert gamma_exists({"1"}, model) == gamma_forall({"2"}, model).complement()
        assert rho_exists(u.empty(), model) == rho_forall(u.interior(), model).complement()

    def test_forall_op(self, two_state, two_state_small_universe):
        """∀(M, γ∀(S)) = γ∀(S)"""
        model = model_traces(two_state, two_state_small_universe)
        g = gamma_forall({"2"}, model)
        assert forall_op(model, g) == g

    def test_closures_extensive(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe)
        x = model.project("1")
        assert x <= fd_closure(x)
        assert x <= bd_closure(x)
        assert fd_closure(fd_closure(x)) == fd_closure(x)

    def test_hypothesis_holds(self, two_state, two_state_universe):
        report = check_hypothesis(two_state, two_state_universe)
        assert report.holds
        assert all(size >= 2 for size in report.projection_sizes.values())

    def test_abbrev_items(self, two_state, two_state_universe):
        """일곱 항등식 모두 성립"""
        items = check_abbrev(two_state, two_state_universe)
        assert [i.item for i in items] == [1, 2, 3, 4, 5, 6, 7]
        assert all(i.holds for i in items), [i.detail for i in items if not i.holds]



class TestProjections:
    """σ_S / π_t / X↓s / 과거 투영 테스트"""

    def test_pi_model_contains_model(self, two_state, two_state_small_universe):
        """π_edges ⊇ M, 쓰지 않는 전이의 π와 M은 서로소"""
        u = two_state_small_universe
        model = model_traces(two_state, u)

        assert model <= pi_model(two_state.edges, u)
        assert not (pi_model([("2", "1")], u) & model)

    def test_state_projection(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe)
        below = state_projection(model, "1")

        assert below == gamma_forall({"1"}, model)
        assert below.present_states() == frozenset({"1"})

    def test_past_projection_depth_zero(self, two_state, two_state_small_universe):
        """M^0↓⟨i,σ⟩ = M↓σ_i"""
        model = model_traces(two_state, two_state_small_universe)
        for trace in list(model)[:10]:
            assert past_projection(model, trace, 0) == model.project(trace.present_state)

    def test_past_projection_matches_history(self, two_state, two_state_small_universe):
        """원소 ⟨j,τ⟩는 τ(j−k) = σ(i−k)"""
        model = model_traces(two_state, two_state_small_universe)
        trace = BiLassoTrace.of(["1"], [], ["2"], offset=0, present=1)
        past = past_projection(model, trace, 2)

        assert trace in past
        assert all(t.state_at(t.present - 2) == "1" for t in past)

    def test_past_projection_negative_depth(self, two_state, two_state_small_universe):
        model = model_traces(two_state, two_state_small_universe)
        with pytest.raises(ValueError):
            past_projection(model, next(iter(model)), -1)
