"""
Kripke Service 테스트
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.exceptions import ParseError, SubsetCapError
from src.models.transition_system import TransitionSystem
from src.services import kripke_service
from src.utils.small_models import all_small_systems, enumerate_total_systems

SMALL_SYSTEMS = list(all_small_systems(3))


class TestTransitionSystem:
    """TransitionSystem 모델 테스트"""

    def test_build(self, two_state):
        assert two_state.states == ("1", "2")
        assert two_state.has_edge("1", "2")
        assert not two_state.has_edge("2", "1")
        assert two_state.label("p") == frozenset({"1"})
        assert two_state.label("r") is None

    def test_unknown_state_in_edge(self):
        with pytest.raises(ParseError):
            TransitionSystem.build(["a"], [("a", "b")])

    def test_unknown_state_in_label(self):
        with pytest.raises(ParseError):
            TransitionSystem.build(["a"], [("a", "a")], {"p": ["z"]})

    def test_format_states(self, traffic_light):
        """선언 순서로 정렬"""
        assert traffic_light.sort_states({"yellow", "red"}) == ["red", "yellow"]


class TestTotalize:
    """totalize 테스트"""

    def test_adds_self_loops(self):
        """선행자/후속자가 없는 상태에만 자기 루프"""
        ts = TransitionSystem.build(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "b")])
        total, added = kripke_service.totalize(ts)

        assert added == ["a"]
        assert total.has_edge("a", "a")
        assert total.is_total()

    def test_already_total(self, traffic_light):
        total, added = kripke_service.totalize(traffic_light)
        assert added == []
        assert total is traffic_light


class TestImages:
    """post / pre / pre~ / post~ 테스트"""

    def test_post_pre(self, two_state):
        assert kripke_service.post(two_state, {"1"}) == frozenset({"1", "2"})
        assert kripke_service.pre(two_state, {"1"}) == frozenset({"1"})
        assert kripke_service.pre(two_state, {"2"}) == frozenset({"1", "2"})

    def test_tilde_images(self, two_state):
        """모든 후속자(선행자)가 Y 안"""
        assert kripke_service.pre_tilde(two_state, {"2"}) == frozenset({"2"})
        assert kripke_service.post_tilde(two_state, {"1"}) == frozenset({"1"})

    def test_reverse_system(self, two_state):
        rev = kripke_service.reverse_system(two_state)
        assert rev.has_edge("2", "1")
        assert not rev.has_edge("1", "2")


class TestStructure:
    """단사성, 대칭성, P→ 테스트"""

    def test_injective(self, traffic_light, two_state, even_odd):
        assert kripke_service.is_injective(traffic_light)
        assert kripke_service.is_injective(even_odd)
        assert not kripke_service.is_injective(two_state)

    def test_symmetric(self, traffic_abstract, traffic_light, even_odd):
        assert kripke_service.is_symmetric(traffic_abstract)
        assert kripke_service.is_symmetric(even_odd)
        assert not kripke_service.is_symmetric(traffic_light)

    def test_p_arrow_witness(self, two_state):
        """1과 2는 한 걸음 만에 2에서 만난다"""
        result = kripke_service.p_arrow(two_state, {"1"})

        assert result.holds
        assert result.witness == ("1", "2", "2", 1)

    def test_p_arrow_injective(self, traffic_light):
        assert not kripke_service.p_arrow(traffic_light, {"red"}).holds

    def test_p_arrow_minimal_length(self):
        """a → b → c ⟲: {b}에서는 한 걸음, {a}에서는 두 걸음"""
        chain = TransitionSystem.build(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")])

        assert kripke_service.p_arrow(chain, {"b"}).witness == ("b", "c", "c", 1)
        q, _, t, k = kripke_service.p_arrow(chain, {"a"}).witness
        assert (q, t, k) == ("a", "c", 2)

    def test_p_arrow_trivial_subsets(self, two_state):
        """S = ∅ 또는 전체면 출발 쌍이 없다"""
        assert not kripke_service.p_arrow(two_state, set()).holds
        assert not kripke_service.p_arrow(two_state, {"1", "2"}).holds

    def test_confluent_pairs(self, traffic_light):
        chain = TransitionSystem.build(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")])

        assert kripke_service.confluent_pairs(chain) == {frozenset("ab"), frozenset("ac"), frozenset("bc")}
        assert kripke_service.confluent_pairs(traffic_light) == frozenset()

    def test_core_next_two_state(self, two_state):
        """{∅, {1,2}}만 남음"""
        assert kripke_service.core_next_states(two_state) == [frozenset(), frozenset({"1", "2"})]

    def test_core_next_traffic_light(self, traffic_light):
        """단사 시스템은 모든 부분집합"""
        assert len(kripke_service.core_next_states(traffic_light)) == 8

    def test_core_next_abstract(self, traffic_abstract):
        assert len(kripke_service.core_next_states(traffic_abstract)) == 2

    def test_reversal_stable(self, traffic_light, traffic_abstract):
        assert kripke_service.reversal_stable_states(traffic_light) == frozenset()
        assert kripke_service.reversal_stable_states(traffic_abstract) == frozenset({"red", "go"})

    def test_subset_cap(self, traffic_light):
        with pytest.raises(SubsetCapError):
            list(kripke_service.iter_subsets(traffic_light.states, cap=2))


class TestSmallSystemProperties:
    """3-상태 이하 전체 시스템 속성 테스트"""

    def test_system_count(self):
        """모든 상태가 선행자를 갖는 경우만: 1 + (3² − 2) + (7³ − 3·3³ + 3)"""
        assert len(SMALL_SYSTEMS) == 1 + 7 + 265

    def test_all_total(self):
        """후속자만 있고 선행자가 없는 상태는 열거되지 않는다"""
        assert all(ts.is_total() for ts in SMALL_SYSTEMS)
        names = {ts.name for ts in enumerate_total_systems(2)}
        assert "total2_0" not in names  # {1→1, 2→1}

    @given(ts=st.sampled_from(SMALL_SYSTEMS))
    def test_injective_iff_full_core(self, ts):
        full = len(kripke_service.core_next_states(ts)) == 2 ** len(ts.states)
        assert full == kripke_service.is_injective(ts)

    @given(ts=st.sampled_from(SMALL_SYSTEMS))
    def test_symmetric_iff_all_stable(self, ts):
        stable = kripke_service.reversal_stable_states(ts) == ts.state_set
        assert stable == kripke_service.is_symmetric(ts)

    @given(ts=st.sampled_from(SMALL_SYSTEMS))
    def test_core_matches_p_arrow(self, ts):
        """core_next 원소 ⇔ ¬P→(S)"""
        kept = set(kripke_service.core_next_states(ts))
        for subset in kripke_service.iter_subsets(ts.states):
            assert (subset in kept) == (not kripke_service.p_arrow(ts, subset).holds)

    @given(ts=st.sampled_from(SMALL_SYSTEMS))
    def test_core_closed_under_complement(self, ts):
        kept = set(kripke_service.core_next_states(ts))
        assert frozenset() in kept and ts.state_set in kept
        assert all(ts.state_set - s in kept for s in kept)
