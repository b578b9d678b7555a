"""
Parsers 테스트
"""

import pytest

from src.exceptions import ParseError
from src.models.lattice import FiniteLattice, PowersetLattice
from src.utils.parsers import (
    fixture_path,
    load_lattice,
    load_transition_system,
    parse_lattice_text,
    parse_ts_text,
)

CHAIN = """
# 세 원소 사슬
lattice Chain
element lo mid hi
leq lo mid
leq mid hi
fn up 1
lo -> mid
mid -> hi
hi -> hi
domain Top hi
"""


class TestLatticeParser:
    """.lat 파싱 테스트"""

    def test_finite_lattice(self):
        parsed = parse_lattice_text(CHAIN)

        assert isinstance(parsed.lattice, FiniteLattice)
        assert parsed.lattice.name == "Chain"
        assert parsed.functions["up"]("lo") == "mid"
        assert parsed.domains["Top"].fixpoints == frozenset({"hi"})
        assert parsed.saturation is None

    def test_saturated_powerset(self, sign_file):
        """saturate 10: 원자 -10..10, lift 함수, Sign 도메인"""
        lat = sign_file.lattice

        assert isinstance(lat, PowersetLattice)
        assert lat.size == 2 ** 21
        assert sign_file.saturation == 10
        assert set(sign_file.functions) == {"add", "mult", "sq"}
        assert lat.format(sign_file.domains["Sign"](lat.parse("{3}"))) == "[0,10]"

    def test_range_and_order(self):
        parsed = parse_lattice_text("powerset a\nrange 1 2\norder superset\n")

        assert parsed.lattice.atoms == ("a", "1", "2")
        assert parsed.lattice.top == frozenset()

    def test_incomplete_table(self):
        """표 행이 모자라면 함수 시작 줄을 가리킨다"""
        text = "element a b\nleq a b\nfn f 1\na -> b\n"
        with pytest.raises(ParseError) as exc:
            parse_lattice_text(text, "short.lat")
        assert exc.value.line == 3
        assert exc.value.source == "short.lat"

    def test_unknown_directive(self):
        with pytest.raises(ParseError) as exc:
            parse_lattice_text("element a\nwidget a\n")
        assert exc.value.line == 2

    def test_mixed_lattice_kinds(self):
        with pytest.raises(ParseError):
            parse_lattice_text("element a\npowerset x\n")

    def test_lift_needs_saturation(self):
        with pytest.raises(ParseError):
            parse_lattice_text("powerset 1 2\nlift add add\n")

    def test_unknown_element_in_domain(self):
        with pytest.raises(ParseError) as exc:
            parse_lattice_text("element a b\nleq a b\ndomain D c\n")
        assert exc.value.line == 3

    def test_row_outside_fn(self):
        with pytest.raises(ParseError):
            parse_lattice_text("element a b\nleq a b\na -> b\n")

    def test_invalid_order(self):
        """반대칭성 위반은 ParseError로 감싼다"""
        with pytest.raises(ParseError):
            parse_lattice_text("element a b\nleq a b\nleq b a\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_lattice(str(tmp_path / "none.lat"))


class TestTransitionSystemParser:
    """.ts 파싱 테스트"""

    def test_fixture(self):
        ts = load_transition_system(fixture_path("traffic_light.ts"))

        assert ts.name == "traffic_light"
        assert ts.states == ("red", "green", "yellow")
        assert ts.label("stop") == frozenset({"red", "yellow"})

    def test_arrow_edges(self):
        ts = parse_ts_text("state a b\na -> b\nedge b a\n")
        assert ts.has_edge("a", "b") and ts.has_edge("b", "a")

    def test_name_from_source(self):
        assert parse_ts_text("state a\nedge a a\n", "systems/loop.ts").name == "loop"

    def test_unknown_directive(self):
        with pytest.raises(ParseError) as exc:
            parse_ts_text("state a\n\nedge a\n")
        assert exc.value.line == 3

    def test_undeclared_state(self):
        with pytest.raises(ParseError):
            parse_ts_text("state a\nedge a b\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_transition_system(str(tmp_path / "none.ts"))
