"""
Formula Parser 테스트
"""

import pytest

from src.exceptions import FormulaSyntaxError, MonotonicityViolationError, ParseError
from src.models.formula import (
    Always,
    And,
    Eventually,
    ForallGuarded,
    Implies,
    Mu,
    Next,
    Not,
    Nu,
    Or,
    Prev,
    Reverse,
    StateProp,
    TransProp,
    Until,
    Var,
    WeakUntil,
    expand,
    format_formula,
    free_vars,
    has_reversal,
    is_fixpoint_free,
    temporal_depth,
)
from src.utils.formula_parser import load_formulas, parse_formula, tokenize
from src.utils.parsers import fixture_path

p = StateProp(name="p")
q = StateProp(name="q")


class TestTokenize:
    """토큰화 테스트"""

    def test_next_token(self):
        """()는 하나의 토큰"""
        kinds = [kind for kind, _, _ in tokenize("()(rev p)")]
        assert kinds == ["next", "punct", "ident", "ident", "punct"]

    def test_positions(self):
        assert [pos for _, _, pos in tokenize("p  | q")] == [0, 3, 5]

    def test_bad_character(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            tokenize("p $ q")
        assert exc.value.position == 1


class TestParseFormula:
    """parse_formula 테스트"""

    def test_precedence(self):
        """-> < | < & < U < 단항"""
        assert parse_formula("p | q & p") == Or(p, And(q, p))
        assert parse_formula("p -> q | p") == Implies(p, Or(q, p))
        assert parse_formula("!p U q") == Until(Not(p), q)

    def test_left_assoc(self):
        assert parse_formula("p | q | p") == Or(Or(p, q), p)

    def test_until_right_assoc(self):
        assert parse_formula("p U q W p") == Until(p, WeakUntil(q, p))

    def test_unary_keywords(self):
        assert parse_formula("G p | F G q") == Or(Always(p), Eventually(Always(q)))
        assert parse_formula("P p") == Prev(p)
        assert parse_formula("A p") == ForallGuarded(p)

    def test_next_and_reverse(self):
        assert parse_formula("()(rev ()(rev p))") == Next(Reverse(Next(Reverse(p))))

    def test_fixpoints(self):
        """μ 본문은 가능한 멀리 확장"""
        assert parse_formula("mu X. q | ()X") == Mu("X", Or(q, Next(Var("X"))))
        assert parse_formula("nu Y. p & ()Y") == Nu("Y", And(p, Next(Var("Y"))))

    def test_explicit_sets(self):
        assert parse_formula("[S:{1, 2}]") == StateProp(states=frozenset({"1", "2"}))
        assert parse_formula("[T:{1->2, 2->2}]") == TransProp(frozenset({("1", "2"), ("2", "2")}))

    def test_str_roundtrip(self):
        """str 결과를 다시 파싱하면 같은 트리"""
        for text in ["G p | F G q", "()(rev ()(rev p))", "mu X. q | ()X", "(p & ()q) | (!p & q)", "[S:{1}] U q"]:
            phi = parse_formula(text)
            assert parse_formula(str(phi)) == phi

    def test_position_in_error(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("p | ")
        assert exc.value.position == 4

    def test_unbalanced(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("(p | q")

    def test_trailing_token(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("p q")
        assert exc.value.position == 2

    def test_keyword_as_atom(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("p | U")

    def test_lowercase_fixpoint_variable(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("mu x. p")

    def test_bad_transition(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("[T:{1 2}]")

    def test_empty(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("   ")

    def test_non_monotone(self):
        """부정 아래 고정점 변수 거부"""
        with pytest.raises(MonotonicityViolationError) as exc:
            parse_formula("mu X. !X")
        assert exc.value.variable == "X"

    def test_double_negation_allowed(self):
        parse_formula("mu X. !!X | p")

    def test_implication_counts_as_negation(self):
        with pytest.raises(MonotonicityViolationError):
            parse_formula("nu X. X -> p")

    def test_skip_check(self):
        assert parse_formula("mu X. !X", check=False) == Mu("X", Not(Var("X")))


class TestFormulaHelpers:
    """AST 보조 함수 테스트"""

    def test_free_vars(self):
        assert free_vars(parse_formula("mu X. X | Y")) == frozenset({"Y"})

    def test_temporal_depth(self):
        assert temporal_depth(parse_formula("p & q")) == 0
        assert temporal_depth(parse_formula("()(rev ()(rev p))")) == 2
        assert temporal_depth(parse_formula("F G q")) == 2

    def test_has_reversal(self):
        assert has_reversal(parse_formula("O p"))
        assert not has_reversal(parse_formula("G p | F G q"))

    def test_fixpoint_free(self):
        assert is_fixpoint_free(parse_formula("p U q"))
        assert not is_fixpoint_free(parse_formula("mu X. p | ()X"))

    def test_format_formula(self):
        """최상위 괄호만 뺀다"""
        assert format_formula(parse_formula("G p | F G q")) == "G p | F G q"
        assert format_formula(parse_formula("(p | q) & q")) == "(p | q) & q"
        assert format_formula(parse_formula("F q")) == "F q"

    def test_expand_removes_sugar(self):
        """전개 후에는 핵심 생성자만"""
        core = (StateProp, TransProp, Var, Next, Reverse, Not, Or, Mu, Nu, ForallGuarded)
        phi = expand(parse_formula("(p U q) & G (P p -> F q)"))
        assert all(isinstance(node, core) for node in phi.walk())


class TestLoadFormulas:
    """수식 파일 테스트"""

    def test_fixture_file(self):
        formulas = load_formulas(fixture_path("paper_formulas.txt"))
        assert len(formulas) == 4
        assert formulas[0] == parse_formula("G p | F G q")

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "formulas.txt"
        path.write_text("# header\n\np  # trailing\n", encoding="utf-8")
        assert load_formulas(str(path)) == [p]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_formulas(str(tmp_path / "missing.txt"))
