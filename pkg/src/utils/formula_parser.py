"""
Formula Parser
수식 concrete syntax 파서 (재귀 하강)

우선순위 (낮음 → 높음): ->, |, &, U/W, 단항 (!, (), rev, F, G, P, O, H, A, mu/nu)
대문자로 시작하는 식별자는 변수 (키워드 F G U W A P O H 제외), 나머지는 명제.
"""

import re
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from src.exceptions import FormulaSyntaxError, ParseError
from src.models.formula import (
    Always,
    And,
    Eventually,
    ForallGuarded,
    Formula,
    Historically,
    Implies,
    Mu,
    Next,
    Not,
    Nu,
    Once,
    Or,
    Prev,
    Reverse,
    StateProp,
    TransProp,
    Until,
    Var,
    WeakUntil,
    check_monotone,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<states>\[S:\{[^}]*\}\])|(?P<edges>\[T:\{[^}]*\}\])|(?P<next>\(\))|(?P<arrow>->)"
    r"|(?P<punct>[()|&!.])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*|\d+))"
)

_UNARY: dict = {
    "F": Eventually,
    "G": Always,
    "P": Prev,
    "O": Once,
    "H": Historically,
    "A": ForallGuarded,
    "rev": Reverse,
}
KEYWORDS = frozenset({"F", "G", "U", "W", "A", "P", "O", "H", "rev", "mu", "nu"})

Token = Tuple[str, str, int]


def tokenize(text: str) -> List[Token]:
    """(종류, 텍스트, 위치) 목록"""
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append((kind, value, match.start(kind)))
        pos = match.end()
    return tokens


def _set_body(value: str) -> List[str]:
    inner = value[4:-2]
    return [p.strip() for p in inner.split(",") if p.strip()]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, value: str) -> bool:
        token = self.peek()
        return token is not None and token[1] == value and token[0] != "states"

    def take(self) -> Token:
        token = self.peek()
        if token is None:
            raise FormulaSyntaxError("unexpected end of formula", len(self.text))
        self.pos += 1
        return token

    def expect(self, value: str) -> None:
        token = self.take()
        if token[1] != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {token[1]!r}", token[2])

    def parse(self) -> Formula:
        phi = self.implies()
        token = self.peek()
        if token is not None:
            raise FormulaSyntaxError(f"unexpected {token[1]!r}", token[2])
        return phi

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return Implies(left, self.implies())
        return left

    def _left_assoc(self, symbol: str, below: Callable[[], Formula], node) -> Formula:
        phi = below()
        while self.at(symbol):
            self.take()
            phi = node(phi, below())
        return phi

    def disjunction(self) -> Formula:
        return self._left_assoc("|", self.conjunction, Or)

    def conjunction(self) -> Formula:
        return self._left_assoc("&", self.until, And)

    def until(self) -> Formula:
        left = self.unary()
        if self.at("U") or self.at("W"):
            op = self.take()[1]
            right = self.until()
            return Until(left, right) if op == "U" else WeakUntil(left, right)
        return left

    def unary(self) -> Formula:
        token = self.peek()
        if token is None:
            raise FormulaSyntaxError("unexpected end of formula", len(self.text))
        kind, value, position = token
        if kind == "next":
            self.take()
            return Next(self.unary())
        if value == "!":
            self.take()
            return Not(self.unary())
        if kind == "ident" and value in _UNARY:
            self.take()
            return _UNARY[value](self.unary())
        if kind == "ident" and value in ("mu", "nu"):
            self.take()
            var = self.take()
            if var[0] != "ident" or var[1] in KEYWORDS or not var[1][0].isupper():
                raise FormulaSyntaxError(f"fixpoint variable must be an uppercase identifier, got {var[1]!r}", var[2])
            self.expect(".")
            body = self.implies()
            return Mu(var[1], body) if value == "mu" else Nu(var[1], body)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, position = self.take()
        if value == "(" and kind == "punct":
            phi = self.implies()
            self.expect(")")
            return phi
        if kind == "states":
            return StateProp(states=frozenset(_set_body(value)))
        if kind == "edges":
            edges = []
            for item in _set_body(value):
                if "->" not in item:
                    raise FormulaSyntaxError(f"transition {item!r} needs the form a->b", position)
                a, b = (p.strip() for p in item.split("->", 1))
                edges.append((a, b))
            return TransProp(frozenset(edges))
        if kind == "ident":
            if value in KEYWORDS:
                raise FormulaSyntaxError(f"keyword {value!r} cannot be used as an atom", position)
            if value[0].isupper():
                return Var(value)
            return StateProp(name=value)
        raise FormulaSyntaxError(f"unexpected {value!r}", position)


def parse_formula(text: str, check: bool = True) -> Formula:
    """
    수식 텍스트 파싱

    Args:
        text: 수식 (예: "G p | F G q", "()(rev ()(rev p))", "mu X. p | ()X")
        check: 고정점 변수 단조성 검사 여부

    Returns:
        Formula

    Raises:
        FormulaSyntaxError: 문법 오류 (위치 포함)
        MonotonicityViolationError: 홀수 개 부정 아래 고정점 변수
    """
    if not text.strip():
        raise FormulaSyntaxError("empty formula", 0)
    phi = _Parser(text).parse()
    if check:
        check_monotone(phi)
    return phi


def load_formulas(path: str) -> List[Formula]:
    """
    한 줄에 수식 하나 (# 주석, 빈 줄 무시)

    Raises:
        ParseError: 파일이 없는 경우
        FormulaSyntaxError: 수식 문법 오류
    """
    file = Path(path)
    if not file.is_file():
        raise ParseError("file not found", str(path))
    formulas = []
    for raw in file.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            formulas.append(parse_formula(line))
    return formulas
