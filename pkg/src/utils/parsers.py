"""
Text Parsers
격자(.lat), 전이 시스템(.ts), 트레이스 리터럴 파싱
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from loguru import logger

from src.config.env import EnvConfig
from src.exceptions import LatticeError, ParseError
from src.models.lattice import Element, FiniteLattice, Lattice, MonotoneFn, PowersetLattice, Uco
from src.models.trace import BiLassoTrace
from src.models.transition_system import TransitionSystem
from src.services.lattice_service import lift_point_fn, make_uco, saturating_point


def _lines(text: str) -> List[Tuple[int, List[str]]]:
    """주석(#)과 빈 줄을 뺀 (줄 번호, 토큰) 목록"""
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((number, line.split()))
    return rows


# ============================================
# 격자 파일 (.lat)
# ============================================


@dataclass
class LatticeFile:
    """파싱된 격자 파일: 격자, 이름 붙은 함수, 이름 붙은 추상 도메인(uco)"""

    lattice: Lattice
    functions: Dict[str, MonotoneFn] = field(default_factory=dict)
    domains: Dict[str, Uco] = field(default_factory=dict)
    saturation: Optional[int] = None


def _build_lattice(name: str, header: Dict[str, list], source: str) -> Tuple[Lattice, Optional[int]]:
    finite = bool(header["element"])
    powerset = bool(header["powerset"]) or header["saturate"] is not None or header["range"] is not None
    if finite and powerset:
        raise ParseError("a lattice file declares either elements or a powerset, not both", source)
    if finite:
        return FiniteLattice(name, header["element"], header["leq"]), None

    bound = header["saturate"]
    atoms = list(header["powerset"])
    if bound is not None:
        atoms += [str(v) for v in range(-bound, bound + 1)]
    if header["range"] is not None:
        lo, hi = header["range"]
        atoms += [str(v) for v in range(lo, hi + 1)]
    if not atoms:
        raise ParseError("lattice file declares no elements", source)
    return PowersetLattice(name, atoms, header["order"] or "subset"), bound


def parse_lattice_text(text: str, source: str = "<text>") -> LatticeFile:
    """
    .lat 텍스트 파싱

    지시어:
        lattice <name>
        element <id>...          / leq <a> <b>        (명시적 격자, 덮개 쌍)
        powerset <atom>...       / range <lo> <hi>    (멱집합 격자의 원자)
        saturate <N>             (원자 [-N, N], lift의 포화 경계)
        order subset|superset
        fn <name> <arity>        다음 줄부터 `<in...> -> <out>` 표 행
        lift <name> <builtin>    (add, mul, sq, neg, id 점 함수의 집합 상)
        domain <name> <elem>...  (원소들의 Moore 폐포 uco)

    Args:
        text: 파일 내용
        source: 오류 메시지에 쓸 파일 이름

    Returns:
        LatticeFile

    Raises:
        ParseError: 문법 오류, 알 수 없는 원소, 불완전한 함수 표
    """
    rows = _lines(text)
    name = Path(source).stem if source != "<text>" else "L"
    header: Dict[str, object] = {
        "element": [], "leq": [], "powerset": [], "range": None, "saturate": None, "order": None,
    }
    body: List[Tuple[int, List[str]]] = []

    # 1차: 격자 자체를 정하는 지시어
    for number, tokens in rows:
        keyword, args = tokens[0], tokens[1:]
        try:
            if keyword == "lattice" and len(args) == 1:
                name = args[0]
            elif keyword == "element" and args:
                header["element"].extend(args)
            elif keyword == "leq" and len(args) == 2:
                header["leq"].append((args[0], args[1]))
            elif keyword == "powerset" and args:
                header["powerset"].extend(args)
            elif keyword == "range" and len(args) == 2:
                header["range"] = (int(args[0]), int(args[1]))
            elif keyword == "saturate" and len(args) == 1:
                header["saturate"] = int(args[0])
            elif keyword == "order" and len(args) == 1:
                header["order"] = args[0]
            elif keyword in ("fn", "lift", "domain") or "->" in tokens:
                body.append((number, tokens))
            else:
                raise ParseError(f"cannot read directive {' '.join(tokens)!r}", source, number)
        except ValueError as e:
            raise ParseError(f"expected integers in {' '.join(tokens)!r}", source, number) from e

    try:
        lattice, bound = _build_lattice(name, header, source)
    except LatticeError as e:
        raise ParseError(str(e), source) from e
    result = LatticeFile(lattice=lattice, saturation=bound)

    # 2차: 함수와 도메인
    current: Optional[Tuple[str, int, int]] = None
    table: Dict[Tuple[Element, ...], Element] = {}

    def finish() -> None:
        if current is None:
            return
        fn_name, arity, line = current
        expected = lattice.size ** arity
        if len(table) != expected:
            raise ParseError(f"function {fn_name} has {len(table)} of {expected} table rows", source, line)
        result.functions[fn_name] = MonotoneFn(fn_name, lattice, arity, table=dict(table))

    for number, tokens in body:
        keyword = tokens[0]
        try:
            if keyword == "fn":
                finish()
                if len(tokens) != 3:
                    raise ParseError("expected `fn <name> <arity>`", source, number)
                current = (tokens[1], int(tokens[2]), number)
                table = {}
            elif keyword == "lift":
                finish()
                current = None
                if len(tokens) != 3:
                    raise ParseError("expected `lift <name> <builtin>`", source, number)
                if not isinstance(lattice, PowersetLattice) or bound is None:
                    raise ParseError("lift needs a `saturate <N>` powerset lattice", source, number)
                arity, point = saturating_point(tokens[2], bound)
                result.functions[tokens[1]] = lift_point_fn(lattice, tokens[1], arity, point)
            elif keyword == "domain":
                finish()
                current = None
                if len(tokens) < 2:
                    raise ParseError("expected `domain <name> <element>...`", source, number)
                members = [_element(lattice, t) for t in tokens[2:]]
                result.domains[tokens[1]] = make_uco(members, lattice, name=tokens[1])
            else:
                if current is None:
                    raise ParseError("table row outside of a `fn` block", source, number)
                arrow = tokens.index("->")
                inputs, outputs = tokens[:arrow], tokens[arrow + 1:]
                if len(inputs) != current[1] or len(outputs) != 1:
                    raise ParseError(f"row needs {current[1]} inputs and one output", source, number)
                key = tuple(_element(lattice, t) for t in inputs)
                table[key] = _element(lattice, outputs[0])
        except (LatticeError, ValueError) as e:
            raise ParseError(str(e), source, number) from e
    finish()

    logger.info(
        f"lattice {lattice.name}: {lattice.size} elements, "
        f"functions {sorted(result.functions)}, domains {sorted(result.domains)}"
    )
    return result


def _element(lattice: Lattice, token: str) -> Element:
    if isinstance(lattice, PowersetLattice):
        return lattice.parse(token)
    return lattice.require(token)


def load_lattice(path: str) -> LatticeFile:
    """
    Raises:
        ParseError: 파일이 없거나 문법 오류
    """
    file = Path(path)
    if not file.is_file():
        raise ParseError("file not found", str(path))
    return parse_lattice_text(file.read_text(encoding="utf-8"), str(path))


# ============================================
# 전이 시스템 파일 (.ts)
# ============================================


def parse_ts_text(text: str, source: str = "<text>") -> TransitionSystem:
    """
    .ts 텍스트 파싱

    지시어: `system <name>`, `state <id>...`, `edge <a> <b>` (또는 `<a> -> <b>`),
    `label <prop> <id>...`. 전체화(total)는 호출 측에서 한다.

    Raises:
        ParseError: 문법 오류 또는 선언되지 않은 상태
    """
    name = Path(source).stem if source != "<text>" else "ts"
    states: List[str] = []
    edges: List[Tuple[str, str]] = []
    labels: Dict[str, List[str]] = {}
    for number, tokens in _lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "system" and len(args) == 1:
            name = args[0]
        elif keyword == "state" and args:
            states.extend(args)
        elif keyword == "edge" and len(args) == 2:
            edges.append((args[0], args[1]))
        elif len(tokens) == 3 and tokens[1] == "->":
            edges.append((tokens[0], tokens[2]))
        elif keyword == "label" and args:
            labels.setdefault(args[0], []).extend(args[1:])
        else:
            raise ParseError(f"cannot read directive {' '.join(tokens)!r}", source, number)
    ts = TransitionSystem.build(states, edges, labels, name=name)
    logger.info(f"transition system {ts.name}: {len(ts.states)} states, {len(ts.edges)} edges")
    return ts


def load_transition_system(path: str) -> TransitionSystem:
    """
    Raises:
        ParseError: 파일이 없거나 문법 오류
    """
    file = Path(path)
    if not file.is_file():
        raise ParseError("file not found", str(path))
    return parse_ts_text(file.read_text(encoding="utf-8"), str(path))


def fixture_path(name: str) -> str:
    """예제 디렉터리 안의 파일 경로"""
    return str(Path(EnvConfig.FIXTURES_DIR) / name)


# ============================================
# 트레이스 리터럴
# ============================================

_TRACE = re.compile(
    r"^\^\((?P<left>[^()]*)\)\s*(?P<middle>[^()]*?)\s*\((?P<right>[^()]*)\)\^\s*"
    r"@(?P<offset>-?\d+)\s*!(?P<present>-?\d+)$"
)


def _word(text: str) -> Tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(text.split()) if " " in text else tuple(text)


def parse_trace(text: str) -> BiLassoTrace:
    """
    `^(u) v (w)^ @o !i` 파싱 (상태 id가 한 글자면 붙여 쓰고, 아니면 공백으로 구분)

    Raises:
        ParseError: 형식 오류 또는 빈 루프
    """
    match = _TRACE.match(text.strip())
    if match is None:
        raise ParseError(f"not a trace literal: {text!r}", "<trace>")
    left, right = _word(match["left"]), _word(match["right"])
    if not left or not right:
        raise ParseError(f"trace loops must be nonempty: {text!r}", "<trace>")
    return BiLassoTrace.of(left, _word(match["middle"]), right, int(match["offset"]), int(match["present"]))
