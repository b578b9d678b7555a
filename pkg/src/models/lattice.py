"""
Finite Lattices
유한 완비 격자, 단조 함수, 상향 닫힘 연산자(uco) 모델
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from src.exceptions import CarrierMismatchError, LatticeError, SubsetCapError

Element = Hashable


class Lattice(ABC):
    """유한 완비 격자 기본 인터페이스"""

    def __init__(self, name: str):
        self.name = name

    @property
    @abstractmethod
    def size(self) -> int:
        """원소 개수"""
        pass

    @abstractmethod
    def iter_elements(self) -> Iterator[Element]:
        """원소 열거 (고정된 순서)"""
        pass

    @abstractmethod
    def contains(self, x: Element) -> bool:
        """x가 이 격자의 원소인지"""
        pass

    @abstractmethod
    def leq(self, a: Element, b: Element) -> bool:
        """a ≤ b"""
        pass

    @abstractmethod
    def meet(self, a: Element, b: Element) -> Element:
        """최대 하계"""
        pass

    @abstractmethod
    def join(self, a: Element, b: Element) -> Element:
        """최소 상계"""
        pass

    @property
    @abstractmethod
    def top(self) -> Element:
        pass

    @property
    @abstractmethod
    def bottom(self) -> Element:
        pass

    @abstractmethod
    def format(self, x: Element) -> str:
        """원소의 텍스트 표현"""
        pass

    def elements(self, cap: Optional[int] = None) -> List[Element]:
        """
        전체 원소 리스트

        Args:
            cap: 허용 최대 원소 수

        Raises:
            SubsetCapError: 원소 수가 cap 초과
        """
        if cap is not None and self.size > cap:
            raise SubsetCapError(f"lattice {self.name} has {self.size} elements (cap {cap})")
        return list(self.iter_elements())

    def meet_all(self, xs: Iterable[Element]) -> Element:
        """원소 집합의 meet (빈 집합이면 top)"""
        return reduce(self.meet, xs, self.top)

    def join_all(self, xs: Iterable[Element]) -> Element:
        """원소 집합의 join (빈 집합이면 bottom)"""
        return reduce(self.join, xs, self.bottom)

    def lt(self, a: Element, b: Element) -> bool:
        return a != b and self.leq(a, b)

    def maximal(self, xs: Iterable[Element]) -> List[Element]:
        """지배되지 않는 원소만 남김"""
        pool = list(dict.fromkeys(xs))
        return [x for x in pool if not any(self.lt(x, y) for y in pool)]

    def require(self, x: Element) -> Element:
        if not self.contains(x):
            raise CarrierMismatchError(f"{x!r} is not an element of lattice {self.name}")
        return x


class FiniteLattice(Lattice):
    """
    명시적 유한 격자

    원소는 문자열 식별자, 순서는 덮개 쌍(covering pair)의 반사-추이 폐포.
    생성 시 반대칭성과 모든 쌍의 meet/join 존재를 검사한다.
    """

    def __init__(self, name: str, elements: Iterable[str], covers: Iterable[Tuple[str, str]]):
        super().__init__(name)
        self._elements: Tuple[str, ...] = tuple(dict.fromkeys(elements))
        if not self._elements:
            raise LatticeError(f"lattice {name} has no elements")
        known = set(self._elements)

        graph = nx.DiGraph()
        graph.add_nodes_from(self._elements)
        for a, b in covers:
            if a not in known or b not in known:
                raise LatticeError(f"leq {a} {b}: unknown element")
            graph.add_edge(a, b)
        closure = nx.transitive_closure(graph, reflexive=True)

        self._up: Dict[str, FrozenSet[str]] = {x: frozenset(closure.successors(x)) for x in self._elements}
        self._down: Dict[str, FrozenSet[str]] = {x: frozenset(closure.predecessors(x)) for x in self._elements}

        for a in self._elements:
            for b in self._up[a]:
                if a != b and a in self._up[b]:
                    raise LatticeError(f"lattice {name}: {a} and {b} are mutually below each other")

        self._meet: Dict[Tuple[str, str], str] = {}
        self._join: Dict[Tuple[str, str], str] = {}
        for a, b in combinations(self._elements, 2):
            self._meet[(a, b)] = self._meet[(b, a)] = self._extreme(self._down[a] & self._down[b], greatest=True)
            self._join[(a, b)] = self._join[(b, a)] = self._extreme(self._up[a] & self._up[b], greatest=False)

        self._top = self._extreme(frozenset(self._elements), greatest=True)
        self._bottom = self._extreme(frozenset(self._elements), greatest=False)

    def _extreme(self, candidates: FrozenSet[str], greatest: bool) -> str:
        # 후보 중 다른 모든 후보보다 크거나(작거나) 같은 원소
        for c in self._elements:
            if c not in candidates:
                continue
            others = self._down[c] if greatest else self._up[c]
            if candidates <= others:
                return c
        kind = "greatest" if greatest else "least"
        raise LatticeError(f"lattice {self.name}: no {kind} element among {sorted(candidates)}")

    @property
    def size(self) -> int:
        return len(self._elements)

    def iter_elements(self) -> Iterator[str]:
        return iter(self._elements)

    def contains(self, x: Element) -> bool:
        return x in self._up

    def leq(self, a: Element, b: Element) -> bool:
        return b in self._up[a]

    def meet(self, a: Element, b: Element) -> Element:
        return a if a == b else self._meet[(a, b)]

    def join(self, a: Element, b: Element) -> Element:
        return a if a == b else self._join[(a, b)]

    @property
    def top(self) -> Element:
        return self._top

    @property
    def bottom(self) -> Element:
        return self._bottom

    def format(self, x: Element) -> str:
        return str(x)

    def covering_pairs(self) -> List[Tuple[str, str]]:
        """Hasse 도표의 덮개 쌍"""
        pairs = []
        for a in self._elements:
            for b in self._up[a]:
                if a == b:
                    continue
                between = (self._up[a] & self._down[b]) - {a, b}
                if not between:
                    pairs.append((a, b))
        return pairs


class PowersetLattice(Lattice):
    """
    원자 집합의 멱집합 격자

    순서는 "subset"(⊆) 또는 "superset"(⊇)이며 격자 값의 일부이다.
    원소는 frozenset, 열거는 (크기, 원자 선언 순서) 기준.
    """

    ORDERS = ("subset", "superset")

    def __init__(self, name: str, atoms: Iterable[str], order: str = "subset"):
        super().__init__(name)
        if order not in self.ORDERS:
            raise LatticeError(f"unknown powerset order {order!r}")
        self.atoms: Tuple[str, ...] = tuple(dict.fromkeys(atoms))
        self.order = order
        self._rank = {a: i for i, a in enumerate(self.atoms)}
        self._full = frozenset(self.atoms)
        self._integers = all(_is_int(a) for a in self.atoms)

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full(self) -> FrozenSet[str]:
        return self._full

    def iter_elements(self) -> Iterator[FrozenSet[str]]:
        for k in range(len(self.atoms) + 1):
            for combo in combinations(self.atoms, k):
                yield frozenset(combo)

    def contains(self, x: Element) -> bool:
        return isinstance(x, frozenset) and x <= self._full

    def leq(self, a: Element, b: Element) -> bool:
        return a <= b if self.order == "subset" else a >= b

    def meet(self, a: Element, b: Element) -> Element:
        return a & b if self.order == "subset" else a | b

    def join(self, a: Element, b: Element) -> Element:
        return a | b if self.order == "subset" else a & b

    @property
    def top(self) -> Element:
        return self._full if self.order == "subset" else frozenset()

    @property
    def bottom(self) -> Element:
        return frozenset() if self.order == "subset" else self._full

    def sorted_atoms(self, x: Iterable[str]) -> List[str]:
        return sorted(x, key=self._rank.__getitem__)

    def atoms_by_magnitude(self) -> List[str]:
        """정수 원자는 (|v|, v) 순 (0, -1, 1, -2, ...), 아니면 선언 순서"""
        if not self._integers:
            return list(self.atoms)
        return sorted(self.atoms, key=lambda a: (abs(int(a)), int(a)))

    def format(self, x: Element) -> str:
        if not x:
            return "∅"
        if self._integers:
            values = sorted(int(a) for a in x)
            if values == list(range(values[0], values[-1] + 1)):
                return f"[{values[0]}]" if len(values) == 1 else f"[{values[0]},{values[-1]}]"
            return "{" + ",".join(str(v) for v in values) + "}"
        return "{" + ",".join(self.sorted_atoms(x)) + "}"

    def parse(self, text: str) -> FrozenSet[str]:
        """
        원소 텍스트 파싱: "[lo,hi]" 정수 구간, "{a,b}" 집합, "top", "bottom", "∅"

        Raises:
            LatticeError: 원자가 아닌 값 포함
        """
        text = text.strip()
        if text in ("top", "⊤"):
            return self.top
        if text in ("bottom", "⊥"):
            return self.bottom
        if text in ("∅", "{}", "empty"):
            return frozenset()
        if text.startswith("[") and text.endswith("]"):
            bounds = [p.strip() for p in text[1:-1].split(",")]
            lo = int(bounds[0])
            hi = int(bounds[-1])
            value = frozenset(str(v) for v in range(lo, hi + 1))
        elif text.startswith("{") and text.endswith("}"):
            value = frozenset(p.strip() for p in text[1:-1].split(",") if p.strip())
        else:
            value = frozenset([text])
        if not value <= self._full:
            raise LatticeError(f"{text}: not a subset of the atoms of {self.name}")
        return value


def _is_int(text: str) -> bool:
    try:
        int(text)
        return True
    except ValueError:
        return False


@dataclass(frozen=True, eq=False)
class MonotoneFn:
    """
    격자 위의 n-항 함수

    표(table)로 주어지거나 호출 가능 객체(func)로 주어진다.
    additive=True는 각 인자에 대해 join을 보존함을 뜻한다 (점 함수의 상으로 올린 경우).
    """

    name: str
    lattice: Lattice
    arity: int
    table: Optional[Dict[Tuple[Element, ...], Element]] = None
    func: Optional[Callable[..., Element]] = None
    additive: bool = False
    point: Optional[Callable[..., str]] = field(default=None, repr=False)

    def __post_init__(self):
        if (self.table is None) == (self.func is None):
            raise LatticeError(f"function {self.name}: give exactly one of table or func")
        if self.arity < 0:
            raise LatticeError(f"function {self.name}: negative arity")

    def __call__(self, *args: Element) -> Element:
        if len(args) != self.arity:
            raise LatticeError(f"function {self.name} expects {self.arity} arguments, got {len(args)}")
        if self.table is not None:
            try:
                return self.table[tuple(args)]
            except KeyError as e:
                raise LatticeError(f"function {self.name}: no table row for {args}") from e
        return self.func(*args)

    def section(self, position: int, fixed: Tuple[Element, ...]) -> "MonotoneFn":
        """
        다른 인자를 고정한 단항 단면 함수

        Args:
            position: 자유 인자 위치
            fixed: 나머지 인자 값 (위치 순서)
        """
        def apply(x: Element) -> Element:
            args = list(fixed)
            args.insert(position, x)
            return self(*args)

        label = ",".join(self.lattice.format(v) for v in fixed)
        return MonotoneFn(
            name=f"{self.name}[{position}|{label}]",
            lattice=self.lattice,
            arity=1,
            func=apply,
            additive=self.additive,
        )

    def power(self, n: int) -> "MonotoneFn":
        """단항 함수의 n회 합성"""
        if self.arity != 1:
            raise LatticeError(f"function {self.name}: power needs a unary function")

        def apply(x: Element) -> Element:
            for _ in range(n):
                x = self(x)
            return x

        return MonotoneFn(name=f"{self.name}^{n}", lattice=self.lattice, arity=1, func=apply, additive=self.additive)


@dataclass(frozen=True)
class Uco:
    """
    상향 닫힘 연산자 (meet-닫힌 고정점 집합으로 표현)

    apply(x) = meet{y ∈ fixpoints : x ≤ y}
    """

    carrier: Lattice
    fixpoints: FrozenSet[Element]
    name: str = field(default="ρ", compare=False)

    def __post_init__(self):
        lat = self.carrier
        for y in self.fixpoints:
            lat.require(y)
        if lat.top not in self.fixpoints:
            raise LatticeError(f"uco {self.name}: fixpoints must contain top")
        for a, b in combinations(self.fixpoints, 2):
            if lat.meet(a, b) not in self.fixpoints:
                raise LatticeError(
                    f"uco {self.name}: fixpoints not meet-closed "
                    f"({lat.format(a)} ∧ {lat.format(b)} missing)"
                )

    def apply(self, x: Element) -> Element:
        lat = self.carrier
        return lat.meet_all(y for y in self.fixpoints if lat.leq(x, y))

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def is_fixpoint(self, x: Element) -> bool:
        return x in self.fixpoints

    def sorted_fixpoints(self) -> List[Element]:
        """표시용 정렬 (아래에서 위로)"""
        lat = self.carrier
        items = list(self.fixpoints)
        return sorted(items, key=lambda y: (sum(1 for z in items if lat.leq(z, y)), lat.format(y)))

    def describe(self) -> str:
        return "{" + ", ".join(self.carrier.format(y) for y in self.sorted_fixpoints()) + "}"
