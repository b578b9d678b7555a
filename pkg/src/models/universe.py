"""
Trace Universe
경계 내 정규 bi-lasso 트레이스 우주와 트레이스 집합 (numpy 마스크 표현)
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from src.exceptions import CarrierMismatchError, ConfigurationError, UniverseOverflowError
from src.models.trace import (
    BiLassoTrace,
    PathKey,
    Word,
    canonical_path,
    is_periodic,
    junction_span,
    path_steps,
    primitive_root,
    reverse_path,
    state_at,
)

Edge = Tuple[str, str]


@dataclass(frozen=True)
class UniverseBounds:
    """
    우주 경계

    loop: 루프 최대 길이 L, middle: 중간 최대 길이 B,
    offset: 비주기 구간 범위 O, present: 현재 시점 범위 I, slack: U⁺ 여유 Δ
    """

    loop: int
    middle: int
    offset: int
    present: int
    slack: int = 4

    def __post_init__(self):
        if self.loop < 1:
            raise ConfigurationError(f"loop length must be positive, got {self.loop}")
        for name in ("middle", "offset", "present", "slack"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} bound must be non-negative, got {getattr(self, name)}")

    @property
    def outer(self) -> int:
        """U⁺의 현재 시점 범위"""
        return self.present + self.slack

    def describe(self) -> str:
        return f"L={self.loop},B={self.middle},O={self.offset},I={self.present},Δ={self.slack}"


def primitive_loops(alphabet: Sequence[str], steps: FrozenSet[Edge], max_len: int) -> List[Word]:
    """허용 전이 위의 원시 닫힌 보행 (회전은 서로 다른 루프로 센다)"""
    loops: List[Word] = []
    succ: Dict[str, List[str]] = {s: [b for b in alphabet if (s, b) in steps] for s in alphabet}

    def extend(word: List[str]):
        if (word[-1], word[0]) in steps and primitive_root(word) == tuple(word):
            loops.append(tuple(word))
        if len(word) < max_len:
            for b in succ[word[-1]]:
                word.append(b)
                extend(word)
                word.pop()

    for s in alphabet:
        extend([s])
    return loops


def words(alphabet: Sequence[str], steps: FrozenSet[Edge], max_len: int) -> List[Word]:
    """허용 전이를 따르는 길이 max_len 이하 단어 (빈 단어 포함)"""
    found: List[Word] = [()]
    frontier: List[Word] = [(s,) for s in alphabet]
    for _ in range(max_len):
        found.extend(frontier)
        frontier = [w + (b,) for w in frontier for b in alphabet if (w[-1], b) in steps]
    return found


class TraceUniverse:
    """
    유한 트레이스 우주 U ⊆ U⁺

    경로는 범위(scope) 전이만 따르는 정규 bi-lasso 경로이며, 트레이스 인덱스는
    path_index * width + (present + I + Δ)로 배치한다. U는 |present| ≤ I인 부분(내부),
    U⁺는 |present| ≤ I + Δ 전체다.
    """

    def __init__(
        self,
        alphabet: Sequence[str],
        bounds: UniverseBounds,
        steps: Optional[Iterable[Edge]] = None,
        name: str = "U",
    ):
        self.alphabet: Tuple[str, ...] = tuple(dict.fromkeys(alphabet))
        self.bounds = bounds
        self.name = name
        if steps is None:
            steps = product(self.alphabet, repeat=2)
        self.steps: FrozenSet[Edge] = frozenset(tuple(e) for e in steps)
        self.state_index: Dict[str, int] = {s: k for k, s in enumerate(self.alphabet)}

        self.paths: List[PathKey] = self._enumerate_paths()
        self.path_index: Dict[PathKey, int] = {key: k for k, key in enumerate(self.paths)}
        self.width = 2 * bounds.outer + 1
        self.size = len(self.paths) * self.width
        logger.info(f"universe {name} ({bounds.describe()}): {len(self.paths)} paths, {self.size} traces in U⁺")

    @classmethod
    def for_system(cls, ts, bounds: UniverseBounds, include_reversed: bool = True) -> "TraceUniverse":
        """
        전이 시스템의 우주 (범위 = 전이 ∪ 역전이)

        Args:
            ts: TransitionSystem
            bounds: 우주 경계
            include_reversed: False면 M 경로만 (⟲는 범위를 벗어날 수 있다)
        """
        steps = set(ts.edges)
        if include_reversed:
            steps |= {(b, a) for a, b in ts.edges}
        return cls(ts.states, bounds, steps, name=f"U({ts.name})")

    # ============================================
    # 경로 열거
    # ============================================

    def contains_path(self, key: PathKey) -> bool:
        """정규 경로가 경계 안에 있는가"""
        u, m, w, _ = key
        b = self.bounds
        if len(u) > b.loop or len(w) > b.loop or len(m) > b.middle:
            return False
        if is_periodic(key):
            return True
        lo, hi = junction_span(key)
        limit = b.offset if m else b.offset + 1
        return lo >= -b.offset and hi <= limit

    def _enumerate_paths(self) -> List[PathKey]:
        b = self.bounds
        loops = primitive_loops(self.alphabet, self.steps, b.loop)
        middles = words(self.alphabet, self.steps, b.middle)
        seen: Set[PathKey] = set()
        for u in loops:
            for w in loops:
                for m in middles:
                    chain = (u[-1],) + m + (w[0],)
                    if any((chain[k], chain[k + 1]) not in self.steps for k in range(len(chain) - 1)):
                        continue
                    top = b.offset - len(m) + 1 if m else b.offset + 1
                    for o in range(-b.offset, top + 1):
                        key = canonical_path(u, m, w, o)
                        if key not in seen and self.contains_path(key):
                            seen.add(key)
        return sorted(seen, key=lambda k: (len(k[0]) + len(k[1]) + len(k[2]), k))

    # ============================================
    # 인덱스 배열
    # ============================================

    def index_of(self, trace: BiLassoTrace) -> int:
        """
        트레이스의 인덱스

        Raises:
            UniverseOverflowError: 경로나 현재 시점이 U⁺ 밖
        """
        key = canonical_path(*trace.path)
        k = self.path_index.get(key)
        if k is None or abs(trace.present) > self.bounds.outer:
            raise UniverseOverflowError(f"trace {trace} is outside {self.name}", trace)
        return k * self.width + trace.present + self.bounds.outer

    def trace_at(self, index: int) -> BiLassoTrace:
        path, j = divmod(int(index), self.width)
        return BiLassoTrace.on_path(self.paths[path], j - self.bounds.outer)

    @cached_property
    def presents(self) -> np.ndarray:
        """인덱스별 현재 시점"""
        row = np.arange(self.width) - self.bounds.outer
        return np.tile(row, len(self.paths))

    @cached_property
    def path_of(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.paths)), self.width)

    @cached_property
    def interior_mask(self) -> np.ndarray:
        return np.abs(self.presents) <= self.bounds.present

    @cached_property
    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(self.interior_mask)

    @cached_property
    def reversed_path_index(self) -> np.ndarray:
        """경로별 역전 경로 인덱스 (범위 밖이면 -1)"""
        return np.array([self.path_index.get(reverse_path(key), -1) for key in self.paths], dtype=np.int64)

    @cached_property
    def reverse_index(self) -> np.ndarray:
        """트레이스별 ⟲ 상대 인덱스 (범위 밖이면 -1)"""
        target = self.reversed_path_index[self.path_of]
        column = self.width - 1 - (np.arange(self.size) % self.width)
        return np.where(target >= 0, target * self.width + column, -1)

    @cached_property
    def right_period(self) -> np.ndarray:
        return np.array([len(key[2]) for key in self.paths], dtype=np.int64)

    @cached_property
    def right_start(self) -> np.ndarray:
        """오른쪽 주기 영역 시작 시점"""
        return np.array([key[3] + len(key[1]) for key in self.paths], dtype=np.int64)

    def _window(self, margin: int) -> np.ndarray:
        lo = -self.bounds.outer - margin
        hi = self.bounds.outer + margin
        return np.array(
            [[self.state_index[state_at(key, n)] for n in range(lo, hi + 1)] for key in self.paths],
            dtype=np.int64,
        ).reshape(len(self.paths), hi - lo + 1)

    @cached_property
    def _state_window(self) -> Tuple[int, np.ndarray]:
        margin = self.bounds.outer + self.bounds.loop + self.bounds.offset + self.bounds.middle + 2
        return margin, self._window(margin)

    def state_at_shift(self, z: int) -> np.ndarray:
        """인덱스별 σ(i+z)의 상태 번호"""
        margin, window = self._state_window
        if abs(z) > margin:
            window = self._window(abs(z))
            margin = abs(z)
        start = margin + z
        return window[:, start:start + self.width].reshape(-1)

    @cached_property
    def present_state(self) -> np.ndarray:
        """인덱스별 현재 상태 번호"""
        return self.state_at_shift(0)

    def path_mask(self, edges: Iterable[Edge]) -> np.ndarray:
        """경로별: 모든 전이가 edges에 속하는가"""
        allowed = frozenset(edges)
        return np.array([all(e in allowed for e in path_steps(key)) for key in self.paths], dtype=bool)

    # ============================================
    # 집합 생성
    # ============================================

    def make(self, mask: np.ndarray) -> "TraceSet":
        return TraceSet(self, mask)

    def empty(self) -> "TraceSet":
        return TraceSet(self, np.zeros(self.size, dtype=bool))

    def interior(self) -> "TraceSet":
        """U (범위 내 |present| ≤ I 트레이스 전체)"""
        return TraceSet(self, self.interior_mask)

    def everything(self) -> "TraceSet":
        """U⁺"""
        return TraceSet(self, np.ones(self.size, dtype=bool))

    def of(self, traces: Iterable[BiLassoTrace]) -> "TraceSet":
        mask = np.zeros(self.size, dtype=bool)
        for t in traces:
            mask[self.index_of(t)] = True
        return TraceSet(self, mask)

    def states_mask(self, states: Iterable[str], shift: int = 0) -> np.ndarray:
        codes = [self.state_index[s] for s in states if s in self.state_index]
        return np.isin(self.state_at_shift(shift), codes)

    def sigma(self, states: Iterable[str]) -> "TraceSet":
        """σ_S: 현재 상태가 S에 있는 U 트레이스"""
        return TraceSet(self, self.interior_mask & self.states_mask(states))

    def pi(self, edges: Iterable[Edge]) -> "TraceSet":
        """π_t: (σ_i, σ_{i+1}) ∈ t인 U 트레이스"""
        n = len(self.alphabet)
        table = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if a in self.state_index and b in self.state_index:
                table[self.state_index[a], self.state_index[b]] = True
        hit = table[self.present_state, self.state_at_shift(1)]
        return TraceSet(self, self.interior_mask & hit)

    def model(self, edges: Iterable[Edge], plus: bool = False) -> "TraceSet":
        """M ∩ U (plus=True면 M ∩ U⁺)"""
        mask = self.path_mask(edges)[self.path_of]
        if not plus:
            mask = mask & self.interior_mask
        return TraceSet(self, mask)


class TraceSet:
    """
    우주 U⁺ 위의 트레이스 집합 (불변 bool 마스크)

    집합 연산은 같은 우주의 집합끼리만 허용한다.
    """

    __slots__ = ("universe", "mask", "_hash")

    def __init__(self, universe: TraceUniverse, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (universe.size,):
            raise ValueError(f"mask of shape {mask.shape} does not fit universe of size {universe.size}")
        mask = mask.copy()
        mask.setflags(write=False)
        self.universe = universe
        self.mask = mask
        self._hash: Optional[int] = None

    def _same(self, other: "TraceSet") -> None:
        if not isinstance(other, TraceSet) or other.universe is not self.universe:
            raise CarrierMismatchError("trace sets belong to different universes")

    def __or__(self, other: "TraceSet") -> "TraceSet":
        self._same(other)
        return TraceSet(self.universe, self.mask | other.mask)

    def __and__(self, other: "TraceSet") -> "TraceSet":
        self._same(other)
        return TraceSet(self.universe, self.mask & other.mask)

    def __sub__(self, other: "TraceSet") -> "TraceSet":
        self._same(other)
        return TraceSet(self.universe, self.mask & ~other.mask)

    def __le__(self, other: "TraceSet") -> bool:
        self._same(other)
        return not np.any(self.mask & ~other.mask)

    def __ge__(self, other: "TraceSet") -> bool:
        return other <= self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return other.universe is self.universe and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.universe), np.packbits(self.mask).tobytes()))
        return self._hash

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __iter__(self) -> Iterator[BiLassoTrace]:
        for k in np.flatnonzero(self.mask):
            yield self.universe.trace_at(k)

    def __contains__(self, trace: BiLassoTrace) -> bool:
        try:
            return bool(self.mask[self.universe.index_of(trace)])
        except UniverseOverflowError:
            return False

    def __repr__(self) -> str:
        return f"TraceSet({len(self)} traces in {self.universe.name})"

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_empty(self) -> bool:
        return not self.mask.any()

    def interior(self) -> "TraceSet":
        """U 부분만"""
        return TraceSet(self.universe, self.mask & self.universe.interior_mask)

    def is_interior(self) -> bool:
        return not np.any(self.mask & ~self.universe.interior_mask)

    def complement(self) -> "TraceSet":
        """U 안의 여집합"""
        return TraceSet(self.universe, self.universe.interior_mask & ~self.mask)

    def _overflow(self, offending: np.ndarray, what: str) -> UniverseOverflowError:
        trace = self.universe.trace_at(int(np.flatnonzero(offending)[0]))
        logger.error(f"{what} of {trace} leaves {self.universe.name}")
        return UniverseOverflowError(f"{what} of {trace} leaves U⁺ of {self.universe.name}", trace)

    def next(self) -> "TraceSet":
        """⊕X = {⟨i−1,σ⟩ : ⟨i,σ⟩ ∈ X}"""
        u = self.universe
        first = (np.arange(u.size) % u.width) == 0
        if np.any(self.mask & first):
            raise self._overflow(self.mask & first, "⊕")
        result = np.zeros(u.size, dtype=bool)
        result[self.indices - 1] = True
        return TraceSet(u, result)

    def prev(self) -> "TraceSet":
        """⊖X = {⟨i+1,σ⟩ : ⟨i,σ⟩ ∈ X}"""
        u = self.universe
        last = (np.arange(u.size) % u.width) == u.width - 1
        if np.any(self.mask & last):
            raise self._overflow(self.mask & last, "⊖")
        result = np.zeros(u.size, dtype=bool)
        result[self.indices + 1] = True
        return TraceSet(u, result)

    def shift(self, n: int) -> "TraceSet":
        """⊕^n (음수면 ⊖^|n|)"""
        result = self
        for _ in range(abs(n)):
            result = result.next() if n > 0 else result.prev()
        return result

    def reverse(self) -> "TraceSet":
        """⟲X = {⟨−i, λk.σ(−k)⟩ : ⟨i,σ⟩ ∈ X}"""
        u = self.universe
        target = u.reverse_index
        members = self.indices
        if np.any(target[members] < 0):
            raise self._overflow(self.mask & (target < 0), "⟲")
        result = np.zeros(u.size, dtype=bool)
        result[target[members]] = True
        return TraceSet(u, result)

    def project(self, state: str) -> "TraceSet":
        """X↓s: 현재 상태가 s인 원소"""
        return TraceSet(self.universe, self.mask & self.universe.states_mask([state]))

    def present_states(self) -> FrozenSet[str]:
        codes = np.unique(self.universe.present_state[self.mask])
        return frozenset(self.universe.alphabet[c] for c in codes)

    def format(self, limit: int = 8) -> str:
        shown = [t.format() for _, t in zip(range(limit), self)]
        more = len(self) - len(shown)
        return "{" + ", ".join(shown) + (f", … (+{more})" if more > 0 else "") + "}"
