"""
Bi-Lasso Traces
양방향 궁극적 주기 무한 트레이스의 정규형 표현
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

Word = Tuple[str, ...]
PathKey = Tuple[Word, Word, Word, int]


def primitive_root(word: Sequence[str]) -> Word:
    """word = r^k인 가장 짧은 r"""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return tuple(word[:p])
    return tuple(word)


def _rotate_left(word: Word) -> Word:
    return word[1:] + word[:1]


def _rotate_right(word: Word) -> Word:
    return word[-1:] + word[:-1]


def canonical_path(left: Sequence[str], middle: Sequence[str], right: Sequence[str], offset: int) -> PathKey:
    """
    경로 표현 (u, v, w, o)의 정규형

    1. 두 루프를 원시 주기로 줄인다
    2. 중간 문자를 오른쪽 루프에 먼저, 그다음 왼쪽 루프에 흡수한다
    3. 중간이 비면: 순수 주기 경로는 o = 0으로 회전, 아니면 접합점을 가장 왼쪽으로 옮긴다

    Returns:
        (u, v, w, o) 정규형
    """
    u = primitive_root(tuple(left))
    w = primitive_root(tuple(right))
    m = tuple(middle)
    o = offset
    if not u or not w:
        raise ValueError("bi-lasso loops must be nonempty")

    while m:
        if m[-1] == w[-1]:
            w = (m[-1],) + w[:-1]
            m = m[:-1]
        elif m[0] == u[0]:
            u = _rotate_left(u)
            m = m[1:]
            o += 1
        else:
            break

    if not m:
        if u == w:
            # 순수 주기 경로는 위상을 루프 회전에 담고 o = 0
            shift = o % len(w)
            phase = w[-shift:] + w[:-shift] if shift else w
            return phase, (), phase, 0
        # Fine–Wilf: 두 주기가 |u|+|w|만큼 일치하면 순수 주기
        for _ in range(len(u) + len(w)):
            if u[-1] != w[-1]:
                break
            u = _rotate_right(u)
            w = _rotate_right(w)
            o -= 1
    return u, m, w, o


def is_periodic(key: PathKey) -> bool:
    """중간이 비고 두 루프가 같은 순수 주기 경로"""
    u, m, w, _ = key
    return not m and u == w


def junction_span(key: PathKey) -> Tuple[int, int]:
    """
    경로의 비주기 구간 [시작, 끝]

    중간이 있으면 중간이 차지하는 시점 구간, 없으면 가능한 접합점 범위.
    순수 주기 경로에는 의미가 없다.
    """
    u, m, w, o = key
    if m:
        return o, o + len(m) - 1
    steps = 0
    while steps < len(u) + len(w) and u[0] == w[0]:
        u = _rotate_left(u)
        w = _rotate_left(w)
        steps += 1
    return o, o + steps


def reverse_path(key: PathKey) -> PathKey:
    """시간 역전 λk.σ(−k)의 정규형"""
    u, m, w, o = key
    return canonical_path(tuple(reversed(w)), tuple(reversed(m)), tuple(reversed(u)), -(o + len(m)) + 1)


def state_at(key: PathKey, n: int) -> str:
    """σ(n)"""
    u, m, w, o = key
    if n < o:
        return u[(n - o) % len(u)]
    if n < o + len(m):
        return m[n - o]
    return w[(n - o - len(m)) % len(w)]


def path_steps(key: PathKey) -> List[Tuple[str, str]]:
    """경로가 사용하는 모든 전이 (루프 순환, 접합부 포함)"""
    u, m, w, _ = key
    steps = [(u[k], u[(k + 1) % len(u)]) for k in range(len(u))]
    steps += [(w[k], w[(k + 1) % len(w)]) for k in range(len(w))]
    chain = (u[-1],) + m + (w[0],)
    steps += [(chain[k], chain[k + 1]) for k in range(len(chain) - 1)]
    return steps


@dataclass(frozen=True, order=True)
class BiLassoTrace:
    """
    현재 시점이 있는 양방향 lasso 트레이스 ⟨i, σ⟩

    σ(n) = left_loop 순환 (n < offset), middle (offset ≤ n < offset+|middle|),
    right_loop 순환 (n ≥ offset+|middle|). 항상 정규형으로 생성한다.
    """

    left_loop: Word
    middle: Word
    right_loop: Word
    offset: int
    present: int

    @classmethod
    def of(
        cls,
        left: Iterable[str],
        middle: Iterable[str],
        right: Iterable[str],
        offset: int = 0,
        present: int = 0,
    ) -> "BiLassoTrace":
        """정규화하여 생성"""
        u, m, w, o = canonical_path(tuple(left), tuple(middle), tuple(right), offset)
        return cls(u, m, w, o, present)

    @classmethod
    def on_path(cls, key: PathKey, present: int) -> "BiLassoTrace":
        u, m, w, o = key
        return cls(u, m, w, o, present)

    @property
    def path(self) -> PathKey:
        return self.left_loop, self.middle, self.right_loop, self.offset

    def canonicalize(self) -> "BiLassoTrace":
        return BiLassoTrace.on_path(canonical_path(*self.path), self.present)

    def state_at(self, n: int) -> str:
        return state_at(self.path, n)

    @property
    def present_state(self) -> str:
        return self.state_at(self.present)

    def shifted(self, delta: int) -> "BiLassoTrace":
        """같은 경로, 현재 시점 + delta"""
        return BiLassoTrace(self.left_loop, self.middle, self.right_loop, self.offset, self.present + delta)

    def reversed(self) -> "BiLassoTrace":
        """⟨−i, λk.σ(−k)⟩"""
        return BiLassoTrace.on_path(reverse_path(self.path), -self.present)

    def window(self, lo: int, hi: int) -> List[str]:
        """σ(lo..hi-1)"""
        return [self.state_at(n) for n in range(lo, hi)]

    def format(self) -> str:
        """트레이스 리터럴 `^(u) v (w)^ @o !i`"""
        sep = "" if all(len(s) == 1 for s in self.left_loop + self.middle + self.right_loop) else " "
        u = sep.join(self.left_loop)
        m = sep.join(self.middle)
        w = sep.join(self.right_loop)
        middle = f" {m} " if m else " "
        return f"^({u}){middle}({w})^ @{self.offset} !{self.present}"

    def __str__(self) -> str:
        return self.format()
