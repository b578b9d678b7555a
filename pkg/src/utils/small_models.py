"""
Small Models
소형 전이 시스템 전수 열거와 수식 말뭉치 생성 (교차 검증, 속성 테스트용)
"""

import random
from itertools import combinations, product
from typing import Iterator, List, Sequence

from src.models.formula import (
    Always,
    And,
    Eventually,
    Formula,
    Next,
    Not,
    Or,
    Reverse,
    StateProp,
    Until,
    WeakUntil,
)
from src.models.lattice import FiniteLattice, MonotoneFn
from src.models.transition_system import TransitionSystem

UNARY = {
    "not": Not,
    "next": Next,
    "reverse": Reverse,
    "eventually": Eventually,
    "always": Always,
}
BINARY = {
    "or": Or,
    "and": And,
    "until": Until,
    "weak_until": WeakUntil,
}


def _nonempty_subsets(items: Sequence[str]) -> List[tuple]:
    return [c for k in range(1, len(items) + 1) for c in combinations(items, k)]


def enumerate_total_systems(n: int, labelled: bool = True) -> Iterator[TransitionSystem]:
    """
    상태 "1".."n"의 모든 전체(total) 전이 시스템

    모든 상태에 후속자와 선행자가 있는 경우만 낸다. labelled=True면 p = {1}, q = {n}.
    """
    states = [str(k) for k in range(1, n + 1)]
    choices = _nonempty_subsets(states)
    labels = {"p": ["1"], "q": [states[-1]]} if labelled else None
    for index, successors in enumerate(product(choices, repeat=n)):
        edges = [(s, t) for s, targets in zip(states, successors) for t in targets]
        ts = TransitionSystem.build(states, edges, labels, name=f"total{n}_{index}")
        if ts.is_total():
            yield ts


def all_small_systems(max_states: int = 3, labelled: bool = True) -> Iterator[TransitionSystem]:
    for n in range(1, max_states + 1):
        yield from enumerate_total_systems(n, labelled)


def formula_corpus(
    atoms: Sequence[str],
    depth: int,
    unary: Sequence[str] = ("not", "next", "reverse", "eventually", "always"),
    binary: Sequence[str] = ("or", "until"),
) -> List[Formula]:
    """
    깊이 ≤ depth인 μ-없는 수식 전부 (중복 제거, 깊이 순)

    Args:
        atoms: 명제 이름
        depth: 연산자 중첩 깊이
        unary / binary: UNARY / BINARY 키
    """
    layers: List[List[Formula]] = [[StateProp(name=a) for a in atoms]]
    seen = set(layers[0])
    for _ in range(depth):
        below = [f for layer in layers for f in layer]
        top = layers[-1]
        fresh: List[Formula] = []
        for f in top:
            fresh.extend(UNARY[u](f) for u in unary)
        for name in binary:
            node = BINARY[name]
            for f in top:
                for g in below:
                    fresh.append(node(f, g))
                    if g not in top:
                        fresh.append(node(g, f))
        layers.append(_unseen(fresh, seen))
    return [f for layer in layers for f in layer]


def formula_chains(
    atoms: Sequence[str],
    depth: int,
    unary: Sequence[str] = ("not", "next", "reverse", "eventually", "always"),
    binary: Sequence[str] = ("or", "until"),
) -> List[Formula]:
    """
    깊이 ≤ depth인 사슬 수식 전부 (중복 제거, 깊이 순)

    이항 연산의 한쪽은 바로 아래 층 수식, 다른 쪽은 원자 명제 (양쪽 순서 모두).
    층 크기가 선형으로만 늘어 깊이 3까지 전수 검사할 수 있다.
    """
    props = [StateProp(name=a) for a in atoms]
    layers: List[List[Formula]] = [list(props)]
    seen = set(props)
    for _ in range(depth):
        fresh: List[Formula] = []
        for f in layers[-1]:
            fresh.extend(UNARY[u](f) for u in unary)
            for name in binary:
                for a in props:
                    fresh += [BINARY[name](f, a), BINARY[name](a, f)]
        layers.append(_unseen(fresh, seen))
    return [f for layer in layers for f in layer]


def _unseen(fresh: Sequence[Formula], seen: set) -> List[Formula]:
    layer = []
    for f in fresh:
        if f not in seen:
            seen.add(f)
            layer.append(f)
    return layer


def ltl_det_corpus(atoms: Sequence[str], depth: int) -> List[Formula]:
    """
    LTL_det 문법으로만 만든 수식 (깊이 ≤ depth)

    리터럴, ∧, ⊕, 가드 ∨ / U / W, G, F σ
    """
    props = [StateProp(name=a) for a in atoms]
    literals: List[Formula] = props + [Not(p) for p in props]
    layers: List[List[Formula]] = [literals]
    seen = set(literals)
    for _ in range(depth):
        below = [f for layer in layers for f in layer]
        top = layers[-1]
        fresh: List[Formula] = []
        for f in top:
            fresh += [Next(f), Always(f)]
            for g in below:
                fresh.append(And(f, g))
                for guard in props:
                    guarded = (And(guard, f), And(Not(guard), g))
                    fresh += [Or(*guarded), Until(*guarded), WeakUntil(*guarded)]
        if len(layers) == 1:
            fresh += [Eventually(p) for p in props]
        layers.append(_unseen(fresh, seen))
    return [f for layer in layers for f in layer]


def ltl_det_chains(atoms: Sequence[str], depth: int) -> List[Formula]:
    """
    깊이 ≤ depth인 LTL_det 사슬 수식 전부

    가드는 atoms[0], 다른 피연산자는 atoms[-1]로 고정하고 아래 층 수식 f마다
    ⊕f, G f, f ∧ b, (a∧f) ∨ (¬a∧b), (a∧f) U (¬a∧b), (a∧b) W (¬a∧f)를 만든다.
    """
    guard = StateProp(name=atoms[0])
    other = StateProp(name=atoms[-1])
    props = [StateProp(name=a) for a in atoms]
    literals: List[Formula] = props + [Not(p) for p in props]
    layers: List[List[Formula]] = [literals]
    seen = set(literals)
    for level in range(depth):
        fresh: List[Formula] = []
        for f in layers[-1]:
            fresh += [
                Next(f),
                Always(f),
                And(f, other),
                Or(And(guard, f), And(Not(guard), other)),
                Until(And(guard, f), And(Not(guard), other)),
                WeakUntil(And(guard, other), And(Not(guard), f)),
            ]
        if level == 0:
            fresh += [Eventually(p) for p in props]
        layers.append(_unseen(fresh, seen))
    return [f for layer in layers for f in layer]


# ============================================
# 작은 격자와 무작위 단조 함수
# ============================================


def small_lattices() -> List[FiniteLattice]:
    """원소 ≤ 6개 격자 모음 (사슬, 다이아몬드, N5, M3, 2×3 격자)"""
    return [
        FiniteLattice("chain5", "abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]),
        FiniteLattice("diamond", ["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")]),
        FiniteLattice("N5", ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]),
        FiniteLattice(
            "M3", ["0", "x", "y", "z", "1"], [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")]
        ),
        FiniteLattice(
            "grid2x3",
            ["00", "01", "02", "10", "11", "12"],
            [("00", "01"), ("01", "02"), ("10", "11"), ("11", "12"), ("00", "10"), ("01", "11"), ("02", "12")],
        ),
    ]


def random_monotone_fn(lat: FiniteLattice, rng: random.Random, name: str = "f") -> MonotoneFn:
    """무작위 표를 f'(x) = ⋁{f(y) : y ≤ x}로 단조화한 단항 함수"""
    elements = lat.elements()
    raw = {x: rng.choice(elements) for x in elements}
    table = {(x,): lat.join_all(raw[y] for y in elements if lat.leq(y, x)) for x in elements}
    return MonotoneFn(name, lat, 1, table=table)
