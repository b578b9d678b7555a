"""
Completeness Service
완전성 판정, L_F/R_F 변환, complete shell/core 고정점 반복
"""

from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from src.config.defaults import AnalysisDefaults
from src.exceptions import CompletenessError, CrossValidationError, LatticeError, SubsetCapError
from src.models.completeness import CompletenessVerdict, FixpointTransfer, IterationStep, ShellCoreReport
from src.models.lattice import Element, Lattice, MonotoneFn, PowersetLattice, Uco
from src.services.lattice_service import atomwise_adjoint, gfp, lfp, max_preimages, moore_closure


def _cap(cap: Optional[int]) -> int:
    return cap or AnalysisDefaults.LATTICE_CHECK_CAP


def _adjoint_route(f: MonotoneFn, lat: Lattice) -> bool:
    return f.additive and isinstance(lat, PowersetLattice) and lat.order == "subset"


def _verdict_at(rho: Uco, f: MonotoneFn, args: Tuple[Element, ...], method: str) -> Optional[CompletenessVerdict]:
    concrete = rho.apply(f(*args))
    abstract = rho.apply(f(*(rho.apply(a) for a in args)))
    if concrete == abstract:
        return None
    return CompletenessVerdict(
        complete=False,
        function=f.name,
        witness=args,
        concrete_side=concrete,
        abstract_side=abstract,
        method=method,
    )


def is_complete(rho: Uco, f: MonotoneFn, cap: Optional[int] = None) -> CompletenessVerdict:
    """
    ρ ∘ f = ρ ∘ f ∘ ρ 판정 (n-항이면 모든 인자에 ρ 적용)

    작은 격자는 인자 튜플 전수 검사, 큰 멱집합 격자 위의 가법 함수는
    단원소 튜플 탐색 후 단면 함수의 adjoint 기준(∀y ∈ ρ. g^r(y) ∈ ρ)으로 판정.

    Args:
        rho: uco
        f: 함수
        cap: 전수 검사 상한

    Returns:
        CompletenessVerdict (실패 시 반례 인자 튜플)
    """
    lat = rho.carrier
    cap = _cap(cap)

    if lat.size ** max(f.arity, 1) <= cap:
        elements = lat.elements()
        table = {x: rho.apply(x) for x in elements}
        for args in product(elements, repeat=f.arity):
            concrete = rho.apply(f(*args))
            abstract = rho.apply(f(*(table[a] for a in args)))
            if concrete != abstract:
                return CompletenessVerdict(False, f.name, args, concrete, abstract, "exhaustive")
        return CompletenessVerdict(True, f.name)

    if not _adjoint_route(f, lat):
        raise SubsetCapError(f"completeness of {f.name} on {lat.name} needs more than {cap} evaluations")

    # 1) 작은 값부터 단원소 인자 튜플 탐색
    singletons = [frozenset([a]) for a in lat.atoms_by_magnitude()]
    for args in product(singletons, repeat=f.arity):
        found = _verdict_at(rho, f, args, "singleton")
        if found is not None:
            return found

    # 2) 단면 adjoint 기준 (ρ가 meet-닫힘이므로 단원소 단면으로 충분)
    for position, fixed, section in _sections(f, lat, cap):
        adjoint = atomwise_adjoint(section, lat)
        for y in rho.fixpoints:
            pre = adjoint(y)
            if pre in rho.fixpoints:
                continue
            candidate = fixed[:position] + (pre,) + fixed[position:]
            found = _verdict_at(rho, f, candidate, "adjoint")
            if found is None:
                lifted = fixed[:position] + (rho.apply(pre),) + fixed[position:]
                found = _verdict_at(rho, f, lifted, "adjoint")
            if found is None:
                raise CrossValidationError(f"adjoint criterion failed for {f.name} but no witness was found")
            return found
    return CompletenessVerdict(True, f.name, method="adjoint")


def _sections(
    f: MonotoneFn, lat: Lattice, cap: int
) -> Iterator[Tuple[int, Tuple[Element, ...], MonotoneFn]]:
    """
    n-항 함수의 단항 단면 열거 (위치, 고정 인자, 단면)

    작은 격자는 모든 원소로, 큰 멱집합 격자의 가법 함수는 단원소로 고정한다.
    """
    if f.arity == 1:
        yield 0, (), f
        return
    if f.arity == 0:
        return
    if lat.size ** f.arity <= cap:
        values: Sequence[Element] = lat.elements()
    elif _adjoint_route(f, lat):
        values = [frozenset([a]) for a in lat.atoms]
    else:
        raise SubsetCapError(f"sections of {f.name} need more than {cap} evaluations")
    for position in range(f.arity):
        for fixed in product(values, repeat=f.arity - 1):
            yield position, tuple(fixed), f.section(position, tuple(fixed))


def _preimages(y: Element, fns: Sequence[MonotoneFn], lat: Lattice, cap: int) -> List[Tuple[str, Element]]:
    """∪_{f∈F} max{x : f(x) ≤ y} (함수 이름과 함께)"""
    found: List[Tuple[str, Element]] = []
    for f in fns:
        for _, _, section in _sections(f, lat, cap):
            for x in max_preimages(section, y, lat, cap):
                found.append((section.name, x))
    return found


def _candidates(eta: Uco, cap: int) -> Iterable[Element]:
    lat = eta.carrier
    if lat.size <= cap:
        return lat.elements()
    # 열거 불가능한 격자에서는 η의 원소만 검사한다
    return eta.fixpoints


def l_transform(eta: Uco, fns: Sequence[MonotoneFn], cap: Optional[int] = None) -> FrozenSet[Element]:
    """
    L_F(η) = {y : ∪_{f∈F} max{x : f(x) ≤ y} ⊆ η}

    Args:
        eta: uco
        fns: 함수 집합 F
        cap: 열거 상한

    Returns:
        원소 집합
    """
    cap = _cap(cap)
    lat = eta.carrier
    kept = []
    for y in _candidates(eta, cap):
        if all(x in eta.fixpoints for _, x in _preimages(y, fns, lat, cap)):
            kept.append(y)
    return frozenset(kept)


def r_transform(eta: Uco, fns: Sequence[MonotoneFn], cap: Optional[int] = None) -> Uco:
    """R_F(η) = Moore(∪_{f∈F, y∈η} max{x : f(x) ≤ y})"""
    cap = _cap(cap)
    lat = eta.carrier
    generators = [x for y in eta.fixpoints for _, x in _preimages(y, fns, lat, cap)]
    return Uco(carrier=lat, fixpoints=moore_closure(generators, lat), name=f"R({eta.name})")


def complete_shell(rho: Uco, fns: Sequence[MonotoneFn], cap: Optional[int] = None) -> ShellCoreReport:
    """
    complete shell = ⊓_i R_F^i(ρ)

    매 라운드 현재 패밀리 전체에서 최대 역상을 다시 계산해 Moore 폐포에 더한다.

    Returns:
        ShellCoreReport (라운드별 추가 원소)
    """
    cap = _cap(cap)
    lat = rho.carrier
    family = rho.fixpoints
    steps: List[IterationStep] = []
    while True:
        step = IterationStep(index=len(steps) + 1)
        generators = []
        for y in family:
            for name, x in _preimages(y, fns, lat, cap):
                generators.append(x)
                if x not in family:
                    step.notes.append(f"max{{x : {name}(x) ≤ {lat.format(y)}}} = {lat.format(x)}")
        refined = moore_closure(list(family) + generators, lat)
        step.added = sorted(refined - family, key=lat.format)
        steps.append(step)
        logger.debug(f"shell round {step.index}: +{len(step.added)} fixpoints")
        if not step.added:
            break
        family = refined

    result = Uco(carrier=lat, fixpoints=family, name=f"shell({rho.name})")
    _verify_complete(result, fns, cap, "shell")
    logger.info(f"complete shell of {rho.name}: {len(family)} fixpoints after {len(steps)} rounds")
    return ShellCoreReport("shell", [f.name for f in fns], rho, result, steps)


def complete_core(rho: Uco, fns: Sequence[MonotoneFn], cap: Optional[int] = None) -> ShellCoreReport:
    """
    complete core = ⊔_i L_F^i(ρ)

    η_{k+1} = η_k ∩ L_F(η_k)를 안정될 때까지 반복한다.

    Raises:
        CompletenessError: 결과가 meet-닫힌 패밀리가 아닌 경우 (core 부재)
    """
    cap = _cap(cap)
    lat = rho.carrier
    family = rho.fixpoints
    steps: List[IterationStep] = []
    while True:
        step = IterationStep(index=len(steps) + 1)
        kept = set()
        for y in family:
            outside = [(name, x) for name, x in _preimages(y, fns, lat, cap) if x not in family]
            if outside:
                step.removed.append(y)
                for name, x in outside:
                    step.notes.append(
                        f"max{{x : {name}(x) ≤ {lat.format(y)}}} = {lat.format(x)} ∉ η, removing {lat.format(y)}"
                    )
            else:
                kept.add(y)
        step.removed.sort(key=lat.format)
        steps.append(step)
        logger.debug(f"core round {step.index}: -{len(step.removed)} fixpoints")
        if not step.removed:
            break
        family = frozenset(kept)

    try:
        result = Uco(carrier=lat, fixpoints=family, name=f"core({rho.name})")
    except LatticeError as e:
        raise CompletenessError(f"no complete core of {rho.name}: surviving family is not meet-closed ({e})") from e
    _verify_complete(result, fns, cap, "core")
    logger.info(f"complete core of {rho.name}: {len(family)} fixpoints after {len(steps)} rounds")
    return ShellCoreReport("core", [f.name for f in fns], rho, result, steps)


def _verify_complete(result: Uco, fns: Sequence[MonotoneFn], cap: int, mode: str) -> None:
    for f in fns:
        verdict = is_complete(result, f, cap)
        if not verdict.complete:
            raise CrossValidationError(f"computed {mode} is not complete for {f.name} (witness {verdict.witness})")


def compose_with(rho: Uco, f: MonotoneFn) -> MonotoneFn:
    """ρ ∘ f (단항)"""
    return MonotoneFn(name=f"{rho.name}∘{f.name}", lattice=f.lattice, arity=1, func=lambda x: rho.apply(f(x)))


def check_fixpoint_transfer(rho: Uco, f: MonotoneFn, cap: Optional[int] = None) -> FixpointTransfer:
    """
    lfp(ρ∘f) = ρ(lfp(f)), gfp(ρ∘f) = ρ(gfp(f)) 검사

    Raises:
        CompletenessError: 전제 조건(ρ가 f에 대해 완전) 위반, 반례 포함
    """
    if f.arity != 1:
        raise LatticeError(f"fixpoint transfer needs a unary function, {f.name} has arity {f.arity}")
    lat = rho.carrier
    verdict = is_complete(rho, f, cap)
    if not verdict.complete:
        shown = ", ".join(lat.format(a) for a in verdict.witness or ())
        raise CompletenessError(f"{rho.name} is not complete for {f.name}: counterexample x = {shown}")

    abstract_fn = compose_with(rho, f)
    lfp_abstracted = rho.apply(lfp(f, lat))
    lfp_abstract = lfp(abstract_fn, lat)
    gfp_abstracted = rho.apply(gfp(f, lat))
    gfp_abstract = gfp(abstract_fn, lat)

    differing = []
    if lfp_abstracted != lfp_abstract:
        differing.append(f"lfp: ρ(lfp f) = {lat.format(lfp_abstracted)} vs lfp(ρ∘f) = {lat.format(lfp_abstract)}")
    if gfp_abstracted != gfp_abstract:
        differing.append(f"gfp: ρ(gfp f) = {lat.format(gfp_abstracted)} vs gfp(ρ∘f) = {lat.format(gfp_abstract)}")
    for line in differing:
        logger.warning(line)
    return FixpointTransfer(not differing, lfp_abstracted, lfp_abstract, gfp_abstracted, gfp_abstract, differing)


def function_by_name(fns: Dict[str, MonotoneFn], name: str) -> MonotoneFn:
    """이름으로 함수 조회"""
    try:
        return fns[name]
    except KeyError as e:
        raise LatticeError(f"unknown function {name!r}; known: {sorted(fns)}") from e


# ============================================
# 전수 탐색 (작은 격자에서 shell/core 교차 검증)
# ============================================


def meet_closed_families(lat: Lattice, cap: Optional[int] = None) -> List[FrozenSet[Element]]:
    """
    top을 포함하는 meet-닫힌 원소 집합 전부 (= 격자 위 uco 전부)

    Raises:
        SubsetCapError: 2^(|L|-1)이 cap 초과
    """
    cap = cap or AnalysisDefaults.UCO_ENUMERATION_CAP
    others = [x for x in lat.elements() if x != lat.top]
    if 2 ** len(others) > cap:
        raise SubsetCapError(f"{lat.name}: {2 ** len(others)} candidate families exceed the cap {cap}")
    families = []
    for bits in range(1 << len(others)):
        family = frozenset([lat.top] + [others[k] for k in range(len(others)) if bits >> k & 1])
        if all(lat.meet(a, b) in family for a in family for b in family):
            families.append(family)
    return families


def _complete_for_all(family: FrozenSet[Element], lat: Lattice, fns: Sequence[MonotoneFn]) -> bool:
    uco = Uco(carrier=lat, fixpoints=family)
    return all(is_complete(uco, f).complete for f in fns)


def exhaustive_shell(rho: Uco, fns: Sequence[MonotoneFn]) -> FrozenSet[Element]:
    """ρ를 포함하는 완전 패밀리 중 가장 작은 것 (모든 후보의 교집합)"""
    lat = rho.carrier
    candidates = [
        family for family in meet_closed_families(lat)
        if rho.fixpoints <= family and _complete_for_all(family, lat, fns)
    ]
    common = frozenset.intersection(*candidates)
    if common not in candidates:
        raise CrossValidationError(f"complete refinements of {rho.name} have no least element")
    return common


def exhaustive_core(rho: Uco, fns: Sequence[MonotoneFn]) -> Optional[FrozenSet[Element]]:
    """ρ에 포함되는 완전 패밀리 중 가장 큰 것 (없으면 None)"""
    lat = rho.carrier
    candidates = [
        family for family in meet_closed_families(lat)
        if family <= rho.fixpoints and _complete_for_all(family, lat, fns)
    ]
    largest = frozenset().union(*candidates)
    return largest if largest in candidates else None
