"""Unit sets of finite group rings, rank-1 units and integral unit checks."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime, n_order

from .algebra import dense_algebra
from .delta import delta_p, lift_chain
from .errors import InvalidSpec, NotAUnit, RingTooLarge, SearchTooLarge, UnsupportedContext
from .group_rings import (
    GroupRingElement,
    as_group_ring_element,
    is_unit,
    locally_constant_functions,
    regular_rep_det,
)
from .groups import FgAbelianGroup
from .rings import ZZ

UNIT_ENUMERATION_LIMIT = 1 << 22
HIGMAN_SEARCH_LIMIT = 1 << 24


@dataclass
class UnitSet:
    """A list of units of ``ring[group]`` together with how it was produced."""

    ring: object
    group: FgAbelianGroup
    mode: str  # "all", "reduced", "rank1" or "tautological"
    units: list
    precision: object = None
    depth: int | None = None
    counts: dict = field(default_factory=dict)
    chains: dict = field(default_factory=dict)
    p_power_torsion: bool = True

    def __len__(self) -> int:
        return len(self.units)

    def __iter__(self):
        return iter(self.units)

    def __contains__(self, u) -> bool:
        return u in set(self.units)

    def as_set(self) -> set:
        return set(self.units)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor,
            "group": self.group.descriptor,
            "mode": self.mode,
            "precision": self.precision,
            "depth": self.depth,
            "units": [u.render() for u in self.units],
            "counts": dict(sorted(self.counts.items())),
        }


def _sort_key(u: GroupRingElement):
    """Canonical order: by support (identity first), then by coefficients."""
    group, ring = u.group, u.ring
    return tuple(
        (group.index(m) if group.is_finite else m.coords, tuple(int(v) for v in ring.to_vector(u.terms[m])))
        for m in u.support()
    )


def _finalize(ring, group, rows) -> list:
    units = [GroupRingElement.from_vector(ring, group, row) for row in rows]
    return sorted(units, key=_sort_key)


def enumerate_units(ring, group: FgAbelianGroup | None = None) -> UnitSet:
    """Every unit of a finite ring (or finite group ring).

    A unit is certified by its multiplication matrix being invertible mod p,
    which is equivalent to invertibility over p-power characteristic.
    """
    group = group if group is not None else FgAbelianGroup()
    if ring is ZZ:
        raise UnsupportedContext("the integers have infinitely many elements")
    alg = dense_algebra(ring, group)
    if alg.size > UNIT_ENUMERATION_LIMIT:
        raise RingTooLarge(f"{alg.size} elements exceed {UNIT_ENUMERATION_LIMIT}")
    X = alg.all_elements()
    rows = X[alg.units_mask(X)]
    units = _finalize(ring, group, rows)
    return UnitSet(ring, group, "all", units, ring.precision, None, {"elements": alg.size, "units": len(units)})


def _reduced_candidates(alg, start: int, stop: int) -> np.ndarray:
    """Rows with augmentation 1, indexed by the coefficients off the identity."""
    nA = alg.n // alg.group.order
    idx = np.arange(start, stop, dtype=np.int64)
    X = np.zeros((len(idx), alg.n), dtype=alg.dtype)
    for c in range(alg.n - 1, nA - 1, -1):
        m = int(alg.moduli[c])
        X[:, c] = idx % m
        idx //= m
    # a + sum_{m != 0} b_m = 1 fixes a = 1 - sum b_m in A
    aug = X[:, nA:].reshape(len(X), -1, nA).sum(axis=1)
    X[:, :nA] = np.asarray(alg.one, dtype=alg.dtype)[:nA] - aug
    return alg.reduce(X)


def _rank_one_chunk(args):
    ring, group, depth, start, stop, check_units = args
    alg = dense_algebra(ring, group)
    X = _reduced_candidates(alg, start, stop)
    if check_units:
        X = X[alg.units_mask(X)]
    low = alg.lower()
    X = X[low.is_zero(alg.delta(X))]
    results = []
    for row in X:
        reached, chain = lift_chain(alg, row, depth)
        results.append((tuple(int(v) for v in row), reached, [tuple(int(v) for v in c) for c in chain]))
    return len(X), results


def reduced_candidate_count(ring, group: FgAbelianGroup) -> int:
    return ring.size ** (group.order - 1)


def enumerate_rank_one_reduced(ring, group: FgAbelianGroup, depth: int = 0, jobs: int = 1) -> UnitSet:
    """Reduced units with delta = 0 at the top precision that lift ``depth`` times.

    Survivors keep one lift chain each.  ``counts`` records how many
    candidates reach each lifting depth, which is where stabilization can be
    read off.  The result does not depend on ``jobs``.
    """
    if ring is ZZ:
        raise UnsupportedContext("enumeration needs a truncated coefficient ring")
    if not group.is_finite:
        raise UnsupportedContext(f"{group} is infinite")
    total = reduced_candidate_count(ring, group)
    if total > UNIT_ENUMERATION_LIMIT:
        raise RingTooLarge(f"{total} reduced candidates exceed {UNIT_ENUMERATION_LIMIT}")
    p = ring.p
    p_group = group.is_p_power_torsion(p)
    step = max(1, math.ceil(total / max(jobs, 1)))
    step = min(step, 1 << 16)
    tasks = [(ring, group, depth, s, min(s + step, total), not p_group) for s in range(0, total, step)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_rank_one_chunk, tasks))
    else:
        outputs = [_rank_one_chunk(t) for t in tasks]

    reach = [0] * (depth + 1)
    survivors = []
    chains = {}
    alg = dense_algebra(ring, group)
    for _, results in outputs:
        for row, reached, chain in results:
            for k in range(reached + 1):
                reach[k] += 1
            if reached == depth:
                survivors.append(row)
                chains[row] = chain
    units = _finalize(ring, group, survivors)
    chain_elements = {}
    for u in units:
        rows = chains[tuple(int(v) for v in u.to_vector())]
        a, out = alg, [u]
        for row in rows[1:]:
            a = a.higher()
            out.append(GroupRingElement.from_vector(a.ring, group, row))
        chain_elements[u] = out
    counts = {"candidates": total, "survivors": len(units)}
    counts.update({f"lifted_{k}": n for k, n in enumerate(reach)})
    return UnitSet(ring, group, "rank1", units, ring.precision, depth, counts, chain_elements, p_group)


def tautological_units(ring, group: FgAbelianGroup, bound: int | None = None) -> UnitSet:
    """sum_i e_i [m_i] for every locally constant M-valued function."""
    units = [f.materialize() for f in locally_constant_functions(ring, group, bound)]
    units = sorted(units, key=_sort_key)
    return UnitSet(ring, group, "tautological", units, getattr(ring, "precision", None), None,
                   {"units": len(units)})


# --------------------------------------------------------------------------
# integral units


@dataclass(frozen=True)
class BassUnitSpec:
    """n = order of the cyclic group, k prime to n, m with k^m = 1 mod n."""

    n: int
    k: int
    m: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise InvalidSpec(f"n must be at least 2, got {self.n}")
        if self.k < 1 or math.gcd(self.k, self.n) != 1:
            raise InvalidSpec(f"k={self.k} must be positive and prime to n={self.n}")
        if self.m is None:
            object.__setattr__(self, "m", 1 if self.k % self.n == 1 else int(n_order(self.k, self.n)))
        if self.m < 1 or pow(self.k, self.m, self.n) != 1:
            raise InvalidSpec(f"k^m = {self.k}^{self.m} is not 1 mod {self.n}")


def bass_cyclic_unit(spec: BassUnitSpec) -> GroupRingElement:
    """(1 + g + ... + g^(k-1))^m + ((1 - k^m)/n)(1 + g + ... + g^(n-1)) in Z[C_n]."""
    n, k, m = spec.n, spec.k, spec.m
    group = FgAbelianGroup.cyclic(n)
    partial = GroupRingElement(ZZ, group, {(i,): 1 for i in range(k)})
    norm = GroupRingElement(ZZ, group, {(i,): 1 for i in range(n)})
    return partial**m + ((1 - k**m) // n) * norm


@dataclass
class HigmanReport:
    group: FgAbelianGroup
    bound: int
    order_bound: int
    candidates: int
    units: list
    torsion_units: list

    @property
    def expected(self) -> set:
        return {GroupRingElement.basis(ZZ, self.group, m) for m in self.group.elements()}

    @property
    def matches(self) -> bool:
        return set(self.torsion_units) == self.expected

    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "bound": self.bound,
            "order_bound": self.order_bound,
            "candidates": self.candidates,
            "unit_count": len(self.units),
            "torsion_units": [u.render() for u in self.torsion_units],
            "matches_group": self.matches,
        }


def higman_torsion_check(group: FgAbelianGroup, bound: int = 2, order_bound: int | None = None) -> HigmanReport:
    """Torsion units of Z[M] with augmentation 1 and coefficients in [-B, B]."""
    if not group.is_finite:
        raise UnsupportedContext(f"{group} is infinite")
    n = group.order
    order_bound = order_bound if order_bound is not None else 2 * n
    width = 2 * bound + 1
    if n * width**n > HIGMAN_SEARCH_LIMIT:
        raise SearchTooLarge(f"{n} * {width}^{n} candidates exceed {HIGMAN_SEARCH_LIMIT}")
    grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64).reshape(-1, n)
    grid = grid[grid.sum(axis=1) == 1]
    alg = dense_algebra(ZZ, group, p=2)
    mats = np.einsum("ni,ijk->njk", grid, np.asarray(alg.mult, dtype=np.int64))
    approx = np.rint(np.linalg.det(mats.astype(float))) if n else np.ones(len(grid))
    maybe = grid[np.abs(approx) == 1]
    units, torsion = [], []
    one = alg.asarray(alg.one)
    for row in maybe:
        u = GroupRingElement.from_vector(ZZ, group, row)
        if abs(regular_rep_det(u)) != 1:
            continue
        units.append(u)
        power = alg.asarray(row)
        for _ in range(order_bound):
            if (power == one).all():
                torsion.append(u)
                break
            power = alg.mul(power, alg.asarray(row))
    return HigmanReport(group, bound, order_bound, len(grid), sorted(units, key=_sort_key),
                        sorted(torsion, key=_sort_key))


@dataclass
class IntegralVerdict:
    status: str  # "tautological", "rejected" or "inconclusive"
    element: object = None
    prime: int | None = None
    witness: GroupRingElement | None = None
    primes_checked: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "element": None if self.element is None else str(self.element),
            "prime": self.prime,
            "witness": None if self.witness is None else self.witness.render(),
            "primes_checked": self.primes_checked,
        }


def integral_delta_unit_classify(u, prime_bound: int = 13) -> IntegralVerdict:
    """Either u = [m], or some p <= prime_bound has delta_p(u) != 0."""
    u = as_group_ring_element(u)
    if u.ring is not ZZ:
        raise UnsupportedContext("classification is for integral group rings")
    if not is_unit(u):
        raise NotAUnit(f"{u.render()} is not a unit")
    if len(u.terms) == 1:
        (m, a), = u.terms.items()
        if a == 1:
            return IntegralVerdict("tautological", u.group.render(m))
    checked = []
    for p in range(2, prime_bound + 1):
        if not isprime(p):
            continue
        checked.append(p)
        d = delta_p(u, p)
        if not d.is_zero():
            return IntegralVerdict("rejected", None, p, d, checked)
    return IntegralVerdict("inconclusive", None, None, None, checked)
