"""The delta_p operation and constructions built on it.

delta_p(x) = (phi(x) - x^p) / p, computed with exact division.  Over a
truncated ring A/p^r the result lives in A/p^(r-1): one digit is consumed
by every application, and the ring attached to the output records that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DenseAlgebra, dense_algebra
from .errors import (
    GroupNotFinite,
    GroupNotPPower,
    NotAUnit,
    NotSquareZero,
    PreconditionViolated,
    PrimeMismatch,
    UnsupportedContext,
    ValidationError,
)
from .group_rings import (
    GroupRingElement,
    as_group_ring_element,
    augmentation,
    component_count,
    frobenius_lift_groupring,
    is_unit,
)
from .groups import FgAbelianGroup
from .linalg import FpSolver
from .rings import ZZ, div_p, frobenius, is_zero, ring_of, times_p

# --------------------------------------------------------------------------
# delta and psi


def _prime(x, p: int | None) -> int:
    ring = x.ring if isinstance(x, GroupRingElement) else ring_of(x)
    if ring.p is None:
        if p is None:
            raise ValidationError("a prime is required over the integers")
        return p
    if p is not None and p != ring.p:
        raise PrimeMismatch(f"element lives over p={ring.p}, asked for p={p}")
    return ring.p


def frobenius_lift(x, p: int | None = None):
    """phi on a ring element or a group-ring element."""
    if isinstance(x, GroupRingElement):
        return frobenius_lift_groupring(x, p)
    _prime(x, p)
    return frobenius(x)


def delta_p(x, p: int | None = None):
    """(phi(x) - x^p)/p; truncated inputs lose one digit of precision."""
    p = _prime(x, p)
    if isinstance(x, GroupRingElement):
        return (frobenius_lift_groupring(x, p) - x**p).div_p(p)
    return div_p(frobenius(x) - x**p, p)


def psi(x, p: int | None = None):
    """x^p + p delta_p(x), which must agree with the Frobenius lift."""
    p = _prime(x, p)
    d = delta_p(x, p)
    if isinstance(x, GroupRingElement):
        return x**p + d.times_p(p)
    return x**p + times_p(d, p)


# --------------------------------------------------------------------------
# axiom verification


@dataclass
class DeltaAxiomReport:
    passed: bool
    checked: int
    failures: int = 0
    first_failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "first_failure": self.first_failure,
        }


def _dense_context(ring, group, p):
    group = group if group is not None else FgAbelianGroup()
    return dense_algebra(ring, group, p=p if ring is ZZ else None)


def _rows(alg: DenseAlgebra, elements) -> np.ndarray:
    vecs = []
    for x in elements:
        if not isinstance(x, GroupRingElement):
            x = as_group_ring_element(x, alg.group)
        vecs.append(x.to_vector())
    return alg.asarray(np.array(vecs, dtype=object).reshape(len(vecs), alg.n))


def verify_delta_axioms(ring, pairs=None, group: FgAbelianGroup | None = None, p: int | None = None,
                        chunk: int = 20000) -> DeltaAxiomReport:
    """Check delta(0) = delta(1) = 0 and the sum and product rules exactly.

    ``pairs`` is a sequence of element pairs, or a pair of arrays of dense
    coordinate rows; when omitted every pair of elements of a finite ring is
    checked.  Everything runs through the dense engine in batches.
    """
    alg = _dense_context(ring, group, p)
    p = alg.p
    low = alg if alg.is_exact else alg.lower()
    if pairs is None:
        if alg.is_exact:
            raise ValidationError("exhaustive checking needs a finite ring")
        elts = alg.all_elements()
        X = np.repeat(elts, len(elts), axis=0)
        Y = np.tile(elts, (len(elts), 1))
    elif isinstance(pairs, tuple) and len(pairs) == 2 and isinstance(pairs[0], np.ndarray):
        X, Y = alg.asarray(pairs[0]), alg.asarray(pairs[1])
    else:
        pairs = list(pairs)
        X = _rows(alg, [a for a, _ in pairs])
        Y = _rows(alg, [b for _, b in pairs])

    zero_one = alg.asarray(np.vstack([np.zeros(alg.n, dtype=object), alg.one]))
    if low.is_zero(alg.delta(zero_one)).all():
        failure = None
        failures = 0
    else:
        failure = {"identity": "delta(0) = delta(1) = 0"}
        failures = 1

    def lower(Z):
        return low.reduce(Z)

    checked = 2
    for start in range(0, len(X), chunk):
        x, y = X[start:start + chunk], Y[start:start + chunk]
        dx, dy = alg.delta(x), alg.delta(y)
        xp, yp = alg.power(x, p), alg.power(y, p)
        s = alg.add(x, y)
        cross = alg.sub(alg.add(xp, yp), alg.power(s, p))
        cross = cross // p if alg.is_exact else alg.div_p(cross)
        add_rhs = lower(dx + dy + cross)
        add_ok = low.equal(alg.delta(s), add_rhs)
        mul_rhs = lower(low.mul(lower(xp), dy) + low.mul(lower(yp), dx) + p * low.mul(dx, dy))
        mul_ok = low.equal(alg.delta(alg.mul(x, y)), mul_rhs)
        bad = ~(add_ok & mul_ok)
        failures += int(bad.sum())
        if failure is None and bad.any():
            i = int(np.argmax(bad))
            failure = {
                "identity": "sum" if not add_ok[i] else "product",
                "x": [str(v) for v in x[i]],
                "y": [str(v) for v in y[i]],
            }
        checked += len(x)
    return DeltaAxiomReport(failures == 0, checked, failures, failure)


# --------------------------------------------------------------------------
# Hensel lifting of delta-stable units


class _Lifter:
    """One lifting step A/p^E[M] -> A/p^(E+1)[M] for delta-stable elements.

    With u~ any lift and delta(u~) = p^(E-1) c, the lifts u~ + p^E eps
    satisfy delta = 0 exactly when phi(eps) = -c over A/p[M], a linear
    system because the p-power map is additive mod p.
    """

    def __init__(self, alg: DenseAlgebra):
        self.alg = alg
        self.hi = alg.higher()
        self.p = alg.p
        exps = alg.exps
        self.pE = np.array([self.p ** int(e) for e in exps], dtype=object)
        self.pE1 = np.array([self.p ** (int(e) - 1) for e in exps], dtype=object)
        # eps Phi = -c for row vectors, i.e. Phi^T eps^T = -c^T
        self.solver = FpSolver((np.asarray(alg.frob, dtype=object) % self.p).astype(np.int64).T, self.p)
        self.kernel = self.solver.kernel_elements()

    def obstruction(self, U):
        """c with delta(u~) = p^(E-1) c, for rows U in the lower algebra."""
        D = np.asarray(self.hi.delta(self.hi.asarray(U)), dtype=object)
        if (D % self.pE1).any():
            raise PreconditionViolated("delta(u) is not zero at the top precision")
        return (D // self.pE1) % self.p

    def solvable(self, U) -> np.ndarray:
        _, ok = self.solver.solve((-self.obstruction(U)).astype(np.int64))
        return ok

    def lifts(self, u) -> np.ndarray:
        """Every lift of the row u to the higher algebra with delta = 0 there."""
        U = self.hi.asarray(u)
        eps, ok = self.solver.solve((-self.obstruction(U)).astype(np.int64))
        if not ok[0]:
            return np.zeros((0, self.alg.n), dtype=self.hi.dtype)
        all_eps = (eps[0] + self.kernel) % self.p
        out = np.asarray(U, dtype=object) + all_eps.astype(object) * self.pE
        return self.hi.reduce(out.astype(self.hi.dtype))


def lifter_for(alg: DenseAlgebra) -> _Lifter:
    """The lifting step out of ``alg``, built once per algebra."""
    lifter = getattr(alg, "_lifter", None)
    if lifter is None:
        lifter = alg._lifter = _Lifter(alg)
    return lifter


def lift_chain(alg: DenseAlgebra, u, depth: int):
    """Depth-first search for a chain of delta-stable lifts of length ``depth``.

    Returns ``(reached, chain)`` where ``reached`` is the longest chain
    length found (at most ``depth``) and ``chain`` the dense rows of one
    longest chain, starting with ``u`` itself.
    """
    best = (0, [np.asarray(u).reshape(-1)])

    def search(a, row, level, chain):
        nonlocal best
        if level > best[0]:
            best = (level, chain)
        if level == depth:
            return True
        lifter = lifter_for(a)
        children = lifter.lifts(row)
        if not len(children):
            return False
        if level + 1 == depth:
            best = (depth, chain + [children[0]])
            return True
        hi = lifter.hi
        nxt = lifter_for(hi)
        ok = nxt.solvable(children)
        if not ok.any():
            if level + 1 > best[0]:
                best = (level + 1, chain + [children[0]])
            return False
        for child in children[ok]:
            if search(hi, child, level + 1, chain + [child]):
                return True
        return False

    search(alg, np.asarray(u).reshape(-1), 0, best[1])
    return best


def _dense_of(u: GroupRingElement):
    if u.ring is ZZ:
        raise UnsupportedContext("lifting needs a truncated coefficient ring")
    if not u.group.is_finite:
        raise GroupNotFinite(f"{u.group} is infinite")
    alg = dense_algebra(u.ring, u.group)
    return alg, alg.asarray(u.to_vector())


def delta_hensel_lift(u) -> list:
    """All lifts u' of u one digit up with u' = u mod p^r and delta(u') = 0 mod p^r."""
    u = as_group_ring_element(u)
    alg, U = _dense_of(u)
    lifter = lifter_for(alg)
    rows = lifter.lifts(U)
    return [GroupRingElement.from_vector(lifter.hi.ring, u.group, row) for row in rows]


# --------------------------------------------------------------------------
# rank-1 certification


@dataclass
class RankOneVerdict:
    status: str  # "yes_exact", "yes_to_depth" or "no"
    depth: int = 0
    witness: dict | None = None
    chain: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status != "no"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "depth": self.depth,
            "witness": self.witness,
            "chain": [c.render() for c in self.chain],
        }


def structural_certificate(u: GroupRingElement) -> bool:
    """u = sum c_m [m] with orthogonal c_m and c_m^(p^N) = c_m for every m.

    Such elements are sums of Teichmuller-type coefficients on disjoint
    components times group-like elements, so delta(u) vanishes at every
    precision, not only the available one.
    """
    if u.ring is ZZ:
        return len(u.terms) == 1 and next(iter(u.terms.values())) == 1
    coeffs = list(u.terms.values())
    if not coeffs:
        return False
    q = u.ring.p ** u.ring.frobenius_period
    for i, c in enumerate(coeffs):
        if c**q != c:
            return False
        for d in coeffs[i + 1:]:
            if not is_zero(c * d):
                return False
    return True


def is_rank_one_unit(u, p: int | None = None, depth: int = 0, structural: bool = True) -> RankOneVerdict:
    """Decide whether u is a rank-1 unit, as far as the context allows.

    Exact integer contexts are decided outright.  Truncated contexts return
    ``yes_exact`` only for structural certificates; otherwise the top-level
    delta must vanish and ``depth`` rounds of lifting must succeed.
    """
    u = as_group_ring_element(u)
    p = _prime(u, p)
    if not is_unit(u):
        raise NotAUnit(f"{u.render()} is not a unit")
    if structural and structural_certificate(u):
        return RankOneVerdict("yes_exact", depth, None, [u])
    d = delta_p(u, p)
    if not d.is_zero():
        return RankOneVerdict("no", 0, {"stage": "delta", "level": 0, "delta": d.render()}, [u])
    if u.ring is ZZ:
        return RankOneVerdict("yes_exact", depth, None, [u])
    alg, U = _dense_of(u)
    reached, rows = lift_chain(alg, U[0], depth)
    chain = [u]
    a = alg
    for row in rows[1:]:
        a = a.higher()
        chain.append(GroupRingElement.from_vector(a.ring, u.group, row))
    if reached < depth:
        return RankOneVerdict("no", reached, {"stage": "lift", "level": reached + 1}, chain)
    return RankOneVerdict("yes_to_depth", depth, None, chain)


# --------------------------------------------------------------------------
# Artin-Schreier kernels and tangent fixed points


@dataclass
class ArtinSchreierKernel:
    """ker(phi - 1) on A/p^r, free over Z/p^r on ``basis``."""

    ring: object
    precision: int
    basis: tuple
    components: int

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.p ** (self.precision * self.rank)

    @property
    def is_free_of_component_rank(self) -> bool:
        return self.rank == self.components

    def elements(self):
        q = self.p**self.precision
        for coeffs in itertools.product(range(q), repeat=self.rank):
            total = self.ring.zero()
            for c, b in zip(coeffs, self.basis):
                total = total + b * c
            yield total

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor,
            "precision": self.precision,
            "rank": self.rank,
            "components": self.components,
            "kernel_size": self.size,
            "basis": [self.ring.to_json(b) for b in self.basis],
        }


def _uniform_precision(ring) -> int:
    exps = set(int(e) for e in ring.exps)
    if len(exps) != 1:
        raise UnsupportedContext(f"{ring} mixes precisions")
    return exps.pop()


def artin_schreier_kernel(ring, r: int | None = None) -> ArtinSchreierKernel:
    """Kernel of phi - 1 on A/p^r: solved mod p, then lifted digit by digit."""
    if ring is ZZ or getattr(ring, "p", None) is None:
        raise UnsupportedContext("the Artin-Schreier kernel needs a truncated ring")
    if r is not None:
        ring = ring.with_precision(r)
    r = _uniform_precision(ring)
    p = ring.p
    alg = dense_algebra(ring)
    B = np.asarray(alg.frob, dtype=object) - np.eye(alg.n, dtype=object)
    solver = FpSolver((B % p).astype(np.int64).T, p)
    q = p**r
    basis = []
    for x in solver.kernel:
        x = x.astype(object)
        for j in range(1, r):
            # x B = 0 mod p^j; fix the next digit
            w = (x.dot(B) % q) // p**j
            y, ok = solver.solve((-w % p).astype(np.int64))
            if not ok[0]:
                raise PreconditionViolated("kernel element does not lift: not free of full rank")
            x = (x + y[0].astype(object) * p**j) % q
        basis.append(ring.from_vector([int(v) for v in x]))
    return ArtinSchreierKernel(ring, r, tuple(basis), component_count(ring))


@dataclass(frozen=True)
class TangentElement:
    """An element of A/p^s tensor M, one coefficient per cyclic factor.

    The coefficient of the factor Z/d lives in A/gcd(p^s, d), stored as its
    coordinate vector; free factors use A/p^s.
    """

    group: FgAbelianGroup
    moduli: tuple
    coeffs: tuple

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.coeffs)


def tangent_map(x: GroupRingElement) -> TangentElement:
    """The class of x - augmentation(x) in J/J^2 = A tensor M."""
    ring = x.ring
    p = ring.p
    if p is None:
        raise UnsupportedContext("tangent classes are computed over truncated rings")
    s = max(int(e) for e in ring.exps)
    moduli = tuple(np.gcd(p**s, d) if d else p**s for d in x.group.moduli)
    coeffs = []
    for i, mod in enumerate(moduli):
        total = np.zeros(ring.dim, dtype=object)
        for m, a in x.terms.items():
            total = total + np.array(ring.to_vector(a), dtype=object) * m.coords[i]
        coeffs.append(tuple(int(v) % int(mod) for v in total))
    return TangentElement(x.group, tuple(int(m) for m in moduli), tuple(coeffs))


def congruent_mod_J2(y: GroupRingElement, z: GroupRingElement) -> bool:
    """y = z modulo the square of the augmentation ideal."""
    w = y - z
    return is_zero(augmentation(w)) and tangent_map(w).is_zero()


@dataclass
class TangentFixedPoints:
    """(A tensor M)^(phi = 1), one Artin-Schreier kernel per invariant factor."""

    ring: object
    group: FgAbelianGroup
    factors: tuple

    @property
    def size(self) -> int:
        out = 1
        for k in self.factors:
            out *= k.size
        return out

    @property
    def exponent(self) -> int:
        exps = [k.p**k.precision for k in self.factors if k.rank]
        return max(exps, default=1)

    def elements(self):
        for combo in itertools.product(*(list(k.elements()) for k in self.factors)):
            yield combo

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor,
            "group": self.group.descriptor,
            "size": self.size,
            "exponent": self.exponent,
            "factors": [k.to_json() for k in self.factors],
        }


def tangent_fixed_points(ring, group: FgAbelianGroup) -> TangentFixedPoints:
    """Fixed points of phi tensor id on A tensor M for a finite p-group M.

    A tensor Z/p^v is A/p^v, so each invariant factor reduces to an
    Artin-Schreier kernel; A is read as the p-complete ring it truncates.
    """
    p = ring.p
    if p is None:
        raise UnsupportedContext("tangent fixed points need a truncated ring")
    if not group.is_finite:
        raise GroupNotFinite(f"{group} is infinite")
    if not group.is_p_power_torsion(p):
        raise GroupNotPPower(f"{group} is not a {p}-group")
    factors = []
    for d in group.torsion:
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        factors.append(artin_schreier_kernel(ring, v))
    return TangentFixedPoints(ring, group, tuple(factors))


# --------------------------------------------------------------------------
# square-zero ideals


@dataclass
class SquareZeroReport:
    passed: bool
    additive_ok: bool
    semilinear_ok: bool
    discrepancy: dict | None = None


def delta_on_square_zero(x, a, modulo: str | None = None, p: int | None = None) -> SquareZeroReport:
    """Check delta(x + a) = delta(x) + delta(a) - x^(p-1) a and delta(x a) = phi(x) delta(a).

    ``a`` must square to zero, either on the nose or, with ``modulo="J2"``,
    modulo the square of the augmentation ideal of a group ring.
    """
    x, a = as_group_ring_element(x), as_group_ring_element(a)
    if x.group != a.group:
        a = as_group_ring_element(a, x.group) if not a.group.rank else a
    p = _prime(x, p)
    if modulo == "J2":
        if not is_zero(augmentation(a)):
            raise NotSquareZero("a is not in the augmentation ideal")

        def same(y, z):
            return congruent_mod_J2(y, z)
    elif modulo is None:
        if not (a * a).is_zero():
            raise NotSquareZero(f"{a.render()} does not square to zero")

        def same(y, z):
            return y == z
    else:
        raise ValidationError(f"unknown modulus {modulo!r}")

    low = x.ring if x.ring is ZZ else x.ring.lower()
    dx, da = delta_p(x, p), delta_p(a, p)
    lhs_add = delta_p(x + a, p)
    rhs_add = dx + da - (x ** (p - 1) * a).coerce_ring(low)
    lhs_mul = delta_p(x * a, p)
    rhs_mul = frobenius_lift_groupring(x, p).coerce_ring(low) * da
    add_ok = same(lhs_add, rhs_add)
    mul_ok = same(lhs_mul, rhs_mul)
    discrepancy = None
    if not (add_ok and mul_ok):
        discrepancy = {
            "x": x.render(),
            "a": a.render(),
            "sum": [lhs_add.render(), rhs_add.render()],
            "product": [lhs_mul.render(), rhs_mul.render()],
        }
    return SquareZeroReport(add_ok and mul_ok, add_ok, mul_ok, discrepancy)
