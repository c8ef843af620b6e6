"""Group rings R[M] with finite support, their Frobenius lift and unit tests.

Elements are sparse maps from group elements to coefficients so that
infinite groups such as Z^a behave like finite ones.  Everything that
needs to look at *all* elements of a finite ring goes through the dense
engine in :mod:`deltaring.algebra` instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import dense_algebra
from .errors import (
    ContextMismatch,
    GroupMismatch,
    GroupNotFinite,
    NotAUnit,
    PrimeMismatch,
    RingTooLarge,
    UnsupportedContext,
    ValidationError,
)
from .groups import FgAbelianGroup, GroupElement, QuotientMap, enumerate_elements
from .linalg import integer_det, nullspace_mod_p, solve_mod_p
from .rings import ZZ, div_p, frobenius, is_zero, ring_of, times_p

IDEMPOTENT_SEARCH_LIMIT = 1 << 20


class GroupRingElement:
    """sum_m a_m [m] in R[M], stored without zero coefficients."""

    __slots__ = ("ring", "group", "terms", "_hash")

    def __init__(self, ring, group: FgAbelianGroup, terms=None):
        self.ring = ring
        self.group = group
        clean = {}
        for m, a in (terms or {}).items():
            if not isinstance(m, GroupElement):
                m = group.element(m)
            elif m.group != group:
                raise GroupMismatch(f"{m.group} is not {group}")
            a = ring.coerce(a)
            if m in clean:
                a = clean.pop(m) + a
            if not is_zero(a):
                clean[m] = a
        self.terms = clean
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def basis(cls, ring, group: FgAbelianGroup, m) -> GroupRingElement:
        """The group-like element [m]."""
        return cls(ring, group, {m if isinstance(m, GroupElement) else group.element(m): ring.one()})

    @classmethod
    def scalar(cls, ring, group: FgAbelianGroup, a) -> GroupRingElement:
        return cls(ring, group, {group.zero(): a})

    def _wrap(self, terms, ring=None) -> GroupRingElement:
        return GroupRingElement(ring or self.ring, self.group, terms)

    # arithmetic -----------------------------------------------------------
    def _common(self, other: GroupRingElement):
        if other.group != self.group:
            raise GroupMismatch(f"{self.group} against {other.group}")
        return meet_rings(self.ring, other.ring)

    def _lift_scalar(self, other):
        if isinstance(other, GroupRingElement):
            return other
        try:
            ring = ring_of(other)
        except ContextMismatch:
            return None
        return GroupRingElement.scalar(meet_rings(self.ring, ring), self.group, other)

    def __add__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        ring = self._common(other)
        terms = dict((m, ring.coerce(a)) for m, a in self.terms.items())
        for m, a in other.terms.items():
            terms[m] = terms[m] + ring.coerce(a) if m in terms else ring.coerce(a)
        return GroupRingElement(ring, self.group, terms)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -a for m, a in self.terms.items()})

    def __sub__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        return convolve(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = GroupRingElement.scalar(self.ring, self.group, self.ring.one())
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and self.ring == other.ring and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, self.ring, frozenset(self.terms.items())))
        return self._hash

    # structure ------------------------------------------------------------
    @property
    def p(self):
        return self.ring.p

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m) -> object:
        if not isinstance(m, GroupElement):
            m = self.group.element(m)
        return self.terms.get(m, self.ring.zero())

    def support(self) -> list:
        return sorted(self.terms)

    def augmentation(self):
        return augmentation(self)

    def frobenius(self, p: int | None = None) -> GroupRingElement:
        return frobenius_lift_groupring(self, p)

    def coerce_ring(self, ring) -> GroupRingElement:
        return GroupRingElement(ring, self.group, {m: ring.coerce(a) for m, a in self.terms.items()})

    def div_p(self, p: int | None = None) -> GroupRingElement:
        """Coefficientwise exact division by p (one digit is consumed)."""
        p = p or self.ring.p
        ring = self.ring.lower() if self.ring is not ZZ else ZZ
        return GroupRingElement(ring, self.group, {m: div_p(a, p) for m, a in self.terms.items()})

    def times_p(self, p: int | None = None) -> GroupRingElement:
        p = p or self.ring.p
        if self.ring is ZZ:
            return self._wrap({m: a * p for m, a in self.terms.items()})
        from .rings import raise_precision

        ring = raise_precision(self.ring)
        return GroupRingElement(ring, self.group, {m: times_p(a, p) for m, a in self.terms.items()})

    def translate(self, m: GroupElement) -> GroupRingElement:
        """Multiply by the group-like element [m]."""
        return self._wrap({k + m: a for k, a in self.terms.items()})

    def is_unit(self) -> bool:
        return is_unit(self)

    def inverse(self) -> GroupRingElement:
        return inverse(self)

    # dense conversion -----------------------------------------------------
    def to_vector(self) -> np.ndarray:
        """Coordinates in the basis e_i [m], group index slowest."""
        nA = self.ring.dim
        vec = np.zeros(self.group.order * nA, dtype=object)
        for m, a in self.terms.items():
            i = self.group.index(m)
            vec[i * nA:(i + 1) * nA] = self.ring.to_vector(a)
        return vec

    @classmethod
    def from_vector(cls, ring, group: FgAbelianGroup, vec) -> GroupRingElement:
        order = group.order
        vec = list(np.asarray(vec).reshape(-1))
        nA = len(vec) // order
        terms = {}
        for i in range(order):
            chunk = vec[i * nA:(i + 1) * nA]
            if any(int(c) for c in chunk):
                terms[group.element_at(i)] = ring.from_vector(chunk)
        return cls(ring, group, terms)

    # presentation ---------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m in self.support():
            a = self.terms[m]
            coeff = self.ring.render(a)
            if m.is_zero():
                piece = coeff
            else:
                mono = f"[{self.group.render(m)}]"
                if coeff == "1":
                    piece = mono
                elif coeff == "-1":
                    piece = "-" + mono
                elif ("+" in coeff or "-" in coeff[1:]) and not coeff.startswith("("):
                    piece = f"({coeff}){mono}"
                else:
                    piece = coeff + mono
            pieces.append(piece)
        out = pieces[0]
        for piece in pieces[1:]:
            out += piece if piece.startswith("-") else "+" + piece
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GroupRingElement({self.ring.descriptor}[{self.group.descriptor}], {self.render()})"

    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "ring": self.ring.descriptor,
            "terms": [
                {"elt": list(m.coords), "coeff": self.ring.to_json(self.terms[m])} for m in self.support()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, ring=None, group=None) -> GroupRingElement:
        from .descriptors import parse_group, parse_ring

        ring = ring if ring is not None else parse_ring(obj["ring"])
        group = group if group is not None else parse_group(obj["group"])
        terms = {}
        for term in obj.get("terms", []):
            m = group.element(term["elt"])
            a = ring.from_json(term["coeff"])
            terms[m] = terms[m] + a if m in terms else a
        return cls(ring, group, terms)


def meet_rings(a, b):
    """Common quotient of two coefficient rings (Z maps to everything)."""
    if a is ZZ:
        return b
    if b is ZZ:
        return a
    return a.meet(b)


def as_group_ring_element(x, group: FgAbelianGroup | None = None) -> GroupRingElement:
    """View a plain ring element as an element of R[0] (or R[group])."""
    if isinstance(x, GroupRingElement):
        return x
    group = group if group is not None else FgAbelianGroup()
    return GroupRingElement.scalar(ring_of(x), group, x)


def convolve(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    """sum_{m,n} a_m b_n [m + n]."""
    if x.group != y.group:
        raise ContextMismatch(f"group rings over {x.group} and {y.group}")
    ring = meet_rings(x.ring, y.ring)
    out: dict = {}
    for m, a in x.terms.items():
        a = ring.coerce(a)
        for n, b in y.terms.items():
            k = m + n
            c = a * ring.coerce(b)
            out[k] = out[k] + c if k in out else c
    return GroupRingElement(ring, x.group, out)


def augmentation(x: GroupRingElement):
    """The coefficient sum; its kernel is the augmentation ideal J."""
    total = x.ring.zero()
    for a in x.terms.values():
        total = total + a
    return total


def frobenius_lift_groupring(x: GroupRingElement, p: int | None = None) -> GroupRingElement:
    """sum phi_R(a_m) [p m]: the canonical Frobenius lift on R[M]."""
    if p is None:
        p = x.ring.p
        if p is None:
            raise ValidationError("a prime is required for group rings over the integers")
    elif x.ring.p is not None and x.ring.p != p:
        raise PrimeMismatch(f"ring is over p={x.ring.p}, asked for p={p}")
    out: dict = {}
    for m, a in x.terms.items():
        k = m * p
        c = frobenius(a)
        out[k] = out[k] + c if k in out else c
    return GroupRingElement(x.ring, x.group, out)


def regular_rep_det(u: GroupRingElement) -> int:
    """Determinant of multiplication by u on Z[M] in the basis {[m]}."""
    if u.ring is not ZZ:
        raise UnsupportedContext("regular_rep_det needs integer coefficients")
    if not u.group.is_finite:
        raise GroupNotFinite(f"{u.group} is infinite")
    elements = list(u.group.elements())
    pos = {m: i for i, m in enumerate(elements)}
    rows = []
    for m in elements:
        row = [0] * len(elements)
        for k, a in u.terms.items():
            row[pos[k + m]] += a
        rows.append(row)
    return integer_det(rows)


def _reduced_form(u: GroupRingElement):
    """Split u = [lambda] * f with f supported on the torsion subgroup, if possible."""
    nt = len(u.group.torsion)
    frees = {m.coords[nt:] for m in u.terms}
    if len(frees) != 1:
        return None, None
    lam = frees.pop()
    shift = u.group.element((0,) * nt + tuple(-c for c in lam))
    f = u.translate(shift)
    torsion_group = FgAbelianGroup(0, u.group.torsion)
    f = GroupRingElement(u.ring, torsion_group, {torsion_group.element(m.coords[:nt]): a for m, a in f.terms.items()})
    return lam, f


def is_unit(x: GroupRingElement) -> bool:
    """Unit test: determinant over Z, reduction mod p over truncated rings.

    Over the integers with a free part, units are certified through the
    classical reduced form u = [lambda] f with f a unit of the torsion part.
    """
    if x.ring is ZZ:
        if not x.group.is_finite:
            lam, f = _reduced_form(x)
            return f is not None and abs(regular_rep_det(f)) == 1
        return abs(regular_rep_det(x)) == 1
    if not x.group.is_finite:
        raise GroupNotFinite("unit test over a truncated ring needs a finite group")
    alg = dense_algebra(x.ring, x.group)
    return bool(alg.units_mask(x.to_vector())[0])


def inverse(x: GroupRingElement) -> GroupRingElement:
    if not x.group.is_finite:
        if x.ring is ZZ and len(x.terms) == 1:
            (m, a), = x.terms.items()
            if a in (1, -1):
                return GroupRingElement(ZZ, x.group, {-m: a})
        raise GroupNotFinite("inverse over an infinite group")
    if not is_unit(x):
        raise NotAUnit(f"{x.render()} is not a unit")
    if x.ring is ZZ:
        return _integer_inverse(x)
    alg = dense_algebra(x.ring, x.group)
    X = alg.asarray(x.to_vector())
    L = alg.regular_matrices(X)[0]
    y = solve_mod_p(L.T.astype(np.int64) % alg.p, alg.one.astype(np.int64) % alg.p, alg.p)
    Y = alg.asarray(y)
    two = alg.scale(2, alg.asarray(alg.one))
    # Newton: each step doubles the number of correct p-adic digits
    for _ in range(int(alg.exps.max()).bit_length() + 1):
        Y = alg.mul(Y, alg.sub(two, alg.mul(X, Y)))
    return GroupRingElement.from_vector(x.ring, x.group, Y[0])


def _integer_inverse(x: GroupRingElement) -> GroupRingElement:
    from sympy import Matrix

    elements = list(x.group.elements())
    pos = {m: i for i, m in enumerate(elements)}
    n = len(elements)
    mat = [[0] * n for _ in range(n)]
    for j, m in enumerate(elements):
        for k, a in x.terms.items():
            mat[j][pos[k + m]] += a
    # row j of mat is x*[m_j]; find y with sum_j y_j row_j = [0]
    sol = Matrix(mat).T.solve(Matrix([1] + [0] * (n - 1)))
    return GroupRingElement(ZZ, x.group, {elements[i]: int(sol[i]) for i in range(n)})


# idempotents and components ----------------------------------------------

@dataclass(frozen=True)
class IdempotentDecomposition:
    """Primitive orthogonal idempotents summing to 1, indexed by component."""

    ring: object
    group: FgAbelianGroup | None
    idempotents: tuple

    @property
    def components(self) -> int:
        return len(self.idempotents)

    def __len__(self) -> int:
        return len(self.idempotents)

    def __iter__(self):
        return iter(self.idempotents)


def _as_element(ring, group, vec):
    if group is None:
        return ring.from_vector(list(vec))
    return GroupRingElement.from_vector(ring, group, vec)


@lru_cache(maxsize=None)
def idempotent_decomposition(ring, group: FgAbelianGroup | None = None) -> IdempotentDecomposition:
    """Complete set of primitive orthogonal idempotents of ``ring`` (or ``ring[group]``).

    Idempotents are found mod p (they are fixed by the p-power map, so the
    search runs over that F_p-subspace) and lifted to full precision with
    e <- 3e^2 - 2e^3.
    """
    if ring is ZZ:
        if group is not None and group.order not in (None, 1):
            raise UnsupportedContext("idempotents of Z[M] are not computed")
        one = 1 if group is None else GroupRingElement.scalar(ZZ, group, 1)
        return IdempotentDecomposition(ring, group, (one,))
    g = group if group is not None else FgAbelianGroup()
    if not g.is_finite:
        raise GroupNotFinite(f"{g} is infinite")
    alg = dense_algebra(ring, g)
    if alg.size > IDEMPOTENT_SEARCH_LIMIT:
        raise RingTooLarge(f"ring has {alg.size} elements, limit {IDEMPOTENT_SEARCH_LIMIT}")
    p = alg.p
    basis = np.eye(alg.n, dtype=np.int64)
    pth = alg.power(basis, p) % p
    fixed = nullspace_mod_p((pth - basis).T, p)
    c = len(fixed)
    if p**c > IDEMPOTENT_SEARCH_LIMIT:
        raise RingTooLarge(f"{p}^{c} candidate idempotents")
    coeffs = np.array(list(itertools.product(range(p), repeat=c)), dtype=np.int64).reshape(-1, c)
    cands = (coeffs @ np.array(fixed, dtype=np.int64).reshape(c, alg.n)) % p
    squares = alg.mul(cands, cands) % p
    idem = cands[(squares == cands).all(axis=1) & cands.any(axis=1)]
    primitive = []
    for e in idem:
        prods = alg.mul(np.broadcast_to(e, idem.shape), idem) % p
        below = (prods == idem).all(axis=1) & idem.any(axis=1)
        if below.sum() == 1:  # only e itself sits below e
            primitive.append(e)
    lifted = []
    for e in primitive:
        e = alg.asarray(e)
        while True:
            sq = alg.mul(e, e)
            nxt = alg.sub(alg.scale(3, sq), alg.scale(2, alg.mul(sq, e)))
            if (nxt == e).all():
                break
            e = nxt
        lifted.append(e[0])
    lifted.sort(key=lambda v: [-int(x) for x in v])
    return IdempotentDecomposition(ring, group, tuple(_as_element(ring, group, v) for v in lifted))


def component_count(ring) -> int:
    return idempotent_decomposition(ring).components


@dataclass(frozen=True)
class LocallyConstantFunction:
    """One value of M per connected component of Spec A."""

    target: FgAbelianGroup
    values: tuple
    decomposition: IdempotentDecomposition

    def materialize(self) -> GroupRingElement:
        """The tautological unit sum_i e_i [m_i]."""
        ring = self.decomposition.ring
        terms: dict = {}
        for e, m in zip(self.decomposition.idempotents, self.values):
            terms[m] = terms[m] + e if m in terms else e
        return GroupRingElement(ring, self.target, terms)

    def __add__(self, other: LocallyConstantFunction) -> LocallyConstantFunction:
        return LocallyConstantFunction(
            self.target, tuple(a + b for a, b in zip(self.values, other.values)), self.decomposition
        )


def locally_constant_functions(ring, group: FgAbelianGroup, bound: int | None = None) -> list:
    """All locally constant M-valued functions on Spec A, one value per component."""
    dec = idempotent_decomposition(ring)
    if not group.is_finite and bound is None:
        raise GroupNotFinite(f"{group} is infinite; pass a box bound")
    values = list(enumerate_elements(group, bound))
    return [
        LocallyConstantFunction(group, combo, dec)
        for combo in itertools.product(values, repeat=dec.components)
    ]


def pushforward_along_quotient(x: GroupRingElement, q: QuotientMap) -> GroupRingElement:
    """Image in R[M/p^s]: coefficients of colliding group elements are summed."""
    if x.group != q.source:
        raise GroupMismatch(f"{x.group} is not the source {q.source}")
    out: dict = {}
    for m, a in x.terms.items():
        k = q(m)
        out[k] = out[k] + a if k in out else a
    return GroupRingElement(x.ring, q.target, out)


def is_idempotent(e) -> bool:
    return e * e == e
