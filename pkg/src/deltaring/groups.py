"""Finitely generated abelian groups in invariant-factor form.

A group Z^a + C_{d1} + ... + C_{dt} with d1 | d2 | ... | dt is stored as
``FgAbelianGroup(a, (d1, ..., dt))``.  Element coordinates list the torsion
coordinates first, then the free ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import GroupMismatch, GroupNotFinite, ValidationError


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Return ``(S, U, V)`` with ``U @ A @ V == S`` and S diagonal.

    The nonzero diagonal entries are positive, divide each other in order,
    and precede the zero entries.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        pivots = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not pivots:
            break
        _, i0, j0 = min(pivots)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def canonicalize(orders: Sequence[int]):
    """Invariant-factor form of the product of cyclic groups Z/o (o = 0 means Z).

    Returns ``(group, coordinate_matrix)``: a coordinate row vector x in the
    cyclic decomposition maps to ``x @ coordinate_matrix`` in the canonical
    group.
    """
    orders = [int(o) for o in orders]
    if any(o < 0 for o in orders):
        raise ValidationError(f"cyclic orders must be non-negative, got {orders}")
    n = len(orders)
    if n == 0:
        return FgAbelianGroup(0, ()), np.zeros((0, 0), dtype=object)
    S, _, V = smith_normal_form([[orders[i] if i == j else 0 for j in range(n)] for i in range(n)])
    diag = [S[i][i] for i in range(n)]
    keep = [i for i, d in enumerate(diag) if d != 1]
    torsion = tuple(diag[i] for i in keep if diag[i] != 0)
    free = sum(1 for i in keep if diag[i] == 0)
    cols = [i for i in keep if diag[i] != 0] + [i for i in keep if diag[i] == 0]
    mat = np.array([[V[r][c] for c in cols] for r in range(n)], dtype=object).reshape(n, len(cols))
    return FgAbelianGroup(free, torsion), mat


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^free_rank + C_{d1} + ... + C_{dt} with d1 | ... | dt, each d_i >= 2."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValidationError("free rank must be non-negative")
        if any(d < 2 for d in self.torsion):
            raise ValidationError(f"invariant factors must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValidationError(f"invariant factors {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_cyclic(cls, free_rank: int = 0, orders: Sequence[int] = ()) -> FgAbelianGroup:
        """Canonical form of Z^free_rank + C_{o1} + C_{o2} + ... for arbitrary orders."""
        group, _ = canonicalize(list(orders) + [0] * free_rank)
        return group

    @classmethod
    def cyclic(cls, n: int) -> FgAbelianGroup:
        return cls.from_cyclic(0, [n])

    @property
    def rank(self) -> int:
        """Number of coordinates."""
        return len(self.torsion) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return math.prod(self.torsion) if self.is_finite else None

    @property
    def exponent(self) -> int | None:
        if not self.is_finite:
            return None
        return self.torsion[-1] if self.torsion else 1

    def is_p_power_torsion(self, p: int) -> bool:
        """Whether the torsion subgroup is a p-group."""
        for d in self.torsion:
            while d % p == 0:
                d //= p
            if d != 1:
                return False
        return True

    @property
    def moduli(self) -> tuple:
        """Per-coordinate modulus (0 for a free coordinate)."""
        return self.torsion + (0,) * self.free_rank

    @property
    def descriptor(self) -> str:
        parts = [f"C{d}" for d in self.torsion]
        if self.free_rank or not parts:
            parts.append(f"Z^{self.free_rank}")
        return "+".join(parts)

    def __str__(self) -> str:
        return self.descriptor

    # elements -------------------------------------------------------------
    def element(self, coords: Sequence[int]) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValidationError(f"{self} needs {self.rank} coordinates, got {len(coords)}")
        return GroupElement(self, tuple(c % m if m else c for c, m in zip(coords, self.moduli)))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list:
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def elements(self) -> Iterator[GroupElement]:
        if not self.is_finite:
            raise GroupNotFinite(f"{self} is infinite; pass a box bound")
        return enumerate_elements(self)

    def index(self, x: GroupElement) -> int:
        """Mixed-radix position of ``x`` among :meth:`elements` (finite groups)."""
        if not self.is_finite:
            raise GroupNotFinite(f"{self} is infinite")
        idx = 0
        for c, d in zip(x.coords, self.torsion):
            idx = idx * d + c
        return idx

    def element_at(self, idx: int) -> GroupElement:
        coords = []
        for d in reversed(self.torsion):
            idx, c = divmod(idx, d)
            coords.append(c)
        return GroupElement(self, tuple(reversed(coords)))

    @cached_property
    def coordinate_table(self) -> np.ndarray:
        """Row i holds the coordinates of the i-th element (finite groups)."""
        if not self.is_finite:
            raise GroupNotFinite(f"{self} is infinite")
        return np.array([x.coords for x in self.elements()], dtype=np.int64).reshape(self.order, self.rank)

    def _index_array(self, coords: np.ndarray) -> np.ndarray:
        idx = np.zeros(coords.shape[:-1], dtype=np.int64)
        for axis, d in enumerate(self.torsion):
            idx = idx * d + coords[..., axis] % d
        return idx

    @cached_property
    def addition_table(self) -> np.ndarray:
        """``table[i, j]`` is the index of element i + element j."""
        c = self.coordinate_table
        return self._index_array(c[:, None, :] + c[None, :, :])

    def multiple_indices(self, n: int) -> np.ndarray:
        """Index of n * x for every element index x."""
        return self._index_array(self.coordinate_table * n)

    def render(self, x: GroupElement) -> str:
        """Monomial name: g, g^2, g1*g2^3, t^-1 ... and 1 for the identity."""
        nt = len(self.torsion)
        names = ["g"] if nt == 1 else [f"g{i + 1}" for i in range(nt)]
        names += ["t"] if self.free_rank == 1 else [f"t{i + 1}" for i in range(self.free_rank)]
        parts = []
        for name, c in zip(names, x.coords):
            if c == 1:
                parts.append(name)
            elif c:
                parts.append(f"{name}^{c}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True, order=False)
class GroupElement:
    group: FgAbelianGroup
    coords: tuple

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement):
            return False
        if other.group != self.group:
            raise GroupMismatch(f"{self.group} against {other.group}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return self.group.element([-a for a in self.coords])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.group.element([a - b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        return self.group.element([int(n) * a for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sort_key(self) -> tuple:
        return self.coords

    def __lt__(self, other: GroupElement) -> bool:
        return self.coords < other.coords

    def __str__(self) -> str:
        return self.group.render(self)

    def __repr__(self) -> str:
        return f"GroupElement({self.group.descriptor}, {list(self.coords)})"


def group_element_ops(op: str, x: GroupElement, y=None) -> GroupElement:
    """Dispatch ``add``/``neg``/``scalar_mul`` by name."""
    if op == "add":
        return x + y
    if op == "neg":
        return -x
    if op == "scalar_mul":
        return x * y
    raise ValidationError(f"unknown group operation {op!r}")


def enumerate_elements(group: FgAbelianGroup, bound: int | None = None) -> Iterator[GroupElement]:
    """Every element whose free coordinates lie in [-bound, bound]."""
    if group.free_rank and bound is None:
        raise GroupNotFinite(f"{group} is infinite; a box bound is required")
    ranges = [range(d) for d in group.torsion]
    ranges += [range(-bound, bound + 1)] * group.free_rank if group.free_rank else []
    for coords in itertools.product(*ranges):
        yield GroupElement(group, coords)


@dataclass(frozen=True)
class QuotientMap:
    """The canonical surjection M -> M / p^s M."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    p: int
    s: int
    matrix: np.ndarray

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise GroupMismatch(f"{x.group} is not the source {self.source}")
        coords = [int(v) for v in np.array(x.coords, dtype=object).dot(self.matrix)] if self.target.rank else []
        return self.target.element(coords)

    def __hash__(self):
        return hash((self.source, self.target, self.p, self.s))

    def __eq__(self, other):
        return (
            isinstance(other, QuotientMap)
            and (self.source, self.target, self.p, self.s) == (other.source, other.target, other.p, other.s)
        )


def quotient_map(group: FgAbelianGroup, s: int, p: int) -> QuotientMap:
    """M -> M / p^s M in invariant-factor form, with its element map."""
    if s < 1:
        raise ValidationError(f"s must be positive, got {s}")
    q = p**s
    orders = [math.gcd(d, q) for d in group.torsion] + [q] * group.free_rank
    target, mat = canonicalize(orders)
    return QuotientMap(group, target, p, s, mat)
