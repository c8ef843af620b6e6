"""Dense batched arithmetic in finite free algebras with a Frobenius lift.

Every finite ring we handle (Z/p^r, Witt rings, products, and their group
rings over finite groups) is a free module over Z/p^e per coordinate, with
bilinear multiplication given by structure constants and a Z-linear
Frobenius lift.  Exact integer group rings over finite groups fit the same
mould with no modulus.  Batches of elements are rows of a 2-D array, which
lets the exhaustive searches run in numpy instead of Python loops.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GroupNotFinite, NotDivisible, PrecisionExhausted
from .groups import FgAbelianGroup
from .linalg import batch_nonsingular_mod_p
from .rings import ZZ, lower_precision

CHUNK = 1 << 15


@dataclass(eq=False)
class DenseAlgebra:
    ring: object
    group: FgAbelianGroup
    p: int | None
    exps: np.ndarray | None
    mult: np.ndarray
    frob: np.ndarray
    one: np.ndarray
    dtype: object = field(default=None)

    def __post_init__(self):
        self.n = self.mult.shape[0]
        if self.exps is None:
            self.dtype = object
            self.moduli = None
        else:
            top = self.p ** int(self.exps.max())
            safe = top**3 * self.n * self.n < 2**62
            self.dtype = np.int64 if safe else object
            self.moduli = np.array([self.p ** int(e) for e in self.exps], dtype=self.dtype)
        self.mult = self.reduce(self.mult.astype(self.dtype))
        self.frob = self.reduce(self.frob.astype(self.dtype))
        self.one = self.reduce(np.asarray(self.one).astype(self.dtype))
        self._flat = self.mult.reshape(self.n * self.n, self.n)

    @property
    def is_exact(self) -> bool:
        return self.exps is None

    @property
    def size(self) -> int | None:
        if self.exps is None:
            return None
        return self.p ** int(self.exps.sum())

    def asarray(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        return X.astype(self.dtype)

    def reduce(self, X):
        if self.moduli is None:
            return X
        return X % self.moduli

    def add(self, X, Y):
        return self.reduce(self.asarray(X) + self.asarray(Y))

    def sub(self, X, Y):
        return self.reduce(self.asarray(X) - self.asarray(Y))

    def scale(self, c: int, X):
        return self.reduce(self.asarray(X) * c)

    def mul(self, X, Y):
        X, Y = self.asarray(X), self.asarray(Y)
        N = max(X.shape[0], Y.shape[0])
        X = np.broadcast_to(X, (N, self.n))
        Y = np.broadcast_to(Y, (N, self.n))
        out = np.empty((N, self.n), dtype=self.dtype)
        for start in range(0, N, CHUNK):
            sl = slice(start, start + CHUNK)
            outer = (X[sl, :, None] * Y[sl, None, :]).reshape(-1, self.n * self.n)
            if self.moduli is not None:
                outer %= int(self.moduli.max())
            out[sl] = self.reduce(outer @ self._flat)
        return out

    def power(self, X, e: int):
        X = self.asarray(X)
        result = np.broadcast_to(self.one, X.shape).copy()
        base = X
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frobenius(self, X):
        return self.reduce(self.asarray(X) @ self.frob)

    def is_zero(self, X) -> np.ndarray:
        return ~self.asarray(X).astype(bool).any(axis=1)

    def equal(self, X, Y) -> np.ndarray:
        return self.is_zero(self.sub(X, Y))

    # precision ------------------------------------------------------------
    def lower(self) -> DenseAlgebra:
        if self.exps is None:
            return self
        if int(self.exps.min()) < 2:
            raise PrecisionExhausted("delta needs at least two digits of precision")
        return dense_algebra(lower_precision(self.ring), self.group)

    def higher(self) -> DenseAlgebra:
        from .rings import raise_precision

        return dense_algebra(raise_precision(self.ring), self.group)

    def div_p(self, X):
        """Exact division by p into :meth:`lower`."""
        X = self.asarray(X)
        if self.moduli is not None:
            X = X % self.moduli
        if (X % self.p).any():
            raise NotDivisible("entries are not divisible by p")
        low = self.lower()
        return low.reduce(X // self.p)

    def times_p(self, X):
        """Multiplication by p from :meth:`lower` into this algebra."""
        return self.reduce(self.asarray(X) * self.p)

    def delta(self, X):
        """(phi(x) - x^p)/p for every row of X, landing in :meth:`lower`."""
        X = self.asarray(X)
        diff = self.reduce(self.frobenius(X) - self.power(X, self.p))
        if self.moduli is None:
            if (diff % self.p).any():
                raise NotDivisible("phi(x) - x^p is not divisible by p")
            return diff // self.p
        return self.div_p(diff)

    # structure ------------------------------------------------------------
    def regular_matrices(self, X) -> np.ndarray:
        """Stack of multiplication-by-x matrices; row j is x * e_j."""
        X = self.asarray(X)
        return self.reduce(np.einsum("ni,ijk->njk", X, self.mult))

    def units_mask(self, X) -> np.ndarray:
        """Which rows are units: x is a unit iff x mod p is."""
        X = self.asarray(X)
        out = np.empty(X.shape[0], dtype=bool)
        for start in range(0, X.shape[0], CHUNK):
            mats = self.regular_matrices(X[start:start + CHUNK])
            out[start:start + CHUNK] = batch_nonsingular_mod_p(mats.astype(np.int64) % self.p, self.p)
        return out

    def all_elements(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Elements with mixed-radix index in [start, stop), coordinate 0 slowest."""
        if self.exps is None:
            raise GroupNotFinite("exact algebras are infinite")
        size = self.size
        stop = size if stop is None else min(stop, size)
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((len(idx), self.n), dtype=self.dtype)
        for c in range(self.n - 1, -1, -1):
            m = int(self.moduli[c])
            out[:, c] = idx % m
            idx = idx // m
        return out

    def augmentation(self, X) -> np.ndarray:
        """Sum of the coefficients over the group, as coefficient-ring vectors."""
        X = self.asarray(X)
        nA = self.n // max(self.group.order or 1, 1)
        return X.reshape(X.shape[0], -1, nA).sum(axis=1)


def frobenius_matrix(ring, group: FgAbelianGroup, p: int) -> np.ndarray:
    """Matrix of phi_R tensor ([m] -> [pm]) on the basis e_i [m]."""
    fA = np.asarray(ring.frob_matrix, dtype=object)
    nA = fA.shape[0]
    order = group.order
    mult_p = group.multiple_indices(p) if group.rank else np.zeros(1, dtype=np.int64)
    F = np.zeros((order * nA, order * nA), dtype=object)
    for m in range(order):
        pm = int(mult_p[m])
        F[m * nA:(m + 1) * nA, pm * nA:(pm + 1) * nA] = fA
    return F


_CACHE: dict = {}


def dense_algebra(ring, group: FgAbelianGroup | None = None, p: int | None = None) -> DenseAlgebra:
    """Dense model of ``ring[group]`` (``group`` finite, default trivial).

    For the exact integers a prime ``p`` must be supplied to fix the
    Frobenius lift.
    """
    group = group if group is not None else FgAbelianGroup()
    if not group.is_finite:
        raise GroupNotFinite(f"{group} is infinite")
    if ring is ZZ:
        if p is None:
            raise ValueError("an exact group algebra needs a prime for its Frobenius")
    else:
        p = ring.p
    key = (ring, group, p)
    if key in _CACHE:
        return _CACHE[key]
    cA = np.asarray(ring.mult_table, dtype=object)
    nA = cA.shape[0]
    order = group.order
    n = nA * order
    if group.rank:
        add = group.addition_table
    else:
        add = np.zeros((1, 1), dtype=np.int64)
    mult = np.zeros((n, n, n), dtype=object)
    for a in range(order):
        for b in range(order):
            c = int(add[a, b])
            mult[a * nA:(a + 1) * nA, b * nA:(b + 1) * nA, c * nA:(c + 1) * nA] = cA
    frob = frobenius_matrix(ring, group, p)
    one = np.zeros(n, dtype=object)
    one[:nA] = ring.to_vector(ring.one())
    exps = None if ring is ZZ else np.array(list(ring.exps) * order, dtype=np.int64)
    alg = DenseAlgebra(ring, group, p, exps, mult, frob, one)
    _CACHE[key] = alg
    return alg

