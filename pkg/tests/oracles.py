"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.  Group rings of cyclic groups
are modelled as coefficient arrays with cyclic convolution, and Witt rings
are modelled in Witt coordinates with the universal addition and
multiplication polynomials, so agreement with the package is a real check.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import sympy

# --------------------------------------------------------------------------
# cyclic group rings (R[C_n] with R = Z or Z/N), rows are coefficient vectors


def cyclic_mul(X, Y, n: int, mod: int | None = None):
    X = np.asarray(X, dtype=object).reshape(-1, n)
    Y = np.asarray(Y, dtype=object).reshape(-1, n)
    out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=object)
    for i in range(n):
        for j in range(n):
            out[:, (i + j) % n] += X[:, i] * Y[:, j]
    return out % mod if mod else out


def cyclic_pow(X, e: int, n: int, mod: int | None = None):
    X = np.asarray(X, dtype=object).reshape(-1, n)
    out = np.zeros_like(X)
    out[:, 0] = 1
    for _ in range(e):
        out = cyclic_mul(out, X, n, mod)
    return out


def cyclic_frobenius(X, p: int, n: int, mod: int | None = None):
    X = np.asarray(X, dtype=object).reshape(-1, n)
    out = np.zeros_like(X)
    for i in range(n):
        out[:, (p * i) % n] += X[:, i]
    return out % mod if mod else out


def cyclic_delta(X, p: int, n: int, mod: int | None = None):
    """(phi(x) - x^p)/p; with ``mod`` = p^s the result is mod p^(s-1)."""
    diff = cyclic_frobenius(X, p, n) - cyclic_pow(X, p, n)
    if mod:
        diff = diff % mod
    assert not (diff % p).any()
    out = diff // p
    return out % (mod // p) if mod else out


def rank_one_projection(p: int, r: int, d: int, n: int) -> set:
    """Residues mod p^r of reduced u in Z/p^(r+d)[C_n] with phi(u) = u^p exactly there."""
    mod = p ** (r + d)
    tails = np.array(list(itertools.product(range(mod), repeat=n - 1)), dtype=object).reshape(-1, n - 1)
    X = np.hstack([((1 - tails.sum(axis=1)) % mod).reshape(-1, 1), tails])
    ok = ~((cyclic_frobenius(X, p, n, mod) - cyclic_pow(X, p, n, mod)) % mod).any(axis=1)
    return {tuple(int(v) % p**r for v in row) for row in X[ok]}


def brute_units_cyclic(n: int, mod: int) -> list:
    """Units of Z/mod[C_n] by searching for an inverse."""
    elems = np.array(list(itertools.product(range(mod), repeat=n)), dtype=object).reshape(-1, n)
    one = np.zeros(n, dtype=object)
    one[0] = 1
    units = []
    for x in elems:
        prods = cyclic_mul(np.broadcast_to(x, elems.shape), elems, n, mod)
        if (prods == one).all(axis=1).any():
            units.append(tuple(int(v) for v in x))
    return units


def brute_idempotents_cyclic(n: int, mod: int) -> list:
    elems = np.array(list(itertools.product(range(mod), repeat=n)), dtype=object).reshape(-1, n)
    sq = cyclic_mul(elems, elems, n, mod)
    return [tuple(int(v) for v in row) for row in elems[(sq == elems).all(axis=1)]]


def bass_unit_expansion(n: int, k: int, m: int) -> list:
    """(1 + g + ... + g^(k-1))^m + ((1 - k^m)/n) * norm, as integers."""
    base = np.zeros(n, dtype=object)
    for i in range(k):
        base[i % n] += 1
    u = cyclic_pow(base, m, n)[0]
    return [int(v) + (1 - k**m) // n for v in u]


def circulant_det(coeffs) -> int:
    n = len(coeffs)
    return int(sympy.Matrix(n, n, lambda i, j: coeffs[(j - i) % n]).det())


def higman_brute(n: int, bound: int, order_bound: int) -> set:
    """Torsion units of Z[C_n] with augmentation 1 and coefficients in [-B, B]."""
    found = set()
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=n):
        if sum(coeffs) != 1 or abs(circulant_det(coeffs)) != 1:
            continue
        power = np.array([[1] + [0] * (n - 1)], dtype=object)
        for _ in range(order_bound):
            power = cyclic_mul(power, coeffs, n)
            if list(power[0]) == [1] + [0] * (n - 1):
                found.add(coeffs)
                break
    return found


def snf_kernel_size(matrix, p: int, r: int) -> int:
    """|{x in (Z/p^r)^n : x M = 0}| from the Smith form of M over Z."""
    M = sympy.Matrix(matrix)
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(M, domain=sympy.ZZ)
    q = p**r
    size = 1
    n = M.shape[0]
    for i in range(n):
        s = int(S[i, i]) if i < min(S.shape) else 0
        size *= q if s == 0 else sympy.gcd(s, q)
    return int(size)


# --------------------------------------------------------------------------
# finite fields and Witt vectors in Witt coordinates


class FiniteField:
    """F_p[x]/(fbar) with elements as coefficient tuples, constant first."""

    def __init__(self, p: int, fbar):
        self.p = p
        self.f = list(fbar)
        self.k = len(self.f) - 1
        self.elements = [tuple(c) for c in itertools.product(range(p), repeat=self.k)]
        self.zero = (0,) * self.k
        self.one = (1,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(self.k + 1):
                    prod[deg - self.k + i] -= c * self.f[i]
        return tuple(c % self.p for c in prod[:self.k])

    def pow(self, a, e: int):
        out = self.one
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def scalar(self, c: int):
        return ((c % self.p),) + (0,) * (self.k - 1)


@lru_cache(maxsize=None)
def witt_polynomials(p: int, r: int):
    """Integer polynomials S_n, P_n for Witt vector sum and product, n < r."""
    X = sympy.symbols(f"x0:{r}")
    Y = sympy.symbols(f"y0:{r}")

    def ghost(v, n):
        return sum(p**i * v[i] ** (p ** (n - i)) for i in range(n + 1))

    sums, prods = [], []
    for n in range(r):
        for out, combine in ((sums, lambda a, b: a + b), (prods, lambda a, b: a * b)):
            target = combine(ghost(X, n), ghost(Y, n))
            rest = sum(p**i * out[i] ** (p ** (n - i)) for i in range(n))
            poly = sympy.expand((target - rest) / p**n)
            out.append(sympy.Poly(poly, *X, *Y))
    return X, Y, sums, prods


class WittVectors:
    """W_r(F_q) with Witt coordinates (a_0, ..., a_{r-1})."""

    def __init__(self, p: int, k: int, r: int, fbar):
        self.p, self.k, self.r = p, k, r
        self.F = FiniteField(p, fbar)
        _, _, sums, prods = witt_polynomials(p, r)
        self._sums = [self._compile(s) for s in sums]
        self._prods = [self._compile(s) for s in prods]
        minus_one = self._neg_one()
        self.minus_one = minus_one

    def _compile(self, poly):
        terms = []
        for monom, coeff in poly.terms():
            c = int(coeff) % self.p
            if c:
                terms.append((c, monom))
        return terms

    def _eval(self, terms, values):
        F = self.F
        total = F.zero
        for c, monom in terms:
            term = F.scalar(c)
            for v, e in zip(values, monom):
                if e:
                    term = F.mul(term, F.pow(v, e))
            total = F.add(total, term)
        return total

    def _pad(self, x):
        return list(x) + [self.F.zero] * (self.r - len(x))

    def add(self, x, y):
        vals = self._pad(x) + self._pad(y)
        return tuple(self._eval(s, vals) for s in self._sums)

    def mul(self, x, y):
        vals = self._pad(x) + self._pad(y)
        return tuple(self._eval(s, vals) for s in self._prods)

    def _neg_one(self):
        # the unique z with 1 + z = 0
        target = tuple([self.F.zero] * self.r)
        one = self.teich(self.F.one)
        for z in itertools.product(self.F.elements, repeat=self.r):
            if self.add(one, z) == target:
                return z
        raise AssertionError("no additive inverse of 1")

    def sub(self, x, y):
        return self.add(x, self.mul(self.minus_one, y))

    def pow(self, x, e: int):
        out = self.teich(self.F.one)
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def teich(self, a):
        return (a,) + (self.F.zero,) * (self.r - 1)

    def frobenius(self, x):
        return tuple(self.F.pow(a, self.p) for a in x)

    def elements(self):
        return itertools.product(self.F.elements, repeat=self.r)

    def delta(self, x):
        """(F(x) - x^p)/p in W_{r-1}: p = V F, so divide by shifting and taking p-th roots."""
        z = self.sub(self.frobenius(x), self.pow(x, self.p))
        assert z[0] == self.F.zero
        root = self.p ** (self.k - 1)  # inverse of Frobenius on F_q
        return tuple(self.F.pow(a, root) for a in z[1:])
