"""Small exact linear algebra over F_p and Z."""

from __future__ import annotations

import itertools

import numpy as np
from sympy import Matrix


def rref_mod_p(A, p: int):
    """Reduced row echelon form over F_p; returns ``(R, pivot_columns)``."""
    R = np.array(A, dtype=np.int64) % p
    if R.ndim == 1:
        R = R.reshape(1, -1)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        others = np.nonzero(R[:, c])[0]
        for j in others:
            if j != r:
                R[j] = (R[j] - R[j, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_p(A, p: int) -> int:
    return len(rref_mod_p(A, p)[1])


def nullspace_mod_p(A, p: int) -> list:
    """Basis of {x : A x = 0} over F_p, as a list of int vectors."""
    A = np.array(A, dtype=np.int64)
    cols = A.shape[1]
    R, pivots = rref_mod_p(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = (-R[row, f]) % p
        basis.append(v)
    return basis


def solve_mod_p(A, b, p: int):
    """A particular solution of A x = b over F_p, or None when inconsistent."""
    A = np.array(A, dtype=np.int64) % p
    b = np.array(b, dtype=np.int64).reshape(-1, 1) % p
    rows, cols = A.shape
    R, pivots = rref_mod_p(np.hstack([A, b]), p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = R[row, cols]
    return x


def batch_nonsingular_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """For a stack of square matrices, whether each is invertible over F_p."""
    M = np.array(mats, dtype=np.int64) % p
    N, n, _ = M.shape
    ok = np.ones(N, dtype=bool)
    inv_table = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    rows = np.arange(N)
    for c in range(n):
        sub = M[:, c:, c]
        has = sub != 0
        found = has.any(axis=1)
        ok &= found
        piv = c + np.argmax(has, axis=1)
        top = M[rows, c].copy()
        M[rows, c] = M[rows, piv]
        M[rows, piv] = top
        scale = inv_table[M[:, c, c]]
        M[:, c] = M[:, c] * scale[:, None] % p
        factors = M[:, :, c].copy()
        factors[:, c] = 0
        M = (M - factors[:, :, None] * M[:, c][:, None, :]) % p
    return ok


def integer_det(A) -> int:
    """Exact determinant of an integer matrix."""
    A = [[int(x) for x in row] for row in A]
    if not A:
        return 1
    return int(Matrix(A).det(method="bareiss"))


class FpSolver:
    """Solve A x = b over F_p for many right-hand sides b at once.

    The row reduction of ``A`` is done once; ``solve`` then costs one matrix
    product per batch.
    """

    def __init__(self, A, p: int):
        A = np.array(A, dtype=np.int64) % p
        rows, cols = A.shape
        R, pivots = rref_mod_p(np.hstack([A, np.eye(rows, dtype=np.int64)]), p)
        self.p = p
        self.cols = cols
        self.pivots = [c for c in pivots if c < cols]
        self.rank = len(self.pivots)
        self.transform = R[:, cols:]
        self.kernel = np.array(nullspace_mod_p(A, p), dtype=np.int64).reshape(-1, cols)

    def solve(self, B):
        """Rows of B are right-hand sides; returns (solutions, solvable mask)."""
        B = np.array(B, dtype=np.int64) % self.p
        if B.ndim == 1:
            B = B.reshape(1, -1)
        Bt = (B @ self.transform.T) % self.p
        ok = ~Bt[:, self.rank:].any(axis=1)
        X = np.zeros((B.shape[0], self.cols), dtype=np.int64)
        X[:, self.pivots] = Bt[:, :self.rank]
        return X, ok

    def kernel_elements(self) -> np.ndarray:
        """Every element of the kernel of A (p^dim rows)."""
        k = len(self.kernel)
        combos = np.array(list(itertools.product(range(self.p), repeat=k)), dtype=np.int64).reshape(self.p**k, k)
        return (combos @ self.kernel) % self.p
