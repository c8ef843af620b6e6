"""Truncated Witt vectors W(F_q)/p^r of finite fields.

W(F_{p^k}) is the unramified extension of Z_p of degree k, so we present
W(F_{p^k})/p^r as Z/p^r[x]/(f) for a monic lift f of an irreducible
polynomial over F_p.  The Frobenius lift is the ring endomorphism sending x
to the root of f congruent to x^p, found by Newton iteration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    ContextMismatch,
    NotAUnit,
    NotDivisible,
    NotIrreducible,
    PrecisionExhausted,
    PrimeMismatch,
    ValidationError,
)
from .padic import check_prime

Poly = tuple  # coefficients, constant term first


def _trim(a) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymul(a, b, mod: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % mod for c in out]


def _polyrem(a, f, mod: int) -> list:
    """Remainder of ``a`` modulo the monic polynomial ``f``."""
    a = [c % mod for c in a]
    k = len(f) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i]
        if c:
            for j in range(k + 1):
                a[i - k + j] = (a[i - k + j] - c * f[j]) % mod
    a = a[:k] + [0] * max(0, k - len(a))
    return a


def _polyadd(a, b, mod: int, sign: int = 1) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [(x + sign * y) % mod for x, y in zip(a, b)]


def _fp_divmod(a, b, p: int):
    a = _trim(c % p for c in a)
    b = _trim(c % p for c in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        a = _trim(a)
    return q, a


def _fp_gcd(a, b, p: int) -> list:
    a, b = _trim(c % p for c in a), _trim(c % p for c in b)
    while b:
        _, r = _fp_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _fp_inverse_mod(a, f, p: int) -> list:
    """Inverse of ``a`` in F_p[x]/(f) by the extended Euclidean algorithm."""
    r0, r1 = _trim(c % p for c in f), _trim(c % p for c in a)
    s0, s1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _polyadd(s0, _polymul(q, s1, p), p, sign=-1)
    if len(r0) != 1:
        raise NotAUnit("element is not invertible modulo f")
    inv = pow(r0[0], -1, p)
    return _polyrem([c * inv for c in s0], f, p)


def _powmod(base, e: int, f, mod: int) -> list:
    result = [1]
    base = _polyrem(base, f, mod)
    while e:
        if e & 1:
            result = _polyrem(_polymul(result, base, mod), f, mod)
        base = _polyrem(_polymul(base, base, mod), f, mod)
        e >>= 1
    return _polyrem(result, f, mod)


def _compose(a, g, f, mod: int) -> list:
    """a(g) in Z/mod[x]/(f), by Horner's rule."""
    out: list = []
    for c in reversed(list(a)):
        out = _polyrem(_polyadd(_polymul(out, g, mod), [c], mod), f, mod)
    return _polyrem(out, f, mod)


def _derivative(f) -> list:
    return [i * c for i, c in enumerate(f)][1:]


def _inverse_mod_f(a, f, p: int, s: int) -> list:
    """Inverse in Z/p^s[x]/(f), lifted from F_p by Newton's iteration."""
    y = _fp_inverse_mod(a, f, p)
    prec = 1
    while prec < s:
        prec = min(2 * prec, s)
        mod = p**prec
        ay = _polyrem(_polymul(a, y, mod), f, mod)
        two_minus = _polyadd([2], ay, mod, sign=-1)
        y = _polyrem(_polymul(y, two_minus, mod), f, mod)
    return y


def is_irreducible_mod_p(fbar: Sequence[int], p: int) -> bool:
    """Degree-k ``fbar`` is irreducible iff gcd(x^(p^d) - x, fbar) = 1 for d < k."""
    fbar = _trim(c % p for c in fbar)
    k = len(fbar) - 1
    if k < 1:
        return False
    inv = pow(fbar[-1], -1, p)
    fbar = [c * inv % p for c in fbar]
    xp = [0, 1]
    for _ in range(1, k):
        xp = _powmod(xp, p, fbar, p)
        g = _fp_gcd(_polyadd(xp, [0, 1], p, sign=-1), fbar, p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, k: int) -> tuple:
    """Smallest monic irreducible of degree k over F_p.

    Candidates are ordered by the integer sum c_i p^i over the non-leading
    coefficients, so F_4 gets x^2+x+1 and F_9 gets x^2+1.
    """
    for code in range(p**k):
        coeffs = [(code // p**i) % p for i in range(k)] + [1]
        if is_irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise NotIrreducible(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class WittRingContext:
    """The ring W(F_{p^k})/p^r = Z/p^r[x]/(f) with its Frobenius lift.

    ``modulus`` is the coefficientwise lift of ``fbar`` and
    ``frobenius_image`` is the image F of the generator x.
    """

    p: int
    k: int
    r: int
    fbar: tuple
    modulus: tuple = field(compare=False, repr=False)
    frobenius_image: tuple = field(compare=False, repr=False)

    @property
    def precision(self) -> int:
        return self.r

    @property
    def characteristic(self) -> int:
        return self.p**self.r

    @property
    def size(self) -> int:
        return self.p ** (self.r * self.k)

    @property
    def dim(self) -> int:
        return self.k

    @property
    def exps(self) -> list:
        return [self.r] * self.k

    @property
    def frobenius_period(self) -> int:
        return self.k

    is_finite = True

    @property
    def descriptor(self) -> str:
        return f"W({self.p},{self.k},{self.r})"

    def __str__(self) -> str:
        return self.descriptor

    # elements -------------------------------------------------------------
    def element(self, coeffs) -> WittElement:
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _polyrem(coeffs, self.modulus, self.characteristic)
        coeffs = coeffs + [0] * (self.k - len(coeffs))
        return WittElement(self, tuple(c % self.characteristic for c in coeffs))

    def zero(self) -> WittElement:
        return self.element([0])

    def one(self) -> WittElement:
        return self.element([1])

    def from_int(self, n: int) -> WittElement:
        return self.element([n])

    def generator(self) -> WittElement:
        return self.element([0, 1]) if self.k > 1 else self.element([(-self.modulus[0])])

    def elements(self) -> Iterator[WittElement]:
        mod = self.characteristic
        for coeffs in itertools.product(range(mod), repeat=self.k):
            yield WittElement(self, tuple(reversed(coeffs)))

    def coerce(self, x) -> WittElement:
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return self.from_int(int(x))
        if isinstance(x, WittElement):
            if x.ctx == self:
                return x
            if x.ctx.same_family(self) and x.ctx.r >= self.r:
                return x.reduce(self.r)
        raise ContextMismatch(f"cannot coerce {x!r} into {self}")

    # precision ------------------------------------------------------------
    def same_family(self, other) -> bool:
        return (
            isinstance(other, WittRingContext)
            and other.p == self.p
            and other.k == self.k
            and other.fbar == self.fbar
        )

    def with_precision(self, r: int) -> WittRingContext:
        return construct_witt_ring(self.p, self.k, r, self.fbar)

    def lower(self) -> WittRingContext:
        if self.r == 1:
            raise PrecisionExhausted("cannot lower precision below 1")
        return self.with_precision(self.r - 1)

    def meet(self, other):
        if other is None or other == self:
            return self
        if self.same_family(other):
            return self if self.r <= other.r else other
        raise ContextMismatch(f"{self} and {other} are unrelated rings")

    # dense structure ------------------------------------------------------
    @cached_property
    def mult_table(self) -> np.ndarray:
        k, mod = self.k, self.characteristic
        table = np.zeros((k, k, k), dtype=object)
        for i in range(k):
            for j in range(k):
                mono = [0] * (i + j) + [1]
                table[i, j, :] = _polyrem(mono, self.modulus, mod)
        return table

    @cached_property
    def frob_matrix(self) -> np.ndarray:
        """Row i holds the coordinates of Frobenius(x^i)."""
        k, mod = self.k, self.characteristic
        rows = np.zeros((k, k), dtype=object)
        power = [1]
        for i in range(k):
            rows[i, :] = _polyrem(power, self.modulus, mod)
            power = _polyrem(_polymul(power, self.frobenius_image, mod), self.modulus, mod)
        return rows

    def to_vector(self, x) -> list:
        return list(self.coerce(x).coeffs)

    def from_vector(self, v) -> WittElement:
        return self.element([int(c) for c in v])

    def render(self, x) -> str:
        return self.coerce(x).render()

    def to_json(self, x):
        return [str(c) for c in self.coerce(x).coeffs]

    def from_json(self, obj) -> WittElement:
        if isinstance(obj, (int, str)):
            return self.from_int(int(obj))
        return self.element([int(c) for c in obj])


@dataclass(frozen=True)
class WittElement:
    """A polynomial representative of degree < k with residues mod p^r."""

    ctx: WittRingContext
    coeffs: tuple

    @property
    def ring(self) -> WittRingContext:
        return self.ctx

    def _coerce_pair(self, other):
        if isinstance(other, int):
            return self.ctx, self, self.ctx.from_int(other)
        if isinstance(other, WittElement):
            if other.ctx.p != self.ctx.p:
                raise PrimeMismatch("Witt elements over different primes")
            ctx = self.ctx.meet(other.ctx)
            return ctx, ctx.coerce(self), ctx.coerce(other)
        return None, None, None

    def __add__(self, other):
        ctx, a, b = self._coerce_pair(other)
        if ctx is None:
            return NotImplemented
        return ctx.element(_polyadd(a.coeffs, b.coeffs, ctx.characteristic))

    __radd__ = __add__

    def __neg__(self):
        return self.ctx.element([-c for c in self.coeffs])

    def __sub__(self, other):
        ctx, a, b = self._coerce_pair(other)
        if ctx is None:
            return NotImplemented
        return ctx.element(_polyadd(a.coeffs, b.coeffs, ctx.characteristic, sign=-1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        ctx, a, b = self._coerce_pair(other)
        if ctx is None:
            return NotImplemented
        mod = ctx.characteristic
        return ctx.element(_polyrem(_polymul(a.coeffs, b.coeffs, mod), ctx.modulus, mod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        mod = self.ctx.characteristic
        return self.ctx.element(_powmod(list(self.coeffs), e, self.ctx.modulus, mod))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(c % self.ctx.p for c in self.coeffs)

    def inverse(self) -> WittElement:
        if not self.is_unit():
            raise NotAUnit(f"{self.render()} is not a unit")
        q, r = self.ctx.p**self.ctx.k, self.ctx.r
        # the unit group of W(F_q)/p^r has order (q - 1) q^(r-1)
        return self ** ((q - 1) * q ** (r - 1) - 1)

    def frobenius(self) -> WittElement:
        return witt_frobenius(self)

    def reduce(self, r: int) -> WittElement:
        if r > self.ctx.r:
            raise PrecisionExhausted(f"cannot raise precision {self.ctx.r} to {r}")
        return self.ctx.with_precision(r).element(self.coeffs)

    def div_p(self) -> WittElement:
        p = self.ctx.p
        if self.ctx.r == 1:
            raise PrecisionExhausted("dividing by p at precision 1 leaves nothing")
        if any(c % p for c in self.coeffs):
            raise NotDivisible(f"{self.render()} is not divisible by {p}")
        return self.ctx.lower().element([c // p for c in self.coeffs])

    def times_p(self) -> WittElement:
        return self.ctx.with_precision(self.ctx.r + 1).element([c * self.ctx.p for c in self.coeffs])

    def residue_class(self) -> tuple:
        """Reduction to F_{p^k}, as coefficients mod p."""
        return tuple(c % self.ctx.p for c in self.coeffs)

    def render(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def _construct(p: int, k: int, r: int, fbar: tuple) -> WittRingContext:
    f = list(fbar)
    if k == 1:
        # W(F_p) = Z_p and the Frobenius lift is the identity
        return WittRingContext(p, 1, r, fbar, tuple(f), (((-f[0]) % p**r),))
    image = _powmod([0, 1], p, f, p)
    prec = 1
    fprime = _derivative(f)
    while prec < r:
        prec = min(2 * prec, r)
        mod = p**prec
        value = _compose(f, image, f, mod)
        slope_inv = _inverse_mod_f(_compose(fprime, image, f, mod), f, p, prec)
        step = _polyrem(_polymul(value, slope_inv, mod), f, mod)
        image = _polyadd(image, step, mod, sign=-1)
    image = _polyrem(image, f, p**r)
    return WittRingContext(p, k, r, fbar, tuple(f), tuple(image))


def construct_witt_ring(p: int, k: int, r: int, fbar: Sequence[int] | None = None) -> WittRingContext:
    """Build W(F_{p^k})/p^r from an irreducible ``fbar`` (constant term first).

    ``fbar`` defaults to :func:`default_modulus`.  It is normalised to be
    monic; its coefficientwise lift with digits in [0, p) is the modulus.
    """
    check_prime(p)
    if k < 1 or r < 1:
        raise ValidationError(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    if fbar is None:
        fbar = default_modulus(p, k)
    coeffs = _trim(int(c) % p for c in fbar)
    if len(coeffs) != k + 1:
        raise NotIrreducible(f"polynomial has degree {len(coeffs) - 1}, expected {k}")
    inv = pow(coeffs[-1], -1, p)
    coeffs = tuple(c * inv % p for c in coeffs)
    if k > 1 and not is_irreducible_mod_p(coeffs, p):
        raise NotIrreducible(f"{list(coeffs)} is reducible over F_{p}")
    return _construct(p, k, r, coeffs)


def witt_frobenius(x: WittElement) -> WittElement:
    """Substitute the Frobenius image of the generator into ``x``."""
    ctx = x.ctx
    mod = ctx.characteristic
    return ctx.element(_compose(x.coeffs, ctx.frobenius_image, ctx.modulus, mod))


def witt_teichmuller(ctx: WittRingContext, abar) -> WittElement:
    """Multiplicative lift of a nonzero element of F_{p^k}.

    ``abar`` is an int (for k = 1) or coefficients mod p of a polynomial in x.
    """
    if isinstance(abar, int):
        abar = [abar]
    abar = [int(c) % ctx.p for c in abar]
    if not any(abar):
        raise ValidationError("the Teichmüller lift is only defined for nonzero classes")
    q = ctx.p**ctx.k
    u = ctx.element(abar)
    for _ in range(ctx.r + 1):
        nxt = u**q
        if nxt == u:
            break
        u = nxt
    return u
