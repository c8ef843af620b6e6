"""Residues mod p^r that carry their precision with them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import isprime

from .errors import (
    NotAUnit,
    NotDivisible,
    PrecisionExhausted,
    PrimeMismatch,
    ValidationError,
)


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not _is_prime(p):
        raise ValidationError(f"{p!r} is not a prime")
    return p


@lru_cache(maxsize=256)
def _is_prime(p: int) -> bool:
    return p >= 2 and bool(isprime(p))


@dataclass(frozen=True, eq=True)
class PadicApprox:
    """An element of Z/p^r, i.e. a p-adic integer known to r digits.

    Mixed-precision arithmetic truncates to the smaller precision, so the
    digit consumed by every division by p stays visible.
    """

    p: int
    r: int
    residue: int

    def __post_init__(self):
        check_prime(self.p)
        if self.r < 1:
            raise PrecisionExhausted(f"precision must be positive, got {self.r}")
        object.__setattr__(self, "residue", self.residue % self.p**self.r)

    @property
    def modulus(self) -> int:
        return self.p**self.r

    def _coerce(self, other) -> PadicApprox:
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise PrimeMismatch(f"cannot combine p={self.p} with p={other.p}")
            return other
        if isinstance(other, int):
            return PadicApprox(self.p, self.r, other)
        return NotImplemented

    def reduce(self, r: int) -> PadicApprox:
        if r > self.r:
            raise PrecisionExhausted(f"cannot raise precision {self.r} to {r}")
        return PadicApprox(self.p, r, self.residue)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicApprox(self.p, min(self.r, other.r), self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicApprox(self.p, self.r, -self.residue)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicApprox(self.p, min(self.r, other.r), self.residue - other.residue)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicApprox(self.p, min(self.r, other.r), self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicApprox(self.p, self.r, pow(self.residue, e, self.modulus))

    def inverse(self) -> PadicApprox:
        if self.residue % self.p == 0:
            raise NotAUnit(f"{self.residue} is divisible by {self.p}")
        return PadicApprox(self.p, self.r, pow(self.residue, -1, self.modulus))

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    # Z_p carries the identity Frobenius lift.
    def frobenius(self) -> PadicApprox:
        return self

    def div_p(self) -> PadicApprox:
        return exact_div_p(self)

    def times_p(self) -> PadicApprox:
        """Multiplication by p, viewed as Z/p^r -> Z/p^(r+1)."""
        return PadicApprox(self.p, self.r + 1, self.residue * self.p)

    def __int__(self) -> int:
        return self.residue

    def __str__(self) -> str:
        return str(self.residue)

    def __repr__(self) -> str:
        return f"PadicApprox(p={self.p}, r={self.r}, residue={self.residue})"


def ring_arithmetic(op: str, x: PadicApprox, y) -> PadicApprox:
    """Dispatch ``add``/``sub``/``mul``/``pow``/``inv`` by name."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "pow":
        return x**y
    if op == "inv":
        return x.inverse()
    raise ValidationError(f"unknown operation {op!r}")


def exact_div_p(x: PadicApprox) -> PadicApprox:
    """Divide by p, consuming one digit of precision."""
    if x.r == 1:
        raise PrecisionExhausted("dividing by p at precision 1 leaves nothing")
    if x.residue % x.p:
        raise NotDivisible(f"{x.residue} is not divisible by {x.p}")
    return PadicApprox(x.p, x.r - 1, x.residue // x.p)


def teichmuller(p: int, r: int, a: int) -> PadicApprox:
    """The (p-1)-th root of unity in Z/p^r congruent to ``a`` mod p."""
    check_prime(p)
    if not 1 <= a < p:
        raise ValidationError(f"teichmuller needs 1 <= a < p, got a={a}")
    mod = p**r
    u = a
    # u <- u^p gains one correct digit per step
    for _ in range(r + 1):
        nxt = pow(u, p, mod)
        if nxt == u:
            break
        u = nxt
    return PadicApprox(p, r, u)
