"""Coefficient rings: exact integers, Z/p^r, Witt rings and finite products.

Every ring object exposes the same small surface (``zero``, ``one``,
``coerce``, ``meet``, ``with_precision``, dense structure constants ...), so
group rings and the delta machinery never branch on the concrete type.
Elements know their own ring; plain ``int`` stands for an exact integer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import (
    ContextMismatch,
    NotAUnit,
    NotDivisible,
    PrecisionExhausted,
    PrimeMismatch,
    ValidationError,
)
from .padic import PadicApprox, check_prime
from .witt import WittElement, WittRingContext, construct_witt_ring


class IntegerRing:
    """The exact integers; Frobenius is the identity for every prime."""

    p = None
    precision = None
    is_finite = False
    dim = 1
    exps = None
    frobenius_period = 1
    descriptor = "Z"

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "IntegerRing()"

    def __str__(self) -> str:
        return "Z"

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return int(n)

    def coerce(self, x) -> int:
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return int(x)
        raise ContextMismatch(f"{x!r} is not an integer")

    def meet(self, other):
        return other if other is not None else self

    def with_precision(self, r: int):
        raise ValidationError("the exact integers have no precision")

    @cached_property
    def mult_table(self) -> np.ndarray:
        return np.ones((1, 1, 1), dtype=object)

    @cached_property
    def frob_matrix(self) -> np.ndarray:
        return np.ones((1, 1), dtype=object)

    def to_vector(self, x) -> list:
        return [self.coerce(x)]

    def from_vector(self, v) -> int:
        return int(v[0])

    def render(self, x) -> str:
        return str(x)

    def to_json(self, x) -> str:
        return str(x)

    def from_json(self, obj) -> int:
        return int(obj)


ZZ = IntegerRing()


@dataclass(frozen=True)
class PadicRing:
    """Z/p^r regarded as a truncation of Z_p (identity Frobenius lift)."""

    p: int
    r: int

    def __post_init__(self):
        check_prime(self.p)
        if self.r < 1:
            raise ValidationError(f"precision must be positive, got {self.r}")

    is_finite = True
    dim = 1
    frobenius_period = 1

    @property
    def precision(self) -> int:
        return self.r

    @property
    def exps(self) -> list:
        return [self.r]

    @property
    def size(self) -> int:
        return self.p**self.r

    @property
    def descriptor(self) -> str:
        return f"Zp({self.p},{self.r})"

    def __str__(self) -> str:
        return self.descriptor

    def zero(self) -> PadicApprox:
        return PadicApprox(self.p, self.r, 0)

    def one(self) -> PadicApprox:
        return PadicApprox(self.p, self.r, 1)

    def from_int(self, n: int) -> PadicApprox:
        return PadicApprox(self.p, self.r, int(n))

    def elements(self) -> Iterator[PadicApprox]:
        for v in range(self.p**self.r):
            yield PadicApprox(self.p, self.r, v)

    def coerce(self, x) -> PadicApprox:
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        if isinstance(x, PadicApprox):
            if x.p != self.p:
                raise PrimeMismatch(f"cannot coerce p={x.p} into p={self.p}")
            if x.r == self.r:
                return x
            if x.r > self.r:
                return x.reduce(self.r)
        raise ContextMismatch(f"cannot coerce {x!r} into {self}")

    def with_precision(self, r: int) -> PadicRing:
        return PadicRing(self.p, r)

    def lower(self) -> PadicRing:
        if self.r == 1:
            raise PrecisionExhausted("cannot lower precision below 1")
        return PadicRing(self.p, self.r - 1)

    def meet(self, other):
        if other is None or other is ZZ or other == self:
            return self
        if isinstance(other, PadicRing):
            if other.p != self.p:
                raise PrimeMismatch(f"p={self.p} against p={other.p}")
            return self if self.r <= other.r else other
        raise ContextMismatch(f"{self} and {other} are unrelated rings")

    @cached_property
    def mult_table(self) -> np.ndarray:
        return np.ones((1, 1, 1), dtype=object)

    @cached_property
    def frob_matrix(self) -> np.ndarray:
        return np.ones((1, 1), dtype=object)

    def to_vector(self, x) -> list:
        return [self.coerce(x).residue]

    def from_vector(self, v) -> PadicApprox:
        return self.from_int(int(v[0]))

    def render(self, x) -> str:
        return str(self.coerce(x).residue)

    def to_json(self, x) -> str:
        return str(self.coerce(x).residue)

    def from_json(self, obj) -> PadicApprox:
        return self.from_int(int(obj))


@dataclass(frozen=True)
class ProductRing:
    """A finite product of Z/p^r and Witt rings over one prime."""

    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValidationError("a product needs at least two factors")
        primes = {f.p for f in self.factors}
        if len(primes) != 1 or None in primes:
            raise PrimeMismatch(f"product factors use primes {sorted(map(str, primes))}")

    is_finite = True

    @property
    def p(self) -> int:
        return self.factors[0].p

    @property
    def precision(self) -> tuple:
        return tuple(f.precision for f in self.factors)

    @property
    def size(self) -> int:
        return math.prod(f.size for f in self.factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def exps(self) -> list:
        return [e for f in self.factors for e in f.exps]

    @property
    def frobenius_period(self) -> int:
        return math.lcm(*(f.frobenius_period for f in self.factors))

    @property
    def descriptor(self) -> str:
        return "x".join(f.descriptor for f in self.factors)

    def __str__(self) -> str:
        return self.descriptor

    def element(self, parts) -> ProductElement:
        parts = tuple(f.coerce(x) for f, x in zip(self.factors, parts, strict=True))
        return ProductElement(self, parts)

    def zero(self) -> ProductElement:
        return ProductElement(self, tuple(f.zero() for f in self.factors))

    def one(self) -> ProductElement:
        return ProductElement(self, tuple(f.one() for f in self.factors))

    def from_int(self, n: int) -> ProductElement:
        return ProductElement(self, tuple(f.from_int(n) for f in self.factors))

    def elements(self) -> Iterator[ProductElement]:
        for parts in itertools.product(*(list(f.elements()) for f in self.factors)):
            yield ProductElement(self, tuple(parts))

    def coerce(self, x) -> ProductElement:
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        if isinstance(x, ProductElement):
            if x.ring == self:
                return x
            if len(x.parts) == len(self.factors):
                return self.element(x.parts)
        raise ContextMismatch(f"cannot coerce {x!r} into {self}")

    def with_precision(self, r: int) -> ProductRing:
        return ProductRing(tuple(f.with_precision(r) for f in self.factors))

    def lower(self) -> ProductRing:
        return ProductRing(tuple(f.lower() for f in self.factors))

    def higher(self) -> ProductRing:
        return ProductRing(tuple(f.with_precision(f.precision + 1) for f in self.factors))

    def meet(self, other):
        if other is None or other is ZZ or other == self:
            return self
        if isinstance(other, ProductRing) and len(other.factors) == len(self.factors):
            return ProductRing(tuple(a.meet(b) for a, b in zip(self.factors, other.factors)))
        raise ContextMismatch(f"{self} and {other} are unrelated rings")

    @cached_property
    def mult_table(self) -> np.ndarray:
        n = self.dim
        table = np.zeros((n, n, n), dtype=object)
        off = 0
        for f in self.factors:
            d = f.dim
            table[off:off + d, off:off + d, off:off + d] = f.mult_table
            off += d
        return table

    @cached_property
    def frob_matrix(self) -> np.ndarray:
        n = self.dim
        mat = np.zeros((n, n), dtype=object)
        off = 0
        for f in self.factors:
            d = f.dim
            mat[off:off + d, off:off + d] = f.frob_matrix
            off += d
        return mat

    def to_vector(self, x) -> list:
        x = self.coerce(x)
        return [c for f, part in zip(self.factors, x.parts) for c in f.to_vector(part)]

    def from_vector(self, v) -> ProductElement:
        parts, off = [], 0
        for f in self.factors:
            parts.append(f.from_vector(v[off:off + f.dim]))
            off += f.dim
        return ProductElement(self, tuple(parts))

    def render(self, x) -> str:
        x = self.coerce(x)
        return "(" + ",".join(f.render(part) for f, part in zip(self.factors, x.parts)) + ")"

    def to_json(self, x):
        x = self.coerce(x)
        return [f.to_json(part) for f, part in zip(self.factors, x.parts)]

    def from_json(self, obj) -> ProductElement:
        if isinstance(obj, (int, str)):
            return self.from_int(int(obj))
        return self.element([f.from_json(o) for f, o in zip(self.factors, obj, strict=True)])


@dataclass(frozen=True)
class ProductElement:
    ring: ProductRing
    parts: tuple

    def _pair(self, other):
        if isinstance(other, (int, np.integer)):
            return self.ring, self.parts, self.ring.from_int(int(other)).parts
        if isinstance(other, ProductElement):
            ring = self.ring.meet(other.ring)
            return ring, self.parts, other.parts
        return None, None, None

    def __add__(self, other):
        ring, a, b = self._pair(other)
        if ring is None:
            return NotImplemented
        return ring.element([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return ProductElement(self.ring, tuple(-x for x in self.parts))

    def __sub__(self, other):
        ring, a, b = self._pair(other)
        if ring is None:
            return NotImplemented
        return ring.element([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        ring, a, b = self._pair(other)
        if ring is None:
            return NotImplemented
        return ring.element([x * y for x, y in zip(a, b)])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return ProductElement(self.ring, tuple(x**e for x in self.parts))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.parts)

    def is_unit(self) -> bool:
        return all(x.is_unit() for x in self.parts)

    def inverse(self) -> ProductElement:
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        return ProductElement(self.ring, tuple(x.inverse() for x in self.parts))

    def frobenius(self) -> ProductElement:
        return ProductElement(self.ring, tuple(x.frobenius() for x in self.parts))

    def div_p(self) -> ProductElement:
        return self.ring.lower().element([x.div_p() for x in self.parts])

    def times_p(self) -> ProductElement:
        return self.ring.higher().element([x.times_p() for x in self.parts])

    def reduce(self, r: int) -> ProductElement:
        return self.ring.with_precision(r).element([x.reduce(r) for x in self.parts])

    def __str__(self) -> str:
        return self.ring.render(self)


def product_ring(*factors) -> ProductRing:
    return ProductRing(tuple(factors))


def ring_of(x):
    """The ring an element lives in."""
    if isinstance(x, bool):
        raise ContextMismatch("booleans are not ring elements")
    if isinstance(x, (int, np.integer)):
        return ZZ
    if isinstance(x, PadicApprox):
        return PadicRing(x.p, x.r)
    if isinstance(x, WittElement):
        return x.ctx
    if isinstance(x, ProductElement):
        return x.ring
    raise ContextMismatch(f"{x!r} is not an element of a supported ring")


def frobenius(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    return x.frobenius()


def div_p(x, p: int):
    """Exact division by p; truncated rings lose one digit."""
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if x % p:
            raise NotDivisible(f"{x} is not divisible by {p}")
        return x // p
    return x.div_p()


def times_p(x, p: int):
    """Multiplication by p, raising the precision of truncated rings by one."""
    if isinstance(x, (int, np.integer)):
        return int(x) * p
    return x.times_p()


def is_zero(x) -> bool:
    if isinstance(x, (int, np.integer)):
        return x == 0
    return x.is_zero()


def raise_precision(ring, steps: int = 1):
    """Same ring family, ``steps`` more digits of precision."""
    if ring is ZZ:
        return ring
    if isinstance(ring, ProductRing):
        return ProductRing(tuple(raise_precision(f, steps) for f in ring.factors))
    return ring.with_precision(ring.precision + steps)


def lower_precision(ring, steps: int = 1):
    if ring is ZZ:
        return ring
    if isinstance(ring, ProductRing):
        return ProductRing(tuple(lower_precision(f, steps) for f in ring.factors))
    if ring.precision - steps < 1:
        raise PrecisionExhausted(f"{ring} has only {ring.precision} digits")
    return ring.with_precision(ring.precision - steps)


def atoms(ring) -> tuple:
    """The factors of a product, or the ring itself."""
    return ring.factors if isinstance(ring, ProductRing) else (ring,)


def witt_ring(p: int, k: int, r: int, fbar=None) -> WittRingContext:
    return construct_witt_ring(p, k, r, fbar)
