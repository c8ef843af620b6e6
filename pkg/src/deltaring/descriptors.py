"""Text descriptors for coefficient rings and groups.

    RING  := ATOM ("x" ATOM)*
    ATOM  := "Zp(" INT "," INT ")" | "W(" INT "," INT "," INT ")" | "Z"
    GROUP := GATOM ("+" GATOM)*
    GATOM := "Z^" INT | "C" INT

Whitespace between tokens is ignored.  Errors report the byte offset of
the first character that could not be consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DescriptorSyntaxError, InvalidSpec, PrimeMismatch, ValidationError
from .groups import FgAbelianGroup
from .padic import check_prime
from .rings import ZZ, PadicRing, ProductRing, witt_ring


@dataclass(frozen=True)
class RingAtom:
    kind: str  # "Zp", "W" or "Z"
    params: tuple = ()
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RingDescriptor:
    atoms: tuple

    @property
    def prime(self) -> int | None:
        return self.atoms[0].params[0] if self.atoms[0].params else None


@dataclass(frozen=True)
class GroupAtom:
    kind: str  # "Z" (free, value = rank) or "C" (cyclic, value = order)
    value: int
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GroupDescriptor:
    atoms: tuple


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        raise DescriptorSyntaxError(len(self.text[:pos].encode()), expected, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> int:
        if self.peek() != ch:
            self.error(repr(ch))
        start = self.pos
        self.pos += 1
        return start

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("an integer")
        return int(self.text[start:self.pos])

    def at_end(self):
        if self.peek():
            self.error("end of input")

    # rings ----------------------------------------------------------------
    def ring(self) -> RingDescriptor:
        atoms = [self.ring_atom()]
        while self.peek() == "x":
            self.eat("x")
            atoms.append(self.ring_atom())
        self.at_end()
        return RingDescriptor(tuple(atoms))

    def ring_atom(self) -> RingAtom:
        ch = self.peek()
        start = self.pos
        if ch == "W":
            self.eat("W")
            self.eat("(")
            p = self.integer()
            self.eat(",")
            k = self.integer()
            self.eat(",")
            r = self.integer()
            self.eat(")")
            return RingAtom("W", (p, k, r), start)
        if ch == "Z":
            self.eat("Z")
            if self.peek() != "p":
                return RingAtom("Z", (), start)
            self.eat("p")
            self.eat("(")
            p = self.integer()
            self.eat(",")
            r = self.integer()
            self.eat(")")
            return RingAtom("Zp", (p, r), start)
        self.error("'Zp(', 'W(' or 'Z'")

    # groups ---------------------------------------------------------------
    def group(self) -> GroupDescriptor:
        atoms = [self.group_atom()]
        while self.peek() == "+":
            self.eat("+")
            atoms.append(self.group_atom())
        self.at_end()
        return GroupDescriptor(tuple(atoms))

    def group_atom(self) -> GroupAtom:
        ch = self.peek()
        start = self.pos
        if ch == "Z":
            self.eat("Z")
            self.eat("^")
            return GroupAtom("Z", self.integer(), start)
        if ch == "C":
            self.eat("C")
            return GroupAtom("C", self.integer(), start)
        self.error("'Z^' or 'C'")


def _validate_ring(desc: RingDescriptor) -> RingDescriptor:
    primes = set()
    for atom in desc.atoms:
        if atom.kind == "Z":
            if len(desc.atoms) > 1:
                raise ValidationError("the exact integers cannot appear in a product")
            continue
        p = atom.params[0]
        check_prime(p)
        primes.add(p)
        if any(v < 1 for v in atom.params[1:]):
            raise ValidationError(f"parameters must be positive in {render(desc)}")
    if len(primes) > 1:
        raise PrimeMismatch(f"atoms over different primes {sorted(primes)}")
    return desc


def _validate_group(desc: GroupDescriptor) -> GroupDescriptor:
    for atom in desc.atoms:
        if atom.kind == "C" and atom.value < 2:
            raise ValidationError(f"cyclic factor C{atom.value} needs order at least 2")
    return desc


def parse_ring_descriptor(text: str) -> RingDescriptor:
    return _validate_ring(_Parser(text).ring())


def parse_group_descriptor(text: str) -> GroupDescriptor:
    return _validate_group(_Parser(text).group())


def parse_descriptor(text: str):
    """Parse either kind of descriptor, deciding by the leading token."""
    parser = _Parser(text)
    ch = parser.peek()
    if ch == "C":
        return parse_group_descriptor(text)
    if ch == "Z":
        parser.eat("Z")
        if parser.peek() == "^":
            return parse_group_descriptor(text)
    return parse_ring_descriptor(text)


def render(desc) -> str:
    """Canonical text for a descriptor; parsing it gives back ``desc``."""
    if isinstance(desc, RingDescriptor):
        parts = []
        for atom in desc.atoms:
            if atom.kind == "Z":
                parts.append("Z")
            else:
                parts.append(f"{atom.kind}({','.join(str(v) for v in atom.params)})")
        return "x".join(parts)
    if isinstance(desc, GroupDescriptor):
        return "+".join(f"Z^{a.value}" if a.kind == "Z" else f"C{a.value}" for a in desc.atoms)
    raise InvalidSpec(f"not a descriptor: {desc!r}")


def build_ring(desc: RingDescriptor):
    def atom_ring(atom):
        if atom.kind == "Z":
            return ZZ
        if atom.kind == "Zp":
            return PadicRing(*atom.params)
        return witt_ring(*atom.params)

    rings = [atom_ring(a) for a in desc.atoms]
    return rings[0] if len(rings) == 1 else ProductRing(tuple(rings))


def build_group(desc: GroupDescriptor) -> FgAbelianGroup:
    free = sum(a.value for a in desc.atoms if a.kind == "Z")
    orders = [a.value for a in desc.atoms if a.kind == "C"]
    return FgAbelianGroup.from_cyclic(free, orders)


def parse_ring(text: str):
    """Descriptor text straight to a ring object."""
    return build_ring(parse_ring_descriptor(text))


def parse_group(text: str) -> FgAbelianGroup:
    """Descriptor text straight to a group in invariant-factor form."""
    return build_group(parse_group_descriptor(text))
