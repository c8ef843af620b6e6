import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltaring.descriptors import (
    GroupAtom,
    GroupDescriptor,
    RingAtom,
    RingDescriptor,
    parse_descriptor,
    parse_group,
    parse_ring,
    render,
)
from deltaring.errors import DescriptorSyntaxError, PrimeMismatch, ValidationError
from deltaring.groups import FgAbelianGroup
from deltaring.rings import PadicRing, ProductRing


def test_examples():
    assert parse_descriptor("W(2,2,3)") == RingDescriptor((RingAtom("W", (2, 2, 3)),))
    assert parse_ring("Zp(3,2)xZp(3,2)") == ProductRing((PadicRing(3, 2), PadicRing(3, 2)))
    assert parse_group("C4+Z^1") == FgAbelianGroup(1, (4,))
    assert parse_descriptor(" Zp( 3 ,2 )  x  Zp(3, 2) ") == parse_descriptor("Zp(3,2)xZp(3,2)")


@pytest.mark.parametrize("text,offset", [
    ("Zp(2,3", 6),
    ("Zp(2,,3)", 5),
    ("Q", 0),
    ("C4+", 3),
    ("C4+D", 3),
    ("W(2,2)", 5),
    ("Zp(2,3)x", 8),
    ("Zp(2,3) y", 8),
    ("ä Zp(2,3)", 0),
    ("Zp(2,3)ä", 7),
])
def test_syntax_errors_report_byte_offsets(text, offset):
    with pytest.raises(DescriptorSyntaxError) as info:
        parse_descriptor(text)
    assert info.value.offset == offset


@pytest.mark.parametrize("text,error", [
    ("Zp(4,2)", ValidationError),
    ("Zp(2,2)xW(3,2,2)", PrimeMismatch),
    ("C1", ValidationError),
    ("Zp(2,0)", ValidationError),
    ("W(2,2,0)", ValidationError),
])
def test_validation_errors(text, error):
    with pytest.raises(error):
        parse_descriptor(text)


primes = st.sampled_from([2, 3, 5, 7])
ring_atoms = st.one_of(
    st.builds(lambda r: ("Zp", (r,)), st.integers(1, 9)),
    st.builds(lambda k, r: ("W", (k, r)), st.integers(1, 4), st.integers(1, 9)),
)


@given(primes, st.lists(ring_atoms, min_size=1, max_size=4))
def test_ring_round_trip(p, atoms):
    desc = RingDescriptor(tuple(RingAtom(kind, (p,) + rest) for kind, rest in atoms))
    assert parse_descriptor(render(desc)) == desc


@given(st.lists(st.one_of(st.builds(lambda a: GroupAtom("Z", a), st.integers(0, 5)),
                          st.builds(lambda d: GroupAtom("C", d), st.integers(2, 60))), min_size=1, max_size=5))
def test_group_round_trip(atoms):
    desc = GroupDescriptor(tuple(atoms))
    assert parse_descriptor(render(desc)) == desc


def test_built_objects_render_back():
    for text in ["Zp(3,2)", "W(2,2,3)", "Zp(3,2)xZp(3,2)", "Z"]:
        assert parse_ring(text).descriptor == text
    for text in ["C4+Z^1", "C2+C12", "Z^0", "Z^2"]:
        assert parse_group(text).descriptor == text
