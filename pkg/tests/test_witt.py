import itertools

import pytest

from deltaring.delta import delta_p
from deltaring.errors import NotIrreducible
from deltaring.witt import (
    construct_witt_ring,
    default_modulus,
    is_irreducible_mod_p,
    witt_frobenius,
    witt_teichmuller,
)
from oracles import WittVectors

SMALL = [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)]


def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)


def test_frobenius_image_f4():
    W = construct_witt_ring(2, 2, 2, (1, 1, 1))
    assert W.modulus == (1, 1, 1)
    assert W.frobenius_image == (3, 3)
    x = W.generator()
    assert witt_frobenius(x) == W.element([3, 3])
    assert witt_frobenius(witt_frobenius(x)) == x


def test_frobenius_image_f9():
    W = construct_witt_ring(3, 2, 2, (1, 0, 1))
    assert W.frobenius_image == (0, 8)


def test_degree_one_is_padic_with_identity_frobenius():
    W = construct_witt_ring(5, 1, 3, (3, 1))
    assert W.size == 125
    for x in W.elements():
        assert witt_frobenius(x) == x


def test_reducible_rejected():
    with pytest.raises(NotIrreducible):
        construct_witt_ring(2, 2, 2, (1, 0, 1))
    assert not is_irreducible_mod_p((0, 1, 1), 2)


@pytest.mark.parametrize("p,k,r", SMALL + [(3, 2, 3), (2, 2, 4)])
def test_frobenius_image_is_root_and_lifts_p_power(p, k, r):
    W = construct_witt_ring(p, k, r)
    F = W.element(W.frobenius_image)
    f = W.modulus
    value = W.zero()
    for c in reversed(f):
        value = value * F + c
    assert value.is_zero()
    assert (F - W.generator() ** p).reduce(1).is_zero()


@pytest.mark.parametrize("p,k,r", SMALL)
def test_frobenius_is_bijective_ring_endomorphism_of_order_k(p, k, r):
    W = construct_witt_ring(p, k, r)
    elems = list(W.elements())
    images = [witt_frobenius(x) for x in elems]
    assert len(set(images)) == len(elems)
    for x, y in itertools.product(elems[:40], elems):
        assert witt_frobenius(x * y) == witt_frobenius(x) * witt_frobenius(y)
        assert witt_frobenius(x + y) == witt_frobenius(x) + witt_frobenius(y)
    for x in elems:
        y = x
        for _ in range(k):
            y = witt_frobenius(y)
        assert y == x


def test_teichmuller_examples():
    W = construct_witt_ring(2, 2, 2)
    assert witt_teichmuller(W, [1]) == W.one()
    omega = witt_teichmuller(W, [0, 1])
    assert omega**3 == W.one()
    assert omega.reduce(1) == W.with_precision(1).generator()
    Z9 = construct_witt_ring(3, 1, 2)
    assert witt_teichmuller(Z9, 2).coeffs == (8,)


@pytest.mark.parametrize("p,k,r", SMALL + [(3, 2, 3)])
def test_teichmuller_units_count_and_delta(p, k, r):
    W = construct_witt_ring(p, k, r)
    q = p**k
    fixed = [u for u in W.elements() if u.is_unit() and u**q == u]
    assert len(fixed) == q - 1
    for u in fixed:
        assert witt_frobenius(u) == u**p
        if r >= 2:
            assert delta_p(u).is_zero()


def _iota(W, V, x):
    """Witt coordinates (a_0, a_1, ...) to sum_i p^i tau(a_i^(p^-i))."""
    out = W.zero()
    root = V.p ** (V.k - 1)
    for i, a in enumerate(x):
        for _ in range(i):
            a = V.F.pow(a, root)
        if any(a):
            out = out + witt_teichmuller(W, list(a)) * V.p**i
    return out


@pytest.mark.parametrize("p,k,r", [(2, 2, 2), (2, 2, 3), (3, 2, 2)])
def test_agrees_with_witt_coordinates(p, k, r):
    """The polynomial model is isomorphic to Witt vectors, compatibly with delta."""
    W = construct_witt_ring(p, k, r)
    V = WittVectors(p, k, r, W.fbar)
    Vlow = WittVectors(p, k, r - 1, W.fbar)
    Wlow = W.lower()
    elems = list(V.elements())
    image = {x: _iota(W, V, x) for x in elems}
    assert len(set(image.values())) == W.size
    for x, y in itertools.product(elems, repeat=2):
        assert image[V.add(x, y)] == image[x] + image[y]
        assert image[V.mul(x, y)] == image[x] * image[y]
    for x in elems:
        assert image[V.frobenius(x)] == witt_frobenius(image[x])
        assert _iota(Wlow, Vlow, V.delta(x)) == delta_p(image[x])
