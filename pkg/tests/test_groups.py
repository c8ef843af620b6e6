import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from deltaring.errors import GroupMismatch, GroupNotFinite, ValidationError
from deltaring.groups import (
    FgAbelianGroup,
    canonicalize,
    enumerate_elements,
    group_element_ops,
    quotient_map,
    smith_normal_form,
)


@given(st.lists(st.lists(st.integers(-12, 12), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_form_matches_sympy_and_transforms(rows):
    A = np.array(rows, dtype=object)
    S, U, V = smith_normal_form(A)
    assert (np.array(U, dtype=object).dot(A).dot(np.array(V, dtype=object)) == np.array(S, dtype=object)).all()
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    ours = [abs(int(S[i][i])) for i in range(min(A.shape))]
    ref = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = [abs(int(ref[i, i])) for i in range(min(A.shape))]
    assert ours == theirs


def test_canonical_form():
    assert FgAbelianGroup.from_cyclic(0, [6, 4]) == FgAbelianGroup(0, (2, 12))
    assert FgAbelianGroup.from_cyclic(1, [4]).descriptor == "C4+Z^1"
    assert FgAbelianGroup.from_cyclic(0, [1, 1]).descriptor == "Z^0"
    with pytest.raises(ValidationError):
        FgAbelianGroup(0, (4, 2))


def test_coordinate_change_is_an_isomorphism():
    orders = [6, 4]
    group, V = canonicalize(orders)
    src = list(itertools.product(range(6), range(4)))
    images = {group.element(np.array(x, dtype=object).dot(V)) for x in src}
    assert len(images) == 24 == group.order


def test_element_ops_examples():
    M = FgAbelianGroup(1, (6,))
    assert M.element([3, 2]) + M.element([5, -1]) == M.element([2, 1])
    C4, C5 = FgAbelianGroup.cyclic(4), FgAbelianGroup.cyclic(5)
    assert group_element_ops("scalar_mul", C4.element([3]), 2) == C4.element([2])
    assert group_element_ops("neg", C5.element([2])) == C5.element([3])
    with pytest.raises(GroupMismatch):
        C4.element([1]) + C5.element([1])


def test_enumerate_elements():
    assert len(list(enumerate_elements(FgAbelianGroup.cyclic(2)))) == 2
    assert len(list(FgAbelianGroup(0, (2, 2)).elements())) == 4
    Z = FgAbelianGroup(1, ())
    assert [x.coords for x in enumerate_elements(Z, 1)] == [(-1,), (0,), (1,)]
    M = FgAbelianGroup(2, (3,))
    elems = list(enumerate_elements(M, 2))
    assert len(elems) == len(set(elems)) == 3 * 25
    with pytest.raises(GroupNotFinite):
        Z.elements()


def test_index_round_trip():
    M = FgAbelianGroup(0, (2, 4, 8))
    for i, x in enumerate(M.elements()):
        assert M.index(x) == i and M.element_at(i) == x


def test_quotient_examples():
    q = quotient_map(FgAbelianGroup(1, ()), 1, 2)
    assert q.target == FgAbelianGroup.cyclic(2)
    assert q(q.source.element([3])) == q.target.element([1])
    q = quotient_map(FgAbelianGroup.cyclic(4), 1, 2)
    assert q.target == FgAbelianGroup.cyclic(2)
    assert q(q.source.element([3])) == q.target.element([1])
    # the 3-torsion is killed by 4 = 1 mod 3, leaving C_4
    q = quotient_map(FgAbelianGroup(1, (3,)), 2, 2)
    assert q.target == FgAbelianGroup.cyclic(4)


@pytest.mark.parametrize("group", [FgAbelianGroup(1, (3,)), FgAbelianGroup(0, (2, 12)), FgAbelianGroup(2, (4,))])
@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1)])
def test_quotient_is_surjective_homomorphism_killing_p_multiples(group, p, s):
    q = quotient_map(group, s, p)
    elems = list(enumerate_elements(group, 4 if group.free_rank else None))
    images = {q(x) for x in elems}
    if q.target.is_finite:
        assert images == set(q.target.elements())
    for x, y in itertools.product(elems[:30], elems[:30]):
        assert q(x + y) == q(x) + q(y)
    for x in elems:
        assert q(x * p**s).is_zero()
    expected = 1
    for d in group.torsion:
        expected *= np.gcd(d, p**s)
    assert q.target.order == expected * (p**s) ** group.free_rank


def test_p_power_torsion_predicate():
    assert FgAbelianGroup(0, (2, 4)).is_p_power_torsion(2)
    assert FgAbelianGroup(3, (9,)).is_p_power_torsion(3)
    assert not FgAbelianGroup(0, (6,)).is_p_power_torsion(2)
    assert FgAbelianGroup(2, ()).is_p_power_torsion(5)
