from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from qtconj.errors import NotInPositivePart
from qtconj.lattice import Presentation
from qtconj.qtorus import (MINUS_INFINITY, DegreeBasis, TorusElement, centre_split,
                           commutator_witness, degree, divides, is_invertible,
                           letter_product, op_map, opposite, qt_commutator, qt_mul)
from qtconj.scalars import QQ, FunctionField, PrimeField, zeta

from oracles import letter_oracle as oracle

S = FunctionField(QQ).s()
Z3 = Presentation.from_upper(2, {(0, 1): zeta(3)})
PS = Presentation.from_upper(2, {(0, 1): S})


def rand_elt(P, rng, terms=4, r=3):
    return TorusElement(P, {tuple(rng.randint(-r, r) for _ in range(P.n)):
                            P.field(rng.randint(-3, 3)) for _ in range(rng.randint(1, terms))})


def test_inverse_generator():
    x1 = TorusElement.gen(Z3, 0)
    assert qt_mul(x1, TorusElement.gen(Z3, 0, -1)) == TorusElement.const(Z3)


def test_defining_relation():
    for P in (Z3, PS):
        x1, x2 = TorusElement.gen(P, 0), TorusElement.gen(P, 1)
        assert (qt_mul(x1, x2) - qt_mul(x2, x1).scale(P.q[0][1])).is_zero()


@pytest.mark.parametrize("P", [Z3, PS])
def test_worked_product(P):
    c, nu = oracle(P, (1, 1), (1, 0))
    assert nu == (2, 1) and c == P.q[0][1] ** -1
    prod = qt_mul(TorusElement.mono(P, (1, 1)), TorusElement.mono(P, (1, 0)))
    assert prod == TorusElement.mono(P, (2, 1), P.q[0][1] ** -1)


def test_commutator_examples():
    for P in (Z3, PS):
        x1, x2 = TorusElement.gen(P, 0), TorusElement.gen(P, 1)
        assert qt_commutator(x1, x1).is_zero()
        expected = TorusElement.mono(P, (1, 1), P.field.one() - P.q[0][1] ** -1)
        assert qt_commutator(x1, x2) == expected
    z = TorusElement.mono(Z3, (3, -3), zeta(3))
    b = rand_elt(Z3, random.Random(0))
    assert qt_commutator(z, b).is_zero()


def test_oracle_matches_package():
    rng = random.Random(4)
    F = FunctionField(zeta(5).field)
    presentations = [
        Presentation.from_upper(3, {(0, 1): zeta(5), (1, 2): zeta(5) ** 2, (0, 2): zeta(5) ** 4}),
        Presentation.from_upper(3, {(0, 1): F.s(), (0, 2): F(zeta(5)) * F.s() ** -1}),
        Presentation.from_upper(2, {(0, 1): PrimeField(7)(3)}),
    ]
    for P in presentations:
        for _ in range(150):
            lam = tuple(rng.randint(-3, 3) for _ in range(P.n))
            mu = tuple(rng.randint(-3, 3) for _ in range(P.n))
            c, nu = oracle(P, lam, mu)
            assert qt_mul(TorusElement.mono(P, lam), TorusElement.mono(P, mu)) == TorusElement.mono(P, nu, c)
            assert letter_product(P, [lam, mu]) == (c, nu)


def test_degree_examples():
    assert degree(TorusElement.mono(Z3, (2, -1))) == 1
    a, b = TorusElement.mono(Z3, (1, 0)), TorusElement.mono(Z3, (0, 2))
    assert degree(qt_mul(a, b)) == 3 == degree(a) + degree(b)
    assert degree(TorusElement.zero(Z3)) == MINUS_INFINITY


def test_centre_split_examples():
    a = TorusElement(Z3, {(3, 0): 2, (1, 1): 5})
    cen, br = centre_split(a)
    assert cen == TorusElement.mono(Z3, (3, 0), 2)
    assert br == TorusElement.mono(Z3, (1, 1), 5)
    # x^(1,1) is a multiple of a commutator, checked with the oracle
    k, al, be = commutator_witness(Z3, (1, 1))
    c1, n1 = oracle(Z3, al, be)
    c2, n2 = oracle(Z3, be, al)
    assert n1 == n2 == (1, 1) and k * (c1 - c2) == Z3.field.one()
    one = TorusElement.const(Z3)
    assert centre_split(one) == (one, TorusElement.zero(Z3))
    com = qt_commutator(TorusElement.gen(Z3, 0), TorusElement.gen(Z3, 1))
    assert centre_split(com) == (TorusElement.zero(Z3), com)


def test_centre_split_random():
    rng = random.Random(8)
    for P in (Z3, PS):
        for _ in range(40):
            a = rand_elt(P, rng, 5)
            cen, br = centre_split(a)
            assert cen + br == a
            for _ in range(20):
                assert qt_commutator(cen, rand_elt(P, rng, 2)).is_zero()


def test_invertibility():
    ok, inv = is_invertible(TorusElement.mono(Z3, (1, 2), 3))
    assert ok and qt_mul(inv, TorusElement.mono(Z3, (1, 2), 3)) == TorusElement.const(Z3)
    x1, x2 = TorusElement.gen(Z3, 0), TorusElement.gen(Z3, 1)
    assert is_invertible(x1 + x2) == (False, None)
    assert is_invertible(TorusElement.zero(Z3)) == (False, None)


def test_divides():
    a = TorusElement(Z3, {(1, 1): 1, (2, 0): 1})
    assert divides(0, a)
    assert not divides(1, a)
    one = TorusElement.const(Z3)
    assert not divides(0, one) and not divides(1, one)
    with pytest.raises(NotInPositivePart):
        divides(0, TorusElement.mono(Z3, (-1, 0)))


def test_opposite():
    P5 = Presentation.from_upper(2, {(0, 1): zeta(5)})
    assert opposite(P5).q[0][1] == zeta(5) ** -1
    assert opposite(opposite(P5)) == P5
    C = Presentation.commutative(3)
    assert opposite(C) == C


def test_op_map_is_anti_involution():
    rng = random.Random(2)
    for P in (Z3, PS):
        for _ in range(40):
            a, b = rand_elt(P, rng, 3, 2), rand_elt(P, rng, 3, 2)
            assert op_map(qt_mul(a, b)) == qt_mul(op_map(b), op_map(a))
            assert op_map(op_map(a), P) == a


def test_ring_axioms():
    rng = random.Random(9)
    for k in range(1000):
        P = (Z3, PS)[k % 2]
        a, b, c = (rand_elt(P, rng, 4, 3) for _ in range(3))
        assert qt_mul(qt_mul(a, b), c) == qt_mul(a, qt_mul(b, c))
        if k % 10 == 0:
            assert qt_mul(a, b + c) == qt_mul(a, b) + qt_mul(a, c)
            assert qt_mul(TorusElement.const(P), a) == a
            prod = qt_mul(a, b)
            assert not prod.is_zero() or a.is_zero() or b.is_zero()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2),
       st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=1, max_size=3))
def test_degree_additive_any_basis(lam, pts):
    eps = DegreeBasis([[1, 1], [0, 1]])
    a = TorusElement(Z3, {tuple(p): 1 for p in pts})
    b = TorusElement.mono(Z3, tuple(lam), 2)
    assert degree(qt_mul(a, b), eps) == degree(a, eps) + degree(b, eps)
