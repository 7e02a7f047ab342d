from __future__ import annotations

import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from qtconj.errors import NotCanonical
from qtconj.lattice import (Presentation, block_orders, canonical_presentation,
                            central_lattice, change_basis, det, hermite_rows,
                            identity, invariant_factor_orders, is_canonical_shape,
                            is_fgc, is_unimodular, mat_mul, smith_normal_form,
                            symbol_decomposition)
from qtconj.lemmas import random_unimodular
from qtconj.scalars import INFINITE, QQ, FunctionField, zeta


def minors_gcd(M, k):
    """gcd of all k x k minors (determinantal divisor oracle)."""
    g = 0
    rows, cols = len(M), len(M[0])
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            g = gcd(g, det([[M[i][j] for j in C] for i in R]))
    return g


def formula_change(P, A):
    n = P.n
    q = [[P.field.one()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = P.field.one()
            for s in range(n):
                for t in range(n):
                    e = A[i][s] * A[j][t]
                    if e:
                        v = v * P.q[s][t] ** e
            q[i][j] = v
    return q


def test_snf_examples():
    _, D, _ = smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]
    U, D, V = smith_normal_form(identity(3))
    assert D == identity(3)
    assert smith_normal_form([[0]])[1] == [[0]]


def test_snf_random_against_minors():
    rng = random.Random(3)
    for _ in range(100):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        U, D, V = smith_normal_form(M)
        assert mat_mul(mat_mul(U, M), V) == D
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        diag = [D[i][i] for i in range(min(r, c))]
        assert all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)
        for a, b in zip(diag, diag[1:]):
            assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
        if min(r, c) <= 4:
            prod = 1
            for k in range(1, min(r, c) + 1):
                prod *= abs(diag[k - 1])
                assert prod == minors_gcd(M, k)


def test_change_basis_examples():
    P = Presentation.from_upper(2, {(0, 1): zeta(3)})
    assert change_basis(P, identity(2)) == P
    assert change_basis(P, [[0, 1], [1, 0]]).q[0][1] == zeta(3) ** -1
    P5 = Presentation.from_upper(2, {(0, 1): zeta(5)})
    assert change_basis(P5, [[1, 1], [0, 1]]).q[0][1] == zeta(5)


def test_change_basis_matches_formula_and_cocycle():
    rng = random.Random(11)
    F = FunctionField(QQ)
    P = Presentation.from_upper(3, {(0, 1): zeta(4), (1, 2): zeta(4) ** 3})
    Ps = Presentation.from_upper(3, {(0, 1): F.s(), (0, 2): F.s() ** 2})
    for Q in (P, Ps):
        for _ in range(15):
            A = random_unimodular(3, rng)
            B = random_unimodular(3, rng)
            assert [list(r) for r in change_basis(Q, A).q] == formula_change(Q, A)
            assert change_basis(change_basis(Q, A), B) == change_basis(Q, mat_mul(B, A))


@pytest.mark.parametrize("ell", [2, 3, 5, 6, 12])
def test_central_lattice_zeta(ell):
    P = Presentation.from_upper(2, {(0, 1): zeta(ell)})
    lat = central_lattice(P)
    assert sorted(map(tuple, lat.basis)) == sorted([(ell, 0), (0, ell)])
    assert lat.index == ell * ell


def test_central_lattice_trivial_cases():
    lat = central_lattice(Presentation.commutative(1))
    assert lat.index == 1 and list(map(tuple, lat.basis)) == [(1,)]
    s = FunctionField(QQ).s()
    lat = central_lattice(Presentation.from_upper(2, {(0, 1): s}))
    assert lat.basis == [] or list(lat.basis) == []
    assert lat.index is INFINITE
    # brute force confirms only 0 is central
    P = Presentation.from_upper(2, {(0, 1): s})
    central = [lam for lam in itertools.product(range(-10, 11), repeat=2) if P.is_central(lam)]
    assert central == [(0, 0)]


def test_central_lattice_saturated():
    rng = random.Random(5)
    F = FunctionField(QQ)
    cases = [
        Presentation.from_upper(3, {(0, 1): zeta(4), (0, 2): zeta(6), (1, 2): QQ(-1)}),
        Presentation.from_upper(3, {(0, 1): F.s(), (1, 2): F.s() ** 2}),
        Presentation.from_upper(2, {(0, 1): zeta(12) ** 4}),
    ]
    for P in cases:
        lat = central_lattice(P)
        for _ in range(200):
            lam = tuple(rng.randint(-5, 5) for _ in range(P.n))
            assert lat.contains(lam) == P.is_central(lam)


def test_fgc():
    assert is_fgc(Presentation.from_upper(2, {(0, 1): zeta(3)}))
    assert not is_fgc(Presentation.from_upper(2, {(0, 1): FunctionField(QQ).s()}))
    assert is_fgc(Presentation.commutative(3))


def test_canonical_examples():
    P = Presentation.from_upper(2, {(0, 1): zeta(5)})
    A, Pc = canonical_presentation(P)
    assert A == identity(2) and Pc == P
    A, Pc = canonical_presentation(Presentation.commutative(3))
    assert A == identity(3)
    assert symbol_decomposition(Pc).s == 0


def _canonical_seed(orders, n):
    entries = {(2 * i, 2 * i + 1): zeta(o) for i, o in enumerate(orders)}
    return Presentation.from_upper(n, entries, None)


def test_scramble_recovers_orders():
    rng = random.Random(2)
    seed = _canonical_seed([3, 2], 4)
    for _ in range(10):
        A0 = random_unimodular(4, rng, steps=5)
        P = change_basis(seed, A0)
        A, Pc = canonical_presentation(P)
        assert is_unimodular(A)
        assert is_canonical_shape(Pc)
        assert change_basis(P, A) == Pc
        assert invariant_factor_orders(block_orders(Pc)) == invariant_factor_orders([3, 2]) == [6]


def test_invariant_factors():
    assert invariant_factor_orders([3, 2]) == [6]
    assert invariant_factor_orders([6, 4]) == [12, 2]
    assert invariant_factor_orders([5]) == [5]


def test_symbol_decomposition_examples():
    for ell in (2, 3, 5):
        sd = symbol_decomposition(Presentation.from_upper(2, {(0, 1): zeta(ell)}))
        assert sd.s == 1 and list(sd.orders) == [ell]
        assert [tuple(t) for t in sd.central_generators] == [(ell, 0), (0, ell)]
    sd = symbol_decomposition(Presentation.commutative(3))
    assert sd.s == 0
    assert [tuple(t) for t in sd.central_generators] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    P = Presentation.from_upper(4, {(0, 1): zeta(6), (2, 3): zeta(2)})
    sd = symbol_decomposition(P)
    assert sd.s == 2 and list(sd.orders) == [6, 2]
    assert [tuple(e) for e in sd.etale_generators] == [(1, 0, 0, 0), (0, 0, 1, 0)]


def test_symbol_decomposition_needs_canonical():
    P = change_basis(Presentation.from_upper(4, {(0, 1): zeta(3), (2, 3): zeta(3)}),
                     [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 1]])
    if not is_canonical_shape(P):
        with pytest.raises(NotCanonical):
            symbol_decomposition(P)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_rows_spans_same_lattice(rows):
    H = hermite_rows(rows)
    # same determinantal divisors => same lattice up to unimodular change
    M = [list(r) for r in rows]
    if H:
        k = len(H)
        assert minors_gcd(M, k) == minors_gcd([list(r) for r in H], k)
