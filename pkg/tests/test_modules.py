from __future__ import annotations

import random

import pytest

from qtconj.errors import NotAssociativeWord, NotPositive, SystemInvalid, ZeroVector
from qtconj.lattice import Presentation
from qtconj.lemmas import random_element, random_system
from qtconj.matlie import Int, MorphismWord, TorusMatrix, Transpose, mat_mul
from qtconj.modules import (ModVector, OrthogonalSystem, SubmoduleSpec, build_conjugator,
                            certify_cyclic, default_window, is_indivisible, left_divide,
                            mat_vec, minimal_vector, plus_slice, right_divide,
                            solve_membership, system_from_morphism, vec_degree)
from qtconj.qtorus import MINUS_INFINITY, DegreeBasis, TorusElement, degree, qt_mul

from wordgen import S2, Z3

E = TorusMatrix.unit
mono = TorusElement.mono
L1 = Presentation.commutative(1)


def vec(P, *coords):
    return ModVector(P, [c if isinstance(c, TorusElement) else TorusElement.const(P, c)
                         for c in coords])


def shear(P, ell=2):
    """The idempotent E_11 + x_1 E_21."""
    return E(P, ell, 0, 0) + E(P, ell, 1, 0, TorusElement.gen(P, 0))


def test_vec_degree():
    x1 = TorusElement.gen(Z3, 0)
    assert vec_degree(vec(Z3, 1, x1)) == 1
    v = ModVector.basis_vector(Z3, 2, 0)
    q = mono(Z3, (2, 1))
    assert vec_degree(v.right_mul(q)) == 3
    assert vec_degree(ModVector(Z3, [0, 0])) == MINUS_INFINITY


def test_degree_additive_on_vectors():
    rng = random.Random(0)
    for P in (Z3, S2):
        for _ in range(50):
            v = ModVector(P, [random_element(P, rng) for _ in range(2)])
            q = random_element(P, rng)
            if v.is_zero() or q.is_zero():
                continue
            vq = v.right_mul(q)
            assert not vq.is_zero()
            assert vec_degree(vq) == vec_degree(v) + degree(q)


def test_system_from_morphism_examples():
    assert system_from_morphism(MorphismWord([], 2, Z3)) == OrthogonalSystem.standard(Z3, 2)
    x1 = TorusElement.gen(Z3, 0)
    w = MorphismWord([Int.elementary(Z3, 2, 1, 0, x1)], 2)
    O = system_from_morphism(w)
    assert O.idempotents == (E(Z3, 2, 0, 0) + E(Z3, 2, 1, 0, x1), E(Z3, 2, 1, 1) - E(Z3, 2, 1, 0, x1))
    O = system_from_morphism(MorphismWord([Int.permutation(Z3, [1, 0])], 2))
    assert O.idempotents == (E(Z3, 2, 1, 1), E(Z3, 2, 0, 0))
    with pytest.raises(NotAssociativeWord):
        system_from_morphism(MorphismWord([Transpose(Z3)], 2))


def test_system_validation():
    with pytest.raises(SystemInvalid):
        OrthogonalSystem((E(Z3, 2, 0, 0), E(Z3, 2, 0, 0)))
    with pytest.raises(SystemInvalid):
        OrthogonalSystem((E(Z3, 2, 0, 0),))
    with pytest.raises(SystemInvalid):
        SubmoduleSpec(E(Z3, 2, 0, 1))


def test_decomposition_recomposes():
    rng = random.Random(1)
    for _ in range(10):
        es, _ = random_system(Z3, 3, rng)
        O = OrthogonalSystem(es)
        v = ModVector(Z3, [random_element(Z3, rng) for _ in range(3)])
        parts = [mat_vec(e, v) for e in O.idempotents]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        assert total == v
        for e, p in zip(O.idempotents, parts):
            assert mat_vec(e, p) == p


def test_plus_slice_examples():
    U = SubmoduleSpec(E(Z3, 2, 0, 0))
    assert plus_slice(U, 0) == [ModVector.basis_vector(Z3, 2, 0)]
    W = SubmoduleSpec(shear(L1))
    assert plus_slice(W, 0) == []
    (b,) = plus_slice(W, 1)
    assert b == vec(L1, 1, TorusElement.gen(L1, 0))
    assert plus_slice(W, -1) == []


def test_plus_slice_dimensions_free_line():
    # U = e_1 Q has dim U_t = #{lambda in N^2 : |lambda| <= t}
    U = SubmoduleSpec(E(Z3, 2, 0, 0))
    for t in range(4):
        assert len(plus_slice(U, t)) == (t + 1) * (t + 2) // 2


def test_minimal_vector_examples():
    assert minimal_vector(SubmoduleSpec(E(Z3, 2, 0, 0))) == ModVector.basis_vector(Z3, 2, 0)
    u = minimal_vector(SubmoduleSpec(shear(Z3)))
    assert u == vec(Z3, 1, TorusElement.gen(Z3, 0))
    # g E_11 g^-1 with g = diag(x_1, 1) is again e_1 Q
    g = Int.diagonal(Z3, [TorusElement.gen(Z3, 0), 1])
    e = g.apply(E(Z3, 2, 0, 0))
    assert minimal_vector(SubmoduleSpec(e)) == ModVector.basis_vector(Z3, 2, 0)


def test_is_indivisible_examples():
    x1, x2 = TorusElement.gen(Z3, 0), TorusElement.gen(Z3, 1)
    assert is_indivisible(vec(Z3, 1, x1))
    assert not is_indivisible(vec(Z3, x1, mono(Z3, (1, 1))))
    assert is_indivisible(vec(Z3, x1, x2))
    with pytest.raises(ZeroVector):
        is_indivisible(vec(Z3, 0, 0))
    with pytest.raises(NotPositive):
        is_indivisible(vec(Z3, TorusElement.gen(Z3, 0, -1), 0))


def test_solve_membership_examples():
    x1, x2 = TorusElement.gen(Z3, 0), TorusElement.gen(Z3, 1)
    u0 = vec(Z3, 1, x1)
    assert solve_membership(u0, u0) == TorusElement.const(Z3)
    # x_1 x_2 is already the normal-ordered monomial x^(1,1)
    target = vec(Z3, x2, mono(Z3, (1, 1)))
    assert qt_mul(x1, x2) == mono(Z3, (1, 1))
    assert solve_membership(target, u0) == x2
    assert solve_membership(ModVector.basis_vector(Z3, 2, 0), u0) is None
    with pytest.raises(ZeroVector):
        solve_membership(u0, vec(Z3, 0, 0))


def test_divisions_round_trip():
    rng = random.Random(6)
    for P in (Z3, S2):
        for _ in range(60):
            a = random_element(P, rng, terms=3, r=2)
            q = random_element(P, rng, terms=3, r=2)
            if a.is_zero():
                continue
            assert left_divide(a, qt_mul(a, q)) == q
            assert right_divide(qt_mul(q, a), a) == q
        a = TorusElement.gen(P, 0) + TorusElement.gen(P, 1)
        assert left_divide(a, TorusElement.const(P)) is None
        assert right_divide(TorusElement.const(P), a) is None


def test_certify_cyclic_examples():
    r = certify_cyclic(SubmoduleSpec(E(Z3, 2, 0, 0)), t_max=3)
    assert r.is_cyclic and r.generator == ModVector.basis_vector(Z3, 2, 0)
    g = Int.elementary(Z3, 2, 1, 0, mono(Z3, (1, 1)))
    e = g.apply(E(Z3, 2, 0, 0))
    r = certify_cyclic(SubmoduleSpec(e))
    assert r.is_cyclic
    assert r.generator == mat_vec(g.g, ModVector.basis_vector(Z3, 2, 0))
    r = certify_cyclic(SubmoduleSpec(E(Z3, 3, 0, 0) + E(Z3, 3, 1, 1)), t_max=3)
    assert r.kind == "CounterWitness"
    assert vec_degree(r.witness) == 0
    assert r.to_json()["kind"] == "CounterWitness"


def test_window_exhausted():
    g = Int.elementary(Z3, 2, 1, 0, mono(Z3, (3, 2)))
    r = certify_cyclic(SubmoduleSpec(g.apply(E(Z3, 2, 0, 0))), t_max=2)
    assert r.kind == "WindowExhausted"


def test_default_window():
    x = mono(Z3, (2, 1))
    assert default_window([E(Z3, 2, 0, 1, x)]) == 10
    assert default_window([TorusMatrix.identity(Z3, 2)]) == 4


def test_build_conjugator_examples():
    g, h, _ = build_conjugator(OrthogonalSystem.standard(Z3, 2))
    assert g == h == TorusMatrix.identity(Z3, 2)
    x1 = TorusElement.gen(Z3, 0)
    O = system_from_morphism(MorphismWord([Int.elementary(Z3, 2, 1, 0, x1)], 2))
    g, h, _ = build_conjugator(O)
    assert g == TorusMatrix.identity(Z3, 2) + E(Z3, 2, 1, 0, x1)
    mad = E(Z3, 2, 0, 0) - E(Z3, 2, 1, 1)
    assert mat_mul(mat_mul(g, mad), h) == O.idempotents[0] - O.idempotents[1]
    O = system_from_morphism(MorphismWord([Int.permutation(Z3, [1, 0])], 2))
    g, _, _ = build_conjugator(O)
    assert g == E(Z3, 2, 1, 0) + E(Z3, 2, 0, 1)


@pytest.mark.parametrize("P", [Z3, S2], ids=["zeta3", "s"])
def test_build_conjugator_random(P):
    rng = random.Random(9)
    for _ in range(8):
        ell = rng.choice([2, 3])
        es, _ = random_system(P, ell, rng)
        g, h, gens = build_conjugator(OrthogonalSystem(es))
        one = TorusMatrix.identity(P, ell)
        assert mat_mul(g, h) == one == mat_mul(h, g)
        for i, e in enumerate(es):
            assert mat_mul(mat_mul(g, E(P, ell, i, i)), h) == e
            assert is_indivisible(gens[i])


def test_nonstandard_degree_basis():
    eps = DegreeBasis([[1, 0], [1, 1]])
    x1 = TorusElement.gen(Z3, 0)
    O = system_from_morphism(MorphismWord([Int.elementary(Z3, 2, 1, 0, x1)], 2))
    g, h, _ = build_conjugator(O, eps)
    assert mat_mul(g, h) == TorusMatrix.identity(Z3, 2)
