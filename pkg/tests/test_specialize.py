from __future__ import annotations

import random

import pytest

from qtconj.errors import NoPrimeInRange, OutsideSubring, WitnessDegenerates
from qtconj.lattice import Presentation, central_lattice, is_fgc
from qtconj.lemmas import random_element
from qtconj.matlie import (CentroidTwist, Int, MorphismWord, ScalarFieldMap, TorusMatrix,
                           apply_morphism, lie_bracket, mad_extension_test, mat_mul,
                           standard_mad)
from qtconj.qtorus import TorusElement, qt_mul
from qtconj.scalars import QQ, FunctionField, PrimeField, ResidueMap, zeta
from qtconj.specialize import (certify, element_order_mod, propose_prime, root_of_order,
                               specialize_element, specialize_matrix,
                               specialize_presentation, specialize_word)

from wordgen import S2, Z3, associative_word, random_matrix

F = FunctionField(QQ)
s = F.s()
mono = TorusElement.mono


def test_order_helpers():
    # brute-force orders in F_7^x
    assert [element_order_mod(r, 7) for r in range(1, 7)] == [1, 3, 6, 3, 6, 2]
    z = root_of_order(13, 4)
    assert pow(z, 4, 13) == 1 and pow(z, 2, 13) != 1


def test_propose_prime_s():
    p, h = propose_prime(S2, None, 2, order_bound=5)
    assert p == 7 and h.s_image == 3
    assert element_order_mod(3, 7) == 6
    p, h = propose_prime(S2, None, 2, forbidden=[s - 1], order_bound=5)
    assert (p, h.s_image) == (7, 3)


def test_propose_prime_zeta3():
    p, h = propose_prime(Z3, None, 2)
    assert p == 7 and h.zeta_image == 2
    assert pow(2, 3, 7) == 1


def test_propose_prime_respects_ell():
    p, _ = propose_prime(Z3, None, 7)
    assert p > 7 and (p - 1) % 3 == 0


def test_no_prime_in_range():
    with pytest.raises(NoPrimeInRange):
        propose_prime(S2, None, 2, order_bound=50, limit=20)


def test_specialize_presentation():
    h = ResidueMap(7, 1, None, 3)
    Pb = specialize_presentation(S2, h)
    assert Pb.q[0][1] == PrimeField(7)(3)
    assert is_fgc(Pb) and central_lattice(Pb).index == 36
    h3 = ResidueMap(7, 3, 2)
    assert specialize_presentation(Z3, h3).q[0][1] == PrimeField(7)(2)
    C = Presentation.commutative(2)
    hc = ResidueMap(7, 1, None)
    assert specialize_presentation(C, hc) == Presentation.commutative(2, PrimeField(7))


def test_specialize_element_and_matrix():
    h = ResidueMap(7, 1, None, 3)
    a = mono(S2, (1, 0), 2)
    assert specialize_element(a, h).terms == {(1, 0): PrimeField(7)(2)}
    x = mono(S2, (1, 1), QQ(7) / 2)
    assert specialize_element(x, h).is_zero()
    g = Int.elementary(S2, 2, 0, 1, TorusElement.const(S2, s))
    gb, gib = specialize_matrix(g.g, h), specialize_matrix(g.g_inv, h)
    Pb = gb.P
    one = TorusMatrix.identity(Pb, 2)
    assert gb == one + TorusMatrix.unit(Pb, 2, 0, 1, 3)
    assert mat_mul(gb, gib) == one


def test_reduction_is_functorial():
    rng = random.Random(2)
    for P in (Z3, S2):
        p, h = propose_prime(P, None, 3, order_bound=10)
        Pb = specialize_presentation(P, h)
        for _ in range(40):
            a, b = random_element(P, rng), random_element(P, rng)
            assert specialize_element(qt_mul(a, b), h, Pb) == qt_mul(
                specialize_element(a, h, Pb), specialize_element(b, h, Pb))
        for _ in range(10):
            x, y = random_matrix(P, 2, rng), random_matrix(P, 2, rng)
            assert specialize_matrix(lie_bracket(x, y), h, Pb) == lie_bracket(
                specialize_matrix(x, h, Pb), specialize_matrix(y, h, Pb))


def test_reduction_commutes_with_words():
    rng = random.Random(3)
    for P in (Z3, S2):
        _, h = propose_prime(P, None, 3, order_bound=10)
        for _ in range(6):
            w = associative_word(P, 2, rng)
            wb, _ = specialize_word(w, h)
            x = random_matrix(P, 2, rng)
            tgt = wb.target
            lhs = specialize_matrix(apply_morphism(w, x), h, tgt)
            rhs = apply_morphism(wb, specialize_matrix(x, h, wb.source))
            assert lhs == rhs


def test_field_map_is_absorbed():
    h = ResidueMap(13, 3, 3)
    w = MorphismWord([ScalarFieldMap(Z3, 2)], 2)
    wb, h2 = specialize_word(w, h)
    assert len(wb) == 0
    assert h2(zeta(3) ** 2) == h(zeta(3))


def test_degenerate_witness():
    h = ResidueMap(7, 3, 2)
    # 1/7 has no residue mod 7
    w = MorphismWord([Int.diagonal(Z3, [QQ(7), QQ(1) / 7])], 2)
    with pytest.raises(OutsideSubring):
        specialize_word(w, h)
    # the central unit 7 becomes 0
    w = MorphismWord([CentroidTwist(Z3, TorusElement.const(Z3, 7))], 2)
    with pytest.raises(WitnessDegenerates):
        specialize_word(w, h)


def test_certificate_examples():
    p, h = propose_prime(S2, None, 2, forbidden=[s - 1], order_bound=5)
    cert = certify(S2, None, 2, None, [mono(S2, (1, 1)), s - 1], h)
    assert cert.valid
    idx = next(c for c in cert.conditions if c["condition"] == "p_does_not_divide_centre_index")
    assert idx["witness"] == [36, 36]
    bad = certify(S2, None, 5, None, [], ResidueMap(5, 1, None, 2))
    by_name = {c["condition"]: c["outcome"] for c in bad.conditions}
    assert not by_name["p_does_not_divide_ell"] and not bad.valid
    cert = certify(S2, None, 2, None, [mono(S2, (1, 0), 14)], h)
    by_name = {c["condition"]: c["outcome"] for c in cert.conditions}
    assert not by_name["designated_elements_nonzero_mod_p"]
    assert set(cert.to_json()) == {"residue_map", "valid", "conditions"}


def test_valid_certificate_keeps_standard_mad():
    p, h = propose_prime(S2, None, 3, order_bound=5)
    assert certify(S2, None, 3, None, [], h).valid
    Pb = specialize_presentation(S2, h)
    for b in standard_mad(3, Pb).basis:
        assert mad_extension_test(b).in_standard_mad
