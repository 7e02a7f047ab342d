from __future__ import annotations

import cmath
import random

import pytest
from hypothesis import given, settings, strategies as st

from qtconj.errors import DivisionByZero, KindMismatch, ParseError
from qtconj.scalars import (INFINITE, QQ, CyclotomicField, FunctionField, PrimeField,
                            ResidueMap, field_arith, format_scalar, mult_order,
                            parse_field, parse_scalar, residue, zeta)


# complex embedding zeta_m -> exp(2 pi i / m); an oracle independent of the
# reduction modulo the cyclotomic polynomial
def embed_c(a, s_value=1.3 + 0.2j):
    F = a.field
    if isinstance(F, FunctionField):
        num = sum(embed_c(c) * s_value ** k for k, c in enumerate(a.num))
        den = sum(embed_c(c) * s_value ** k for k, c in enumerate(a.den))
        return num / den
    w = cmath.exp(2j * cmath.pi / F.m)
    return sum(c * w ** k for k, c in enumerate(a.c)) / a.d


def rand_cyc(F, rng):
    return sum((F(rng.randint(-4, 4)) * F.zeta(k) for k in range(F.degree)), F.zero())


def test_inverse_of_zeta4():
    assert field_arith(zeta(4), None, "inv") == zeta(4) ** 3


def test_s_times_inverse():
    F = FunctionField(QQ)
    s = F.s()
    assert field_arith(s, s ** -1, "mul") == F.one()


def test_rational_sum():
    assert field_arith(QQ(1) / 2, QQ(1) / 3, "add") == QQ(5) / 6


def test_orders():
    assert mult_order(zeta(6)) == 6
    assert mult_order(FunctionField(QQ).s()) is INFINITE
    assert mult_order(QQ(-1)) == 2
    assert mult_order(QQ(2)) is INFINITE


def test_order_of_3_mod_7():
    # enumerate the powers directly
    powers = [pow(3, k, 7) for k in range(1, 7)]
    assert powers.index(1) + 1 == 6
    assert mult_order(PrimeField(7)(3)) == 6


@pytest.mark.parametrize("m", [1, 3, 4, 5, 6, 8, 12, 15])
def test_zeta_is_primitive(m):
    z = zeta(m)
    assert z ** m == z.field.one()
    assert mult_order(z) == m
    assert abs(embed_c(z) - cmath.exp(2j * cmath.pi / m)) < 1e-9


def test_folded_field():
    # Q(zeta_6) = Q(zeta_3)
    assert CyclotomicField(6) is CyclotomicField(3)
    assert zeta(6) == -(zeta(3) ** 2)


def test_residues():
    h = ResidueMap(7, 1, None, 3)
    s = FunctionField(QQ).s()
    assert residue(s ** 2, h).v == 2
    assert residue(QQ(1), h).v == 1
    h13 = ResidueMap(13, 3, 3)
    assert pow(3, 3, 13) == 1
    assert residue(zeta(3), h13).v == 3


def test_residue_is_homomorphism():
    F = FunctionField(CyclotomicField(3))
    s, z = F.s(), F(zeta(3))
    h = ResidueMap(13, 3, 3, 5)
    rng = random.Random(1)
    for _ in range(200):
        a = F(rng.randint(-5, 5)) * s ** rng.randint(-2, 2) + z ** rng.randint(0, 2)
        b = F(rng.randint(1, 5)) * z * s ** rng.randint(-2, 2) - F(rng.randint(0, 3))
        assert h(a * b) == h(a) * h(b)
        assert h(a + b) == h(a) + h(b)


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        zeta(3) + zeta(5)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        zeta(3) / zeta(3).field.zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([3, 4, 5, 7, 8, 9, 12]))
def test_cyclotomic_matches_embedding(seed, m):
    rng = random.Random(seed)
    F = CyclotomicField(m)
    a, b, c = rand_cyc(F, rng), rand_cyc(F, rng), rand_cyc(F, rng)
    assert abs(embed_c(a * b) - embed_c(a) * embed_c(b)) < 1e-6
    assert abs(embed_c(a + b) - embed_c(a) - embed_c(b)) < 1e-9
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == F.one()
        assert abs(embed_c(a.inverse()) * embed_c(a) - 1) < 1e-6


def test_field_axioms_many_triples():
    rng = random.Random(7)
    F = FunctionField(CyclotomicField(4))
    s, i = F.s(), F(zeta(4))
    pool = [F(rng.randint(-3, 3)) + i * s ** rng.randint(-2, 2) for _ in range(30)]
    G = PrimeField(13)
    for _ in range(10 ** 4 // 4):
        a, b, c = (rng.choice(pool) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        x, y, w = (G(rng.randrange(13)) for _ in range(3))
        assert (x * y) * w == x * (y * w)
        assert x * (y + w) == x * y + x * w
    for a in pool[:10]:
        for b in pool[:10]:
            assert a * (b + pool[0]) == a * b + a * pool[0]
            if not b.is_zero():
                assert (a / b) * b == a
                assert abs(embed_c(a / b) - embed_c(a) / embed_c(b)) < 1e-6


def test_function_field_oracle():
    F = FunctionField(QQ)
    s = F.s()
    a = (s - 1) / (s + 2)
    b = s ** 2 + F(3)
    assert abs(embed_c(a * b) - embed_c(a) * embed_c(b)) < 1e-9
    assert ((s ** 2 - 1) / (s - 1)) == s + 1


def test_mult_order_divisor_property():
    for m in (4, 6, 10, 12):
        for j in range(m):
            a = zeta(m, j)
            k = mult_order(a)
            assert a ** k == a.field.one()
            assert all(a ** d != a.field.one() for d in range(1, k) if k % d == 0)


@pytest.mark.parametrize("text", ["3/2 * zeta(4)^1 * s^-2", "zeta(5)^3", "s - 1", "2 + zeta(5)",
                                  "-7/3", "s^2"])
def test_literal_round_trip(text):
    a = parse_scalar(text)
    assert parse_scalar(format_scalar(a), a.field) == a


def test_parse_field():
    assert parse_field("QQ") is QQ
    assert parse_field("QQ(zeta(3))(s)") is FunctionField(CyclotomicField(3))
    assert parse_field("GF(7)") is PrimeField(7)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_scalar("3 * * s")
    assert exc.value.position is not None
