"""Exact coefficient fields: Q(zeta_m), Q(zeta_m)(s) and F_p.

Elements are immutable and canonically represented, so ``==`` and ``hash`` are
structural.  Field objects are interned per parameter; two elements are
compatible iff their ``field`` attributes are the same object.

Representations:

* ``CyclotomicField(m)``: integer coefficient vector in the power basis
  ``1, zeta, ..., zeta^(phi(m)-1)`` over one positive common denominator.
  ``m = 1`` is the rational field.  Orders ``m = 2 (mod 4)`` are folded onto
  ``m/2`` since the fields coincide.
* ``FunctionField(base)``: reduced quotient ``num/den`` of polynomials in
  ``s`` with coefficients in ``base``; ``den`` is monic.
* ``PrimeField(p)``: residue in ``[0, p)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import (DivisionByZero, KindMismatch, OutsideSubring, ParseError,
                     ZeroArgument)

__all__ = [
    "INFINITE", "zeta", "CyclotomicField", "FunctionField", "PrimeField", "QQ",
    "Scalar", "ResidueMap", "common_field", "embed", "field_arith",
    "mult_order", "residue", "parse_scalar", "format_scalar", "parse_field",
    "root_of_unity_exponent", "multiplicative_split", "divisors",
]


class _Infinite:
    """Marker for an infinite order or index."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Infinite"

    def __gt__(self, other):
        return other is not self

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return other is self

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num = _int_poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _int_poly_divexact(a: list[int], b: list[int]) -> list[int]:
    a = a[:]
    out = [0] * (len(a) - len(b) + 1)
    lb = b[-1]
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(a[i + len(b) - 1], lb)
        assert r == 0
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a[: len(b) - 1])
    return out


class Field:
    kind = "?"
    characteristic = 0

    def __call__(self, value) -> "Scalar":
        raise NotImplementedError

    def zero(self) -> "Scalar":
        return self(0)

    def one(self) -> "Scalar":
        return self(1)


class Scalar:
    """Common operator plumbing; subclasses implement the primitives."""

    __slots__ = ()
    field: Field

    # primitives: _add, _mul, __neg__, inverse, is_zero, __eq__, __hash__

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise KindMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._mul(self.inverse())

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result._mul(base)
            k >>= 1
            if k:
                base = base._mul(base)
        return result

    def __bool__(self):
        return not self.is_zero()

    @property
    def kind(self) -> str:
        return self.field.kind

    def is_one(self) -> bool:
        return self == self.field.one()

    def mult_order(self):
        return mult_order(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r}, {self.field!r})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# Q(zeta_m)


def _normalize_order(m: int) -> int:
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    if m % 4 == 2:
        m //= 2
    return m


class CyclotomicField(Field):
    _cache: dict[int, "CyclotomicField"] = {}

    def __new__(cls, m: int = 1):
        m = _normalize_order(m)
        inst = cls._cache.get(m)
        if inst is None:
            inst = super().__new__(cls)
            inst._setup(m)
            cls._cache[m] = inst
        return inst

    def __reduce__(self):
        return (CyclotomicField, (self.m,))

    def _setup(self, m: int) -> None:
        self.m = m
        phi_poly = cyclotomic_polynomial(m)
        self.degree = phi = len(phi_poly) - 1
        self.kind = "Rational" if m == 1 else "Cyclotomic"
        # red[e] = x^e mod Phi_m for 0 <= e < max(m, 2*phi - 1)
        top = max(m, 2 * phi - 1, phi + 1)
        red = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(top):
            red.append(tuple(cur))
            # multiply by x, reduce with the monic Phi_m
            carry = cur[-1]
            nxt = [0] + cur[:-1]
            if carry:
                for j in range(phi):
                    nxt[j] -= carry * phi_poly[j]
            cur = nxt
        self._red = red
        self._units = [k for k in range(1, m + 1) if gcd(k, m) == 1 and k != 1] if m > 2 else []
        self._zero = CycElt(self, (0,) * phi, 1)
        self._one = CycElt(self, (1,) + (0,) * (phi - 1), 1)
        self._roots = None

    def __repr__(self):
        return "QQ" if self.m == 1 else f"QQ(zeta({self.m}))"

    def __call__(self, value) -> "CycElt":
        if isinstance(value, CycElt) and value.field is self:
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return CycElt(self, (value,) + (0,) * (self.degree - 1), 1)
        if isinstance(value, Fraction):
            return CycElt(self, (value.numerator,) + (0,) * (self.degree - 1), value.denominator)
        if isinstance(value, Scalar):
            return embed(value, self)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def zeta(self, j: int = 1, order: int | None = None) -> "CycElt":
        """zeta_order^j; ``order`` must divide m (or 2m when m is odd)."""
        order = self.m if order is None else order
        if self.m % order == 0:
            e = (j * (self.m // order)) % self.m
            return CycElt(self, self._red[e], 1)
        if self.m % 2 == 1 and (2 * self.m) % order == 0:
            # zeta_{2m}^e = -zeta_m^{(e + m)/2}
            e = (j * (2 * self.m // order)) % (2 * self.m)
            if e % 2 == 0:
                return CycElt(self, self._red[(e // 2) % self.m], 1)
            return -CycElt(self, self._red[((e + self.m) // 2) % self.m], 1)
        raise ValueError(f"zeta({order}) is not in {self!r}")

    def roots_of_unity(self):
        """List of (element, M, e) with element = zeta_M^e, covering the torsion group."""
        if self._roots is None:
            roots = []
            m = self.m
            if m % 2 == 0:
                for j in range(m):
                    roots.append((self.zeta(j), m, j))
            else:
                for j in range(2 * m):
                    roots.append((self.zeta(j, 2 * m), 2 * m, j))
            self._roots = roots
        return self._roots


class CycElt(Scalar):
    __slots__ = ("field", "c", "d", "_h")

    def __init__(self, field: CyclotomicField, c: tuple, d: int):
        # caller guarantees len(c) == field.degree; normalise gcd and sign here
        if d < 0:
            c = tuple(-x for x in c)
            d = -d
        g = gcd(d, *c)
        if g != 1:
            if not any(c):
                c, d = (0,) * len(c), 1
            else:
                c = tuple(x // g for x in c)
                d //= g
        self.field = field
        self.c = c
        self.d = d
        self._h = None

    def is_zero(self):
        return not any(self.c)

    def __eq__(self, other):
        if isinstance(other, CycElt):
            return other.field is self.field and other.d == self.d and other.c == self.c
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.field.degree == 1 or not any(self.c[1:]):
                # agree with Fraction/int hashing for rational values
                self._h = hash(Fraction(self.c[0], self.d))
            else:
                self._h = hash((self.field.m, self.c, self.d))
        return self._h

    def __neg__(self):
        return CycElt(self.field, tuple(-x for x in self.c), self.d)

    def _add(self, o):
        if self.d == o.d:
            return CycElt(self.field, tuple(x + y for x, y in zip(self.c, o.c)), self.d)
        return CycElt(self.field, tuple(x * o.d + y * self.d for x, y in zip(self.c, o.c)),
                      self.d * o.d)

    def _mul(self, o):
        f = self.field
        phi = f.degree
        if phi == 1:
            return CycElt(f, (self.c[0] * o.c[0],), self.d * o.d)
        a, b = self.c, o.c
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:phi]
        red = f._red
        for e in range(phi, 2 * phi - 1):
            v = conv[e]
            if v:
                r = red[e]
                for j in range(phi):
                    if r[j]:
                        out[j] += v * r[j]
        return CycElt(f, tuple(out), self.d * o.d)

    def galois(self, k: int) -> "CycElt":
        """Image under zeta_m -> zeta_m^k (k coprime to m)."""
        f = self.field
        out = [0] * f.degree
        for j, x in enumerate(self.c):
            if x:
                r = f._red[(j * k) % f.m]
                for i in range(f.degree):
                    if r[i]:
                        out[i] += x * r[i]
        return CycElt(f, tuple(out), self.d)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        f = self.field
        if f.degree == 1:
            return CycElt(f, (self.d,), self.c[0])
        prod = f.one()
        for k in f._units:
            prod = prod._mul(self.galois(k))
        norm = self._mul(prod)
        assert not any(norm.c[1:]), "norm must be rational"
        n = Fraction(norm.c[0], norm.d)
        return CycElt(f, tuple(x * n.denominator for x in prod.c), prod.d * n.numerator)

    def rational_value(self) -> Fraction | None:
        if any(self.c[1:]):
            return None
        return Fraction(self.c[0], self.d)


QQ = CyclotomicField(1)


def zeta(m: int, j: int = 1) -> CycElt:
    """zeta_m^j as an element of Q(zeta_m)."""
    return CyclotomicField(m).zeta(j, m)


# ---------------------------------------------------------------------------
# Q(zeta_m)(s)


def _p_trim(p: list) -> tuple:
    while p and p[-1].is_zero():
        p.pop()
    return tuple(p)


def _p_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = out[i]._add(y)
    return _p_trim(out)


def _p_neg(a):
    return tuple(-x for x in a)


def _p_mul(a, b, zero):
    if not a or not b:
        return ()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j]._add(x._mul(y))
    return _p_trim(out)


def _p_scale(a, c):
    return tuple(x._mul(c) for x in a)


def _p_divmod(a, b, zero):
    """Polynomial division a = q*b + r over a field."""
    if len(a) < len(b):
        return (), a
    inv_lc = b[-1].inverse()
    r = list(a)
    q = [zero] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(b) - 1]._mul(inv_lc)
        q[i] = c
        if not c.is_zero():
            for j, y in enumerate(b):
                r[i + j] = r[i + j]._add(-(c._mul(y)))
    return _p_trim(q), _p_trim(r[: len(b) - 1])


def _p_monic(a):
    inv = a[-1].inverse()
    return tuple(x._mul(inv) for x in a)


def _s_order(a) -> int:
    k = 0
    while k < len(a) and a[k].is_zero():
        k += 1
    return k


def _is_s_power(a) -> bool:
    return a[-1].is_one() and all(x.is_zero() for x in a[:-1])


def _p_gcd(a, b, zero):
    while b:
        _, r = _p_divmod(a, b, zero)
        a, b = b, r
    return _p_monic(a) if a else a


class FunctionField(Field):
    _cache: dict[int, "FunctionField"] = {}
    kind = "RationalFunction"

    def __new__(cls, base: CyclotomicField | None = None):
        base = QQ if base is None else base
        inst = cls._cache.get(base.m)
        if inst is None:
            inst = super().__new__(cls)
            inst.base = base
            inst._zero = RFElt(inst, (), (base.one(),))
            inst._one = RFElt(inst, (base.one(),), (base.one(),))
            cls._cache[base.m] = inst
        return inst

    def __reduce__(self):
        return (FunctionField, (self.base,))

    @property
    def m(self) -> int:
        return self.base.m

    def __repr__(self):
        return f"{self.base!r}(s)"

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def __call__(self, value) -> "RFElt":
        if isinstance(value, RFElt) and value.field is self:
            return value
        if isinstance(value, Scalar):
            return embed(value, self)
        c = self.base(value)
        return RFElt(self, (c,) if not c.is_zero() else (), (self.base.one(),))

    def s(self, k: int = 1) -> "RFElt":
        zero, one = self.base.zero(), self.base.one()
        if k >= 0:
            return RFElt(self, (zero,) * k + (one,), (one,))
        return RFElt(self, (one,), (zero,) * (-k) + (one,))

    def constant(self, c: CycElt) -> "RFElt":
        return RFElt(self, (c,) if not c.is_zero() else (), (self.base.one(),))

    def from_polys(self, num, den) -> "RFElt":
        return RFElt._normalized(self, tuple(num), tuple(den))


class RFElt(Scalar):
    __slots__ = ("field", "num", "den", "_h")

    def __init__(self, field: FunctionField, num: tuple, den: tuple):
        # trusted constructor: (num, den) already canonical
        self.field = field
        self.num = num
        self.den = den
        self._h = None

    @staticmethod
    def _normalized(field: FunctionField, num: tuple, den: tuple) -> "RFElt":
        zero = field.base.zero()
        num = _p_trim(list(num))
        den = _p_trim(list(den))
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return field._zero
        if len(den) == 1:
            if not den[0].is_one():
                num = _p_scale(num, den[0].inverse())
            return RFElt(field, num, (field.base.one(),))
        if _is_s_power(den):
            k = min(_s_order(num), len(den) - 1)
            if k:
                num, den = num[k:], den[k:]
            return RFElt(field, num, den)
        g = _p_gcd(num, den, zero)
        if len(g) > 1:
            num, _ = _p_divmod(num, g, zero)
            den, _ = _p_divmod(den, g, zero)
        if not den[-1].is_one():
            inv = den[-1].inverse()
            num = _p_scale(num, inv)
            den = _p_scale(den, inv)
        return RFElt(field, num, den)

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        if isinstance(other, RFElt):
            return other.field is self.field and other.num == self.num and other.den == self.den
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if len(self.den) == 1 and len(self.num) <= 1:
                self._h = hash(self.num[0]) if self.num else hash(0)
            else:
                self._h = hash((self.num, self.den))
        return self._h

    def __neg__(self):
        return RFElt(self.field, _p_neg(self.num), self.den)

    def _add(self, o):
        f = self.field
        if not o.num:
            return self
        if not self.num:
            return o
        zero = f.base.zero()
        if self.den == o.den:
            num = _p_add(self.num, o.num)
            if len(self.den) == 1:
                return RFElt(f, num, self.den) if num else f._zero
            return RFElt._normalized(f, num, self.den)
        num = _p_add(_p_mul(self.num, o.den, zero), _p_mul(o.num, self.den, zero))
        return RFElt._normalized(f, num, _p_mul(self.den, o.den, zero))

    def _mul(self, o):
        f = self.field
        if not self.num or not o.num:
            return f._zero
        zero = f.base.zero()
        num = _p_mul(self.num, o.num, zero)
        if len(self.den) == 1 and len(o.den) == 1:
            return RFElt(f, num, self.den)
        return RFElt._normalized(f, num, _p_mul(self.den, o.den, zero))

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return RFElt._normalized(self.field, self.den, self.num)

    def is_constant(self) -> bool:
        return len(self.den) == 1 and len(self.num) <= 1

    def constant_value(self) -> CycElt | None:
        if not self.is_constant():
            return None
        return self.num[0] if self.num else self.field.base.zero()

    def monomial_form(self):
        """(c, k) with self = c * s^k, or None if not a monomial."""
        if not self.num:
            return None
        if not (_is_s_power(self.den)):
            return None
        k0 = _s_order(self.num)
        if len(self.num) != k0 + 1:
            return None
        return self.num[k0], k0 - (len(self.den) - 1)


# ---------------------------------------------------------------------------
# F_p


class PrimeField(Field):
    _cache: dict[int, "PrimeField"] = {}
    kind = "Prime"

    def __new__(cls, p: int):
        inst = cls._cache.get(p)
        if inst is None:
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"{p} is not prime")
            inst = super().__new__(cls)
            inst.p = p
            inst.characteristic = p
            inst._elts = {}
            inst._gen = None
            cls._cache[p] = inst
        return inst

    def __reduce__(self):
        return (PrimeField, (self.p,))

    def __repr__(self):
        return f"GF({self.p})"

    def __call__(self, value) -> "PElt":
        if isinstance(value, PElt) and value.field is self:
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return PElt(self, value % self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"{value} has no residue mod {self.p}")
            return PElt(self, value.numerator * pow(value.denominator, -1, self.p) % self.p)
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def generator(self) -> int:
        """Smallest primitive root mod p."""
        if self._gen is None:
            p = self.p
            if p == 2:
                self._gen = 1
            else:
                qs = [q for q in divisors(p - 1) if q > 1 and all(q % r for r in range(2, q))]
                for g in range(2, p):
                    if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
                        self._gen = g
                        break
        return self._gen


class PElt(Scalar):
    __slots__ = ("field", "v")

    def __init__(self, field: PrimeField, v: int):
        self.field = field
        self.v = v

    def is_zero(self):
        return self.v == 0

    def __eq__(self, other):
        if isinstance(other, PElt):
            return other.field is self.field and other.v == self.v
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.field(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __neg__(self):
        return PElt(self.field, (-self.v) % self.field.p)

    def _add(self, o):
        return PElt(self.field, (self.v + o.v) % self.field.p)

    def _mul(self, o):
        return PElt(self.field, (self.v * o.v) % self.field.p)

    def inverse(self):
        if self.v == 0:
            raise DivisionByZero("inverse of zero")
        return PElt(self.field, pow(self.v, -1, self.field.p))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PElt(self.field, pow(self.v, k, self.field.p))


# ---------------------------------------------------------------------------
# field-level helpers


def common_field(fields) -> Field:
    """Smallest supported field containing every field in ``fields``."""
    fields = list(fields)
    primes = {f.p for f in fields if isinstance(f, PrimeField)}
    if primes:
        if len(primes) > 1 or len(primes) != len({id(f) for f in fields}) and any(
                not isinstance(f, PrimeField) for f in fields):
            raise KindMismatch(f"cannot combine {fields}")
        return PrimeField(primes.pop())
    m = 1
    has_s = False
    for f in fields:
        fm = f.m
        m = m * fm // gcd(m, fm)
        has_s = has_s or isinstance(f, FunctionField)
    base = CyclotomicField(m)
    return FunctionField(base) if has_s else base


def embed(a: Scalar, field: Field) -> Scalar:
    """Canonical inclusion of ``a`` into a larger field."""
    if a.field is field:
        return a
    if isinstance(a, int) or isinstance(a, Fraction):
        return field(a)
    if isinstance(field, PrimeField) or isinstance(a, PElt):
        raise KindMismatch(f"no embedding {a.field} -> {field}")
    if isinstance(a, CycElt):
        if isinstance(field, FunctionField):
            return field.constant(embed(a, field.base))
        src, dst = a.field, field
        if dst.m % src.m:
            raise KindMismatch(f"no embedding {src} -> {dst}")
        step = dst.m // src.m
        out = [0] * dst.degree
        for j, x in enumerate(a.c):
            if x:
                r = dst._red[(j * step) % dst.m]
                for i in range(dst.degree):
                    if r[i]:
                        out[i] += x * r[i]
        return CycElt(dst, tuple(out), a.d)
    if isinstance(a, RFElt):
        if not isinstance(field, FunctionField):
            raise KindMismatch(f"no embedding {a.field} -> {field}")
        num = tuple(embed(x, field.base) for x in a.num)
        den = tuple(embed(x, field.base) for x in a.den)
        return RFElt(field, num, den)
    raise KindMismatch(f"no embedding {a.field} -> {field}")


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Dispatch for the four primitive operations ``add, mul, inv, neg``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def root_of_unity_exponent(a: Scalar):
    """Return (M, e) with a = zeta_M^e, or None if a is not a root of unity."""
    if a.is_zero():
        raise ZeroArgument("zero is not a unit")
    if isinstance(a, PElt):
        p = a.field.p
        g = a.field.generator()
        x = 1
        for e in range(p - 1):
            if x == a.v:
                return p - 1, e
            x = x * g % p
        raise AssertionError("unreachable: generator enumerates F_p^*")
    if isinstance(a, RFElt):
        c = a.constant_value()
        return None if c is None else root_of_unity_exponent(c)
    for elt, M, e in a.field.roots_of_unity():
        if elt == a:
            return M, e
    return None


def mult_order(a: Scalar):
    """Smallest k >= 1 with a^k = 1, or INFINITE."""
    if a.is_zero():
        raise ZeroArgument("multiplicative order of zero")
    if isinstance(a, PElt):
        p = a.field.p
        for d in divisors(p - 1):
            if pow(a.v, d, p) == 1:
                return d
    found = root_of_unity_exponent(a)
    if found is None:
        return INFINITE
    M, e = found
    return M // gcd(M, e)


def multiplicative_split(a: Scalar):
    """Return (M, e, b) with a = zeta_M^e * s^b, or None if a has no such form."""
    if isinstance(a, RFElt):
        mono = a.monomial_form()
        if mono is None:
            return None
        c, b = mono
        r = root_of_unity_exponent(c)
        return None if r is None else (r[0], r[1], b)
    r = root_of_unity_exponent(a)
    return None if r is None else (r[0], r[1], 0)


# ---------------------------------------------------------------------------
# residue maps


class ResidueMap:
    """Ring homomorphism from (a subring of) a characteristic-0 field into F_p.

    ``zeta_image`` is the image of zeta_m for the source field's order ``m``
    and must have exact multiplicative order m; ``s_image`` is the image of the
    transcendental (required iff the source field is a function field).
    """

    def __init__(self, p: int, m: int = 1, zeta_image: int | None = None,
                 s_image: int | None = None):
        self.target = PrimeField(p)
        self.p = p
        self.m = _normalize_order(m)
        if self.m == 1:
            zeta_image = 1
        if zeta_image is None:
            raise ValueError("zeta image required for m > 1")
        zeta_image %= p
        if mult_order(self.target(zeta_image)) != self.m:
            raise ValueError(f"{zeta_image} does not have order {self.m} mod {p}")
        if s_image is not None and s_image % p == 0:
            raise ValueError("s must map to a nonzero residue")
        self.zeta_image = zeta_image
        self.s_image = None if s_image is None else s_image % p
        self._zpow = [pow(zeta_image, j, p) for j in range(max(self.m, 1))]

    def __repr__(self):
        parts = [f"p={self.p}"]
        if self.m > 1:
            parts.append(f"zeta({self.m})->{self.zeta_image}")
        if self.s_image is not None:
            parts.append(f"s->{self.s_image}")
        return f"ResidueMap({', '.join(parts)})"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "zeta_image": self.zeta_image, "s_image": self.s_image}

    def _cyc(self, a: CycElt) -> int:
        p = self.p
        if a.field.m != self.m:
            if self.m % a.field.m:
                raise KindMismatch(f"{a.field} is not inside QQ(zeta({self.m}))")
            a = embed(a, CyclotomicField(self.m))
        if a.d % p == 0:
            raise OutsideSubring(f"denominator {a.d} vanishes mod {p}")
        acc = 0
        for j, x in enumerate(a.c):
            if x:
                acc += x * self._zpow[j]
        return acc * pow(a.d, -1, p) % p

    def _poly(self, poly) -> int:
        r = self.s_image
        acc = 0
        for c in reversed(poly):
            acc = (acc * r + self._cyc(c)) % self.p
        return acc

    def __call__(self, a) -> PElt:
        if isinstance(a, (int, Fraction)):
            return self.target(a)
        if isinstance(a, PElt):
            if a.field is not self.target:
                raise KindMismatch(f"{a.field} vs {self.target}")
            return a
        if isinstance(a, CycElt):
            return PElt(self.target, self._cyc(a))
        if isinstance(a, RFElt):
            if self.s_image is None:
                if a.is_constant():
                    return PElt(self.target, self._cyc(a.constant_value()))
                raise OutsideSubring("residue map has no image for s")
            den = self._poly(a.den)
            if den == 0:
                raise OutsideSubring(f"denominator vanishes at s={self.s_image} mod {self.p}")
            return PElt(self.target, self._poly(a.num) * pow(den, -1, self.p) % self.p)
        raise KindMismatch(f"cannot reduce {a!r}")


def residue(a: Scalar, h: ResidueMap) -> PElt:
    return h(a)


# ---------------------------------------------------------------------------
# literal grammar: sums/products/quotients of rationals, zeta(m)^j and s^j

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta)|(s)\b|(\^)|([-+*/()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in scalar literal {text!r}",
                             position=pos + len(text[pos:]) - len(text[pos:].lstrip()))
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("zeta", None, start))
        elif m.group(3):
            tokens.append(("s", None, start))
        else:
            tokens.append((m.group(m.lastindex), None, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r} but found {tok[0]!r} in {self.text!r}", position=tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek() == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def signed_int(self):
        sign = 1
        while self.peek() in "+-":
            if self.take()[0] == "-":
                sign = -sign
        if self.peek() == "(":
            self.take()
            v = self.signed_int()
            self.take(")")
            return sign * v
        return sign * self.take("int")[1]

    def power(self):
        node = self.atom()
        if self.peek() == "^":
            self.take()
            node = ("pow", node, self.signed_int())
        return node

    def atom(self):
        kind, val, pos = self.toks[self.i]
        if kind == "int":
            self.take()
            return ("int", val)
        if kind == "zeta":
            self.take()
            self.take("(")
            m = self.take("int")[1]
            self.take(")")
            if m < 1:
                raise ParseError("zeta order must be positive", position=pos)
            return ("zeta", m)
        if kind == "s":
            self.take()
            return ("s",)
        if kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected token {kind!r} in {self.text!r}", position=pos)


def _scan(node, acc):
    tag = node[0]
    if tag == "zeta":
        acc["m"] = acc["m"] * node[1] // gcd(acc["m"], node[1])
    elif tag == "s":
        acc["s"] = True
    for child in node[1:]:
        if isinstance(child, tuple):
            _scan(child, acc)


def _evaluate(node, field: Field):
    tag = node[0]
    if tag == "int":
        return field(node[1])
    if tag == "zeta":
        if isinstance(field, PrimeField):
            raise ParseError("zeta(m) is not available over a prime field")
        base = field.base if isinstance(field, FunctionField) else field
        z = base.zeta(1, node[1])
        return field(z) if isinstance(field, FunctionField) else z
    if tag == "s":
        if not isinstance(field, FunctionField):
            raise ParseError("s requires a rational function field")
        return field.s(1)
    if tag == "neg":
        return -_evaluate(node[1], field)
    if tag == "pow":
        return _evaluate(node[1], field) ** node[2]
    a, b = _evaluate(node[1], field), _evaluate(node[2], field)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    if tag == "*":
        return a * b
    if tag == "/":
        if b.is_zero():
            raise ParseError("division by zero in scalar literal")
        return a / b
    raise AssertionError(tag)


def _parse_tree(text: str):
    parser = _Parser(text)
    tree = parser.expr()
    parser.take("end")
    return tree


def literal_field(text: str) -> Field:
    """Smallest field in which the literal makes sense."""
    acc = {"m": 1, "s": False}
    _scan(_parse_tree(str(text)), acc)
    base = CyclotomicField(acc["m"])
    return FunctionField(base) if acc["s"] else base


def parse_scalar(text, field: Field | None = None) -> Scalar:
    """Parse a scalar literal such as ``"3/2 * zeta(4)^1 * s^-2"``."""
    if isinstance(text, int):
        return (field or QQ)(text)
    text = str(text)
    tree = _parse_tree(text)
    if field is None:
        acc = {"m": 1, "s": False}
        _scan(tree, acc)
        base = CyclotomicField(acc["m"])
        field = FunctionField(base) if acc["s"] else base
    try:
        return _evaluate(tree, field)
    except (ValueError, KindMismatch) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{exc} in literal {text!r}") from exc


def _fmt_frac(num: int, den: int) -> str:
    return str(num) if den == 1 else f"{num}/{den}"


def _fmt_root(a: CycElt) -> str | None:
    if a.field.m == 1 or a.d != 1 or sum(abs(x) for x in a.c) > a.field.degree:
        return None
    for elt, M, e in a.field.roots_of_unity():
        if elt == a:
            g = gcd(M, e)
            M, e = M // g, e // g
            if M == 1:
                return "1"
            if M == 2:
                return "-1"
            return f"zeta({M})" if e == 1 else f"zeta({M})^{e}"
    return None


def _fmt_cyc(a: CycElt) -> str:
    m = a.field.m
    root = _fmt_root(a)
    if root is not None:
        return root
    terms = []
    for j, x in enumerate(a.c):
        if not x:
            continue
        f = Fraction(x, a.d)
        coef = _fmt_frac(f.numerator, f.denominator)
        if j == 0:
            terms.append(coef)
        else:
            mono = f"zeta({m})" if j == 1 else f"zeta({m})^{j}"
            if coef == "1":
                terms.append(mono)
            elif coef == "-1":
                terms.append(f"-{mono}")
            else:
                terms.append(f"{coef}*{mono}")
    return " + ".join(terms) if terms else "0"


def _fmt_poly(poly) -> str:
    terms = []
    for k, c in enumerate(poly):
        if c.is_zero():
            continue
        cs = _fmt_cyc(c)
        if k == 0:
            terms.append(cs if " + " not in cs else f"({cs})")
            continue
        mono = "s" if k == 1 else f"s^{k}"
        if cs == "1":
            terms.append(mono)
        elif cs == "-1":
            terms.append(f"-{mono}")
        elif " + " in cs:
            terms.append(f"({cs})*{mono}")
        else:
            terms.append(f"{cs}*{mono}")
    return " + ".join(terms) if terms else "0"


def format_scalar(a) -> str:
    """Inverse of :func:`parse_scalar` (given the field)."""
    if isinstance(a, (int, Fraction)):
        return str(a)
    if isinstance(a, PElt):
        return str(a.v)
    if isinstance(a, CycElt):
        return _fmt_cyc(a)
    if isinstance(a, RFElt):
        if len(a.den) == 1:
            return _fmt_poly(a.num)
        if _is_s_power(a.den) and len(a.num) == 1 + _s_order(a.num):
            # c * s^-k
            c = _fmt_cyc(a.num[-1])
            k = len(a.num) - 1 - (len(a.den) - 1)
            mono = f"s^{k}" if k != 1 else "s"
            if c == "1":
                return mono
            return f"({c})*{mono}" if " + " in c else f"{c}*{mono}"
        return f"({_fmt_poly(a.num)})/({_fmt_poly(a.den)})"
    raise TypeError(f"not a scalar: {a!r}")


_FIELD_RE = re.compile(r"^\s*(?:GF\((\d+)\)|QQ(?:\(zeta\((\d+)\)\))?(\(s\))?)\s*$")


def parse_field(text: str) -> Field:
    """Parse ``QQ``, ``QQ(zeta(m))``, ``QQ(zeta(m))(s)``, ``QQ(s)`` or ``GF(p)``."""
    m = _FIELD_RE.match(text or "")
    if not m:
        raise ParseError(f"unknown field literal {text!r}")
    if m.group(1):
        return PrimeField(int(m.group(1)))
    base = CyclotomicField(int(m.group(2) or 1))
    return FunctionField(base) if m.group(3) else base
