"""Quantum torus elements and their arithmetic.

Monomials are normalized as ``x^lam = x_1^lam_1 ... x_n^lam_n`` so that
``x^lam x^mu = tau(lam, mu) x^(lam+mu)`` with
``tau(lam, mu) = prod_{i>j} q_ij^(lam_i mu_j)``.
"""

from __future__ import annotations

from .errors import NotInPositivePart, PresentationMismatch
from .lattice import (Presentation, is_unimodular,
                      unimodular_inverse, vec_mat)
from .errors import NotUnimodular
from .scalars import Scalar, format_scalar, parse_scalar

MINUS_INFINITY = float("-inf")


def unit_vector(n: int, i: int, k: int = 1) -> tuple[int, ...]:
    return tuple(k if j == i else 0 for j in range(n))


def add_vec(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub_vec(a, b):
    return tuple(x - y for x, y in zip(a, b))


class TorusElement:
    """Finite sum ``sum c_lam x^lam``; zero coefficients are never stored."""

    __slots__ = ("P", "terms", "_hash")

    def __init__(self, P: Presentation, terms=None, *, _trusted: bool = False):
        self.P = P
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for lam, c in (terms or {}).items():
                lam = tuple(lam)
                if len(lam) != P.n:
                    raise ValueError(f"exponent {lam} has wrong length for rank {P.n}")
                c = P.field(c)
                if not c.is_zero():
                    clean[lam] = c
            self.terms = clean
        self._hash = None

    # constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, P):
        return cls(P, {}, _trusted=True)

    @classmethod
    def const(cls, P, c=1):
        c = P.field(c)
        return cls(P, {(0,) * P.n: c} if not c.is_zero() else {}, _trusted=True)

    @classmethod
    def mono(cls, P, lam, c=1):
        c = P.field(c)
        return cls(P, {tuple(lam): c} if not c.is_zero() else {}, _trusted=True)

    @classmethod
    def gen(cls, P, i: int, k: int = 1):
        """x_i^k (0-based i)."""
        return cls.mono(P, unit_vector(P.n, i, k))

    # basic protocol ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def support(self):
        return set(self.terms)

    def coef(self, lam) -> Scalar:
        return self.terms.get(tuple(lam), self.P.field.zero())

    def __eq__(self, other):
        if isinstance(other, TorusElement):
            return self.P == other.P and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == TorusElement.const(self.P, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _check(self, other):
        if isinstance(other, TorusElement):
            if other.P != self.P:
                raise PresentationMismatch("elements live in different tori")
            return other
        return TorusElement.const(self.P, other)

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for lam, c in other.terms.items():
            v = terms.get(lam)
            if v is None:
                terms[lam] = c
            else:
                v = v + c
                if v.is_zero():
                    del terms[lam]
                else:
                    terms[lam] = v
        return TorusElement(self.P, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.P, {k: -v for k, v in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> "TorusElement":
        c = self.P.field(c)
        if c.is_zero():
            return TorusElement.zero(self.P)
        return TorusElement(self.P, {k: v * c for k, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, TorusElement):
            return qt_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            ok, inv = is_invertible(self)
            if not ok:
                raise ValueError("only monomials have inverses")
            return inv ** (-k)
        out = TorusElement.const(self.P, 1)
        base = self
        while k:
            if k & 1:
                out = qt_mul(out, base)
            k >>= 1
            if k:
                base = qt_mul(base, base)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for lam in sorted(self.terms):
            c = format_scalar(self.terms[lam])
            if not any(lam):
                parts.append(c)
            else:
                parts.append(f"({c})*x^{list(lam)}" if c != "1" else f"x^{list(lam)}")
        return " + ".join(parts)

    # JSON --------------------------------------------------------------------

    def to_json(self) -> list:
        return [{"exp": list(lam), "coef": format_scalar(self.terms[lam])}
                for lam in sorted(self.terms)]

    @classmethod
    def from_json(cls, P: Presentation, data) -> "TorusElement":
        out = cls.zero(P)
        for rec in data:
            lam = tuple(int(x) for x in rec["exp"])
            if len(lam) != P.n:
                raise ValueError(f"exponent {lam} has wrong length for rank {P.n}")
            out = out + cls.mono(P, lam, parse_scalar(rec.get("coef", "1"), P.field))
        return out


def qt_mul(a: TorusElement, b: TorusElement) -> TorusElement:
    if a.P != b.P:
        raise PresentationMismatch("elements live in different tori")
    P = a.P
    out: dict = {}
    tau = P.tau
    for lam, c in a.terms.items():
        for mu, d in b.terms.items():
            nu = tuple(x + y for x, y in zip(lam, mu))
            v = c * d * tau(lam, mu)
            w = out.get(nu)
            out[nu] = v if w is None else w + v
    return TorusElement(P, {k: v for k, v in out.items() if not v.is_zero()}, _trusted=True)


def qt_commutator(a: TorusElement, b: TorusElement) -> TorusElement:
    return qt_mul(a, b) - qt_mul(b, a)


# ---------------------------------------------------------------------------
# degrees


class DegreeBasis:
    """Z-basis eps of the lattice, given by the rows of a unimodular matrix."""

    __slots__ = ("A", "A_inv", "weights", "n")

    def __init__(self, A):
        A = [tuple(int(x) for x in r) for r in A]
        if not is_unimodular(A):
            raise NotUnimodular(f"degree basis {A} is not unimodular")
        self.A = tuple(A)
        self.n = len(A)
        self.A_inv = tuple(tuple(r) for r in unimodular_inverse(A))
        # tr_eps(lam) = sum of eps-coordinates = lam . (A^-1 * 1)
        self.weights = tuple(sum(r) for r in self.A_inv)

    @classmethod
    def standard(cls, n: int) -> "DegreeBasis":
        return cls([unit_vector(n, i) for i in range(n)])

    def coords(self, lam) -> tuple[int, ...]:
        return vec_mat(lam, self.A_inv)

    def point(self, coords) -> tuple[int, ...]:
        return vec_mat(coords, self.A)

    def trace(self, lam) -> int:
        return sum(w * x for w, x in zip(self.weights, lam))

    def is_standard(self) -> bool:
        return self.A == tuple(unit_vector(self.n, i) for i in range(self.n))

    def __eq__(self, other):
        return isinstance(other, DegreeBasis) and self.A == other.A

    def __hash__(self):
        return hash(self.A)

    def __repr__(self):
        return f"DegreeBasis({[list(r) for r in self.A]})"


def degree(a: TorusElement, eps: DegreeBasis | None = None):
    if not a.terms:
        return MINUS_INFINITY
    if eps is None:
        return max(sum(lam) for lam in a.terms)
    return max(eps.trace(lam) for lam in a.terms)


def top_part(a: TorusElement, eps: DegreeBasis | None = None) -> TorusElement:
    """Homogeneous component of highest eps-degree."""
    d = degree(a, eps)
    tr = (lambda lam: sum(lam)) if eps is None else eps.trace
    return TorusElement(a.P, {k: v for k, v in a.terms.items() if tr(k) == d}, _trusted=True)


# ---------------------------------------------------------------------------
# centre, units, divisibility


def is_central_point(P: Presentation, lam) -> bool:
    return P.is_central(lam)


def centre_split(a: TorusElement):
    """(central, bracket): restriction of ``a`` to Xi and the remainder."""
    cen, br = {}, {}
    for lam, c in a.terms.items():
        (cen if a.P.is_central(lam) else br)[lam] = c
    return TorusElement(a.P, cen, _trusted=True), TorusElement(a.P, br, _trusted=True)


def is_central(a: TorusElement) -> bool:
    return all(a.P.is_central(lam) for lam in a.terms)


def commutator_witness(P: Presentation, lam):
    """(c, alpha, beta) with x^lam = c [x^alpha, x^beta], or None when lam is central."""
    lam = tuple(lam)
    for j in range(P.n):
        e = unit_vector(P.n, j)
        if not P.sigma(lam, e).is_one():
            alpha = sub_vec(lam, e)
            diff = P.tau(alpha, e) - P.tau(e, alpha)
            return diff.inverse(), alpha, e
    return None


def is_invertible(a: TorusElement):
    """(True, inverse) for nonzero monomials, else (False, None)."""
    if len(a.terms) != 1:
        return False, None
    (lam, c), = a.terms.items()
    neg = tuple(-x for x in lam)
    inv = TorusElement.mono(a.P, neg, (c * a.P.tau(lam, neg)).inverse())
    one = TorusElement.const(a.P, 1)
    assert qt_mul(a, inv) == one and qt_mul(inv, a) == one
    return True, inv


def in_positive_part(a: TorusElement, eps: DegreeBasis | None = None) -> bool:
    if eps is None:
        return all(min(lam) >= 0 for lam in a.terms)
    return all(min(eps.coords(lam)) >= 0 for lam in a.terms)


def divides(i: int, a: TorusElement) -> bool:
    """Whether x_i divides ``a`` inside Q^+ (0-based axis)."""
    if not in_positive_part(a):
        raise NotInPositivePart("element has support outside N^n")
    if not a.terms:
        return False
    return all(lam[i] > 0 for lam in a.terms)


# ---------------------------------------------------------------------------
# opposite algebra


def opposite(P: Presentation) -> Presentation:
    return Presentation([[x.inverse() for x in row] for row in P.q], P.field)


def op_factor(P: Presentation, lam) -> Scalar:
    """prod_{i<j} q_ij^(lam_i lam_j): the scalar making the identity-on-support map anti-multiplicative."""
    n = P.n
    # equals tau computed on the transposed matrix; reuse tau of the opposite ordering
    out = P.field.one()
    lf = P.log_form()
    if lf is not None:
        M, a, b = lf
        ea = eb = 0
        for i in range(n):
            if lam[i]:
                for j in range(i + 1, n):
                    if lam[j]:
                        ea += a[i][j] * lam[i] * lam[j]
                        eb += b[i][j] * lam[i] * lam[j]
        return P._from_log(ea, eb)
    for i in range(n):
        for j in range(i + 1, n):
            e = lam[i] * lam[j]
            if e:
                out = out * P.q[i][j] ** e
    return out


def op_map(a: TorusElement, target: Presentation | None = None) -> TorusElement:
    """Anti-isomorphism Q -> Q^op, x^lam -> op_factor(lam) x^lam."""
    Pop = target or opposite(a.P)
    return TorusElement(Pop, {lam: c * op_factor(a.P, lam) for lam, c in a.terms.items()},
                        _trusted=True)


# ---------------------------------------------------------------------------
# letter-expansion oracle


def letter_blocks(lam) -> list[tuple[int, int]]:
    """x^lam as powers (axis, exponent) in increasing axis order."""
    return [(i, k) for i, k in enumerate(lam) if k]


def letter_product(P: Presentation, lams) -> tuple[Scalar, tuple[int, ...]]:
    """Multiply monomials by sorting generator powers with adjacent swaps.

    Returns (c, nu) with x^lam1 ... x^lamk = c x^nu.  Swapping adjacent powers
    x_j^b x_i^a (j > i) into x_i^a x_j^b costs q_ji^(ab) by the defining
    relations; adjacent powers of one axis merge.  The q-exponents are tallied
    as integers and evaluated once at the end.
    """
    n = P.n
    word = []
    for lam in lams:
        word.extend(letter_blocks(lam))
    counts = [[0] * n for _ in range(n)]
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(word) - 1:
            (j, b), (i, a) = word[k], word[k + 1]
            if j == i:
                word[k:k + 2] = [(i, a + b)] if a + b else []
                changed = True
                continue
            if j > i:
                counts[j][i] += a * b
                word[k], word[k + 1] = word[k + 1], word[k]
                changed = True
            k += 1
    c = P.field.one()
    for j in range(n):
        for i in range(n):
            if counts[j][i]:
                c = c * P.q[j][i] ** counts[j][i]
    nu = [0] * n
    for i, e in word:
        nu[i] += e
    return c, tuple(nu)
