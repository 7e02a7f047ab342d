"""Matrices over quantum tori, the Lie layers gl/sl, and morphism words."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import (BadCharacteristic, ChainMismatch, InvalidWitness,
                     NotDiagonal, NotInSl, SizeMismatch)
from .lattice import (Presentation, central_lattice, change_basis, is_unimodular,
                      unimodular_inverse, vec_mat)
from .errors import NotUnimodular
from .qtorus import (TorusElement, centre_split, is_central, is_invertible,
                     op_map, opposite, qt_mul)
from .scalars import (CycElt, PElt, RFElt,
                      Scalar, embed, format_scalar, parse_scalar)


# ---------------------------------------------------------------------------
# matrices


class TorusMatrix:
    __slots__ = ("P", "size", "entries", "_hash")

    def __init__(self, P: Presentation, entries):
        rows = [list(r) for r in entries]
        size = len(rows)
        if size < 1 or any(len(r) != size for r in rows):
            raise SizeMismatch("matrix must be square")
        for r in rows:
            for k, a in enumerate(r):
                if not isinstance(a, TorusElement):
                    r[k] = TorusElement.const(P, a)
                elif a.P != P:
                    raise SizeMismatch("entries live over different presentations")
        self.P = P
        self.size = size
        self.entries = tuple(tuple(r) for r in rows)
        self._hash = None

    @classmethod
    def zero(cls, P, ell):
        z = TorusElement.zero(P)
        return cls(P, [[z] * ell for _ in range(ell)])

    @classmethod
    def identity(cls, P, ell):
        return cls.diag(P, [1] * ell)

    @classmethod
    def diag(cls, P, values):
        ell = len(values)
        z = TorusElement.zero(P)
        rows = [[z] * ell for _ in range(ell)]
        for i, v in enumerate(values):
            rows[i][i] = v if isinstance(v, TorusElement) else TorusElement.const(P, v)
        return cls(P, rows)

    @classmethod
    def unit(cls, P, ell, i, j, a=1):
        """a * E_ij (0-based indices)."""
        z = TorusElement.zero(P)
        rows = [[z] * ell for _ in range(ell)]
        rows[i][j] = a if isinstance(a, TorusElement) else TorusElement.const(P, a)
        return cls(P, rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _check(self, other):
        if not isinstance(other, TorusMatrix):
            raise TypeError("expected a TorusMatrix")
        if other.size != self.size:
            raise SizeMismatch(f"sizes {self.size} and {other.size}")
        if other.P != self.P:
            raise SizeMismatch("matrices live over different presentations")
        return other

    def __eq__(self, other):
        return (isinstance(other, TorusMatrix) and self.P == other.P
                and self.entries == other.entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __add__(self, other):
        other = self._check(other)
        return TorusMatrix(self.P, [[a + b for a, b in zip(r, s)]
                                    for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        other = self._check(other)
        return TorusMatrix(self.P, [[a - b for a, b in zip(r, s)]
                                    for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return TorusMatrix(self.P, [[-a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, TorusMatrix):
            return mat_mul(self, other)
        return self.map(lambda a: a * other)

    def __rmul__(self, other):
        if isinstance(other, TorusElement):
            return self.map(lambda a: qt_mul(other, a))
        return self.map(lambda a: a * other)

    def map(self, fn, P=None) -> "TorusMatrix":
        return TorusMatrix(P or self.P, [[fn(a) for a in r] for r in self.entries])

    def transpose(self) -> "TorusMatrix":
        return TorusMatrix(self.P, [list(r) for r in zip(*self.entries)])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero()
                   for i in range(self.size) for j in range(self.size) if i != j)

    def diagonal(self) -> list[TorusElement]:
        return [self.entries[i][i] for i in range(self.size)]

    def column(self, j) -> list[TorusElement]:
        return [self.entries[i][j] for i in range(self.size)]

    def __repr__(self):
        rows = ["[" + ", ".join(repr(a) for a in r) + "]" for r in self.entries]
        return "TorusMatrix([" + ", ".join(rows) + "])"

    def to_json(self) -> dict:
        return {"size": self.size, "entries": [[a.to_json() for a in r] for r in self.entries]}

    @classmethod
    def from_json(cls, P, data) -> "TorusMatrix":
        size = int(data["size"])
        rows = data["entries"]
        if len(rows) != size or any(len(r) != size for r in rows):
            raise SizeMismatch(f"entries do not form a {size}x{size} array")
        return cls(P, [[TorusElement.from_json(P, e) for e in r] for r in rows])


def mat_mul(x: TorusMatrix, y: TorusMatrix) -> TorusMatrix:
    y = x._check(y)
    ell = x.size
    rows = []
    for i in range(ell):
        row = []
        for j in range(ell):
            acc = TorusElement.zero(x.P)
            for k in range(ell):
                a, b = x.entries[i][k], y.entries[k][j]
                if a.terms and b.terms:
                    acc = acc + qt_mul(a, b)
            row.append(acc)
        rows.append(row)
    return TorusMatrix(x.P, rows)


def lie_bracket(x: TorusMatrix, y: TorusMatrix) -> TorusMatrix:
    return mat_mul(x, y) - mat_mul(y, x)


def mat_trace(x: TorusMatrix) -> TorusElement:
    acc = TorusElement.zero(x.P)
    for a in x.diagonal():
        acc = acc + a
    return acc


def in_sl(x: TorusMatrix) -> bool:
    return centre_split(mat_trace(x))[0].is_zero()


@dataclass(frozen=True)
class SlDecomposition:
    l0: TorusMatrix  # diagonal part
    off: dict  # (i, j) -> TorusElement, i != j, nonzero entries only
    bracket_component: TorusElement  # the [Q,Q] E_11 coordinate of l0
    traceless: TorusMatrix  # l0 - bracket_component E_11, diagonal with zero trace

    def reassemble(self) -> TorusMatrix:
        x = self.l0
        for (i, j), a in self.off.items():
            x = x + TorusMatrix.unit(x.P, x.size, i, j, a)
        return x


def sl_decompose(x: TorusMatrix) -> SlDecomposition:
    if not in_sl(x):
        raise NotInSl("trace has a nonzero central part")
    ell, P = x.size, x.P
    l0 = TorusMatrix.diag(P, x.diagonal())
    off = {(i, j): x.entries[i][j] for i in range(ell) for j in range(ell)
           if i != j and x.entries[i][j].terms}
    tr = mat_trace(x)
    traceless = l0 - TorusMatrix.unit(P, ell, 0, 0, tr)
    return SlDecomposition(l0, off, tr, traceless)


def _characteristic(P: Presentation) -> int:
    return getattr(P.field, "characteristic", 0)


def check_good_characteristic(P: Presentation, ell: int) -> None:
    p = _characteristic(P)
    if p and (p <= 3 or ell % p == 0):
        raise BadCharacteristic(f"characteristic {p} is not good for sl_{ell}")


def gl_split(x: TorusMatrix):
    """(z, X) with x = z E + X, z central and X in sl."""
    ell = x.size
    p = _characteristic(x.P)
    if p and ell % p == 0:
        raise BadCharacteristic(f"{ell} is not invertible in characteristic {p}")
    cen, _ = centre_split(mat_trace(x))
    z = cen.scale(x.P.field(1) / ell) if cen.terms else cen
    X = x - TorusMatrix.diag(x.P, [z] * ell)
    return z, X


# ---------------------------------------------------------------------------
# standard MAD and the extension test


@dataclass(frozen=True)
class StandardMad:
    ell: int
    basis: tuple  # E_ii - E_{i+1,i+1}

    def contains(self, d: TorusMatrix) -> bool:
        """Direct linear algebra: d is diagonal with F-scalar entries summing to 0."""
        if not d.is_diagonal():
            return False
        vals = []
        for a in d.diagonal():
            if any(any(lam) for lam in a.terms):
                return False
            vals.append(a.coef((0,) * d.P.n))
        total = d.P.field.zero()
        for v in vals:
            total = total + v
        return total.is_zero()


def standard_mad(ell: int, P: Presentation) -> StandardMad:
    if ell < 2:
        raise SizeMismatch("ell must be at least 2")
    check_good_characteristic(P, ell)
    basis = tuple(TorusMatrix.unit(P, ell, i, i) - TorusMatrix.unit(P, ell, i + 1, i + 1)
                  for i in range(ell - 1))
    return StandardMad(ell, basis)


@dataclass(frozen=True)
class MadTestResult:
    in_standard_mad: bool
    step: int | None = None
    witness: object = None
    reason: str = ""

    def to_json(self) -> dict:
        if self.in_standard_mad:
            return {"outcome": "InStandardMad"}
        w = self.witness
        return {"outcome": "NotADExtension", "step": self.step,
                "witness": list(w) if isinstance(w, tuple) else w, "reason": self.reason}


def _is_scalar(a: TorusElement) -> bool:
    return all(not any(lam) for lam in a.terms)


def mad_extension_test(d: TorusMatrix) -> MadTestResult:
    if not d.is_diagonal():
        raise NotDiagonal("mad_extension_test expects a diagonal matrix")
    if not in_sl(d):
        raise NotInSl("trace has a nonzero central part")
    ell = d.size
    diag = d.diagonal()
    # (1) ad d_i diagonalizable on Q  <=>  d_i central
    for i, a in enumerate(diag):
        if not is_central(a):
            return MadTestResult(False, 1, i, f"entry {i} is not central")
    # (2) left multiplication by d_i - d_j diagonalizable  <=>  d_i - d_j in F
    for i in range(ell):
        for j in range(i + 1, ell):
            if not _is_scalar(diag[i] - diag[j]):
                return MadTestResult(False, 2, (i, j), f"d_{i} - d_{j} is central but not in F")
    # (3) telescoping: d_i = d_ell + c_i with c_i in F, trace 0 forces d_ell in F
    P = d.P
    zero = (0,) * P.n
    cs = [(diag[i] - diag[-1]).coef(zero) for i in range(ell)]
    total = P.field.zero()
    for c in cs:
        total = total + c
    d_last = TorusElement.const(P, -total / ell)
    if diag[-1] != d_last:
        return MadTestResult(False, 3, ell - 1, "last entry is not the forced scalar")
    return MadTestResult(True)


# ---------------------------------------------------------------------------
# morphism generators


class Generator:
    """One step of a morphism word; ``source``/``target`` are presentations."""

    anti = False
    source: Presentation
    target: Presentation

    def map_element(self, a: TorusElement) -> TorusElement:
        raise NotImplementedError

    def apply(self, x: TorusMatrix) -> TorusMatrix:
        return x.map(self.map_element, self.target)

    def centre_map(self, z: TorusElement) -> TorusElement:
        return self.map_element(z)

    def to_json(self) -> dict:
        raise NotImplementedError


class LatticeBaseChange(Generator):
    """x'_i -> c_i x^{a_i}: monomials x'^lam -> c(lam) x^{lam A}.

    The source is ``P'``; the target is the presentation in which the rows of
    ``A`` satisfy the relations of ``P'`` (i.e. ``P' = change_basis(target, A)``).
    """

    def __init__(self, source: Presentation, A, scalars=None, target: Presentation | None = None):
        A = [tuple(int(x) for x in r) for r in A]
        if len(A) != source.n or not is_unimodular(A):
            raise NotUnimodular(f"{A} is not in GL_{source.n}(Z)")
        self.A = tuple(A)
        self.source = source
        self.target = target or change_basis(source, unimodular_inverse(A))
        if change_basis(self.target, A) != source:
            raise ChainMismatch("target presentation does not match the base change")
        F = source.field
        self.scalars = tuple(F(c) for c in (scalars or [1] * source.n))
        if any(c.is_zero() for c in self.scalars):
            raise InvalidWitness("rescaling scalars must be nonzero")
        T = self.target
        self._self_tau = [T.tau(a, a) for a in self.A]
        self._cache: dict = {}

    def factor(self, lam) -> Scalar:
        """c(lam) with x'^lam -> c(lam) x^{lam A}."""
        lam = tuple(lam)
        v = self._cache.get(lam)
        if v is not None:
            return v
        T = self.target
        c = T.field.one()
        parts = []
        for i, k in enumerate(lam):
            if k:
                c = c * self.scalars[i] ** k
                if k * (k - 1) // 2:
                    c = c * self._self_tau[i] ** (k * (k - 1) // 2)
                parts.append(tuple(k * x for x in self.A[i]))
        acc = None
        for p in parts:
            if acc is not None:
                c = c * T.tau(acc, p)
                acc = tuple(x + y for x, y in zip(acc, p))
            else:
                acc = p
        if len(self._cache) < 20000:
            self._cache[lam] = c
        return c

    def map_element(self, a):
        return TorusElement(self.target, {vec_mat(lam, self.A): c * self.factor(lam)
                                          for lam, c in a.terms.items()}, _trusted=True)

    def to_json(self):
        return {"type": "LatticeBaseChange", "A": [list(r) for r in self.A],
                "scalars": [format_scalar(c) for c in self.scalars]}


def galois_image(a: Scalar, k: int, s_exp: int, target_field=None) -> Scalar:
    """zeta_m -> zeta_m^k, s -> s^{s_exp}, then embed into ``target_field``."""
    if isinstance(a, PElt):
        return a
    if isinstance(a, CycElt):
        out = a.galois(k) if k % a.field.m != 1 % a.field.m else a
        return embed(out, target_field) if target_field is not None else out
    if isinstance(a, RFElt):
        F = a.field
        num = [galois_image(c, k, 1) for c in a.num]
        den = [galois_image(c, k, 1) for c in a.den]
        if s_exp == 1:
            out = F.from_polys(num, den)
        else:
            # N(1/s)/D(1/s) = rev(N)/rev(D) * s^(deg D - deg N)
            out = F.from_polys(num[::-1], den[::-1]) * F.s(len(den) - len(num))
        return embed(out, target_field) if target_field is not None else out
    raise TypeError(f"unsupported scalar {a!r}")


class ScalarFieldMap(Generator):
    def __init__(self, source: Presentation, k: int = 1, s_exp: int = 1, target_field=None):
        F = source.field
        m = getattr(F, "m", 1)
        if gcd(k, max(m, 1)) != 1:
            raise InvalidWitness(f"k={k} is not coprime to {m}")
        if s_exp not in (1, -1):
            raise InvalidWitness("s may only map to s or s^-1")
        self.k, self.s_exp = k, s_exp
        self.source = source
        self.target_field = target_field or F
        self.target = Presentation([[self.scalar(x) for x in r] for r in source.q], self.target_field)

    def scalar(self, a):
        tf = self.target_field if self.target_field is not a.field else None
        return galois_image(a, self.k, self.s_exp, tf)

    def map_element(self, a):
        return TorusElement(self.target, {lam: self.scalar(c) for lam, c in a.terms.items()},
                            _trusted=True)

    def to_json(self):
        return {"type": "ScalarFieldMap", "k": self.k, "s_exponent": self.s_exp,
                "target_field": repr(self.target_field)}


class Int(Generator):
    """Inner automorphism x -> g x g^{-1} with a witnessed inverse."""

    def __init__(self, g: TorusMatrix, g_inv: TorusMatrix):
        g._check(g_inv)
        one = TorusMatrix.identity(g.P, g.size)
        if mat_mul(g, g_inv) != one or mat_mul(g_inv, g) != one:
            raise InvalidWitness("g_inv is not a two-sided inverse of g")
        self.g, self.g_inv = g, g_inv
        self.source = self.target = g.P

    @classmethod
    def elementary(cls, P, ell, i, j, a) -> "Int":
        """I + a E_ij (i != j) with inverse I - a E_ij."""
        if i == j:
            raise InvalidWitness("elementary matrices need i != j")
        a = a if isinstance(a, TorusElement) else TorusElement.const(P, a)
        one = TorusMatrix.identity(P, ell)
        e = TorusMatrix.unit(P, ell, i, j, a)
        return cls(one + e, one - e)

    @classmethod
    def diagonal(cls, P, units) -> "Int":
        vals, invs = [], []
        for u in units:
            u = u if isinstance(u, TorusElement) else TorusElement.const(P, u)
            ok, inv = is_invertible(u)
            if not ok:
                raise InvalidWitness(f"{u!r} is not a unit")
            vals.append(u)
            invs.append(inv)
        return cls(TorusMatrix.diag(P, vals), TorusMatrix.diag(P, invs))

    @classmethod
    def permutation(cls, P, perm) -> "Int":
        """Matrix sending e_j to e_{perm[j]}."""
        ell = len(perm)
        g = TorusMatrix.zero(P, ell)
        for j, i in enumerate(perm):
            g = g + TorusMatrix.unit(P, ell, i, j)
        return cls(g, g.transpose())

    def apply(self, x):
        if x.size != self.g.size:
            raise ChainMismatch(f"size {x.size} does not match Int of size {self.g.size}")
        return mat_mul(mat_mul(self.g, x), self.g_inv)

    def map_element(self, a):  # never used entrywise
        raise TypeError("Int acts on matrices, not entries")

    def centre_map(self, z):
        return z

    def to_json(self):
        return {"type": "Int", "g": self.g.to_json(), "g_inv": self.g_inv.to_json()}


class _OpTranspose(Generator):
    """x -> -op(x)^T, a Lie isomorphism gl(Q) -> gl(Q^op)."""

    anti = True
    tag = ""

    def __init__(self, source: Presentation):
        self.source = source
        self.target = opposite(source)

    def map_element(self, a):
        return op_map(a, self.target)

    def apply(self, x):
        return -(x.map(self.map_element, self.target).transpose())

    def to_json(self):
        return {"type": self.tag}


class Transpose(_OpTranspose):
    tag = "Transpose"


class IotaOp(_OpTranspose):
    tag = "IotaOp"


class CentroidTwist(Generator):
    """Identity on sl, z E -> u z E on the centre of gl (u a central unit)."""

    def __init__(self, source: Presentation, u: TorusElement):
        ok, _ = is_invertible(u)
        if not ok or not is_central(u):
            raise InvalidWitness("centroid twist needs a central unit")
        self.source = self.target = source
        self.u = u

    def apply(self, x):
        z, X = gl_split(x)
        return X + TorusMatrix.diag(x.P, [qt_mul(self.u, z)] * x.size)

    def map_element(self, a):
        raise TypeError("CentroidTwist acts on matrices, not entries")

    def centre_map(self, z):
        return z  # the twist is the identity on sl, so its sl-extension fixes the centre

    def is_trivial(self) -> bool:
        return self.u == TorusElement.const(self.source, 1)

    def to_json(self):
        return {"type": "CentroidTwist", "u": self.u.to_json()}


class MorphismWord:
    """Left-to-right composite of generators, all of one matrix size."""

    def __init__(self, generators, ell: int, source: Presentation | None = None):
        self.generators = tuple(generators)
        self.ell = ell
        if not self.generators and source is None:
            raise ChainMismatch("an empty word needs an explicit source")
        self.source = source or self.generators[0].source
        cur = self.source
        for g in self.generators:
            if g.source != cur:
                raise ChainMismatch(f"generator {g.to_json()['type']} does not chain")
            if isinstance(g, Int) and g.g.size != ell:
                raise ChainMismatch("Int size differs from the word size")
            cur = g.target
        self.target = cur

    def __len__(self):
        return len(self.generators)

    def anti_count(self) -> int:
        return sum(1 for g in self.generators if g.anti)

    def is_associative(self) -> bool:
        return self.anti_count() % 2 == 0 and not any(
            isinstance(g, CentroidTwist) and not g.is_trivial() for g in self.generators)

    def then(self, other: "MorphismWord") -> "MorphismWord":
        return MorphismWord(self.generators + other.generators, self.ell, self.source)

    def centre_map(self, z: TorusElement) -> TorusElement:
        for g in self.generators:
            z = g.centre_map(z)
        return z

    def to_json(self) -> dict:
        return {"ell": self.ell, "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, source: Presentation, data, ell: int | None = None) -> "MorphismWord":
        if isinstance(data, list):
            data = {"generators": data}
        ell = int(data.get("ell", ell or 2))
        gens = []
        cur = source
        for rec in data.get("generators", []):
            g = generator_from_json(cur, ell, rec)
            gens.append(g)
            cur = g.target
        return cls(gens, ell, source)


def generator_from_json(P: Presentation, ell: int, rec: dict) -> Generator:
    kind = rec.get("type")
    if kind == "LatticeBaseChange":
        scal = [parse_scalar(c, P.field) for c in rec.get("scalars", [])] or None
        return LatticeBaseChange(P, rec["A"], scal)
    if kind == "ScalarFieldMap":
        from .scalars import parse_field
        tf = parse_field(rec["target_field"]) if rec.get("target_field") else None
        return ScalarFieldMap(P, int(rec.get("k", 1)), int(rec.get("s_exponent", 1)), tf)
    if kind == "Int":
        if "elementary" in rec:
            e = rec["elementary"]
            a = TorusElement.from_json(P, e["coef"])
            return Int.elementary(P, ell, int(e["i"]) - 1, int(e["j"]) - 1, a)
        if "permutation" in rec:
            return Int.permutation(P, [int(i) - 1 for i in rec["permutation"]])
        if "diagonal" in rec:
            return Int.diagonal(P, [TorusElement.from_json(P, u) for u in rec["diagonal"]])
        return Int(TorusMatrix.from_json(P, rec["g"]), TorusMatrix.from_json(P, rec["g_inv"]))
    if kind in ("Transpose", "Tau"):
        return Transpose(P)
    if kind in ("IotaOp", "iota_op"):
        return IotaOp(P)
    if kind == "CentroidTwist":
        return CentroidTwist(P, TorusElement.from_json(P, rec["u"]))
    raise ChainMismatch(f"unknown generator type {kind!r}")


def apply_morphism(w: MorphismWord, x: TorusMatrix) -> TorusMatrix:
    if x.P != w.source:
        raise ChainMismatch("matrix does not live over the word's source presentation")
    if x.size != w.ell:
        raise ChainMismatch(f"matrix size {x.size} differs from word size {w.ell}")
    for g in w.generators:
        x = g.apply(x)
    return x


class GlExtension:
    """f_gl(z E + X) = f_Z(z) E + w(X) for a word acting on sl."""

    def __init__(self, w: MorphismWord):
        check_good_characteristic(w.source, w.ell)
        self.word = w

    def f_Z(self, z: TorusElement) -> TorusElement:
        return self.word.centre_map(z)

    def __call__(self, x: TorusMatrix) -> TorusMatrix:
        z, X = gl_split(x)
        fx = apply_morphism(self.word, X)
        return fx + TorusMatrix.diag(fx.P, [self.f_Z(z)] * x.size)


def f_gl_extend(w: MorphismWord, verify: bool = True) -> GlExtension:
    ext = GlExtension(w)
    if verify:
        P = w.source
        lat = central_lattice(P) if P.log_form() is not None else None
        zs = [TorusElement.mono(P, b, 1) for b in (lat.basis if lat else ())][:2]
        for X in sl_generators(w.ell, P):
            fX = apply_morphism(w, X)
            if ext(X) != fX:
                raise InvalidWitness("extension disagrees with the word on sl")
            for z in zs:
                lhs = apply_morphism(w, X.map(lambda a: qt_mul(z, a)))
                rhs = fX.map(lambda a: qt_mul(ext.f_Z(z), a))
                if lhs != rhs:
                    raise InvalidWitness("f_Z is not compatible with the word")
    return ext


def sl_generators(ell: int, P: Presentation) -> list[TorusMatrix]:
    out = []
    n = P.n
    for i in range(ell):
        for j in range(ell):
            if i == j:
                continue
            out.append(TorusMatrix.unit(P, ell, i, j))
            for p in range(n):
                for k in (1, -1):
                    out.append(TorusMatrix.unit(P, ell, i, j, TorusElement.gen(P, p, k)))
    return out
