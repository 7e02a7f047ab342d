"""Right Q-modules V = Q^l, idempotent submodules, minimal vectors, conjugators.

Positivity and degrees are taken with respect to a :class:`DegreeBasis` eps:
``V^+`` consists of vectors whose coordinates are supported on points with
nonnegative eps-coordinates, and ``V_t`` is the part of ``V^+`` of eps-degree
at most ``t``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb

from .errors import (IndivisibilityViolated, NotAssociativeWord, NotCyclic,
                     NotInvertible, NotPositive, OutsideSubring, SizeMismatch,
                     SystemInvalid, WindowExhausted, ZeroVector)
from .lattice import Presentation
from .linalg import Exact, ModP, large_prime
from .matlie import MorphismWord, TorusMatrix, apply_morphism, mat_mul
from .qtorus import MINUS_INFINITY, DegreeBasis, TorusElement, degree, qt_mul
from .scalars import PrimeField
from .specialize import residue_map_for, specialize_matrix, specialize_presentation


# ---------------------------------------------------------------------------
# vectors


class ModVector:
    __slots__ = ("P", "coords")

    def __init__(self, P: Presentation, coords):
        coords = tuple(c if isinstance(c, TorusElement) else TorusElement.const(P, c) for c in coords)
        if any(c.P != P for c in coords):
            raise SizeMismatch("coordinates live over different presentations")
        self.P = P
        self.coords = coords

    @classmethod
    def basis_vector(cls, P, ell, i, a=None) -> "ModVector":
        z = TorusElement.zero(P)
        c = [z] * ell
        c[i] = a if a is not None else TorusElement.const(P, 1)
        return cls(P, c)

    @property
    def size(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, ModVector) and self.P == other.P and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        return ModVector(self.P, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return ModVector(self.P, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return ModVector(self.P, [-a for a in self.coords])

    def scale(self, c) -> "ModVector":
        return ModVector(self.P, [a.scale(c) for a in self.coords])

    def right_mul(self, q: TorusElement) -> "ModVector":
        return ModVector(self.P, [qt_mul(a, q) for a in self.coords])

    def __repr__(self):
        parts = [f"e_{i + 1}*({c!r})" for i, c in enumerate(self.coords) if c.terms]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, P, data) -> "ModVector":
        return cls(P, [TorusElement.from_json(P, c) for c in data])


def mat_vec(e: TorusMatrix, v: ModVector) -> ModVector:
    ell = e.size
    out = []
    for i in range(ell):
        acc = TorusElement.zero(v.P)
        for j in range(ell):
            a, b = e.entries[i][j], v.coords[j]
            if a.terms and b.terms:
                acc = acc + qt_mul(a, b)
        out.append(acc)
    return ModVector(v.P, out)


def vec_degree(v: ModVector, eps: DegreeBasis | None = None):
    return max((degree(c, eps) for c in v.coords), default=MINUS_INFINITY)


def _eps(eps, n) -> DegreeBasis:
    return eps if eps is not None else DegreeBasis.standard(n)


def is_positive(v: ModVector, eps: DegreeBasis | None = None) -> bool:
    eps = _eps(eps, v.P.n)
    return all(min(eps.coords(lam)) >= 0 for c in v.coords for lam in c.terms)


def is_indivisible(u: ModVector, eps: DegreeBasis | None = None) -> bool:
    """No eps-axis divides every nonzero coordinate."""
    if u.is_zero():
        raise ZeroVector("the zero vector has no divisibility type")
    eps = _eps(eps, u.P.n)
    if not is_positive(u, eps):
        raise NotPositive("vector is not in V^+")
    pts = [eps.coords(lam) for c in u.coords for lam in c.terms]
    return not any(all(p[i] > 0 for p in pts) for i in range(u.P.n))


def normalize_generator(u: ModVector) -> ModVector:
    """Scale so the first nonzero coordinate has lex-greatest coefficient 1."""
    for c in u.coords:
        if c.terms:
            lead = c.terms[max(c.terms)]
            return u.scale(lead.inverse())
    raise ZeroVector("cannot normalize the zero vector")


# ---------------------------------------------------------------------------
# orthogonal systems


@dataclass(frozen=True)
class OrthogonalSystem:
    idempotents: tuple

    def __post_init__(self):
        es = self.idempotents
        if not es:
            raise SystemInvalid("empty system")
        P, ell = es[0].P, es[0].size
        zero = TorusMatrix.zero(P, ell)
        total = zero
        for i, a in enumerate(es):
            for j, b in enumerate(es):
                prod = mat_mul(a, b)
                if prod != (a if i == j else zero):
                    raise SystemInvalid(f"e_{i + 1} e_{j + 1} violates orthogonality")
            total = total + a
        if total != TorusMatrix.identity(P, ell):
            raise SystemInvalid("idempotents do not sum to the identity")

    @classmethod
    def standard(cls, P, ell) -> "OrthogonalSystem":
        return cls(tuple(TorusMatrix.unit(P, ell, i, i) for i in range(ell)))

    def __len__(self):
        return len(self.idempotents)

    def to_json(self) -> list:
        return [e.to_json() for e in self.idempotents]


def system_from_morphism(w: MorphismWord, ell: int | None = None) -> OrthogonalSystem:
    ell = ell or w.ell
    if not w.is_associative():
        raise NotAssociativeWord("the word contains an odd number of anti-generators or a centroid twist")
    es = tuple(apply_morphism(w, TorusMatrix.unit(w.source, ell, i, i)) for i in range(ell))
    return OrthogonalSystem(es)


@dataclass(frozen=True)
class SubmoduleSpec:
    e: TorusMatrix

    def __post_init__(self):
        if mat_mul(self.e, self.e) != self.e:
            raise SystemInvalid("defining matrix is not idempotent")

    @property
    def P(self):
        return self.e.P

    @property
    def ell(self):
        return self.e.size

    def contains(self, v: ModVector) -> bool:
        return mat_vec(self.e, v) == v


# ---------------------------------------------------------------------------
# slices


def _slice_columns(n: int, ell: int, t: int, eps: DegreeBasis):
    """Unknowns (k, lam) of V_t ordered by (degree, coordinate, eps-coordinates)."""
    pts = []

    def rec(prefix, left):
        if len(prefix) == n:
            pts.append(tuple(prefix))
            return
        for a in range(left + 1):
            rec(prefix + [a], left - a)

    rec([], t)
    pts.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
    cols = []
    for c in pts:
        lam = eps.point(c)
        for k in range(ell):
            cols.append((sum(c), k, lam))
    cols.sort(key=lambda x: (x[0], x[1]))
    return cols


def _column_vector(e: TorusMatrix, k: int, lam, one):
    """(e - I) applied to e_k x^lam, as a sparse dict over row keys (i, nu)."""
    P = e.P
    tau = P.tau
    row = {}
    for i in range(e.size):
        for mu, c in e.entries[i][k].terms.items():
            nu = tuple(a + b for a, b in zip(mu, lam))
            key = (0, i, nu)
            v = c * tau(mu, lam)
            w = row.get(key)
            row[key] = v if w is None else w + v
    key = (0, k, tuple(lam))
    w = row.get(key)
    row[key] = -one if w is None else w - one
    return row


class _TrackedColumns:
    """Inserts slice columns one by one and records linear dependencies."""

    def __init__(self, e: TorusMatrix, modular: bool):
        self.e = e
        self.modular = modular
        F = e.P.field
        self.el = ModP(F.p) if modular else Exact(F)
        self.one = F.one()
        self.deps = []  # (column index, dependency dict over column indices)
        self.count = 0

    def insert(self, idx: int, k: int, lam) -> None:
        vec = _column_vector(self.e, k, lam, self.one)
        if self.modular:
            vec = {key: v.v for key, v in vec.items()}
            tag = 1
        else:
            tag = self.one
        vec[(1, idx)] = tag
        el = self.el
        row = el.reduce(vec)
        real = [key for key in row if key[0] == 0]
        self.count += 1
        if not real:
            self.deps.append((idx, {key[1]: v for key, v in row.items()}))
            return
        col = min(real)
        el.pivots[col] = el._normalize(row, col)
        el.order.append(col)


def _dep_to_vector(P, ell, cols, dep, modular_field=None) -> ModVector:
    coords = [dict() for _ in range(ell)]
    for idx, v in dep.items():
        _, k, lam = cols[idx]
        coords[k][lam] = modular_field(v) if modular_field else v
    return ModVector(P, [TorusElement(P, c) for c in coords])


def plus_slice(U: SubmoduleSpec, t: int, eps: DegreeBasis | None = None) -> list[ModVector]:
    """Exact F-basis of U_t = {v in V_t : e v = v}."""
    P, ell = U.P, U.ell
    eps = _eps(eps, P.n)
    if t < 0:
        return []
    cols = _slice_columns(P.n, ell, t, eps)
    modular = isinstance(P.field, PrimeField)
    tr = _TrackedColumns(U.e, modular)
    for idx, (_, k, lam) in enumerate(cols):
        tr.insert(idx, k, lam)
    fld = P.field if modular else None
    return [_dep_to_vector(P, ell, cols, dep, fld) for _, dep in tr.deps]


def _modular_image(U: SubmoduleSpec, seed: int = 0):
    """Reduction of e modulo a large prime with a random image of s."""
    P = U.P
    if isinstance(P.field, PrimeField):
        return U.e
    rng = random.Random(seed)
    m = getattr(P.field, "m", 1)
    for _ in range(8):
        p = large_prime(m, rng=rng)
        h = residue_map_for(P.field, p, s_image=rng.randrange(2, p - 1))
        try:
            Pb = specialize_presentation(P, h)
            return specialize_matrix(U.e, h, Pb)
        except OutsideSubring:
            continue
    return None


def _slice_dims_mod_p(U: SubmoduleSpec, eps: DegreeBasis, t_max: int, seed: int = 0):
    """Upper bounds dim U_t <= N_t for t <= t_max, plus the first modular dependency."""
    eb = _modular_image(U, seed)
    if eb is None:
        return None
    cols = _slice_columns(U.P.n, U.ell, t_max, eps)
    tr = _TrackedColumns(eb, True)
    dims = [0] * (t_max + 1)
    first = None
    for idx, (deg, k, lam) in enumerate(cols):
        before = len(tr.deps)
        tr.insert(idx, k, lam)
        if len(tr.deps) > before:
            for t in range(deg, t_max + 1):
                dims[t] += 1
            if first is None:
                first = tr.deps[-1][1]
    return dims, first, cols


def _exact_vector_on_support(U: SubmoduleSpec, cols, support) -> ModVector | None:
    tr = _TrackedColumns(U.e, False)
    for idx in sorted(support):
        _, k, lam = cols[idx]
        tr.insert(idx, k, lam)
        if tr.deps:
            v = _dep_to_vector(U.P, U.ell, cols, tr.deps[0][1])
            if U.contains(v) and not v.is_zero():
                return v
            return None
    return None


def minimal_vector(U: SubmoduleSpec, eps: DegreeBasis | None = None, t_max: int = 12,
                   _hint=None) -> ModVector:
    """A nonzero vector of least eps-degree in U^+, normalized and checked indivisible."""
    P = U.P
    eps = _eps(eps, P.n)
    u = None
    if _hint is not None:
        dims, first, cols = _hint
        if first is not None:
            u = _exact_vector_on_support(U, cols, first.keys())
    if u is None:
        for t in range(t_max + 1):
            basis = plus_slice(U, t, eps)
            if basis:
                u = basis[0]
                break
    if u is None:
        raise WindowExhausted(t_max)
    u = normalize_generator(u)
    if not is_indivisible(u, eps):
        raise IndivisibilityViolated(f"minimal vector {u!r} is divisible")
    return u


# ---------------------------------------------------------------------------
# membership


def left_divide(a: TorusElement, b: TorusElement) -> TorusElement | None:
    """q with a q = b, or None.  Uses lex-leading terms and the exponent box."""
    if b.is_zero():
        return TorusElement.zero(a.P)
    if a.is_zero():
        return None
    P = a.P
    n = P.n
    lo = [min(l[i] for l in b.terms) - min(l[i] for l in a.terms) for i in range(n)]
    hi = [max(l[i] for l in b.terms) - max(l[i] for l in a.terms) for i in range(n)]
    if any(x > y for x, y in zip(lo, hi)):
        return None
    alpha = max(a.terms)
    a0 = a.terms[alpha]
    q_terms = {}
    r = b
    steps = 0
    while r.terms:
        nu = max(r.terms)
        beta = tuple(x - y for x, y in zip(nu, alpha))
        if any(x < l or x > h for x, l, h in zip(beta, lo, hi)):
            return None
        c = r.terms[nu] / (a0 * P.tau(alpha, beta))
        t = TorusElement.mono(P, beta, c)
        q_terms[beta] = c
        r = r - qt_mul(a, t)
        steps += 1
    q = TorusElement(P, q_terms, _trusted=True)
    return q


def right_divide(b: TorusElement, a: TorusElement) -> TorusElement | None:
    """q with q a = b, or None.  Mirror image of :func:`left_divide`."""
    if b.is_zero():
        return TorusElement.zero(a.P)
    if a.is_zero():
        return None
    P = a.P
    n = P.n
    lo = [min(l[i] for l in b.terms) - min(l[i] for l in a.terms) for i in range(n)]
    hi = [max(l[i] for l in b.terms) - max(l[i] for l in a.terms) for i in range(n)]
    if any(x > y for x, y in zip(lo, hi)):
        return None
    alpha = max(a.terms)
    a0 = a.terms[alpha]
    q_terms = {}
    r = b
    while r.terms:
        nu = max(r.terms)
        beta = tuple(x - y for x, y in zip(nu, alpha))
        if any(x < l or x > h for x, l, h in zip(beta, lo, hi)):
            return None
        c = r.terms[nu] / (a0 * P.tau(beta, alpha))
        q_terms[beta] = c
        r = r - qt_mul(TorusElement.mono(P, beta, c), a)
    return TorusElement(P, q_terms, _trusted=True)


def solve_membership(v: ModVector, u0: ModVector, eps: DegreeBasis | None = None) -> TorusElement | None:
    """Exact q with u0 q = v, or None (no solution)."""
    if u0.is_zero():
        raise ZeroVector("u0 must be nonzero")
    k = next(i for i, c in enumerate(u0.coords) if c.terms)
    q = left_divide(u0.coords[k], v.coords[k])
    if q is None:
        return None
    if u0.right_mul(q) != v:
        return None
    return q


# ---------------------------------------------------------------------------
# cyclicity


@dataclass
class CyclicResult:
    kind: str  # "Cyclic", "CounterWitness", "WindowExhausted"
    generator: ModVector | None = None
    witness: ModVector | None = None
    t_max: int = 0
    slice_dims: list = dc_field(default_factory=list)

    @property
    def is_cyclic(self) -> bool:
        return self.kind == "Cyclic"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "t_max": self.t_max, "slice_dims": self.slice_dims}
        if self.generator is not None:
            out["generator"] = self.generator.to_json()
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def default_window(es, eps: DegreeBasis | None = None) -> int:
    """2 * (largest eps-degree among the entries of ``es``) + 4."""
    top = 0
    for e in es:
        for row in e.entries:
            for a in row:
                if a.terms:
                    top = max(top, degree(a, eps))
    return 2 * top + 4


def _positive_shift(v: ModVector, eps: DegreeBasis) -> ModVector:
    """v x^{mu} with mu chosen so that the result lies in V^+."""
    n = v.P.n
    shift = [0] * n
    for c in v.coords:
        for lam in c.terms:
            co = eps.coords(lam)
            for i in range(n):
                shift[i] = max(shift[i], -co[i])
    return v.right_mul(TorusElement.mono(v.P, eps.point(shift)))


def certify_cyclic(U: SubmoduleSpec, eps: DegreeBasis | None = None, t_max: int | None = None,
                   seed: int = 0) -> CyclicResult:
    """Decide U = u0 Q for a minimal vector u0 found within the window.

    Slice dimensions are compared with dim (u0 Q^+)_t = C(t - d + n, n); upper
    bounds come from a reduction modulo a large prime and are confirmed by
    exact elimination whenever they do not match.  The final certificate is
    exact: every column of e must lie in u0 Q.
    """
    P, ell, n = U.P, U.ell, U.P.n
    eps = _eps(eps, n)
    if t_max is None:
        t_max = default_window([U.e], eps)
    hint = _slice_dims_mod_p(U, eps, t_max, seed)
    try:
        u0 = minimal_vector(U, eps, t_max, _hint=hint)
    except WindowExhausted:
        return CyclicResult("WindowExhausted", t_max=t_max)
    d = vec_degree(u0, eps)
    dims = []
    for t in range(t_max + 1):
        expected = comb(t - d + n, n) if t >= d else 0
        bound = hint[0][t] if hint is not None else None
        if bound is not None and bound == expected:
            dims.append(expected)
            continue
        basis = plus_slice(U, t, eps)
        dims.append(len(basis))
        for v in basis:
            if solve_membership(v, u0, eps) is None:
                return CyclicResult("CounterWitness", u0, v, t_max, dims)
    # exact: U is spanned over Q by the columns of e
    for j in range(ell):
        col = ModVector(P, U.e.column(j))
        if col.is_zero():
            continue
        if solve_membership(col, u0, eps) is None:
            return CyclicResult("CounterWitness", u0, _positive_shift(col, eps), t_max, dims)
    return CyclicResult("Cyclic", u0, None, t_max, dims)


def build_conjugator(O: OrthogonalSystem, eps: DegreeBasis | None = None, t_max: int | None = None):
    """(g, h, generators) with g h = h g = 1 and g E_ii h = O_i."""
    es = O.idempotents
    P, ell = es[0].P, es[0].size
    if t_max is None:
        t_max = default_window(es, _eps(eps, P.n))
    if len(es) != ell:
        raise SizeMismatch(f"system has {len(es)} idempotents for size {ell}")
    gens = []
    for i, e in enumerate(es):
        res = certify_cyclic(SubmoduleSpec(e), eps, t_max)
        if res.kind == "WindowExhausted":
            raise WindowExhausted(t_max, f"no generator for summand {i + 1} within t_max={t_max}")
        if not res.is_cyclic:
            raise NotCyclic(i, res.witness)
        gens.append(res.generator)
    g = TorusMatrix(P, [[gens[j].coords[i] for j in range(ell)] for i in range(ell)])
    rows = [[None] * ell for _ in range(ell)]
    for j in range(ell):
        ej = ModVector.basis_vector(P, ell, j)
        for i, e in enumerate(es):
            piece = mat_vec(e, ej)
            hij = solve_membership(piece, gens[i], eps)
            if hij is None:
                raise NotInvertible(f"E~_{i + 1} e_{j + 1} is not a multiple of u_{i + 1}")
            rows[i][j] = hij
    h = TorusMatrix(P, rows)
    one = TorusMatrix.identity(P, ell)
    if mat_mul(g, h) != one or mat_mul(h, g) != one:
        raise NotInvertible("generators do not form a basis of V")
    for i, e in enumerate(es):
        if mat_mul(mat_mul(g, TorusMatrix.unit(P, ell, i, i)), h) != e:
            raise NotInvertible(f"g does not conjugate E_{i + 1}{i + 1} onto the system")
    return g, h, gens
