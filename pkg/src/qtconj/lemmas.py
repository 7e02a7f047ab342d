"""Randomized property suite: one checker per lemma of the theory.

Every checker takes ``(P, rng)`` and returns ``None`` on success or a short
string describing the violation.  :func:`run_suite` drives them round-robin
over a list of presentations and collects counts and timings.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

from .errors import NotCyclic, WindowExhausted
from .lattice import Presentation, identity, is_fgc
from .linalg import eliminator
from .matlie import (TorusMatrix, gl_split, in_sl, lie_bracket, mat_mul,
                     sl_generators)
from .modules import (ModVector, OrthogonalSystem, SubmoduleSpec, is_indivisible,
                      is_positive, mat_vec, minimal_vector, right_divide,
                      vec_degree)
from .qtorus import (MINUS_INFINITY, DegreeBasis, TorusElement, centre_split,
                     commutator_witness, degree, in_positive_part, is_central,
                     qt_commutator, qt_mul, top_part)
from .scalars import FunctionField, PrimeField, QQ, zeta

LEMMAS = ("deg-prop", "dpm", "diag-q", "qua-pro33", "cc", "ctd-sl", "como1",
          "lem811", "lem812")


# ---------------------------------------------------------------------------
# presentations and random data


def standard_presentations() -> list[tuple[str, Presentation]]:
    """Twelve presentations with n <= 3, both fgc and non-fgc."""
    from .scalars import CyclotomicField
    Fs = FunctionField(QQ)
    F3s = FunctionField(CyclotomicField(3))
    F4s = FunctionField(CyclotomicField(4))
    s, s3, s4 = Fs.s(), F3s.s(), F4s.s()
    up = Presentation.from_upper
    return [
        ("n1", Presentation.commutative(1)),
        ("commutative2", Presentation.commutative(2)),
        ("minus1", up(2, {(0, 1): QQ(-1)})),
        ("zeta3", up(2, {(0, 1): zeta(3)})),
        ("zeta5", up(2, {(0, 1): zeta(5)})),
        ("s", up(2, {(0, 1): s})),
        ("zeta4_s", up(2, {(0, 1): F4s(zeta(4)) * s4})),
        ("gf7", up(2, {(0, 1): PrimeField(7)(2)})),
        ("n3_zeta3", up(3, {(0, 1): zeta(3), (1, 2): zeta(3) ** 2})),
        ("n3_zeta4", up(3, {(0, 1): zeta(4), (0, 2): zeta(4) ** 2, (1, 2): zeta(4)})),
        ("n3_s_zeta3", up(3, {(0, 1): s3, (0, 2): F3s(zeta(3))})),
        ("n3_s", up(3, {(0, 1): s, (0, 2): s ** -1, (1, 2): s ** 2})),
    ]


def random_coef(P: Presentation, rng: random.Random):
    F = P.field
    c = F(rng.choice([1, 2, 3, -1, -2, 5]))
    if rng.random() < 0.25 and P.n > 1:
        c = c * P.q[0][1]  # brings roots of unity or s into play
    return c


def random_point(n: int, rng: random.Random, r: int = 2, positive: bool = False):
    lo = 0 if positive else -r
    return tuple(rng.randint(lo, r) for _ in range(n))


def random_element(P: Presentation, rng: random.Random, terms: int = 3, r: int = 2,
                   positive: bool = False, nonzero: bool = True) -> TorusElement:
    while True:
        k = rng.randint(1, terms)
        a = TorusElement(P, {random_point(P.n, rng, r, positive): random_coef(P, rng)
                             for _ in range(k)})
        if a.terms or not nonzero:
            return a


def random_unimodular(n: int, rng: random.Random, steps: int = 3) -> list[list[int]]:
    A = [list(r) for r in identity(n)]
    for _ in range(steps):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            k = rng.choice([-2, -1, 1, 2])
            A[i] = [x + k * y for x, y in zip(A[i], A[j])]
        if rng.random() < 0.3:
            i = rng.randrange(n)
            A[i] = [-x for x in A[i]]
    return A


def random_eps(n: int, rng: random.Random) -> DegreeBasis:
    return DegreeBasis(random_unimodular(n, rng))


def probe_bases(n: int) -> list[DegreeBasis]:
    """+-standard and +-shears; their weight vectors span Q^n."""
    out = []
    I = [list(r) for r in identity(n)]
    mats = [I]
    for i in range(n):
        for j in range(n):
            if i != j:
                A = [r[:] for r in I]
                A[i][j] = 1
                mats.append(A)
    for A in mats:
        out.append(DegreeBasis(A))
        out.append(DegreeBasis([[-x for x in r] for r in A]))
    return out


def random_matrix(P: Presentation, ell: int, rng: random.Random, density: float = 0.6) -> TorusMatrix:
    return TorusMatrix(P, [[random_element(P, rng, 2, 1) if rng.random() < density
                            else TorusElement.zero(P) for _ in range(ell)] for _ in range(ell)])


def random_sl(P: Presentation, ell: int, rng: random.Random) -> TorusMatrix:
    _, X = gl_split(random_matrix(P, ell, rng))
    return X


def random_central(P: Presentation, rng: random.Random) -> TorusElement:
    from .lattice import central_lattice
    lat = central_lattice(P)
    terms = {(0,) * P.n: random_coef(P, rng)}
    for _ in range(rng.randint(0, 2)):
        if not lat.basis:
            break
        lam = [0] * P.n
        for row in lat.basis:
            k = rng.randint(-1, 1)
            lam = [x + k * y for x, y in zip(lam, row)]
        terms[tuple(lam)] = P.field(rng.choice([1, -1, 2]))
    return TorusElement(P, terms)


def elementary_pair(P: Presentation, ell: int, rng: random.Random):
    """(g, g^-1) for g = I + a E_ij with a monomial a."""
    i, j = rng.sample(range(ell), 2)
    a = TorusElement.mono(P, random_point(P.n, rng, 1), random_coef(P, rng))
    g = TorusMatrix.identity(P, ell) + TorusMatrix.unit(P, ell, i, j, a)
    h = TorusMatrix.identity(P, ell) - TorusMatrix.unit(P, ell, i, j, a)
    return g, h


def random_system(P: Presentation, ell: int, rng: random.Random, factors: int = 2):
    g = h = TorusMatrix.identity(P, ell)
    for _ in range(rng.randint(1, factors)):
        a, b = elementary_pair(P, ell, rng)
        g, h = mat_mul(g, a), mat_mul(b, h)
    es = tuple(mat_mul(mat_mul(g, TorusMatrix.unit(P, ell, i, i)), h) for i in range(ell))
    return es, g


def _good_ell(P: Presentation, rng: random.Random) -> int:
    p = getattr(P.field, "characteristic", 0)
    choices = [l for l in (2, 3) if not p or l % p]
    return rng.choice(choices)


# ---------------------------------------------------------------------------
# checkers


def check_deg_prop(P: Presentation, rng: random.Random):
    eps = random_eps(P.n, rng)
    a, b = random_element(P, rng), random_element(P, rng)
    if rng.random() < 0.2:
        b = -a + random_element(P, rng, 1)  # forces cancellation in a + b
    da, db = degree(a, eps), degree(b, eps)
    s = a + b
    if degree(s, eps) > max(da, db):
        return f"deg(a+b) > max: {a!r}, {b!r}"
    c = random_coef(P, rng)
    if degree(a.scale(c), eps) != da:
        return "deg(c a) != deg(a)"
    if degree(qt_mul(a, b), eps) != da + db:
        return f"deg(ab) != deg a + deg b for {a!r}, {b!r}"
    if degree(TorusElement.zero(P), eps) != MINUS_INFINITY:
        return "deg 0 is not -infinity"
    # part (b): degree zero for all tested bases iff support is {0}
    kind = rng.randrange(3)
    zero = (0,) * P.n
    if kind == 0:
        d = TorusElement.const(P, random_coef(P, rng))
    elif kind == 1:  # symmetric support around 0 defeats any single basis
        lam = random_point(P.n, rng, 2)
        d = TorusElement(P, {zero: P.field(1), lam: P.field(2),
                             tuple(-x for x in lam): P.field(3)})
    else:
        d = random_element(P, rng)
    all_zero = all(degree(d, e) == 0 for e in probe_bases(P.n))
    if all_zero != (set(d.terms) <= {zero}):
        return f"degree-zero criterion fails for {d!r}"
    return None


def check_dpm(P: Presentation, rng: random.Random):
    ell = rng.choice([2, 3])
    eps = random_eps(P.n, rng)
    coords = [random_element(P, rng, 2) if rng.random() < 0.7 else TorusElement.zero(P)
              for _ in range(ell)]
    if all(c.is_zero() for c in coords):
        coords[0] = random_element(P, rng, 2)
    v = ModVector(P, coords)
    q = random_element(P, rng)
    vq = v.right_mul(q)
    if vq.is_zero():
        return "vq = 0 for nonzero v, q"
    if vec_degree(vq, eps) != vec_degree(v, eps) + degree(q, eps):
        return f"deg(vq) != deg v + deg q for {v!r}, {q!r}"
    return None


def _window(n: int, r: int):
    pts = [()]
    for _ in range(n):
        pts = [p + (x,) for p in pts for x in range(-r, r + 1)]
    return pts


def _radius(n: int) -> int:
    return 4 if n <= 2 else 2


def _diag_a(P: Presentation, rng: random.Random):
    d = random_element(P, rng, 3, 2)
    while set(d.terms) <= {(0,) * P.n}:
        d = d + TorusElement.mono(P, random_point(P.n, rng, 1), P.field(1))
    eps = next(e for e in probe_bases(P.n) if degree(d, e) > 0)
    # an eigenvector q of L_d would satisfy top(d) top(q) = 0; show that
    # multiplication by top(d) is injective on every eps-slice of the window
    D = top_part(d, eps)
    slices: dict = {}
    for lam in _window(P.n, _radius(P.n)):
        slices.setdefault(eps.trace(lam), []).append(lam)
    for pts in slices.values():
        el = eliminator(P.field)
        for lam in pts:
            img = qt_mul(D, TorusElement.mono(P, lam))
            row = {tuple(-x for x in k): (v.v if isinstance(P.field, PrimeField) else v)
                   for k, v in img.terms.items()}
            if not el.add(row):
                return f"L_top(d) not injective on a slice for d={d!r}"
    return None


def _ad_column(d: TorusElement, lam):
    return qt_commutator(d, TorusElement.mono(d.P, lam)).terms


def _diag_b(P: Presentation, rng: random.Random):
    while True:
        d = random_element(P, rng, 3, 1)
        if not is_central(d):
            break
    R = 3 if P.n <= 2 else 2
    r = max(max(abs(x) for x in lam) for lam in d.terms)
    inner = _window(P.n, R - r)
    F = P.field
    prime = isinstance(F, PrimeField)

    def val(x):
        return x.v if prime else x

    cols = {lam: _ad_column(d, lam) for lam in inner}
    # K: vectors on the interior whose ad-image again lies on the interior,
    # iterated to the largest ad-stable subspace.  An eigenvector with a
    # nonzero eigenvalue would live there.
    basis = [{lam: F.one()} for lam in inner]
    while basis:
        images = []
        for b in basis:
            img: dict = {}
            for lam, c in b.items():
                for mu, v in cols[lam].items():
                    w = img.get(mu)
                    img[mu] = c * v if w is None else w + c * v
            images.append({k: v for k, v in img.items() if not v.is_zero()})
        # solve sum c_k img_k - sum y_m basis_m = 0
        eqs: dict = {}
        for k, img in enumerate(images):
            for mu, v in img.items():
                eqs.setdefault(mu, {})[("c", k)] = val(v)
        for m, b in enumerate(basis):
            for mu, v in b.items():
                eqs.setdefault(mu, {})[("y", m)] = val(-v)
        el = eliminator(F)
        for row in eqs.values():
            el.add(row)
        unknowns = [("c", k) for k in range(len(basis))] + [("y", m) for m in range(len(basis))]
        kern = el.nullspace(unknowns)
        new = []
        ech = eliminator(F)
        for vec in kern:
            q: dict = {}
            for (tag, k), c in vec.items():
                if tag != "c":
                    continue
                c = F(c) if prime else c
                for lam, v in basis[k].items():
                    w = q.get(lam)
                    q[lam] = c * v if w is None else w + c * v
            q = {k: v for k, v in q.items() if not v.is_zero()}
            if q and ech.add({k: val(v) for k, v in q.items()}):
                new.append(q)
        if len(new) == len(basis):
            break
        basis = new
    # on the stable subspace ad d must be nilpotent (no nonzero eigenvalue)
    for b in basis:
        x = TorusElement(P, b)
        for _ in range(len(basis) + 1):
            x = qt_commutator(d, x)
            if x.is_zero():
                break
        if not x.is_zero():
            return f"ad d has a nonzero eigenvalue on the window for d={d!r}"
    return None


def check_diag_q(P: Presentation, rng: random.Random):
    commutative = all(x.is_one() for r in P.q for x in r)
    if commutative or rng.random() < 0.5:
        return _diag_a(P, rng)
    return _diag_b(P, rng)


def check_qua_pro33(P: Presentation, rng: random.Random):
    a = random_element(P, rng, 4, 3)
    cen, br = centre_split(a)
    if cen + br != a:
        return "centre_split does not reassemble"
    for i in range(P.n):
        if not qt_commutator(cen, TorusElement.gen(P, i)).is_zero():
            return "central part is not central"
    for lam, c in br.terms.items():
        w = commutator_witness(P, lam)
        if w is None:
            return f"bracket term {lam} has no commutator witness"
        k, alpha, beta = w
        com = qt_commutator(TorusElement.mono(P, alpha), TorusElement.mono(P, beta))
        if com.scale(k) != TorusElement.mono(P, lam):
            return f"witness for {lam} fails"
    # directness: a commutator has no central component
    b, c = random_element(P, rng), random_element(P, rng)
    if not centre_split(qt_commutator(b, c))[0].is_zero():
        return "[Q,Q] meets Z(Q)"
    return None


def check_cc(P: Presentation, rng: random.Random):
    ell = _good_ell(P, rng)
    x = random_matrix(P, ell, rng)
    z, X = gl_split(x)
    if not is_central(z):
        return "z is not central"
    if not in_sl(X):
        return "X is not in sl"
    zE = TorusMatrix.diag(P, [z] * ell)
    if zE + X != x:
        return "z E + X != x"
    y = random_matrix(P, ell, rng)
    if not lie_bracket(zE, y).is_zero():
        return "z E is not central in gl"
    z2, _ = gl_split(X)
    if not z2.is_zero():
        return "decomposition is not unique"
    return None


def check_ctd_sl(P: Presentation, rng: random.Random):
    ell = _good_ell(P, rng)
    z = random_central(P, rng)
    X = random_sl(P, ell, rng)
    zX = TorusMatrix(P, [[qt_mul(z, a) for a in r] for r in X.entries])
    if not in_sl(zX):
        return "z X left sl"
    for g in sl_generators(ell, P):
        lhs = lie_bracket(g, zX)
        rhs = TorusMatrix(P, [[qt_mul(z, a) for a in r] for r in lie_bracket(g, X).entries])
        if lhs != rhs:
            return "multiplication by z does not commute with ad"
    return None


def check_como1(P: Presentation, rng: random.Random):
    ell = rng.choice([2, 3])
    es, _ = random_system(P, ell, rng)
    zero = TorusMatrix.zero(P, ell)
    for i, a in enumerate(es):
        for j, b in enumerate(es):
            if mat_mul(a, b) != (a if i == j else zero):
                return f"e_{i + 1} e_{j + 1} is wrong"
    total = zero
    for a in es:
        total = total + a
    if total != TorusMatrix.identity(P, ell):
        return "idempotents do not sum to 1"
    OrthogonalSystem(es)
    v = ModVector(P, [random_element(P, rng, 2) for _ in range(ell)])
    parts = [mat_vec(e, v) for e in es]
    acc = ModVector(P, [TorusElement.zero(P)] * ell)
    for e, p in zip(es, parts):
        if mat_vec(e, p) != p:
            return "projection is not idempotent on its image"
        acc = acc + p
    if acc != v:
        return "V != sum of e_i V"
    return None


def _random_indivisible(P: Presentation, ell: int, rng: random.Random) -> ModVector:
    while True:
        coords = [random_element(P, rng, 2, 2, positive=True) if rng.random() < 0.8
                  else TorusElement.zero(P) for _ in range(ell)]
        u = ModVector(P, coords)
        if not u.is_zero() and is_indivisible(u):
            return u


def check_lem811(P: Presentation, rng: random.Random):
    ell = rng.choice([2, 3])
    u0 = _random_indivisible(P, ell, rng)
    q = random_element(P, rng, 3, 2, positive=rng.random() < 0.4)
    lhs = is_positive(u0.right_mul(q))
    rhs = in_positive_part(q)
    if lhs != rhs:
        return f"u0 q in V+ is {lhs} but q in Q+ is {rhs}"
    return None


_LEM812_CACHE: dict = {}


def _lem812_setup(P: Presentation, rng: random.Random):
    key = id(P)
    pool = _LEM812_CACHE.setdefault(key, [])
    if len(pool) >= 4 and rng.random() < 0.9:
        return rng.choice(pool)
    ell = 2
    es, _ = random_system(P, ell, rng, factors=1)
    U = SubmoduleSpec(es[0])
    try:
        u0 = minimal_vector(U, None, 6)
    except (WindowExhausted, NotCyclic):
        return None
    item = (U, u0, es[1])
    pool.append(item)
    return item


def check_lem812(P: Presentation, rng: random.Random):
    item = _lem812_setup(P, rng)
    if item is None:
        return None
    U, u0, e_comp = item
    d = vec_degree(u0)
    k = next(i for i, c in enumerate(u0.coords) if c.terms)
    # q in Q^{++}: monomials and small polynomials with degree up to deg u0
    top = max(1, d)
    monomial = rng.random() < 0.5
    q = TorusElement(P, {})
    while not q.terms or (0,) * P.n in q.terms or degree(q) > top:
        if monomial:
            q = TorusElement.mono(P, random_point(P.n, rng, top, positive=True), random_coef(P, rng))
        else:
            q = random_element(P, rng, 3, top, positive=True)
    vk = right_divide(u0.coords[k], q)
    if vk is None:
        return None
    # the remaining coordinates must divide too, and the quotient lie in V+
    coords = []
    for c in u0.coords:
        r = right_divide(c, q)
        if r is None:
            return None
        coords.append(r)
    v = ModVector(P, coords)
    if v.right_mul(q) == u0 and is_positive(v):
        return f"u0 = v q with v in V+ and q={q!r} in Q++"
    return None


CHECKS = {
    "deg-prop": check_deg_prop,
    "dpm": check_dpm,
    "diag-q": check_diag_q,
    "qua-pro33": check_qua_pro33,
    "cc": check_cc,
    "ctd-sl": check_ctd_sl,
    "como1": check_como1,
    "lem811": check_lem811,
    "lem812": check_lem812,
}


# ---------------------------------------------------------------------------
# driver


@dataclass
class LemmaStats:
    cases: int = 0
    violations: list = dc_field(default_factory=list)
    seconds: float = 0.0
    presentations: set = dc_field(default_factory=set)

    @property
    def ok(self) -> bool:
        return not self.violations


def run_suite(presentations=None, trials: int = 1000, seed: int = 0,
              lemmas=LEMMAS) -> dict[str, LemmaStats]:
    """Run ``trials`` cases of each lemma spread over the presentations."""
    if presentations is None:
        presentations = standard_presentations()
    presentations = [p if isinstance(p, tuple) else (repr(p), p) for p in presentations]
    out = {}
    for name in lemmas:
        fn = CHECKS[name]
        rng = random.Random(f"{seed}:{name}")
        st = LemmaStats()
        t0 = time.perf_counter()
        for k in range(trials):
            label, P = presentations[k % len(presentations)]
            err = fn(P, rng)
            st.cases += 1
            st.presentations.add(label)
            if err is not None:
                st.violations.append((label, err))
        st.seconds = time.perf_counter() - t0
        out[name] = st
    return out


def summary_table(stats: dict[str, LemmaStats]) -> str:
    lines = [f"{'lemma':<10} {'cases':>6} {'viol':>5} {'pres':>5} {'sec':>7}"]
    for name, st in stats.items():
        lines.append(f"{name:<10} {st.cases:>6} {len(st.violations):>5} "
                     f"{len(st.presentations):>5} {st.seconds:>7.2f}")
    return "\n".join(lines)


def mixed_fgc(presentations) -> tuple[int, int]:
    """(number fgc, number non-fgc)."""
    flags = [is_fgc(P) for _, P in presentations]
    return sum(flags), len(flags) - sum(flags)
