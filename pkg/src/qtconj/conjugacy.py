"""End-to-end conjugacy pipeline and the commuting-roots solver."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import gcd

from .errors import NoSolution, NotAssociativeWord, VerificationFailed
from .lattice import Presentation
from .matlie import (IotaOp, MorphismWord, TorusMatrix, apply_morphism,
                     mat_mul, standard_mad)
from .modules import build_conjugator, default_window, vec_degree
from .qtorus import DegreeBasis, TorusElement, qt_commutator
from .scalars import (CyclotomicField, FunctionField, PrimeField,
                      embed, root_of_unity_exponent)


@dataclass
class ConjugacyResult:
    g: TorusMatrix
    g_inv: TorusMatrix
    report: dict = dc_field(default_factory=dict)


def _spot_check_associative(w: MorphismWord, trials: int = 4, seed: int = 0) -> bool:
    P, ell = w.source, w.ell
    rng = random.Random(seed)
    units = [TorusMatrix.unit(P, ell, i, j) for i in range(ell) for j in range(ell)]

    def rand_entry():
        lam = tuple(rng.randint(-1, 1) for _ in range(P.n))
        return TorusElement.mono(P, lam, rng.choice([1, 2, -1]))

    samples = []
    for _ in range(trials):
        samples.append(TorusMatrix(P, [[rand_entry() if rng.random() < 0.5 else 0
                                        for _ in range(ell)] for _ in range(ell)]))
    pairs = [(a, b) for a in units[:2] for b in units] + list(zip(samples, samples[1:]))
    for a, b in pairs:
        if apply_morphism(w, mat_mul(a, b)) != mat_mul(apply_morphism(w, a), apply_morphism(w, b)):
            return False
    return True


def main_conjugacy(w: MorphismWord, eps: DegreeBasis | None = None, t_max: int | None = None) -> ConjugacyResult:
    """Find g with Int(g) h_st = w(h'_st) for an associative word w."""
    if not w.is_associative() or not _spot_check_associative(w):
        raise NotAssociativeWord("word is not an associative isomorphism")
    from .modules import system_from_morphism  # local: keeps import graph flat
    ell = w.ell
    O = system_from_morphism(w, ell)
    if t_max is None:
        t_max = default_window(O.idempotents, eps)
    g, h, gens = build_conjugator(O, eps, t_max)
    P_src, P = w.source, w.target
    mad_src = standard_mad(ell, P_src)
    mad_tgt = standard_mad(ell, P)
    ok = True
    for b_src, b_tgt in zip(mad_src.basis, mad_tgt.basis):
        if apply_morphism(w, b_src) != mat_mul(mat_mul(g, b_tgt), h):
            ok = False
            break
    if not ok:
        raise VerificationFailed("Int(g) does not transport the standard MAD onto w(h')")
    lead = 0
    while lead + 1 < len(w.generators) and isinstance(w.generators[lead], IotaOp) \
            and isinstance(w.generators[lead + 1], IotaOp):
        lead += 2
    report = {
        "ell": ell,
        "generators": [u.to_json() for u in gens],
        "degrees": [vec_degree(u, eps) for u in gens],
        "mad_check": ok,
        "extensions": [],
        "outer_part": ["IotaOp"] * lead,
        "t_max": t_max,
    }
    return ConjugacyResult(g, h, report)


# ---------------------------------------------------------------------------
# commuting roots


@dataclass
class RootSolution:
    witnesses: list  # monomials y_i
    presentation: Presentation
    extensions: list  # cyclotomic orders adjoined (empty when none)
    exponents: list  # mu_i


def _enlarge(P: Presentation, m_new: int) -> Presentation:
    F = P.field
    if isinstance(F, FunctionField):
        base = CyclotomicField(F.m * m_new // gcd(F.m, m_new))
        target = FunctionField(base)
    else:
        target = CyclotomicField(F.m * m_new // gcd(F.m, m_new))
    if target is F:
        return P
    return Presentation([[embed(x, target) for x in r] for r in P.q], target)


def _root_of(value, ell: int, P: Presentation):
    """(c, needed_order) with c^ell = value; needed_order is the order of c."""
    F = P.field
    if isinstance(F, PrimeField):
        for c in range(1, F.p):
            if F(c) ** ell == value:
                return F(c), None
        return None, None
    found = root_of_unity_exponent(value)
    if found is None:
        return None, None
    M, e = found
    best = None
    for k in range(ell):
        ek = e + M * k  # zeta_{M ell}^{ek} is an ell-th root of zeta_M^e
        g = gcd(M * ell, ek)
        cand = (ek // g, (M * ell) // g)
        if best is None or cand[1] < best[1]:
            best = cand
    return best, best[1]


def solve_commuting_roots(P: Presentation, targets) -> RootSolution:
    """Monomials y_i = c_i x^{mu_i} with y_i^{l_i} = x^{lam_i}, pairwise commuting."""
    n = P.n
    mus = []
    for idx, (ell, lam) in enumerate(targets):
        lam = tuple(lam)
        if len(lam) != n:
            raise NoSolution(f"target {idx} has wrong rank")
        if any(x % ell for x in lam):
            raise NoSolution(f"target {idx}: {ell} does not divide {list(lam)}")
        if not P.is_central(lam):
            raise NoSolution(f"target {idx}: x^{list(lam)} is not central")
        mus.append(tuple(x // ell for x in lam))
    for a in range(len(mus)):
        for b in range(a + 1, len(mus)):
            if not P.sigma(mus[a], mus[b]).is_one():
                raise NoSolution(f"targets {a} and {b}: roots x^{list(mus[a])}, x^{list(mus[b])} do not commute")
    # scalar equations c^ell = tau(mu, mu)^(-ell(ell-1)/2)
    plans = []
    need = 1
    for (ell, _), mu in zip(targets, mus):
        value = P.tau(mu, mu) ** (-(ell * (ell - 1) // 2))
        if value.is_one():
            plans.append(None)
            continue
        plan, order = _root_of(value, ell, P)
        if plan is None:
            raise NoSolution(f"no {ell}-th root of {value} available")
        plans.append(plan)
        if order is not None:
            need = need * order // gcd(need, order)
    extensions = []
    Q = P
    if not isinstance(P.field, PrimeField) and need > 1:
        m = P.field.m
        if CyclotomicField(m * need // gcd(m, need)) is not CyclotomicField(m):
            Q = _enlarge(P, need)
            extensions.append(Q.field.m)
    F = Q.field
    witnesses = []
    for (ell, lam), mu, plan in zip(targets, mus, plans):
        if plan is None:
            c = F.one()
        elif isinstance(F, PrimeField):
            c = plan
        else:
            num, order = plan  # c = zeta_order^num
            base = F.base if isinstance(F, FunctionField) else F
            root = base.zeta(num, order)
            c = F(root) if isinstance(F, FunctionField) else root
        witnesses.append(TorusElement.mono(Q, mu, c))
    # re-verify by torus arithmetic
    for (ell, lam), y in zip(targets, witnesses):
        if y ** ell != TorusElement.mono(Q, lam):
            raise NoSolution(f"witness for x^{list(lam)} failed re-verification")
    for a in range(len(witnesses)):
        for b in range(a + 1, len(witnesses)):
            if not qt_commutator(witnesses[a], witnesses[b]).is_zero():
                raise NoSolution("witnesses do not commute")
    return RootSolution(witnesses, Q, extensions, mus)


def symbol_targets(sd) -> list:
    """Root targets of a symbol decomposition: (l_i, t_{2i-1}) and the free t_j.

    Only the odd generator of each block is used so the roots commute.
    """
    out = [(sd.orders[i], sd.central_generators[2 * i]) for i in range(sd.s)]
    out += [(1, t) for t in sd.central_generators[2 * sd.s:]]
    return out
