"""Reduction of presentations, elements, matrices and words modulo a prime."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

from .errors import (ChainMismatch, InvalidWitness, NoPrimeInRange, OutsideSubring,
                     QTError, WitnessDegenerates)
from .lattice import Presentation, central_lattice, is_fgc
from .linalg import _is_probable_prime
from .matlie import (CentroidTwist, Int, IotaOp, LatticeBaseChange, MorphismWord,
                     ScalarFieldMap, TorusMatrix, Transpose)
from .qtorus import TorusElement
from .scalars import (INFINITE, FunctionField, PrimeField, ResidueMap, Scalar,
                      divisors)


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def element_order_mod(r: int, p: int) -> int:
    r %= p
    for d in divisors(p - 1):
        if pow(r, d, p) == 1:
            return d
    raise AssertionError("unreachable")


def root_of_order(p: int, m: int, smallest: bool = True) -> int:
    """A residue of exact multiplicative order m modulo p (m | p-1)."""
    if (p - 1) % m:
        raise ValueError(f"{m} does not divide {p}-1")
    qs = _prime_factors(m)

    def exact(z):
        return pow(z, m, p) == 1 and all(pow(z, m // q, p) != 1 for q in qs)

    if m == 1:
        return 1
    if smallest and p < 10 ** 6:
        for z in range(2, p):
            if exact(z):
                return z
    for x in range(2, p):
        z = pow(x, (p - 1) // m, p)
        if exact(z):
            return z
    raise AssertionError("unreachable")


def _field_order(P: Presentation) -> int:
    F = P.field
    return getattr(F, "m", 1) if not isinstance(F, PrimeField) else 1


def _has_s(P: Presentation) -> bool:
    return isinstance(P.field, FunctionField)


def residue_map_for(field, p: int, zeta_image: int | None = None, s_image: int | None = None) -> ResidueMap:
    m = getattr(field, "m", 1)
    if zeta_image is None:
        zeta_image = root_of_order(p, m)
    return ResidueMap(p, m, zeta_image, s_image if isinstance(field, FunctionField) else None)


def _scalars_of(obj) -> list:
    if isinstance(obj, Scalar):
        return [obj]
    if isinstance(obj, TorusElement):
        return list(obj.terms.values())
    if isinstance(obj, TorusMatrix):
        return [c for r in obj.entries for a in r for c in a.terms.values()]
    if isinstance(obj, Presentation):
        return [x for r in obj.q for x in r]
    return []


def propose_prime(P: Presentation, P2: Presentation | None, ell: int, ell2: int | None = None,
                  forbidden=(), order_bound: int | None = None, limit: int = 100000,
                  t_max: int = 12):
    """Smallest admissible prime with its residue map."""
    P2 = P2 or P
    ell2 = ell2 or ell
    m = 1
    for Q in (P, P2):
        fm = _field_order(Q)
        m = m * fm // gcd(m, fm)
    needs_s = _has_s(P) or _has_s(P2)
    if order_bound is None:
        order_bound = 2 * t_max * max(P.n, P2.n)
    watch = list(forbidden) + _scalars_of(P) + _scalars_of(P2)
    field = P.field if _field_order(P) == m else P2.field
    if needs_s and not isinstance(field, FunctionField):
        field = P2.field if isinstance(P2.field, FunctionField) else P.field
    p = max(3, ell, ell2) + 1
    while p < limit:
        if _is_probable_prime(p) and m % p and (p - 1) % m == 0:
            z = root_of_order(p, m)
            candidates = [None]
            if needs_s:
                candidates = [r for r in range(2, p) if element_order_mod(r, p) > order_bound]
            for r in candidates:
                try:
                    h = ResidueMap(p, m, z, r)
                    if all(not h(x).is_zero() for x in watch):
                        return p, h
                except OutsideSubring:
                    continue
        p += 1
    raise NoPrimeInRange(limit)


def specialize_presentation(P: Presentation, h: ResidueMap) -> Presentation:
    return Presentation([[h(x) for x in r] for r in P.q], h.target)


def specialize_element(a: TorusElement, h: ResidueMap, Pbar: Presentation | None = None) -> TorusElement:
    Pbar = Pbar or specialize_presentation(a.P, h)
    return TorusElement(Pbar, {lam: h(c) for lam, c in a.terms.items()})


def specialize_matrix(x: TorusMatrix, h: ResidueMap, Pbar: Presentation | None = None) -> TorusMatrix:
    Pbar = Pbar or specialize_presentation(x.P, h)
    return TorusMatrix(Pbar, [[specialize_element(a, h, Pbar) for a in r] for r in x.entries])


def _pullback(h: ResidueMap, g: ScalarFieldMap) -> ResidueMap:
    """Residue map h' on the target of g with h' o g = h."""
    if g.target_field is not g.source.field:
        raise WitnessDegenerates("field enlargements cannot be specialized with the same prime")
    m = h.m
    zeta = h.zeta_image
    if m > 1:
        kinv = pow(g.k, -1, m)
        zeta = pow(h.zeta_image, kinv, h.p)
    s_img = None if h.s_image is None else pow(h.s_image, g.s_exp, h.p)
    return ResidueMap(h.p, m, zeta, s_img)


def specialize_word(w: MorphismWord, h: ResidueMap) -> tuple[MorphismWord, ResidueMap]:
    """Reduce each generator; field maps are absorbed into the residue map.

    Returns the reduced word and the residue map valid on its target.
    """
    gens = []
    cur_h = h
    src = specialize_presentation(w.source, h)
    cur = src
    for g in w.generators:
        if isinstance(g, ScalarFieldMap):
            cur_h = _pullback(cur_h, g)
            continue
        if isinstance(g, LatticeBaseChange):
            ng = LatticeBaseChange(cur, g.A, [cur_h(c) for c in g.scalars])
        elif isinstance(g, Int):
            gb = specialize_matrix(g.g, cur_h, cur)
            gib = specialize_matrix(g.g_inv, cur_h, cur)
            try:
                ng = Int(gb, gib)
            except InvalidWitness as exc:
                raise WitnessDegenerates(f"inverse pair fails mod {h.p}") from exc
        elif isinstance(g, Transpose):
            ng = Transpose(cur)
        elif isinstance(g, IotaOp):
            ng = IotaOp(cur)
        elif isinstance(g, CentroidTwist):
            try:
                ng = CentroidTwist(cur, specialize_element(g.u, cur_h, cur))
            except InvalidWitness as exc:
                raise WitnessDegenerates(f"central unit vanishes mod {h.p}") from exc
        else:
            raise ChainMismatch(f"cannot specialize {type(g).__name__}")
        gens.append(ng)
        cur = ng.target
    return MorphismWord(gens, w.ell, src), cur_h


@dataclass
class SpecializationCertificate:
    residue_map: ResidueMap
    conditions: list = dc_field(default_factory=list)  # dicts: condition, outcome, witness

    @property
    def valid(self) -> bool:
        return all(c["outcome"] for c in self.conditions)

    def record(self, name: str, outcome: bool, witness=None) -> None:
        self.conditions.append({"condition": name, "outcome": bool(outcome), "witness": witness})

    def to_json(self) -> dict:
        return {"residue_map": self.residue_map.to_json(), "valid": self.valid,
                "conditions": self.conditions}


def certify(P: Presentation, P2: Presentation | None, ell: int, ell2: int | None,
            designated, h: ResidueMap) -> SpecializationCertificate:
    P2 = P2 or P
    ell2 = ell2 or ell
    p = h.p
    cert = SpecializationCertificate(h)
    cert.record("char_p_greater_than_3", p > 3, p)
    cert.record("p_does_not_divide_ell", ell % p != 0, ell)
    cert.record("p_does_not_divide_ell_prime", ell2 % p != 0, ell2)
    bad = None
    reduced = []
    for k, Q in enumerate((P, P2)):
        try:
            Qb = specialize_presentation(Q, h)
            reduced.append(Qb)
        except QTError as exc:  # recorded as an outcome
            reduced.append(None)
            bad = f"presentation {k}: {exc}"
    cert.record("quantum_matrix_entries_nonzero_mod_p", bad is None, bad)
    fgc_ok = all(Qb is not None and is_fgc(Qb) for Qb in reduced)
    cert.record("reduced_presentations_fgc", fgc_ok)
    indices = []
    for Qb in reduced:
        if Qb is None:
            indices.append(None)
            continue
        idx = central_lattice(Qb).index
        indices.append(None if idx is INFINITE else idx)
    ok = all(i is not None and i % p != 0 for i in indices)
    cert.record("p_does_not_divide_centre_index", ok, indices)
    scal_bad, elem_bad = [], []
    for k, d in enumerate(designated):
        try:
            if isinstance(d, Scalar):
                if h(d).is_zero():
                    scal_bad.append(k)
            elif isinstance(d, TorusElement):
                if specialize_element(d, h).is_zero():
                    elem_bad.append(k)
            elif isinstance(d, TorusMatrix):
                if specialize_matrix(d, h).is_zero():
                    elem_bad.append(k)
        except OutsideSubring:
            (scal_bad if isinstance(d, Scalar) else elem_bad).append(k)
    cert.record("designated_scalars_nonzero_mod_p", not scal_bad, scal_bad or None)
    cert.record("designated_elements_nonzero_mod_p", not elem_bad, elem_bad or None)
    return cert
