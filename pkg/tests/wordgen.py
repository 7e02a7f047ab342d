"""Random morphism words shared by several test modules."""

from __future__ import annotations

from qtconj.lattice import Presentation
from qtconj.lemmas import random_unimodular
from qtconj.matlie import (CentroidTwist, Int, IotaOp, LatticeBaseChange, MorphismWord,
                           ScalarFieldMap, Transpose, TorusMatrix)
from qtconj.qtorus import TorusElement
from qtconj.scalars import QQ, FunctionField, zeta

Z3 = Presentation.from_upper(2, {(0, 1): zeta(3)})
S2 = Presentation.from_upper(2, {(0, 1): FunctionField(QQ).s()})


def small_lambda(rng, n, r=2):
    while True:
        lam = tuple(rng.randint(0, r) for _ in range(n))
        if sum(lam) <= r:
            return lam


def associative_word(P, ell, rng, max_int=4):
    """[IotaOp, IotaOp]? + LatticeBaseChange + up to ``max_int`` elementary Int."""
    gens = []
    src = P
    if rng.random() < 0.5:
        a = IotaOp(P)
        b = IotaOp(a.target)
        gens += [a, b]
        src = b.target
    bc = LatticeBaseChange(src, random_unimodular(P.n, rng, steps=2))
    gens.append(bc)
    cur = bc.target
    for _ in range(rng.randint(0, max_int)):
        i, j = rng.sample(range(ell), 2)
        a = TorusElement.mono(cur, small_lambda(rng, cur.n), cur.field(rng.choice([1, -1, 2])))
        gens.append(Int.elementary(cur, ell, i, j, a))
    return MorphismWord(gens, ell, P)


def lie_word(P, ell, rng, depth):
    """Any chain of generators, anti-isomorphisms and centroid twists included."""
    gens = []
    cur = P
    for _ in range(depth):
        kind = rng.choice(["lbc", "int", "int", "transpose", "iota", "twist", "field"])
        if kind == "lbc":
            g = LatticeBaseChange(cur, random_unimodular(cur.n, rng, steps=2),
                                  [rng.choice([1, -1, 2]) for _ in range(cur.n)])
        elif kind == "int":
            i, j = rng.sample(range(ell), 2)
            lam = tuple(rng.randint(-1, 1) for _ in range(cur.n))
            g = Int.elementary(cur, ell, i, j, TorusElement.mono(cur, lam, rng.choice([1, -1])))
        elif kind == "transpose":
            g = Transpose(cur)
        elif kind == "iota":
            g = IotaOp(cur)
        elif kind == "twist":
            g = CentroidTwist(cur, TorusElement.const(cur, rng.choice([2, -1, 3])))
        else:
            g = ScalarFieldMap(cur, rng.choice([1, 2]) if getattr(cur.field, "m", 1) == 3 else 1,
                               rng.choice([1, -1]) if hasattr(cur.field, "s") else 1)
        gens.append(g)
        cur = g.target
    return MorphismWord(gens, ell, P)


def random_matrix(P, ell, rng, density=0.6, r=1):
    rows = []
    for _ in range(ell):
        row = []
        for _ in range(ell):
            if rng.random() < density:
                lam = tuple(rng.randint(-r, r) for _ in range(P.n))
                row.append(TorusElement.mono(P, lam, rng.choice([1, -1, 2, 3])))
            else:
                row.append(TorusElement.zero(P))
        rows.append(row)
    return TorusMatrix(P, rows)
