"""Sparse exact linear algebra.

Rows are dicts ``column -> value``.  Two eliminators share one algorithm: rows
are reduced on insertion with the smallest surviving column as pivot, and a
final back-substitution yields the reduced row echelon form, which is unique
for a given column order.  ``ModP`` works on plain ints, ``Exact`` on
:class:`~qtconj.scalars.Scalar` values.
"""

from __future__ import annotations

import random


class _Base:
    def __init__(self):
        self.pivots: dict = {}  # pivot column -> row (pivot entry 1)
        self.order: list = []  # pivot columns in insertion order
        self._reduced = True

    # subclasses: _sub_scaled(dst, src, c), _normalize(row, col), _zero(x)

    def reduce(self, row: dict) -> dict:
        row = {k: v for k, v in row.items() if not self._zero(v)}
        piv = self.pivots
        while True:
            hit = [k for k in row if k in piv]
            if not hit:
                return row
            for k in hit:
                c = row.get(k)
                if c is not None:
                    self._sub_scaled(row, piv[k], c)

    def add(self, row: dict) -> bool:
        """Insert a row; return True when it was independent."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        self.pivots[col] = self._normalize(row, col)
        self.order.append(col)
        self._reduced = False
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> dict:
        if not self._reduced:
            piv = self.pivots
            for k in reversed(self.order):
                rk = piv[k]
                for j in self.order:
                    if j == k:
                        continue
                    rj = piv[j]
                    c = rj.get(k)
                    if c is not None:
                        self._sub_scaled(rj, rk, c)
            self._reduced = True
        return self.pivots

    def nullspace(self, columns) -> list[dict]:
        """Kernel basis, one vector per free column (in the given column order)."""
        piv = self.rref()
        free = [c for c in columns if c not in piv]
        basis = []
        for f in free:
            vec = {f: self._one()}
            for pc, row in piv.items():
                v = row.get(f)
                if v is not None:
                    vec[pc] = self._neg(v)
            basis.append(vec)
        return basis

    def free_columns(self, columns) -> list:
        return [c for c in columns if c not in self.pivots]


class ModP(_Base):
    def __init__(self, p: int):
        super().__init__()
        self.p = p

    def _zero(self, x):
        return x % self.p == 0

    def _one(self):
        return 1

    def _neg(self, x):
        return (-x) % self.p

    def _sub_scaled(self, dst, src, c):
        p = self.p
        for k, v in src.items():
            w = (dst.get(k, 0) - c * v) % p
            if w:
                dst[k] = w
            else:
                dst.pop(k, None)

    def _normalize(self, row, col):
        inv = pow(row[col], -1, self.p)
        return {k: v * inv % self.p for k, v in row.items()}

    def reduce(self, row):
        return super().reduce({k: v % self.p for k, v in row.items()})


class Exact(_Base):
    def __init__(self, field):
        super().__init__()
        self.field = field

    def _zero(self, x):
        return x.is_zero()

    def _one(self):
        return self.field.one()

    def _neg(self, x):
        return -x

    def _sub_scaled(self, dst, src, c):
        for k, v in src.items():
            w = dst.get(k)
            w = -(c * v) if w is None else w - c * v
            if w.is_zero():
                dst.pop(k, None)
            else:
                dst[k] = w

    def _normalize(self, row, col):
        inv = row[col].inverse()
        return {k: v * inv for k, v in row.items()}


def eliminator(field):
    from .scalars import PrimeField
    return ModP(field.p) if isinstance(field, PrimeField) else Exact(field)


def nullspace(rows, columns, field) -> list[dict]:
    el = eliminator(field)
    for r in rows:
        el.add(r)
    basis = el.nullspace(columns)
    if isinstance(el, ModP):
        return [{k: field(v) for k, v in vec.items()} for vec in basis]
    return basis


def rank(rows, field) -> int:
    el = eliminator(field)
    for r in rows:
        el.add(r)
    return el.rank


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def large_prime(m: int, start: int = 2 ** 31, rng: random.Random | None = None) -> int:
    """A prime p = 1 (mod m) at or above ``start`` (deterministic unless ``rng`` given)."""
    base = start + (rng.randrange(2 ** 20) if rng else 0)
    k = base // m + 1
    while True:
        p = k * m + 1
        if _is_probable_prime(p):
            return p
        k += 1
