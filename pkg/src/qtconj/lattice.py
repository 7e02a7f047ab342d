"""Integer lattice algorithms and quantum-matrix presentations.

Lattice points are tuples of ints and act as *row* vectors.  A base change
matrix ``A`` has rows ``a_i`` giving the new generators ``x~_i ~ x^{a_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from .errors import (CanonicalizationFailed, InvalidPresentation, NotCanonical,
                     NotFgc, NotUnimodular, UnsupportedScalarKind)
from .scalars import (INFINITE, FunctionField, PrimeField, Scalar, common_field,
                      literal_field, mult_order, multiplicative_split,
                      parse_field, parse_scalar, format_scalar)

Matrix = list  # list[list[int]]


# ---------------------------------------------------------------------------
# integer matrix helpers


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vec_mat(v, A) -> tuple[int, ...]:
    """Row vector times matrix."""
    n = len(A[0]) if A else 0
    out = [0] * n
    for vi, row in zip(v, A):
        if vi:
            for j, a in enumerate(row):
                out[j] += vi * a
    return tuple(out)


def transpose(A):
    return [list(r) for r in zip(*A)]


def det(A) -> int:
    """Exact integer determinant (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(A) -> bool:
    return len(A) > 0 and all(len(r) == len(A) for r in A) and abs(det(A)) == 1


def unimodular_inverse(A) -> list[list[int]]:
    if not is_unimodular(A):
        raise NotUnimodular(f"matrix {A} is not in GL_n(Z)")
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[int(x) for x in row[n:]] for row in M]
    assert mat_mul(A, out) == identity(n)
    return out


def smith_normal_form(M) -> tuple[list, list, list]:
    """Return (U, D, V) with U*M*V = D diagonal, d_1 | d_2 | ..., d_i >= 0."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    D = [list(r) for r in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def nearest(a, b):  # quotient rounding to the nearest integer
        return (2 * a + b) // (2 * b) if b > 0 else -((2 * a - b) // (-2 * b))

    t = 0
    while t < min(rows, cols):
        while True:
            # pivot: smallest nonzero |entry| of the trailing block
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _snf_sign(U, D, V, t)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -nearest(D[i][t], p))
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -nearest(D[t][j], p))
            if any(D[i][t] for i in range(t + 1, rows)) or any(D[t][j] for j in range(t + 1, cols)):
                continue
            # enforce divisibility of the trailing block
            bad = next((i for i in range(t + 1, rows)
                        if any(D[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        t += 1
    return _snf_sign(U, D, V, t)


def _snf_sign(U, D, V, t):
    for i in range(min(t, len(D))):
        if D[i][i] < 0:
            D[i] = [-x for x in D[i]]
            U[i] = [-x for x in U[i]]
    return U, D, V


def hermite_rows(rows) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    if not rows:
        return []
    M = [list(r) for r in rows]
    n = len(M[0])
    out = []
    r0 = 0
    for c in range(n):
        piv = [i for i in range(r0, len(M)) if M[i][c]]
        if not piv:
            continue
        while True:
            piv = [i for i in range(r0, len(M)) if M[i][c]]
            i_min = min(piv, key=lambda i: abs(M[i][c]))
            M[r0], M[i_min] = M[i_min], M[r0]
            clean = True
            for i in range(r0 + 1, len(M)):
                if M[i][c]:
                    f = M[i][c] // M[r0][c]
                    M[i] = [a - f * b for a, b in zip(M[i], M[r0])]
                    if M[i][c]:
                        clean = False
            if clean:
                break
        if M[r0][c] < 0:
            M[r0] = [-a for a in M[r0]]
        for i in range(r0):
            f = M[i][c] // M[r0][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[r0])]
        r0 += 1
        if r0 == len(M):
            break
    return [tuple(r) for r in M[:r0]]


def left_kernel(M) -> list[tuple[int, ...]]:
    """Z-basis of {x : x*M = 0}."""
    U, D, _ = smith_normal_form(M)
    rank = sum(1 for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i])
    return [tuple(r) for r in U[rank:]]


def in_row_span(v, basis) -> bool:
    """Integer membership of v in the lattice with HNF rows ``basis``."""
    v = list(v)
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        f = v[c] // row[c]
        v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


# ---------------------------------------------------------------------------
# presentations


class Presentation:
    """Rank ``n`` quantum matrix over one coefficient field."""

    __slots__ = ("n", "q", "field", "_log", "_cache", "_hash")

    def __init__(self, q, field=None):
        q = [list(r) for r in q]
        n = len(q)
        if n < 1 or any(len(r) != n for r in q):
            raise InvalidPresentation("quantum matrix must be square with n >= 1")
        if field is None:
            field = common_field(x.field for r in q for x in r if isinstance(x, Scalar))
        q = [[field(x) if not (isinstance(x, Scalar) and x.field is field) else x for x in r]
             for r in q]
        for i in range(n):
            if not q[i][i].is_one():
                raise InvalidPresentation(f"q[{i}][{i}] must be 1")
            for j in range(n):
                if q[i][j].is_zero():
                    raise InvalidPresentation(f"q[{i}][{j}] is zero")
                if not (q[i][j] * q[j][i]).is_one():
                    raise InvalidPresentation(f"q[{j}][{i}] is not the inverse of q[{i}][{j}]")
        self.n = n
        self.q = tuple(tuple(r) for r in q)
        self.field = field
        self._log = False
        self._cache = {}
        self._hash = None

    @classmethod
    def from_upper(cls, n: int, entries: dict, field=None) -> "Presentation":
        """Build from {(i, j): q_ij} for i < j (0-based); missing entries are 1."""
        vals = [v for v in entries.values()]
        if field is None:
            field = common_field([v.field for v in vals if isinstance(v, Scalar)]) if any(
                isinstance(v, Scalar) for v in vals) else common_field([])
        one = field.one()
        q = [[one] * n for _ in range(n)]
        for (i, j), v in entries.items():
            if not i < j:
                raise InvalidPresentation("only strict upper-triangular entries may be given")
            v = field(v)
            q[i][j] = v
            q[j][i] = v.inverse()
        return cls(q, field)

    @classmethod
    def commutative(cls, n: int, field=None) -> "Presentation":
        return cls.from_upper(n, {}, field)

    def __eq__(self, other):
        return isinstance(other, Presentation) and self.field is other.field and self.q == other.q

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.q)
        return self._hash

    def __repr__(self):
        ups = {f"q{i+1}{j+1}": format_scalar(self.q[i][j])
               for i in range(self.n) for j in range(i + 1, self.n) if not self.q[i][j].is_one()}
        return f"Presentation(n={self.n}, {ups}, field={self.field!r})"

    def is_commutative(self) -> bool:
        return all(x.is_one() for r in self.q for x in r)

    # -- multiplicative log form: q_ij = zeta_M^{a_ij} s^{b_ij}

    def log_form(self):
        """(M, a, b) with integer matrices, or None when an entry has no such form."""
        if self._log is False and isinstance(self.field, PrimeField) and self.field.p > 100003:
            # discrete logs would cost O(p); the generic product path is used instead
            self._log = None
        if self._log is False:
            parts = {}
            ok = True
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    sp = multiplicative_split(self.q[i][j])
                    if sp is None:
                        ok = False
                        break
                    parts[i, j] = sp
                if not ok:
                    break
            if not ok:
                self._log = None
            else:
                M = 1
                for Mi, _, _ in parts.values():
                    M = M * Mi // gcd(M, Mi)
                a = [[0] * self.n for _ in range(self.n)]
                b = [[0] * self.n for _ in range(self.n)]
                for (i, j), (Mi, e, bb) in parts.items():
                    a[i][j] = (e * (M // Mi)) % M
                    a[j][i] = (-a[i][j]) % M
                    b[i][j] = bb
                    b[j][i] = -bb
                self._log = (M, a, b)
        return self._log

    def _from_log(self, e: int, k: int) -> Scalar:
        """zeta_M^e * s^k in this presentation's field."""
        M = self._log[0]
        key = (e % M, k)
        val = self._cache.get(key)
        if val is None:
            f = self.field
            if isinstance(f, PrimeField):
                val = f(pow(f.generator(), e % M, f.p))
            elif isinstance(f, FunctionField):
                val = f(f.base.zeta(e % M, M)) * f.s(k)
            else:
                val = f.zeta(e % M, M)
            if len(self._cache) < 4096:
                self._cache[key] = val
        return val

    def tau(self, lam, mu) -> Scalar:
        """Normalization cocycle: x^lam x^mu = tau(lam, mu) x^(lam+mu)."""
        n = self.n
        if self.log_form() is not None:
            M, a, b = self._log
            ea = eb = 0
            for i in range(1, n):
                li = lam[i]
                if li:
                    for j in range(i):
                        if mu[j]:
                            ea += a[i][j] * li * mu[j]
                            eb += b[i][j] * li * mu[j]
            return self._from_log(ea, eb)
        out = self.field.one()
        for i in range(1, n):
            for j in range(i):
                e = lam[i] * mu[j]
                if e:
                    out = out * self.q[i][j] ** e
        return out

    def sigma(self, lam, mu) -> Scalar:
        """Commutation bicharacter: x^lam x^mu = sigma(lam, mu) x^mu x^lam."""
        n = self.n
        if self.log_form() is not None:
            M, a, b = self._log
            ea = eb = 0
            for s in range(n):
                if lam[s]:
                    for t in range(n):
                        if mu[t] and s != t:
                            ea += a[s][t] * lam[s] * mu[t]
                            eb += b[s][t] * lam[s] * mu[t]
            return self._from_log(ea, eb)
        out = self.field.one()
        for s in range(n):
            for t in range(n):
                e = lam[s] * mu[t]
                if e and s != t:
                    out = out * self.q[s][t] ** e
        return out

    def is_central(self, lam) -> bool:
        return all(self.sigma(lam, tuple(int(i == j) for i in range(self.n))).is_one()
                   for j in range(self.n))

    # -- JSON

    def to_json(self) -> dict:
        return {"rank": self.n,
                "q": [[format_scalar(x) for x in r] for r in self.q],
                "field": repr(self.field)}

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        try:
            n = int(data["rank"])
            rows = data.get("q", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidPresentation(f"malformed presentation JSON: {exc}") from exc
        if n < 1:
            raise InvalidPresentation("rank must be positive")
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                try:
                    upper[i, j] = str(rows[i][j])
                except (IndexError, TypeError):
                    upper[i, j] = "1"
        if data.get("field"):
            fld = parse_field(data["field"])
        else:
            fld = common_field([literal_field(t) for t in upper.values()])
        return cls.from_upper(n, {k: parse_scalar(v, fld) for k, v in upper.items()}, fld)


def entry_orders(P: Presentation) -> dict:
    return {(i, j): mult_order(P.q[i][j]) for i in range(P.n) for j in range(i + 1, P.n)}


def change_basis(P: Presentation, A) -> Presentation:
    """q~_ij = prod_{s,t} q_st^{a_is a_jt} for rows a_i of A."""
    A = [tuple(r) for r in A]
    if len(A) != P.n or not is_unimodular(A):
        raise NotUnimodular(f"matrix {A} is not in GL_{P.n}(Z)")
    n = P.n
    one = P.field.one()
    q = [[one] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = P.sigma(A[i], A[j])
            q[i][j] = v
            q[j][i] = v.inverse()
    return Presentation(q, P.field)


# ---------------------------------------------------------------------------
# central lattice


@dataclass(frozen=True)
class CentralLattice:
    basis: tuple  # tuple of row tuples (Hermite form)
    index: object  # int or INFINITE

    def contains(self, lam) -> bool:
        return in_row_span(lam, self.basis)

    def to_json(self) -> dict:
        return {"basis": [list(r) for r in self.basis],
                "index": "Infinite" if self.index is INFINITE else self.index}


def central_lattice(P: Presentation) -> CentralLattice:
    lf = P.log_form()
    if lf is None:
        raise UnsupportedScalarKind("entries must be products of roots of unity and powers of s")
    M, a, b = lf
    n = P.n
    # (lam, k) * [[a, b], [-M I, 0]] = 0
    C = [list(a[i]) + list(b[i]) for i in range(n)]
    C += [[-M * int(i == j) for j in range(n)] + [0] * n for i in range(n)]
    ker = left_kernel(C)
    lam_rows = [r[:n] for r in ker if any(r[:n])]
    basis = tuple(hermite_rows(lam_rows))
    if len(basis) == n:
        index = abs(det(basis))
    else:
        index = INFINITE
    return CentralLattice(basis, index)


def is_fgc(P: Presentation) -> bool:
    return all(o is not INFINITE for o in entry_orders(P).values())


# ---------------------------------------------------------------------------
# canonical presentations


def is_canonical_shape(P: Presentation) -> bool:
    n = P.n
    s = 0
    seen_trivial = False
    for i in range(n):
        for j in range(i + 1, n):
            if i % 2 == 0 and j == i + 1:
                continue
            if not P.q[i][j].is_one():
                return False
    for k in range(0, n - 1, 2):
        nontrivial = not P.q[k][k + 1].is_one()
        if nontrivial and seen_trivial:
            return False
        if not nontrivial:
            seen_trivial = True
        else:
            s += 1
    return True


def block_orders(P: Presentation) -> list:
    """Orders of the nontrivial 2x2 blocks of a canonical presentation."""
    out = []
    for k in range(0, P.n - 1, 2):
        if not P.q[k][k + 1].is_one():
            out.append(mult_order(P.q[k][k + 1]))
    return out


def alternating_smith_form(S):
    """Return (A, D) with A unimodular and A*S*A^T = D block-diagonal.

    ``S`` is an integer alternating matrix; ``D`` has blocks [[0, d_i], [-d_i, 0]]
    on consecutive index pairs with 0 < d_1 | d_2 | ... followed by zeros.
    """
    n = len(S)
    S = [list(r) for r in S]
    A = identity(n)

    def add(r, s_, c):  # a_r += c a_s, S -> E S E^T
        if not c:
            return
        S[r] = [x + c * y for x, y in zip(S[r], S[s_])]
        for row in S:
            row[r] += c * row[s_]
        A[r] = [x + c * y for x, y in zip(A[r], A[s_])]

    def swap(r, s_):
        if r == s_:
            return
        S[r], S[s_] = S[s_], S[r]
        for row in S:
            row[r], row[s_] = row[s_], row[r]
        A[r], A[s_] = A[s_], A[r]

    k = 0
    while k + 1 < n:
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i > j:
            i, j = j, i
        swap(k, i)
        swap(k + 1, j if j != k else i)
        if S[k][k + 1] < 0:
            swap(k, k + 1)
        while True:
            d = S[k][k + 1]
            changed = False
            for r in range(k + 2, n):
                # clear S[k][r] with a_r -= c a_{k+1}
                add(r, k + 1, -(S[k][r] // d))
                # clear S[k+1][r] with a_r += c a_k  (S[k+1][k] = -d)
                add(r, k, S[k + 1][r] // d)
                if S[k][r] or S[k + 1][r]:
                    changed = True
            if changed:
                # a smaller remainder exists: move it into the pivot
                best = None
                for r in range(k + 2, n):
                    for piv_row in (k, k + 1):
                        v = S[piv_row][r]
                        if v and (best is None or abs(v) < abs(S[best[0]][best[1]])):
                            best = (piv_row, r)
                piv_row, r = best
                if piv_row == k:
                    swap(k + 1, r)
                else:
                    swap(k, r)
                    swap(k, k + 1)
                if S[k][k + 1] < 0:
                    swap(k, k + 1)
                continue
            bad = None
            for r in range(k + 2, n):
                for c in range(r + 1, n):
                    if S[r][c] % d:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add(k, bad, 1)
        k += 2
    return A, S


def canonical_presentation(P: Presentation):
    """Return (A, Pc) with Pc = change_basis(P, A) in canonical shape."""
    if not is_fgc(P):
        raise NotFgc("canonical presentations exist only for fgc tori")
    if is_canonical_shape(P) and _is_chain(block_orders(P)):
        return identity(P.n), P
    lf = P.log_form()
    if lf is None:
        raise NotFgc("entries must be roots of unity")
    M, a, _ = lf
    n = P.n
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            S[i][j] = a[i][j]
            S[j][i] = -a[i][j]
    A, _ = alternating_smith_form(S)
    Pc = change_basis(P, A)
    if not is_canonical_shape(Pc):
        raise CanonicalizationFailed(f"shape check failed for A={A}")
    # exact re-evaluation of the formula, entry by entry
    for i in range(n):
        for j in range(n):
            if P.sigma(A[i], A[j]) != Pc.q[i][j]:
                raise CanonicalizationFailed(f"entry ({i},{j}) does not re-verify")
    return A, Pc


def _is_chain(orders) -> bool:
    return all(orders[i + 1] <= orders[i] and orders[i] % orders[i + 1] == 0
               for i in range(len(orders) - 1))


def invariant_factor_orders(orders) -> list[int]:
    """Invariant factors l_1 >= l_2 >= ... (l_{i+1} | l_i) of the group sum (Z/l_i)."""
    prime_powers: dict[int, list[int]] = {}
    for ell in orders:
        x = ell
        p = 2
        while x > 1:
            if x % p == 0:
                e = 1
                x //= p
                while x % p == 0:
                    x //= p
                    e += 1
                prime_powers.setdefault(p, []).append(p ** e)
            p += 1
    for v in prime_powers.values():
        v.sort(reverse=True)
    k = max((len(v) for v in prime_powers.values()), default=0)
    out = []
    for i in range(k):
        f = 1
        for v in prime_powers.values():
            if i < len(v):
                f *= v[i]
        out.append(f)
    return out


@dataclass(frozen=True)
class SymbolDecomposition:
    s: int
    orders: tuple
    central_generators: tuple
    etale_generators: tuple = dc_field(default=())

    def to_json(self) -> dict:
        return {"s": self.s, "orders": list(self.orders),
                "central_generators": [list(t) for t in self.central_generators],
                "etale_generators": [list(t) for t in self.etale_generators]}


def symbol_decomposition(Pc: Presentation) -> SymbolDecomposition:
    if not is_canonical_shape(Pc):
        raise NotCanonical("presentation is not in canonical shape")
    if not is_fgc(Pc):
        raise NotCanonical("symbol decomposition needs an fgc presentation")
    n = Pc.n
    orders = block_orders(Pc)
    s = len(orders)
    gens = []
    for i in range(s):
        for k in (2 * i, 2 * i + 1):
            gens.append(tuple(orders[i] * int(j == k) for j in range(n)))
    for k in range(2 * s, n):
        gens.append(tuple(int(j == k) for j in range(n)))
    etale = tuple(tuple(int(j == 2 * i) for j in range(n)) for i in range(s))
    return SymbolDecomposition(s, tuple(orders), tuple(gens), etale)
