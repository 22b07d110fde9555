"""Exact arithmetic on unimodular lattices of signature (1, n-1).

Vectors are plain tuples of Python ints (class vectors) or of
:class:`fractions.Fraction` (rational points).  Nothing here uses floating
point: every sign decision downstream is the sign of an exact pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, Sequence

Vec = tuple  # tuple[int, ...] or tuple[Fraction, ...]


class LatticeError(ValueError):
    """Raised on malformed lattices or violated operation preconditions."""


def diagonalize(gram: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Congruence-diagonalize a symmetric matrix over the rationals.

    Returns ``(d, T)`` with ``T^T G T = diag(d)``.  Zero pivots with a
    nonzero off-diagonal entry are repaired by adding a basis vector, so
    indefinite and degenerate forms are handled.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col(dst: int, src: int, c: Fraction) -> None:
        # basis change e_dst += c * e_src, applied congruently
        for i in range(n):
            g[i][dst] += c * g[i][src]
        for j in range(n):
            g[dst][j] += c * g[src][j]
        for i in range(n):
            t[i][dst] += c * t[i][src]

    def swap(a: int, b: int) -> None:
        for row in g:
            row[a], row[b] = row[b], row[a]
        g[a], g[b] = g[b], g[a]
        for row in t:
            row[a], row[b] = row[b], row[a]

    for k in range(n):
        if g[k][k] == 0:
            j = next((j for j in range(k + 1, n) if g[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if g[k][j] != 0), None)
                if j is None:
                    continue
                add_col(k, j, Fraction(1))
        p = g[k][k]
        for j in range(k + 1, n):
            if g[k][j] != 0:
                add_col(j, k, -g[k][j] / p)
    return [g[i][i] for i in range(n)], t


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia counts of a symmetric matrix."""
    d, _ = diagonalize(gram)
    return (sum(x > 0 for x in d), sum(x < 0 for x in d), sum(x == 0 for x in d))


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


@dataclass(frozen=True)
class LatticeSpace:
    """Integral symmetric bilinear form with a distinguished basis.

    Construction checks symmetry, unimodularity and hyperbolic signature
    (1, rank-1).  Use :meth:`unchecked` to build deliberately broken forms
    for negative tests.
    """

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise LatticeError("gram must be a non-empty square matrix")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram is not symmetric")
        if abs(determinant(g)) != 1:
            raise LatticeError("gram is not unimodular")
        pos, neg, _ = signature(g)
        if (pos, neg) != (1, n - 1):
            raise LatticeError(f"signature ({pos}, {neg}) is not (1, {n - 1})")
        self._set_diag()

    def _set_diag(self) -> None:
        g = self.gram
        n = len(g)
        diag = all(g[i][j] == 0 for i in range(n) for j in range(n) if i != j)
        # not a dataclass field, so equality and hashing ignore it
        object.__setattr__(self, "_diag", tuple(g[i][i] for i in range(n)) if diag else None)

    @classmethod
    def unchecked(cls, gram: Sequence[Sequence[int]]) -> "LatticeSpace":
        obj = object.__new__(cls)
        object.__setattr__(obj, "gram", tuple(tuple(int(x) for x in row) for row in gram))
        obj._set_diag()
        return obj

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "LatticeSpace":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def _check(self, v: Sequence) -> None:
        if len(v) != self.rank:
            raise LatticeError(f"vector of length {len(v)} in rank {self.rank} lattice")

    def apply_gram(self, v: Sequence) -> tuple:
        self._check(v)
        if self._diag is not None:
            return tuple(d * x for d, x in zip(self._diag, v))
        return tuple(sum(gi[j] * v[j] for j in range(self.rank) if v[j]) for gi in self.gram)

    def pairing(self, v: Sequence, w: Sequence) -> int | Fraction:
        """v^T G w; exact for int and Fraction entries alike."""
        self._check(w)
        if self._diag is not None:
            self._check(v)
            return sum(d * a * b for d, a, b in zip(self._diag, v, w))
        gv = self.apply_gram(v)
        return sum(a * b for a, b in zip(gv, w))

    def square(self, v: Sequence) -> int | Fraction:
        return self.pairing(v, v)

    def is_characteristic(self, v: Sequence[int]) -> bool:
        gv = self.apply_gram(v)
        return all((gv[i] - self.gram[i][i]) % 2 == 0 for i in range(self.rank))

    def characteristic_parity(self) -> tuple[int, ...]:
        """Coordinate parities shared by every characteristic vector.

        Characteristic vectors form the coset w + 2L where G w = diag(G)
        mod 2; unimodularity makes w unique mod 2.
        """
        n = self.rank
        rows = [[self.gram[i][j] % 2 for j in range(n)] + [self.gram[i][i] % 2] for i in range(n)]
        r = 0
        pivots = []
        for c in range(n):
            p = next((i for i in range(r, n) if rows[i][c]), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            for i in range(n):
                if i != r and rows[i][c]:
                    rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        if r != n:
            raise LatticeError("gram is singular mod 2")
        w = [0] * n
        for i, c in enumerate(pivots):
            w[c] = rows[i][n]
        return tuple(w)

    def reflect(self, v: Sequence[int], n: Sequence[int]) -> tuple[int, ...]:
        """Reflection in a (-1)-class: v + 2(v.n) n."""
        if self.square(n) != -1:
            raise LatticeError("reflection axis must have square -1")
        c = 2 * self.pairing(v, n)
        return tuple(a + c * b for a, b in zip(v, n))

    def reflection_matrix(self, n: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """Matrix (acting on column vectors) of the reflection in a root.

        Accepts axes of square -1 or -2, the two cases where the reflection
        v - 2(v.n)/(n.n) n is integral.
        """
        nn = self.square(n)
        if nn not in (-1, -2):
            raise LatticeError("reflection axis must have square -1 or -2")
        k = -2 // nn  # 2 for square -1, 1 for square -2
        gn = self.apply_gram(n)
        return tuple(
            tuple(int(i == j) + k * n[i] * gn[j] for j in range(self.rank)) for i in range(self.rank)
        )

    def is_isometry(self, m: Sequence[Sequence[int]]) -> bool:
        n = self.rank
        if len(m) != n or any(len(row) != n for row in m):
            return False
        cols = [tuple(m[i][j] for i in range(n)) for j in range(n)]
        return all(self.pairing(cols[i], cols[j]) == self.gram[i][j] for i in range(n) for j in range(n))

    def enumerate_with_square(
        self,
        s: int,
        anchor: Sequence,
        pairing_bound,
        characteristic_only: bool = False,
    ) -> list[tuple[int, ...]]:
        """All integer L with L.L = s and |L.anchor| <= pairing_bound.

        Output is sorted lexicographically.
        """
        bound = Fraction(pairing_bound)
        if bound < 0:
            return []
        return self._enumerate(s, anchor, bound * bound, characteristic_only)

    def _enumerate(self, s: int, anchor: Sequence, bound_sq: Fraction, characteristic_only: bool):
        # P(x) = 2(x.a)^2/a.a - x.x is positive definite on a hyperbolic
        # lattice and P(L) = 2(L.a)^2/a.a - s, so the search is an ellipsoid.
        a = tuple(Fraction(x) for x in anchor)
        aa = self.square(a)
        if aa <= 0:
            raise LatticeError("anchor must have positive square")
        radius = 2 * bound_sq / aa - s
        if radius < 0:
            return []
        out = [x for x in self._short_vectors(a, aa, radius, characteristic_only)
               if self.square(x) == s and self.pairing(x, a) ** 2 <= bound_sq]
        out.sort()
        return out

    def _short_vectors(self, a, aa, radius: Fraction, characteristic_only: bool) -> Iterator[tuple[int, ...]]:
        n = self.rank
        ga = self.apply_gram(a)
        form = [[2 * ga[i] * ga[j] / aa - self.gram[i][j] for j in range(n)] for i in range(n)]
        q = _fincke_pohst_coefficients(form)
        # integer search: q_ij = Q_ij / D, budgets scaled by D^3 * radius.denominator
        D = lcm(*(q[i][j].denominator for i in range(n) for j in range(i, n)))
        Q = [[int(q[i][j] * D) if j >= i else 0 for j in range(n)] for i in range(n)]
        rd = radius.denominator
        scale_ = [Q[i][i] * rd for i in range(n)]
        parity = self.characteristic_parity() if characteristic_only else None
        x = [0] * n

        def search(i: int, budget: int) -> Iterator[tuple[int, ...]]:
            row = Q[i]
            c = sum(row[j] * x[j] for j in range(i + 1, n) if x[j])
            u = isqrt(budget // scale_[i]) + 1
            lo, hi = -((c + u) // D), (u - c) // D
            step = 1
            if parity is not None:
                if (lo - parity[i]) % 2:
                    lo += 1
                step = 2
            for xi in range(lo, hi + 1, step):
                rest = budget - scale_[i] * (D * xi + c) ** 2
                if rest < 0:
                    continue
                x[i] = xi
                if i == 0:
                    yield tuple(x)
                else:
                    yield from search(i - 1, rest)
            x[i] = 0

        yield from search(n - 1, radius.numerator * D ** 3)

    def hodge_index_violations(self, v: Sequence[int], radius: int) -> list[tuple[int, ...]]:
        """Vectors w with v.w = 0 and w.w > 0, |w_i| <= radius.

        Candidates come from an exact congruence diagonalization of the form
        restricted to the integral complement of v, so the answer for a
        genuine hyperbolic lattice is empty whatever the radius.
        """
        if self.square(v) <= 0:
            raise LatticeError("v must have positive square")
        basis = orthogonal_complement_basis(self.apply_gram(v))
        k = len(basis)
        restricted = [[self.pairing(basis[i], basis[j]) for j in range(k)] for i in range(k)]
        d, t = diagonalize(restricted)
        found = set()
        for col, dk in enumerate(d):
            if dk <= 0:
                continue
            coeffs = [t[i][col] for i in range(k)]
            w = [sum(coeffs[i] * basis[i][j] for i in range(k)) for j in range(self.rank)]
            w = _primitive(w)
            if max(abs(c) for c in w) <= radius:
                found.add(w)
        return sorted(found)


def _primitive(w: Sequence[Fraction]) -> tuple[int, ...]:
    from math import gcd, lcm

    den = 1
    for c in w:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in w]
    g = 0
    for c in ints:
        g = gcd(g, c)
    g = g or 1
    return tuple(c // g for c in ints)


def orthogonal_complement_basis(row: Sequence[int]) -> list[tuple[int, ...]]:
    """Z-basis of {w in Z^n : row . w = 0} via unimodular column reduction."""
    n = len(row)
    r = list(row)
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # columns are basis vectors

    def colop(dst: int, src: int, c: int) -> None:
        r[dst] += c * r[src]
        for i in range(n):
            u[i][dst] += c * u[i][src]

    def colswap(a: int, b: int) -> None:
        r[a], r[b] = r[b], r[a]
        for i in range(n):
            u[i][a], u[i][b] = u[i][b], u[i][a]

    while sum(1 for x in r if x) > 1 or (any(r) and r[0] == 0):
        nz = [i for i in range(n) if r[i]]
        p = min(nz, key=lambda i: abs(r[i]))
        colswap(0, p)
        for j in range(1, n):
            if r[j]:
                colop(j, 0, -(r[j] // r[0]))
    return [tuple(u[i][j] for i in range(n)) for j in range(1, n)] if any(r) else \
        [tuple(u[i][j] for i in range(n)) for j in range(n)]


def _fincke_pohst_coefficients(form: list[list[Fraction]]) -> list[list[Fraction]]:
    """Cohen's quadratic-form decomposition Q(x) = sum q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = len(form)
    q = [row[:] for row in form]
    for i in range(n):
        if q[i][i] <= 0:
            raise LatticeError("search form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for ll in range(k, n):
                q[k][ll] -= q[k][i] * q[i][ll]
    return q


def pair_up(v: Sequence) -> tuple:
    """Canonical representative of {v, -v}: first nonzero coordinate positive."""
    for c in v:
        if c:
            return tuple(v) if c > 0 else tuple(-x for x in v)
    return tuple(v)


def neg(v: Sequence) -> tuple:
    return tuple(-x for x in v)


def add(*vs: Sequence) -> tuple:
    return tuple(sum(c) for c in zip(*vs))


def sub(v: Sequence, w: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(v, w))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * x for x in v)


def mat_vec(m: Sequence[Sequence[int]], v: Sequence) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple:
    n = len(b[0])
    return tuple(tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in range(n)) for row in a)
