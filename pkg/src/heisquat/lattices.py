"""Integer and rational lattice algebra: HNF, kernels, duals, intersections.

Conventions: lattices are row spans.  The Hermite normal form used
throughout is row-style with pivot columns strictly increasing, positive
pivots, and entries above each pivot reduced into [0, pivot).  This makes
the HNF a canonical form: two row sets span the same Z-module iff their
HNFs are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

Row = Tuple[int, ...]


def hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Canonical row Hermite normal form of an integer matrix.

    Zero rows are dropped; the result has one row per pivot.  Idempotent
    and span-preserving.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    for r in work:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    out: List[List[int]] = []
    col = 0
    while col < ncols and work:
        # eliminate column `col` down to a single pivot row via gcd steps
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        while True:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            if len(live) == 1:
                break
            p = pivot[col]
            for r in live[1:]:
                q = r[col] // p
                for t in range(ncols):
                    r[t] -= q * pivot[t]
            live = [r for r in live if r[col] != 0]
        if pivot[col] < 0:
            for t in range(ncols):
                pivot[t] = -pivot[t]
        out.append(pivot)
        work = [r for r in work if r is not pivot and any(r)]
        col += 1
    # reduce entries above each pivot into [0, pivot); left-to-right so a
    # reduction never reintroduces an unreduced entry in an earlier column
    for idx in range(1, len(out)):
        row = out[idx]
        c = next(t for t in range(ncols) if row[t] != 0)
        p = row[c]
        for above in out[:idx]:
            q = above[c] // p
            if q:
                for t in range(ncols):
                    above[t] -= q * row[t]
    return out


def hnf_in_span(hrows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Membership of integer vector v in the row span of an HNF basis."""
    v = list(map(int, v))
    n = len(v)
    for row in hrows:
        c = next((t for t in range(n) if row[t] != 0), None)
        if c is None:
            continue
        if v[c] % row[c] != 0:
            return False
        q = v[c] // row[c]
        for t in range(n):
            v[t] -= q * row[t]
    return not any(v)


def kernel_basis(mat: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis (HNF) of {x in Z^m : x . mat = 0} for an integer m x n matrix."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    # row reduce [mat | I_m]; rows whose mat-part vanishes give the kernel
    aug = [[int(mat[r][c]) for c in range(n)] + [1 if t == r else 0 for t in range(m)]
           for r in range(m)]
    col = 0
    rank_rows: List[List[int]] = []
    work = aug
    while col < n and work:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        while True:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            if len(live) == 1:
                break
            p = pivot[col]
            for r in live[1:]:
                q = r[col] // p
                for t in range(n + m):
                    r[t] -= q * pivot[t]
            live = [r for r in live if r[col] != 0]
        rank_rows.append(pivot)
        work = [r for r in work if r is not pivot]
        col += 1
    kernel = [r[n:] for r in work if not any(r[:n])]
    return hnf(kernel)


def solve_integer(mat: Sequence[Sequence[int]], target: Sequence[int]):
    """One integer solution x of x . mat = target, or None.

    mat is m x n; the solution space is a coset of the kernel lattice.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    aug = [[int(mat[r][c]) for c in range(n)] + [1 if t == r else 0 for t in range(m)]
           for r in range(m)]
    h = _hnf_tracked(aug, n)
    v = list(map(int, target))
    x = [0] * m
    for row in h:
        c = next((t for t in range(n) if row[t] != 0), None)
        if c is None:
            continue
        if v[c] % row[c] != 0:
            return None
        q = v[c] // row[c]
        for t in range(n):
            v[t] -= q * row[t]
        for t in range(m):
            x[t] += q * row[n + t]
    if any(v):
        return None
    return x


def _hnf_tracked(aug: List[List[int]], n: int) -> List[List[int]]:
    """HNF of the first n columns, carrying the remaining columns along."""
    total = len(aug[0]) if aug else 0
    out: List[List[int]] = []
    work = [r for r in aug]
    col = 0
    while col < n and work:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        while True:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            if len(live) == 1:
                break
            p = pivot[col]
            for r in live[1:]:
                q = r[col] // p
                for t in range(total):
                    r[t] -= q * pivot[t]
            live = [r for r in live if r[col] != 0]
        if pivot[col] < 0:
            for t in range(total):
                pivot[t] = -pivot[t]
        out.append(pivot)
        work = [r for r in work if r is not pivot]
        col += 1
    return out


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix, exactly (Bareiss)."""
    n = len(mat)
    a = [[int(x) for x in row] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) // prev
            a[r][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def adjugate(mat: Sequence[Sequence[int]]) -> List[List[int]]:
    """Adjugate of a square integer matrix: mat . adj = det . I."""
    n = len(mat)
    adj = [[0] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            minor = [[mat[rr][cc] for cc in range(n) if cc != c]
                     for rr in range(n) if rr != r]
            adj[c][r] = (-1) ** (r + c) * det_int(minor)
    return adj


def mat_frac_inverse(mat: Sequence[Sequence]) -> List[List[Fraction]]:
    """Exact inverse of a square matrix with rational entries."""
    n = len(mat)
    a = [[Fraction(mat[r][c]) for c in range(n)] + [Fraction(int(r == c)) for c in range(n)]
         for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(A, B):
    rows = len(A)
    inner = len(B)
    cols = len(B[0])
    return [[sum(A[r][t] * B[t][c] for t in range(inner)) for c in range(cols)]
            for r in range(rows)]


def vec_mat(v, B):
    cols = len(B[0])
    return [sum(v[t] * B[t][c] for t in range(len(v))) for c in range(cols)]


@dataclass(frozen=True)
class IntLattice:
    """Full or partial rank sublattice of Z^n, stored by its canonical HNF rows."""

    rows: Tuple[Row, ...]

    @classmethod
    def from_rows(cls, rows) -> "IntLattice":
        return cls(tuple(tuple(r) for r in hnf(rows)))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        return hnf_in_span(self.rows, v)

    def __eq__(self, other):
        return isinstance(other, IntLattice) and self.rows == other.rows


@dataclass(frozen=True)
class RatLattice:
    """Rational lattice den^-1 * L for an integer lattice L, canonicalised.

    The denominator is reduced so gcd(den, content(rows)) = 1, and rows are
    in HNF; equality of canonical forms is lattice equality.
    """

    den: int
    rows: Tuple[Row, ...]

    @classmethod
    def from_int_rows(cls, rows, den: int = 1) -> "RatLattice":
        h = hnf(rows)
        if den < 0:
            raise ValueError("denominator must be positive")
        g = den
        for r in h:
            for x in r:
                g = gcd(g, x)
        if g > 1:
            den //= g
            h = [[x // g for x in r] for r in h]
        return cls(den, tuple(tuple(r) for r in h))

    @classmethod
    def from_frac_rows(cls, rows) -> "RatLattice":
        fr = [[Fraction(x) for x in r] for r in rows]
        den = 1
        for r in fr:
            for x in r:
                den = den * x.denominator // gcd(den, x.denominator)
        scaled = [[int(x * den) for x in r] for r in fr]
        return cls.from_int_rows(scaled, den)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def frac_rows(self) -> List[List[Fraction]]:
        return [[Fraction(x, self.den) for x in r] for r in self.rows]

    def contains_frac(self, v) -> bool:
        w = [Fraction(x) * self.den for x in v]
        if any(x.denominator != 1 for x in w):
            return False
        return hnf_in_span(self.rows, [int(x) for x in w])

    def dual(self) -> "RatLattice":
        """Dual lattice {y : <x, y> in Z for all x} for full-rank lattices."""
        n = len(self.rows[0])
        if self.rank != n:
            raise ValueError("dual requires full rank")
        inv = mat_frac_inverse([[Fraction(x, self.den) for x in r] for r in self.rows])
        # rows of the dual basis are columns of the inverse
        dual_rows = [[inv[r][c] for r in range(n)] for c in range(n)]
        return RatLattice.from_frac_rows(dual_rows)

    def sum(self, other: "RatLattice") -> "RatLattice":
        return RatLattice.from_frac_rows(self.frac_rows() + other.frac_rows())

    def intersect(self, other: "RatLattice") -> "RatLattice":
        """Intersection via (L1 cap L2)^* = L1^* + L2^*."""
        return self.dual().sum(other.dual()).dual()

    def scaled(self, f) -> "RatLattice":
        f = Fraction(f)
        return RatLattice.from_frac_rows(
            [[x * f for x in r] for r in self.frac_rows()])
