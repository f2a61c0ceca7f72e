"""Exact linear algebra over the rationals.

Everything here works on plain lists of :class:`fractions.Fraction`.
Matrices are lists of rows.  Subspaces are stored by their reduced row
echelon basis, which makes them canonical: two subspaces are equal iff
their bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, InternalError

Vector = list
Matrix = list


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise DomainError(f"floating point value {x!r} is not allowed, use an exact rational")
    return Fraction(x)


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    if len(a[0]) != inner:
        raise DomainError("matrix shapes do not match for multiplication")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * cols
        for t, x in enumerate(row):
            if x:
                brow = b[t]
                for j in range(cols):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def matadd(a: Matrix, b: Matrix, scale=1) -> Matrix:
    scale = frac(scale)
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with leftmost pivots.

    Returns the non-zero rows and the list of pivot columns.
    """
    m = [[frac(x) for x in row] for row in rows]
    for row in m:
        if len(row) != ncols:
            raise DomainError("row length does not match the column count")
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        prow = m[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            m[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = m[i]
                factor = row[c]
                if factor:
                    for j in nz:
                        row[j] -= factor * prow[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Iterable[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(a: Matrix, ncols: int) -> list[Vector]:
    """Basis of {v : a v = 0}, one vector per free column."""
    r, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence, ncols: int) -> Vector | None:
    """A particular solution of a x = b with all free variables zero, or None."""
    aug = [list(row) + [frac(y)] for row, y in zip(a, b)]
    if len(aug) != len(b):
        raise DomainError("right-hand side length does not match the matrix")
    r, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[ncols]
    return x


class Subspace:
    """A subspace of Q^dim kept as its reduced row echelon basis."""

    __slots__ = ("dim", "basis", "pivots", "_pivot_index")

    def __init__(self, vectors: Iterable[Sequence], dim: int):
        self.dim = dim
        rows, pivots = rref(vectors, dim)
        self.basis = tuple(tuple(row) for row in rows)
        self.pivots = tuple(pivots)
        self._pivot_index = {c: i for i, c in enumerate(pivots)}

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(identity(dim), dim)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={len(self)})"

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of v after clearing every pivot column."""
        out = [frac(x) for x in v]
        if len(out) != self.dim:
            raise DomainError("vector length does not match the ambient dimension")
        for row, pc in zip(self.basis, self.pivots):
            c = out[pc]
            if c:
                for j in range(pc, self.dim):
                    if row[j]:
                        out[j] -= c * row[j]
        return out

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of v in the echelon basis; raises if v is outside."""
        rest = self.reduce(v)
        if any(rest):
            raise DomainError("vector does not lie in the subspace")
        return [frac(v[pc]) for pc in self.pivots]

    def free_columns(self) -> list[int]:
        return [c for c in range(self.dim) if c not in self._pivot_index]

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(list(self.basis) + list(other.basis), self.dim)


def vector_is_zero(v: Sequence) -> bool:
    return not any(v)


@dataclass(frozen=True)
class RationalMatrix:
    """An exact matrix whose rows and columns carry labels.

    ``entries[i][j]`` is the coefficient of row label i in the image of
    column label j.
    """

    entries: tuple
    row_labels: tuple = ()
    col_labels: tuple = ()

    @classmethod
    def from_columns(cls, columns, row_labels=(), col_labels=()):
        nrows = len(row_labels) if row_labels else (len(columns[0]) if columns else 0)
        entries = tuple(tuple(frac(col[i]) for col in columns) for i in range(nrows))
        return cls(entries, tuple(row_labels), tuple(col_labels))

    @property
    def shape(self) -> tuple[int, int]:
        ncols = len(self.entries[0]) if self.entries else len(self.col_labels)
        return len(self.entries), ncols

    def rows(self) -> Matrix:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.entries]

    def apply(self, v: Sequence) -> Vector:
        return matvec(self.rows(), [frac(x) for x in v])

    def is_zero(self) -> bool:
        return is_zero_matrix(self.entries)


# univariate polynomials, stored as coefficient lists from the constant term up


def poly_trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_sub(a, b):
    return poly_add(a, [-x for x in b])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a, b):
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = poly_trim([frac(x) for x in a])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = poly_trim(a)
    return poly_trim(q), a


def poly_mod(a, b):
    return poly_divmod(a, b)[1]


def poly_monic(a):
    a = poly_trim(a)
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(a, b)
    return poly_monic(a)


def poly_deriv(a):
    return poly_trim([i * a[i] for i in range(1, len(a))])


def poly_inverse_mod(a, m):
    """Inverse of a modulo m via the extended Euclidean algorithm."""
    r0, r1 = poly_trim(m), poly_mod(a, m)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if len(r0) != 1:
        raise InternalError("polynomial is not invertible modulo the characteristic polynomial")
    return poly_mod([x / r0[0] for x in s0], m)


def poly_compose_mod(outer, inner, m):
    """outer(inner) reduced modulo m, by Horner's rule."""
    acc: list = []
    for c in reversed(poly_trim(outer)):
        acc = poly_mod(poly_add(poly_mul(acc, inner), [c]), m)
    return acc


def poly_of_matrix(coeffs, a: Matrix) -> Matrix:
    n = len(a)
    acc = zeros(n, n)
    for c in reversed(poly_trim(coeffs)):
        acc = matmul(acc, a)
        for i in range(n):
            acc[i][i] += c
    return acc


def charpoly(a: Matrix) -> list:
    """Characteristic polynomial det(xI - a), monic, by Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = zeros(n, n)
    for k in range(1, n + 1):
        mk = matmul(a, mk)
        c_prev = coeffs[n - k + 1]
        for i in range(n):
            mk[i][i] += c_prev
        am = matmul(a, mk)
        coeffs[n - k] = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
    return coeffs


def jordan_chevalley(a: Matrix) -> tuple[Matrix, Matrix, list]:
    """Split a = s + n with s semisimple, n nilpotent and sn = ns.

    Returns (s, n, p) where p is a polynomial with p(a) = s.  Newton's
    iteration on the square-free part of the characteristic polynomial
    is run in Q[x] modulo that polynomial.
    """
    size = len(a)
    if size == 0:
        return [], [], []
    chi = charpoly(a)
    sf = poly_monic(poly_divmod(chi, poly_gcd(chi, poly_deriv(chi)))[0])
    dsf = poly_deriv(sf)
    p = [Fraction(0), Fraction(1)]
    limit = max(1, (size - 1).bit_length()) + 1
    for _ in range(limit + 1):
        r = poly_compose_mod(sf, p, chi)
        if not r:
            break
        inv = poly_inverse_mod(poly_compose_mod(dsf, p, chi), chi)
        p = poly_mod(poly_sub(p, poly_mul(r, inv)), chi)
    else:
        raise InternalError("Jordan-Chevalley iteration did not converge")
    s = poly_of_matrix(p, a)
    n = matadd(a, s, -1)
    if not is_zero_matrix(poly_of_matrix(sf, s)):
        raise InternalError("semisimple part does not satisfy the square-free polynomial")
    if not is_zero_matrix(matadd(matmul(s, n), matmul(n, s), -1)):
        raise InternalError("semisimple and nilpotent parts do not commute")
    power = n
    for _ in range(size - 1):
        power = matmul(power, n)
    if not is_zero_matrix(power):
        raise InternalError("nilpotent part is not nilpotent")
    return s, n, p
