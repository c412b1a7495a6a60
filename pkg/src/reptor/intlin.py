"""Exact integer linear algebra: Smith/Hermite normal forms and sublattices of Z^r.

Everything here works on Python ints, so there is no overflow at any size.
Matrices are immutable :class:`IntMatrix` values; a :class:`Sublattice` is
stored through its row-style Hermite normal form, which makes equality of
lattices plain tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "Sublattice",
    "FinAbPresentation",
    "smith_normal_form",
    "hermite_normal_form",
    "left_kernel",
    "lattice_sum",
    "lattice_intersect",
    "quotient_invariants",
    "is_direct_summand",
    "saturation",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cannot infer the column count of an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                         tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols_o = [tuple(other.entries[k][j] for k in range(other.rows)) for j in range(other.cols)]
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols_o) for r in self.entries),
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def row_vector_times(self, v: Sequence[int]) -> tuple[int, ...]:
        """Return ``v @ self`` for a row vector ``v``."""
        return tuple(sum(v[k] * self.entries[k][j] for k in range(self.rows)) for j in range(self.cols))


def _as_lists(a) -> tuple[list[list[int]], int, int]:
    if isinstance(a, IntMatrix):
        return a.tolist(), a.rows, a.cols
    rows = [list(map(int, r)) for r in a]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ a @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d1 | d2 | ...``. Pivots are chosen as the smallest nonzero
    entry of the remaining block, followed by gcd sweeps along the pivot
    row and column.
    """
    d, m, n = _as_lists(a)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, d[i][t] // p)
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, d[t][j] // p)
            rest = [(abs(d[i][t]), i, t) for i in range(t + 1, m) if d[i][t]]
            rest += [(abs(d[t][j]), t, j) for j in range(t + 1, n) if d[t][j]]
            if rest:
                _, i, j = min(rest)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix(m, m, tuple(map(tuple, u))),
        IntMatrix(m, n, tuple(map(tuple, d))),
        IntMatrix(n, n, tuple(map(tuple, v))),
    )


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Row-style HNF of the row span: positive pivots, entries above pivots in ``[0, pivot)``.

    Zero rows are dropped, so the result is a basis of the span.
    """
    a = [list(map(int, r)) for r in rows]
    for r in a:
        if len(r) != ncols:
            raise ValueError("row length does not match the ambient rank")
    top = 0
    for col in range(ncols):
        while True:
            live = [(abs(a[i][col]), i) for i in range(top, len(a)) if a[i][col]]
            if not live:
                break
            _, piv = min(live)
            a[top], a[piv] = a[piv], a[top]
            done = True
            for i in range(top + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[top][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if top < len(a) and a[top][col]:
            if a[top][col] < 0:
                a[top] = [-x for x in a[top]]
            p = a[top][col]
            for i in range(top):
                q = a[i][col] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            top += 1
    return tuple(tuple(r) for r in a[:top])


def left_kernel(a: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^rows : x @ a == 0}``; the result spans a saturated lattice."""
    u, d, _ = smith_normal_form(a)
    rank = sum(1 for i in range(min(d.rows, d.cols)) if d[i, i])
    return [u.entries[i] for i in range(rank, a.rows)]


@dataclass(frozen=True)
class FinAbPresentation:
    """The group Z^free_rank + sum_i Z/torsion[i] with torsion[0] | torsion[1] | ..."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} violate divisibility")
        if any(t < 2 for t in self.torsion):
            raise ValueError("invariant factors must be at least 2")

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = ["Z"] * (1 if self.free_rank else 0)
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^ambient_rank, stored by its Hermite normal form basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, ambient_rank: int, gens: Iterable[Sequence[int]] = ()) -> Sublattice:
        return cls(ambient_rank, hermite_normal_form(gens, ambient_rank))

    @classmethod
    def zero(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, ())

    @classmethod
    def full(cls, ambient_rank: int) -> Sublattice:
        return cls.span(ambient_rank, IntMatrix.identity(ambient_rank).entries)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return IntMatrix(len(self.basis), self.ambient_rank, self.basis)

    def contains(self, other: Sublattice) -> bool:
        """True if ``other`` is a subgroup of ``self``."""
        return lattice_sum(self, other) == self

    def contains_vector(self, v: Sequence[int]) -> bool:
        return self.contains(Sublattice.span(self.ambient_rank, [v]))

    def image(self, m: IntMatrix) -> Sublattice:
        """Image under the row-vector action ``x -> x @ m``."""
        return Sublattice.span(m.cols, (m.row_vector_times(b) for b in self.basis))

    def index(self) -> int | None:
        """Index in Z^r, or None when the quotient is infinite."""
        return quotient_invariants(self.ambient_rank, self).order


def _check_ranks(k1: Sublattice, k2: Sublattice):
    if k1.ambient_rank != k2.ambient_rank:
        raise ValueError(f"ambient rank mismatch: {k1.ambient_rank} vs {k2.ambient_rank}")


def lattice_sum(k1: Sublattice, k2: Sublattice) -> Sublattice:
    _check_ranks(k1, k2)
    return Sublattice.span(k1.ambient_rank, k1.basis + k2.basis)


def lattice_intersect(k1: Sublattice, k2: Sublattice) -> Sublattice:
    _check_ranks(k1, k2)
    r = k1.ambient_rank
    if not k1.basis or not k2.basis:
        return Sublattice.zero(r)
    stacked = IntMatrix(k1.rank + k2.rank, r, k1.basis + tuple(tuple(-x for x in b) for b in k2.basis))
    b1 = k1.matrix()
    gens = [b1.row_vector_times(x[: k1.rank]) for x in left_kernel(stacked)]
    return Sublattice.span(r, gens)


def quotient_invariants(r: int, k: Sublattice) -> FinAbPresentation:
    """Invariant factors of Z^r / k."""
    if k.ambient_rank != r:
        raise ValueError(f"ambient rank mismatch: {k.ambient_rank} vs {r}")
    if not k.basis:
        return FinAbPresentation(r)
    _, d, _ = smith_normal_form(k.matrix())
    diag = [d[i, i] for i in range(k.rank)]
    return FinAbPresentation(r - k.rank, tuple(x for x in diag if x > 1))


def is_direct_summand(k: Sublattice) -> bool:
    return not quotient_invariants(k.ambient_rank, k).torsion


def saturation(k: Sublattice) -> Sublattice:
    """Smallest direct summand of Z^r containing ``k`` (rational span intersected with Z^r)."""
    r = k.ambient_rank
    if not k.basis:
        return k
    normals = left_kernel(k.matrix().transpose())
    if not normals:
        return Sublattice.full(r)
    return Sublattice.span(r, left_kernel(IntMatrix(len(normals), r, tuple(normals)).transpose()))
