"""Root data for products of SU(n), Sp(n) and tori.

Coordinates on the maximal torus:

* ``SU(n)`` uses ``x1..x_{n-1}``; the last diagonal entry is
  ``x_n = (x1 ... x_{n-1})^-1`` and is eliminated, so R(T) stays an honest
  Laurent ring.
* ``Sp(n)`` uses ``x1..x_n`` with weights ``x_i^{+-1}`` in the defining
  representation.
* a torus factor of rank ``t`` contributes ``t`` invertible coordinates.

Weyl elements are unimodular matrices acting on character exponent vectors
from the right (``e -> e @ W``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .charlat import LaurentPoly, TorusSubgroup, restrict_character
from .intlin import IntMatrix, Sublattice

__all__ = [
    "Factor",
    "GroupSpec",
    "RootDatum",
    "WeylElement",
    "build_root_datum",
    "weyl_elements",
    "act_on_subgroup",
    "fundamental_restrictions",
    "WeylGroupTooLarge",
]

DEFAULT_WEYL_CAP = 10**6


class WeylGroupTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    kind: str  # "SU", "Sp" or "T"
    n: int

    def __post_init__(self):
        if self.kind == "SU" and self.n < 2:
            raise ValueError("SU(n) needs n >= 2")
        if self.kind == "Sp" and self.n < 1:
            raise ValueError("Sp(n) needs n >= 1")
        if self.kind == "T" and self.n < 0:
            raise ValueError("torus rank must be non-negative")
        if self.kind not in ("SU", "Sp", "T"):
            raise ValueError(f"unsupported factor type {self.kind!r}")

    @property
    def rank(self) -> int:
        return self.n - 1 if self.kind == "SU" else self.n

    def __str__(self):
        return f"T^{self.n}" if self.kind == "T" else f"{self.kind}({self.n})"


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[Factor, ...]

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """Parse strings like ``"SU(3) x Sp(2) x T^1"``."""
        out = []
        for part in text.replace("×", "x").split("x"):
            part = part.strip()
            if not part:
                continue
            if part.startswith("T"):
                n = int(part[1:].lstrip("^") or 1)
                out.append(Factor("T", n))
            else:
                kind, _, rest = part.partition("(")
                out.append(Factor(kind.strip(), int(rest.rstrip(")"))))
        return cls(tuple(out))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    def __str__(self):
        return " x ".join(map(str, self.factors)) or "1"


def _elementary_symmetric(values: Sequence[LaurentPoly], k: int, r: int) -> LaurentPoly:
    out = LaurentPoly.constant(r, 0)
    for combo in itertools.combinations(values, k):
        term = LaurentPoly.constant(r, 1)
        for v in combo:
            term = term * v
        out = out + term
    return out


@dataclass(frozen=True)
class WeylElement:
    matrix: IntMatrix

    def act(self, e: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.row_vector_times(e)

    def act_poly(self, f: LaurentPoly) -> LaurentPoly:
        return f.map_exponents(self.act, f.ambient_rank)

    def __mul__(self, other: WeylElement) -> WeylElement:
        # (self * other) acts as "first self, then other" on row vectors.
        return WeylElement(self.matrix @ other.matrix)


@dataclass(frozen=True)
class RootDatum:
    spec: GroupSpec
    rank: int
    fundamental_chars: tuple[LaurentPoly, ...]
    laurent_flags: tuple[bool, ...]
    root_lattice: Sublattice
    weyl_order: int
    weyl_cap: int = DEFAULT_WEYL_CAP

    @cached_property
    def blocks(self) -> tuple[tuple[Factor, int], ...]:
        out, off = [], 0
        for f in self.spec.factors:
            out.append((f, off))
            off += f.rank
        return tuple(out)

    @property
    def maximal_torus(self) -> TorusSubgroup:
        return TorusSubgroup.maximal(self.rank)

    @property
    def is_torus(self) -> bool:
        return all(f.kind == "T" for f in self.spec.factors)


def _su_coordinates(n: int, off: int, r: int) -> list[LaurentPoly]:
    xs = [LaurentPoly.variable(r, off + i) for i in range(n - 1)]
    last = [0] * r
    for i in range(n - 1):
        last[off + i] = -1
    return xs + [LaurentPoly.monomial(last)]


def build_root_datum(spec: GroupSpec | str, weyl_cap: int = DEFAULT_WEYL_CAP) -> RootDatum:
    if isinstance(spec, str):
        spec = GroupSpec.parse(spec)
    r = spec.rank
    chars: list[LaurentPoly] = []
    flags: list[bool] = []
    roots: list[tuple[int, ...]] = []
    order = 1
    off = 0
    for f in spec.factors:
        if f.kind == "SU":
            xs = _su_coordinates(f.n, off, r)
            for k in range(1, f.n):
                chars.append(_elementary_symmetric(xs, k, r))
                flags.append(False)
            for i in range(f.n - 1):
                # simple root x_i / x_{i+1}
                e = [0] * r
                e[off + i] += 1
                if i + 1 < f.n - 1:
                    e[off + i + 1] -= 1
                else:
                    for j in range(f.n - 1):
                        e[off + j] += 1
                roots.append(tuple(e))
            order *= math.factorial(f.n)
        elif f.kind == "Sp":
            xs = []
            for i in range(f.n):
                xs += [LaurentPoly.variable(r, off + i), LaurentPoly.variable(r, off + i, -1)]
            for k in range(1, f.n + 1):
                chars.append(_elementary_symmetric(xs, k, r))
                flags.append(False)
            for i in range(f.n - 1):
                e = [0] * r
                e[off + i], e[off + i + 1] = 1, -1
                roots.append(tuple(e))
            e = [0] * r
            e[off + f.n - 1] = 2
            roots.append(tuple(e))
            order *= 2**f.n * math.factorial(f.n)
        else:
            for i in range(f.n):
                chars.append(LaurentPoly.variable(r, off + i))
                flags.append(True)
        off += f.rank
    return RootDatum(spec, r, tuple(chars), tuple(flags), Sublattice.span(r, roots), order, weyl_cap)


def _su_matrix(perm: Sequence[int]) -> list[list[int]]:
    """Matrix of x_i -> x_perm[i] on SU(n) coordinates (x_n eliminated)."""
    n = len(perm)
    rows = []
    for i in range(n - 1):
        full = [0] * n
        full[perm[i]] = 1
        rows.append([full[j] - full[n - 1] for j in range(n - 1)])
    return rows


def _factor_elements(f: Factor) -> list[list[list[int]]]:
    if f.kind == "SU":
        return [_su_matrix(p) for p in itertools.permutations(range(f.n))]
    if f.kind == "Sp":
        out = []
        for p in itertools.permutations(range(f.n)):
            for signs in itertools.product((1, -1), repeat=f.n):
                m = [[0] * f.n for _ in range(f.n)]
                for i in range(f.n):
                    m[i][p[i]] = signs[i]
                out.append(m)
        return out
    return [[[int(i == j) for j in range(f.n)] for i in range(f.n)]]


def weyl_elements(datum: RootDatum) -> Iterator[WeylElement]:
    """All Weyl group elements, as block-diagonal matrices, identity first."""
    if datum.weyl_order > datum.weyl_cap:
        raise WeylGroupTooLarge(f"Weyl group of order {datum.weyl_order} exceeds cap {datum.weyl_cap}")
    r = datum.rank
    per_factor = [_factor_elements(f) for f, _ in datum.blocks]
    for choice in itertools.product(*per_factor):
        m = [[0] * r for _ in range(r)]
        for (f, off), block in zip(datum.blocks, choice):
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    m[off + i][off + j] = x
        yield WeylElement(IntMatrix(r, r, tuple(map(tuple, m))))


def act_on_subgroup(w: WeylElement, s: TorusSubgroup) -> TorusSubgroup:
    if w.matrix.rows != s.ambient_rank:
        raise ValueError(f"Weyl element of rank {w.matrix.rows} on torus of rank {s.ambient_rank}")
    return TorusSubgroup(s.ambient_rank, s.k.image(w.matrix))


def fundamental_restrictions(datum: RootDatum, s: TorusSubgroup) -> list[LaurentPoly]:
    if s.ambient_rank != datum.rank:
        raise ValueError(f"subgroup of rank-{s.ambient_rank} torus in group of rank {datum.rank}")
    return [restrict_character(s, chi) for chi in datum.fundamental_chars]
