"""Closed subgroups of a torus as character sublattices, and Laurent polynomials.

A closed subgroup ``S`` of the rank-``r`` torus ``T`` is recorded through the
lattice ``k`` of characters of ``T`` that are trivial on ``S``. The
correspondence is inclusion reversing, intersections of subgroups become sums
of lattices, and ``rank S = r - rank k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .intlin import (
    IntMatrix,
    Sublattice,
    FinAbPresentation,
    is_direct_summand,
    lattice_sum,
    left_kernel,
    quotient_invariants,
    smith_normal_form,
)

__all__ = [
    "TorusSubgroup",
    "LaurentPoly",
    "subgroup_from_cocharacters",
    "intersect_subgroups",
    "restrict_character",
    "NotASubtorus",
]


class NotASubtorus(ValueError):
    """Raised when an operation needs a connected subgroup but got a disconnected one."""


@dataclass(frozen=True)
class TorusSubgroup:
    ambient_rank: int
    k: Sublattice

    def __post_init__(self):
        if self.k.ambient_rank != self.ambient_rank:
            raise ValueError("lattice and torus ranks disagree")

    @classmethod
    def from_lattice(cls, r: int, rows: Iterable[Sequence[int]]) -> TorusSubgroup:
        return cls(r, Sublattice.span(r, rows))

    @classmethod
    def trivial(cls, r: int) -> TorusSubgroup:
        return cls(r, Sublattice.full(r))

    @classmethod
    def maximal(cls, r: int) -> TorusSubgroup:
        return cls(r, Sublattice.zero(r))

    @property
    def rank(self) -> int:
        return self.ambient_rank - self.k.rank

    @property
    def is_subtorus(self) -> bool:
        return is_direct_summand(self.k)

    def component_group(self) -> FinAbPresentation:
        """Torsion part of Z^r / k, i.e. the group of components of S."""
        q = quotient_invariants(self.ambient_rank, self.k)
        return FinAbPresentation(0, q.torsion)

    @cached_property
    def splitting(self) -> IntMatrix:
        """``r x rank(S)`` matrix ``P``; a character ``e`` restricts to ``e @ P``.

        Columns are the trailing columns of ``V`` in ``U k V = D``, which is a
        deterministic choice of coordinates on ``Z^r / k``.
        """
        r = self.ambient_rank
        if not self.k.basis:
            return IntMatrix.identity(r)
        _, _, v = smith_normal_form(self.k.matrix())
        c = self.k.rank
        return IntMatrix(r, r - c, tuple(row[c:] for row in v.entries))


def subgroup_from_cocharacters(r: int, cochars: Sequence[Sequence[int]]) -> TorusSubgroup:
    """Image subtorus of the map ``(S^1)^m -> T`` with the given cocharacter rows."""
    rows = [tuple(map(int, c)) for c in cochars]
    if any(len(c) != r for c in rows):
        raise ValueError(f"cocharacters must have {r} entries")
    if not rows:
        return TorusSubgroup.trivial(r)
    pairing = IntMatrix(len(rows), r, tuple(rows)).transpose()
    return TorusSubgroup(r, Sublattice.span(r, left_kernel(pairing)))


def intersect_subgroups(s1: TorusSubgroup, s2: TorusSubgroup) -> TorusSubgroup:
    if s1.ambient_rank != s2.ambient_rank:
        raise ValueError(f"ambient rank mismatch: {s1.ambient_rank} vs {s2.ambient_rank}")
    return TorusSubgroup(s1.ambient_rank, lattice_sum(s1.k, s2.k))


def _coerce(c, modulus):
    if modulus is None:
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    return Fraction(c).numerator * pow(Fraction(c).denominator, -1, modulus) % modulus


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial: exponent tuple -> nonzero coefficient.

    Coefficients are exact rationals, or residues mod ``modulus`` when it is set.
    Terms are kept sorted by exponent so equal polynomials compare equal.
    """

    ambient_rank: int
    terms: tuple[tuple[tuple[int, ...], object], ...] = ()
    modulus: int | None = field(default=None, compare=True)

    @classmethod
    def from_dict(cls, r: int, terms: Mapping[Sequence[int], object], modulus: int | None = None) -> LaurentPoly:
        acc: dict[tuple[int, ...], object] = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != r:
                raise ValueError(f"exponent {e} has wrong length for rank {r}")
            acc[e] = _coerce(acc.get(e, 0) + _coerce(c, modulus), modulus)
        return cls(r, tuple(sorted((e, c) for e, c in acc.items() if c)), modulus)

    @classmethod
    def constant(cls, r: int, c, modulus: int | None = None) -> LaurentPoly:
        return cls.from_dict(r, {(0,) * r: c}, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, modulus: int | None = None) -> LaurentPoly:
        return cls.from_dict(len(exps), {tuple(exps): c}, modulus)

    @classmethod
    def variable(cls, r: int, i: int, power: int = 1) -> LaurentPoly:
        e = [0] * r
        e[i] = power
        return cls.monomial(e)

    def as_dict(self) -> dict[tuple[int, ...], object]:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: LaurentPoly):
        if self.ambient_rank != other.ambient_rank or self.modulus != other.modulus:
            raise ValueError("incompatible Laurent rings")

    def _lift(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(self.ambient_rank, other, self.modulus)

    def __add__(self, other):
        other = self._lift(other)
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(self.ambient_rank, acc, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly.from_dict(self.ambient_rank, {e: -c for e, c in self.terms}, self.modulus)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        acc: dict[tuple[int, ...], object] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly.from_dict(self.ambient_rank, acc, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = LaurentPoly.constant(self.ambient_rank, 1, self.modulus)
        for _ in range(n):
            out = out * self
        return out

    def map_exponents(self, fn, new_rank: int) -> LaurentPoly:
        """Push every exponent through ``fn`` (a group homomorphism) and collect terms."""
        acc: dict[tuple[int, ...], object] = {}
        for e, c in self.terms:
            f = tuple(fn(e))
            acc[f] = acc.get(f, 0) + c
        return LaurentPoly.from_dict(new_rank, acc, self.modulus)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms:
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(e) if a
            )
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")


def restrict_character(s: TorusSubgroup, chi: LaurentPoly) -> LaurentPoly:
    """Image of ``chi`` in R(S), in the coordinates fixed by :attr:`TorusSubgroup.splitting`."""
    if chi.ambient_rank != s.ambient_rank:
        raise ValueError(f"character has rank {chi.ambient_rank}, torus has {s.ambient_rank}")
    if not s.is_subtorus:
        raise NotASubtorus(f"subgroup with components {s.component_group()} is not a torus")
    p = s.splitting
    return chi.map_exponents(p.row_vector_times, s.rank)
