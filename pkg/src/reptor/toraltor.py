"""Tor over the representation ring of a torus, in closed form.

For closed subgroups ``S1, S2`` of a rank-``r`` torus with character lattices
``K1, K2``::

    Tor_i^{Z[Z^r]}(Z[Z^r/K1], Z[Z^r/K2]) = Lambda^i(Z^rho) (x) Z[Z^r/(K1+K2)]

with ``rho = rank(K1 & K2)``. The Koszul complex on a basis of ``K2`` resolves
``Z[Z^r/K2]`` because translation by ``K2`` is free; after tensoring, the
complex splits over ``K2``-orbits in ``Z^r/K1``, each with stabiliser
``K1 & K2``, which contributes the homology of a free abelian group of rank
``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .charlat import TorusSubgroup
from .intlin import FinAbPresentation, lattice_intersect, lattice_sum, quotient_invariants

__all__ = [
    "TorGroup",
    "TorProfile",
    "KTheoryReport",
    "HypothesisFailed",
    "toral_tor",
    "toral_ktheory",
]


class HypothesisFailed(ValueError):
    """A hypothesis of the K-theory computation does not hold for the input."""

    def __init__(self, hypothesis: str, detail: str = ""):
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class TorGroup:
    """``Z[Q]^multiplicity`` as an abelian group, for a finitely generated group ``Q``."""

    multiplicity: int
    coefficient_group: FinAbPresentation

    @property
    def is_zero(self) -> bool:
        return self.multiplicity == 0

    @property
    def z_rank(self) -> int | None:
        """Rank over Z, or None when it is countably infinite."""
        order = self.coefficient_group.order
        return None if order is None else order * self.multiplicity

    def rational_dim(self) -> int | None:
        return self.z_rank

    def describe(self) -> dict:
        if self.is_zero:
            return {"zero": True, "z_rank": 0, "torsion": []}
        if self.z_rank is None:
            return {
                "zero": False,
                "z_rank": None,
                "group_ring_of": str(self.coefficient_group),
                "multiplicity": self.multiplicity,
            }
        # Group rings are torsion-free.
        return {"zero": False, "z_rank": self.z_rank, "torsion": []}

    def __str__(self):
        if self.is_zero:
            return "0"
        if self.z_rank is not None:
            return "Z" if self.z_rank == 1 else f"Z^{self.z_rank}"
        base = f"Z[{self.coefficient_group}]"
        return base if self.multiplicity == 1 else f"{base}^{self.multiplicity}"


@dataclass(frozen=True)
class TorProfile:
    rho: int
    coefficient_group: FinAbPresentation
    multiplicities: tuple[int, ...] = field(default=())

    def degree(self, i: int) -> TorGroup:
        return TorGroup(comb(self.rho, i) if 0 <= i <= self.rho else 0, self.coefficient_group)

    def nonzero_degrees(self) -> list[int]:
        return list(range(self.rho + 1))


def _check(r: int, *subgroups: TorusSubgroup):
    for s in subgroups:
        if s.ambient_rank != r:
            raise ValueError(f"subgroup of rank-{s.ambient_rank} torus, expected {r}")


def toral_tor(r: int, s1: TorusSubgroup, s2: TorusSubgroup) -> TorProfile:
    _check(r, s1, s2)
    rho = lattice_intersect(s1.k, s2.k).rank
    q = quotient_invariants(r, lattice_sum(s1.k, s2.k))
    return TorProfile(rho, q, tuple(comb(rho, i) for i in range(rho + 1)))


@dataclass(frozen=True)
class KTheoryReport:
    k0: dict
    k1: dict
    strict: bool
    rank_condition: bool
    maximal_rank: bool
    exact: bool = True
    notes: tuple[str, ...] = ()


def toral_ktheory(r: int, s1: TorusSubgroup, s2: TorusSubgroup) -> KTheoryReport:
    """K^0 and K^1 of the biquotient ``S1 \\ T / S2`` from Tor_0 and Tor_1."""
    _check(r, s1, s2)
    if not (s1.is_subtorus and s2.is_subtorus):
        raise HypothesisFailed("connected subgroups", "both subgroups must be subtori")
    total = lattice_sum(s1.k, s2.k)
    strict = quotient_invariants(r, total).is_trivial
    if not strict:
        raise HypothesisFailed("strict biquotient condition", f"S1 & S2 has character group {quotient_invariants(r, total)}")
    rank_ok = s1.rank + s2.rank >= r - 1
    if not rank_ok:
        raise HypothesisFailed("rank condition", f"rank S1 + rank S2 = {s1.rank + s2.rank} < {r - 1}")
    prof = toral_tor(r, s1, s2)
    maximal = s1.rank + s2.rank == r
    k0, k1 = prof.degree(0), prof.degree(1)
    if maximal and not k1.is_zero:
        raise AssertionError("K^1 must vanish in the maximal rank case")
    return KTheoryReport(k0.describe(), k1.describe(), strict, rank_ok, maximal)
