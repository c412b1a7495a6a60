"""Biquotient conditions, intersection ranks and the enlarging-tori construction.

For subtori ``S1, S2`` of the maximal torus, only Weyl conjugates of ``S2``
matter. Intersections become lattice sums ``k1 + w.k2``; an intersection is
trivial when that sum is all of ``Z^r`` and central when it contains the root
lattice.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass, field

from .charlat import TorusSubgroup
from .intlin import (
    Sublattice,
    is_direct_summand,
    lattice_sum,
    quotient_invariants,
    saturation,
)
from .weyl import RootDatum, WeylElement, act_on_subgroup, weyl_elements

__all__ = [
    "Verdict",
    "PairClassification",
    "intersection_rank",
    "classify_pair",
    "vanishing_bound",
    "enlarge_torus",
    "EnlargeResult",
    "EnlargementFailed",
]

log = logging.getLogger(__name__)


class Verdict(str, enum.Enum):
    STRICT = "Strict"
    LAX = "Lax"
    NEITHER = "Neither"


@dataclass(frozen=True)
class Witness:
    weyl_matrix: tuple[tuple[int, ...], ...]
    conjugate_k: tuple[tuple[int, ...], ...]
    sum_k: tuple[tuple[int, ...], ...]
    intersection_rank: int
    component_invariants: tuple[int, ...]


@dataclass(frozen=True)
class PairClassification:
    verdict: Verdict
    witnesses: tuple[Witness, ...] = ()

    @property
    def satisfies_lax(self) -> bool:
        return self.verdict in (Verdict.STRICT, Verdict.LAX)


def _check(datum: RootDatum, *subgroups: TorusSubgroup):
    for s in subgroups:
        if s.ambient_rank != datum.rank:
            raise ValueError(f"subgroup of rank-{s.ambient_rank} torus in group of rank {datum.rank}")


def _conjugate_sums(datum: RootDatum, s1: TorusSubgroup, s2: TorusSubgroup):
    seen = set()
    for w in weyl_elements(datum):
        wk2 = act_on_subgroup(w, s2).k
        if wk2 in seen:
            continue
        seen.add(wk2)
        yield w, wk2, lattice_sum(s1.k, wk2)


def intersection_rank(datum: RootDatum, s1: TorusSubgroup, s2: TorusSubgroup) -> int:
    """Maximal rank of ``S1 & w(S2)`` over the Weyl group."""
    _check(datum, s1, s2)
    return max(datum.rank - total.rank for _, _, total in _conjugate_sums(datum, s1, s2))


def _witness(datum: RootDatum, w: WeylElement, wk2: Sublattice, total: Sublattice) -> Witness:
    q = quotient_invariants(datum.rank, total)
    return Witness(w.matrix.entries, wk2.basis, total.basis, q.free_rank, q.torsion)


def classify_pair(datum: RootDatum, s1: TorusSubgroup, s2: TorusSubgroup) -> PairClassification:
    """Strict if every ``S1 & w(S2)`` is trivial, Lax if every one is central.

    Witnesses list the conjugates that break the strongest condition that
    fails: non-central intersections for Neither, nontrivial ones for Lax.
    """
    _check(datum, s1, s2)
    full = Sublattice.full(datum.rank)
    noncentral, nontrivial = [], []
    for w, wk2, total in _conjugate_sums(datum, s1, s2):
        if total != full:
            nontrivial.append(_witness(datum, w, wk2, total))
            if not total.contains(datum.root_lattice):
                noncentral.append(nontrivial[-1])
    if noncentral:
        return PairClassification(Verdict.NEITHER, tuple(noncentral))
    if nontrivial:
        return PairClassification(Verdict.LAX, tuple(nontrivial))
    return PairClassification(Verdict.STRICT)


def vanishing_bound(datum: RootDatum, s1: TorusSubgroup, s2: TorusSubgroup) -> int:
    """``rank G - rank S1 - rank S2 + interrank``; Tor vanishes strictly above it."""
    return datum.rank - s1.rank - s2.rank + intersection_rank(datum, s1, s2)


class EnlargementFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class EnlargeResult:
    subgroup: TorusSubgroup
    interrank: int
    attempts: int
    window: int
    checks: dict = field(default_factory=dict)


def _sample_rng(seed: int, window: int, attempt: int) -> random.Random:
    # One generator per (seed, window, attempt) so draws do not depend on evaluation order.
    return random.Random(f"{seed}:{window}:{attempt}")


def enlarge_torus(
    datum: RootDatum,
    s1: TorusSubgroup,
    s2: TorusSubgroup,
    seed: int = 0,
    retries: int = 64,
    doublings: int = 10,
) -> EnlargeResult:
    """Find a subtorus ``S1+`` containing ``S1`` of maximal rank with unchanged interrank.

    ``k(S1+)`` is a saturated sublattice of ``k(S1)`` of rank ``c' - c2``
    where ``c' = min_w rank(k1 + w.k2)``; random integer combinations of the
    basis of ``k1`` are tried until every Weyl conjugate meets it generically.
    """
    _check(datum, s1, s2)
    if not (s1.is_subtorus and s2.is_subtorus):
        raise ValueError("enlargement is defined for subtori only")
    r = datum.rank
    conj = [wk2 for _, wk2, _ in _conjugate_sums(datum, s1, s2)]
    c2 = s2.k.rank
    c_min = min(lattice_sum(s1.k, k).rank for k in conj)
    target = c_min - c2
    base = intersection_rank(datum, s1, s2)

    def good(k: Sublattice) -> bool:
        return k.rank == target and all(lattice_sum(k, wk2).rank == c_min for wk2 in conj)

    candidate = None
    attempts, window = 0, 2
    if target == s1.k.rank:
        candidate = s1.k
    else:
        b1 = s1.k.matrix()
        for _ in range(doublings + 1):
            for attempt in range(retries):
                attempts += 1
                rng = _sample_rng(seed, window, attempt)
                coeffs = [[rng.randint(-window, window) for _ in range(b1.rows)] for _ in range(target)]
                rows = [b1.row_vector_times(c) for c in coeffs]
                k = saturation(Sublattice.span(r, rows))
                if good(k):
                    candidate = k
                    break
            if candidate is not None:
                break
            window *= 2
        if candidate is None:
            raise EnlargementFailed(f"no enlargement found after {attempts} samples")

    out = TorusSubgroup(r, candidate)
    new_rank = intersection_rank(datum, out, s2)
    checks = {
        "contains_original": s1.k.contains(candidate),
        "direct_summand": is_direct_summand(candidate),
        "rank_formula": r == out.rank + s2.rank - new_rank,
        "interrank_preserved": new_rank == base,
    }
    if not all(checks.values()):
        raise EnlargementFailed(f"post-conditions failed: {checks}")
    log.debug("enlarged torus after %d samples (window %d)", attempts, window)
    return EnlargeResult(out, new_rank, attempts, window, checks)
