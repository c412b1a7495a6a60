"""Tor over R(G) for good classical G and subtori, by reduction to the diagonal.

``Tor^{R(G)}(R(S1), R(S2))`` equals the Koszul homology of
``R(S1) (x) R(S2)`` on the sequence ``res1(l_j) (x) 1 - 1 (x) res2(l_j)``, where
``l_j`` runs over the polynomial and Laurent generators of R(G): these
differences form a regular sequence generating the kernel of multiplication
``R(G) (x) R(G) -> R(G)``. Over Q the homology is computed with the Groebner
engine; answers are rational dimensions, so torsion in the integral groups is
invisible on this path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .biquot import PairClassification, Verdict, classify_pair, vanishing_bound
from .charlat import LaurentPoly, TorusSubgroup
from .grob import AffineContext, BudgetExceeded, HomologyDescriptor, koszul_homology
from .grob.core import DEFAULT_MAX_DEGREE, DEFAULT_MAX_SPAIRS
from .grob.field import QQ, Field
from .toraltor import HypothesisFailed, KTheoryReport, TorProfile, toral_tor
from .weyl import RootDatum, fundamental_restrictions

__all__ = [
    "TorResult",
    "VerificationReport",
    "TheoremInconsistency",
    "diagonal_generators",
    "tor_good_group",
    "verify_theorem",
    "ktheory_biquotient",
    "rational_profile",
]

log = logging.getLogger(__name__)

RATIONAL_NOTE = (
    "vanishing verdicts are rational: torsion in the integral Tor groups is not detected on this path"
)


class TheoremInconsistency(AssertionError):
    """A computed Tor group contradicts the vanishing theorem or a cross-check."""

    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class TorResult:
    degrees: tuple[HomologyDescriptor, ...]
    field: Field
    diagnostics: dict = field(default_factory=dict)

    def nonzero_degrees(self) -> list[int]:
        return [h.degree for h in self.degrees if not h.is_zero]

    def profile(self) -> list[tuple[bool, int | None]]:
        return [(h.is_zero, h.finite_dim) for h in self.degrees]


def _embed(f: LaurentPoly, offset: int, total: int) -> LaurentPoly:
    return f.map_exponents(lambda e: (0,) * offset + tuple(e) + (0,) * (total - offset - len(e)), total)


def diagonal_generators(datum: RootDatum, s1: TorusSubgroup, s2: TorusSubgroup) -> list[LaurentPoly]:
    """``res1(l_j) (x) 1 - 1 (x) res2(l_j)`` in the Laurent ring on ``rank S1 + rank S2`` variables."""
    r1 = fundamental_restrictions(datum, s1)
    r2 = fundamental_restrictions(datum, s2)
    n = s1.rank + s2.rank
    return [_embed(a, 0, n) - _embed(b, s1.rank, n) for a, b in zip(r1, r2)]


def tor_good_group(
    datum: RootDatum,
    s1: TorusSubgroup,
    s2: TorusSubgroup,
    field: Field = QQ,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
    ctx: AffineContext | None = None,
) -> TorResult:
    gens = diagonal_generators(datum, s1, s2)
    if ctx is None:
        ctx = AffineContext(s1.rank + s2.rank, field, max_spairs=max_spairs, max_degree=max_degree)
    degrees = koszul_homology(ctx, [ctx.poly(g) for g in gens])
    diag = {"spairs": ctx.spairs, "bases": len(ctx.bases), "variables": ctx.nvars}
    if field.modulus:
        diag["note"] = "mod-p Koszul homology is diagnostic only; it need not equal Tor (x) F_p"
    return TorResult(tuple(degrees), field, diag)


def rational_profile(profile: TorProfile, top: int) -> list[tuple[bool, int | None]]:
    """Toral Tor groups after tensoring with Q, as ``(is_zero, dimension)`` pairs."""
    out = []
    for i in range(top + 1):
        g = profile.degree(i)
        out.append((g.is_zero, 0 if g.is_zero else g.rational_dim()))
    return out


@dataclass(frozen=True)
class VerificationReport:
    classification: PairClassification
    bound: int
    observed_nonzero_degrees: tuple[int, ...]
    theorem_consistent: bool
    inconclusive: bool = False
    tor: TorResult | None = None
    toral: TorProfile | None = None
    toral_agreement: bool | None = None
    notes: tuple[str, ...] = ()


def verify_theorem(
    datum: RootDatum,
    s1: TorusSubgroup,
    s2: TorusSubgroup,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> VerificationReport:
    """Compare rational Tor against the vanishing bound; pure tori are also checked exactly."""
    cls = classify_pair(datum, s1, s2)
    bound = vanishing_bound(datum, s1, s2)
    try:
        tor = tor_good_group(datum, s1, s2, QQ, max_spairs, max_degree)
    except BudgetExceeded as exc:
        return VerificationReport(cls, bound, (), True, True, notes=(f"inconclusive: {exc}",))
    nonzero = tuple(tor.nonzero_degrees())
    consistent = not cls.satisfies_lax or all(i <= bound for i in nonzero)
    toral = agreement = None
    if datum.is_torus:
        toral = toral_tor(datum.rank, s1, s2)
        agreement = rational_profile(toral, datum.rank) == tor.profile()
    return VerificationReport(cls, bound, nonzero, consistent, False, tor, toral, agreement, (RATIONAL_NOTE,))


def ktheory_biquotient(
    datum: RootDatum,
    s1: TorusSubgroup,
    s2: TorusSubgroup,
    max_spairs: int = DEFAULT_MAX_SPAIRS,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> KTheoryReport:
    """K^0 and K^1 of ``S1 \\ G / S2`` via Tor_0 and Tor_1.

    Requires the strict biquotient condition and ``rank S1 + rank S2 >= rank G - 1``;
    lax inputs are refused.
    """
    if not (s1.is_subtorus and s2.is_subtorus):
        raise HypothesisFailed("connected subgroups", "both subgroups must be subtori")
    cls = classify_pair(datum, s1, s2)
    if cls.verdict is not Verdict.STRICT:
        raise HypothesisFailed("strict biquotient condition", f"pair classifies as {cls.verdict.value}")
    if s1.rank + s2.rank < datum.rank - 1:
        raise HypothesisFailed(
            "rank condition", f"rank S1 + rank S2 = {s1.rank + s2.rank} < rank G - 1 = {datum.rank - 1}"
        )
    maximal = s1.rank + s2.rank == datum.rank
    tor = tor_good_group(datum, s1, s2, QQ, max_spairs, max_degree)
    t0, t1 = tor.degrees[0], tor.degrees[1] if len(tor.degrees) > 1 else None

    def rational(h: HomologyDescriptor | None) -> dict:
        if h is None or h.is_zero:
            return {"zero": True, "q_dim": 0}
        return {"zero": False, "q_dim": h.finite_dim}

    k0, k1 = rational(t0), rational(t1)
    exact = False
    if datum.is_torus:
        prof = toral_tor(datum.rank, s1, s2)
        k0["exact"] = prof.degree(0).describe()
        k1["exact"] = prof.degree(1).describe()
        exact = True
    if maximal and not k1["zero"]:
        raise TheoremInconsistency(
            "K^1 is nonzero in the maximal rank case",
            {"s1": s1.k.basis, "s2": s2.k.basis, "tor1": k1},
        )
    return KTheoryReport(k0, k1, True, True, maximal, exact, () if exact else (RATIONAL_NOTE,))
