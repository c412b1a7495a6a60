"""Syzygy modules and Koszul homology over a Laurent ring.

Vectors are the internal dictionaries of :mod:`reptor.grob.core`
(``(position, exponent) -> coefficient``).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import AffineContext, GrobnerBasis

__all__ = [
    "ModulePresentation",
    "HomologyDescriptor",
    "syzygy_module",
    "koszul_homology",
    "koszul_differential",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModulePresentation:
    """Cokernel of the relation vectors inside ``A^free_rank``."""

    free_rank: int
    relations: tuple[dict, ...]

    def groebner(self, ctx: AffineContext) -> GrobnerBasis:
        return GrobnerBasis.compute(ctx, self.relations, self.free_rank)


@dataclass(frozen=True)
class HomologyDescriptor:
    degree: int
    is_zero: bool
    finite_dim: int | None
    presentation: ModulePresentation | None = None

    def summary(self) -> dict:
        return {
            "degree": self.degree,
            "zero": self.is_zero,
            "finite_dim": self.finite_dim,
        }


def _shift_positions(vec: Mapping, offset: int) -> dict:
    return {(pos + offset, e): c for (pos, e), c in vec.items()}


def syzygy_module(
    ctx: AffineContext, vectors: Sequence[Mapping], rank: int, modulo: Sequence[Mapping] = ()
) -> ModulePresentation:
    """Generators of ``{c : sum_j c_j vectors[j] in span(modulo)}`` in ``A^len(vectors)``.

    With ``modulo`` empty these are the plain syzygies. Computed from a
    position-over-term basis of the graph ``(v_j, e_j)`` together with
    ``(m, 0)`` in ``A^(rank+s)``: basis elements that lead in the second block
    are exactly the relations.
    """
    s = len(vectors)
    unit = (0,) * ctx.nvars
    graph = []
    for v in list(vectors) + list(modulo):
        if any(pos >= rank for pos, _ in v):
            raise ValueError("vector has a component outside the free module")
    for j, v in enumerate(vectors):
        g = dict(v)
        g[(rank + j, unit)] = ctx.field(1)
        graph.append(g)
    graph.extend(dict(m) for m in modulo)
    gb = GrobnerBasis.compute(ctx, graph, rank + s)
    syz = []
    for g in gb.elements:
        if ctx.lead(g)[0] >= rank:
            syz.append(_shift_positions(g, -rank))
    return ModulePresentation(s, tuple(syz))


def koszul_differential(ctx: AffineContext, elems: Sequence[Mapping], i: int) -> tuple[list, list]:
    """Basis of ``K_i`` (sorted subsets) and the images ``d(e_J)`` in ``K_{i-1}``."""
    m = len(elems)
    src = list(itertools.combinations(range(m), i))
    tgt = {J: n for n, J in enumerate(itertools.combinations(range(m), i - 1))} if i > 0 else {}
    images = []
    for J in src:
        v: dict = {}
        for k, j in enumerate(J):
            pos = tgt[J[:k] + J[k + 1:]]
            sign = 1 if k % 2 == 0 else -1
            for (_, e), c in elems[j].items():
                key = (pos, e)
                val = v.get(key, 0) + sign * c
                if ctx.field.modulus:
                    val %= ctx.field.modulus
                if val:
                    v[key] = val
                else:
                    v.pop(key, None)
        images.append(v)
    return src, images


def _count_finite(ctx: AffineContext, pres: ModulePresentation) -> tuple[int | None, GrobnerBasis]:
    gb = pres.groebner(ctx)
    return gb.quotient_dimension(), gb


def koszul_homology(
    ctx: AffineContext, elems: Sequence[Mapping], max_degree: int | None = None
) -> list[HomologyDescriptor]:
    """Homology ``H_0 .. H_max_degree`` of the Koszul complex on ``elems``.

    ``elems`` are polynomials (internal dicts in position 0). ``H_i`` is
    zero iff every cycle reduces to zero modulo the boundaries; otherwise it
    is presented by the cycle generators modulo the preimage of the
    boundaries, and its dimension is counted from that presentation.
    """
    m = len(elems)
    if max_degree is None:
        max_degree = m
    if max_degree > m:
        raise ValueError("homology degree beyond the length of the sequence")
    out = []
    for i in range(max_degree + 1):
        basis_i, d_i = koszul_differential(ctx, elems, i)
        rank_i = len(basis_i)
        boundaries = koszul_differential(ctx, elems, i + 1)[1] if i < m else []
        bgb = GrobnerBasis.compute(ctx, boundaries, rank_i)
        if i == 0:
            # every element is a cycle, so H_0 is the quotient by the boundaries
            if bgb.is_everything():
                out.append(HomologyDescriptor(0, True, 0, None))
            else:
                pres = ModulePresentation(1, tuple(bgb.elements))
                out.append(HomologyDescriptor(0, False, bgb.quotient_dimension(), pres))
            continue
        prev_rank = len(koszul_differential(ctx, elems, i - 1)[0])
        cycles = [dict(z) for z in syzygy_module(ctx, d_i, prev_rank).relations]
        live = [r for r in (bgb.reduce(z) for z in cycles) if r]
        if not live:
            out.append(HomologyDescriptor(i, True, 0, None))
            continue
        # H_i = A^s / {c : sum c_j z_j in B}
        pres = syzygy_module(ctx, live, rank_i, bgb.elements)
        dim, _ = _count_finite(ctx, pres)
        if dim == 0:
            raise RuntimeError(f"H_{i}: cycle survives reduction but the presentation is zero")
        out.append(HomologyDescriptor(i, False, dim, pres))
    return out
