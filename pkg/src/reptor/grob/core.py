"""Buchberger's algorithm for submodules of free modules over Laurent rings.

A Laurent ring ``Q[x1^+-1, ..., xn^+-1]`` is encoded as the affine ring
``P = Q[u1, v1, ..., un, vn] / (u_i v_i - 1)``. Elements are stored by their
canonical representatives (no monomial contains both ``u_i`` and ``v_i``),
which are exactly the normal forms modulo the base relations, so internally
a term is a pair ``(position, laurent_exponent)``. The term order is
degree-reverse-lexicographic on the encoded ``u/v`` exponents, refined by
position-over-term with position 0 largest.

Groebner bases computed here are Groebner bases in ``P`` of the submodule
plus ``(u_i v_i - 1) e_c`` for every position ``c``; the pairs involving
those relations reduce to multiplying by ``u_i`` or ``v_i``, which is how they
are handled. :func:`buchberger_certificate` re-checks the result directly in
``P`` with the base relations written out.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from operator import add, sub
from typing import Iterable, Mapping, Sequence

from ..charlat import LaurentPoly
from .field import QQ, Field

__all__ = [
    "AffineContext",
    "GrobnerBasis",
    "BudgetExceeded",
    "groebner_basis",
    "laurent_to_affine",
    "buchberger_certificate",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_SPAIRS = 10**6
DEFAULT_MAX_DEGREE = 60


class BudgetExceeded(RuntimeError):
    """The S-pair or degree budget ran out; the computation is inconclusive."""


def _encode(e: Sequence[int]) -> tuple[int, ...]:
    out = []
    for x in e:
        out.append(x if x > 0 else 0)
        out.append(-x if x < 0 else 0)
    return tuple(out)


def _decode(enc: Sequence[int]) -> tuple[int, ...]:
    return tuple(enc[2 * i] - enc[2 * i + 1] for i in range(len(enc) // 2))


def _divides(e: Sequence[int], t: Sequence[int]) -> bool:
    """Encoded divisibility of canonical monomials given by Laurent exponents."""
    for a, b in zip(e, t):
        if a > 0:
            if b < a:
                return False
        elif a < 0:
            if b > a:
                return False
    return True


class _KeyCache(dict):
    """Term -> sort key, with *smaller* keys for *larger* terms (so ``min`` finds the lead)."""

    def __init__(self, order: str):
        super().__init__()
        self.order = order

    def __missing__(self, term):
        pos, e = term
        enc = _encode(e)
        if self.order == "degrevlex":
            k = (pos, -sum(enc)) + enc[::-1]
        else:
            k = (pos,) + tuple(-x for x in enc)
        self[term] = k
        return k


class AffineContext:
    """Affine encoding of a Laurent ring in ``nvars`` variables over ``field``.

    Also carries the resource budgets and an S-pair counter that accumulates
    over every basis computed in this context.
    """

    def __init__(
        self,
        nvars: int,
        field: Field = QQ,
        order: str = "degrevlex",
        max_spairs: int = DEFAULT_MAX_SPAIRS,
        max_degree: int = DEFAULT_MAX_DEGREE,
    ):
        if order not in ("degrevlex", "lex"):
            raise ValueError(f"unsupported monomial order {order!r}")
        self.nvars = nvars
        self.field = field
        self.order = order
        self.max_spairs = max_spairs
        self.max_degree = max_degree
        self.spairs = 0
        self.bases = []
        self.key = _KeyCache(order).__getitem__

    @property
    def variables(self) -> list[str]:
        return [f"{c}{i + 1}" for i in range(self.nvars) for c in "uv"]

    # conversions -------------------------------------------------------
    def laurent_to_affine(self, f: LaurentPoly) -> dict[tuple[int, ...], object]:
        if f.ambient_rank != self.nvars:
            raise ValueError(f"polynomial in {f.ambient_rank} variables, context has {self.nvars}")
        return {_encode(e): c for e, c in f.terms}

    def affine_to_laurent(self, g: Mapping[Sequence[int], object]) -> LaurentPoly:
        acc: dict = {}
        for enc, c in g.items():
            e = _decode(enc)
            acc[e] = acc.get(e, 0) + self.field.to_python(self.field(c))
        return LaurentPoly.from_dict(self.nvars, acc, self.field.modulus)

    def vector(self, components: Sequence) -> dict:
        """Internal vector from a list of components (LaurentPoly or encoded dicts)."""
        out = {}
        fld = self.field
        for pos, comp in enumerate(components):
            if isinstance(comp, LaurentPoly):
                items = comp.terms
            else:
                items = ((_decode(enc), c) for enc, c in comp.items())
            for e, c in items:
                c = fld(c)
                k = (pos, tuple(e))
                v = out.get(k, 0) + c
                if fld.modulus:
                    v %= fld.modulus
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out

    def poly(self, f) -> dict:
        return self.vector([f])

    def components(self, vec: Mapping, rank: int) -> list[LaurentPoly]:
        acc = [dict() for _ in range(rank)]
        for (pos, e), c in vec.items():
            acc[pos][e] = self.field.to_python(c)
        return [LaurentPoly.from_dict(self.nvars, a, self.field.modulus) for a in acc]

    # arithmetic on internal vectors -------------------------------------
    def lead(self, f: Mapping):
        return min(f, key=self.key)

    def scale_shift(self, g: Mapping, shift: Sequence[int], coef) -> dict:
        p = self.field.modulus
        out = {}
        for (pos, e), c in g.items():
            v = c * coef
            if p:
                v %= p
            out[(pos, tuple(map(add, e, shift)))] = v
        return out

    def axpy(self, f: dict, g: Mapping, shift: Sequence[int], coef) -> None:
        """In place: ``f -= coef * x^shift * g``."""
        p = self.field.modulus
        get = f.get
        for (pos, e), c in g.items():
            k = (pos, tuple(map(add, e, shift)))
            v = get(k, 0) - coef * c
            if p:
                v %= p
            if v:
                f[k] = v
            else:
                f.pop(k, None)

    def monic(self, f: Mapping) -> dict:
        lt = self.lead(f)
        inv = self.field.inv(f[lt])
        zero = (0,) * self.nvars
        return self.scale_shift(f, zero, inv)

    def reduce(self, f: Mapping, by_pos: Mapping[int, list]) -> dict:
        """Full reduction of ``f`` by monic elements grouped by leading position.

        ``by_pos[pos]`` holds ``(vector, leading_exponent)`` pairs.
        """
        f = dict(f)
        rem = {}
        key = self.key
        p = self.field.modulus
        heap = [(key(t), t) for t in f]
        heapq.heapify(heap)
        push, pop = heapq.heappush, heapq.heappop
        while heap:
            _, t = pop(heap)
            c = f.get(t)
            if c is None:
                continue
            pos, e = t
            for g, ge in by_pos.get(pos, ()):
                if _divides(ge, e):
                    shift = tuple(map(sub, e, ge))
                    for (gp, gexp), gc in g.items():
                        k = (gp, tuple(map(add, gexp, shift)))
                        old = f.get(k)
                        if old is None:
                            v = -c * gc
                            if p:
                                v %= p
                            f[k] = v
                            push(heap, (key(k), k))
                        else:
                            v = old - c * gc
                            if p:
                                v %= p
                            if v:
                                f[k] = v
                            else:
                                del f[k]
                    break
            else:
                rem[t] = f.pop(t)
        return rem


@dataclass
class _Elem:
    vec: dict
    pos: int
    exp: tuple[int, ...]
    enc: tuple[int, ...]
    active: bool = True


def _lcm_enc(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _le(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _disjoint(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(not x or not y for x, y in zip(a, b))


def _shift_to(enc_target: Sequence[int], enc_from: Sequence[int]) -> tuple[int, ...]:
    d = [x - y for x, y in zip(enc_target, enc_from)]
    return _decode(d)


def _buchberger(ctx: AffineContext, gens: Iterable[Mapping], rank: int) -> list[_Elem]:
    elems: list[_Elem] = []
    by_pos: dict[int, list] = {}
    pairs: dict[tuple[int, int], tuple[int, ...]] = {}
    heap: list = []
    seq = itertools.count()
    ideal_mode = rank == 1

    def rebuild(pos):
        by_pos[pos] = [(el.vec, el.exp) for el in elems if el.active and el.pos == pos]

    def insert(h: dict):
        h = ctx.monic(h)
        pos, e = ctx.lead(h)
        enc = _encode(e)
        deg = sum(enc)
        if deg > ctx.max_degree:
            raise BudgetExceeded(f"leading term of degree {deg} exceeds max degree {ctx.max_degree}")
        idx = len(elems)
        new = _Elem(h, pos, e, enc)
        # pairs with the base relations u_i v_i - 1
        for k, x in enumerate(e):
            if x:
                heapq.heappush(heap, (deg + 1, next(seq), "uv", idx, k))
        # Gebauer-Moeller update for pairs among the computed elements
        cands = [i for i, el in enumerate(elems) if el.active and el.pos == pos]
        lcms = {i: _lcm_enc(enc, elems[i].enc) for i in cands}
        keep = []
        for n, i in enumerate(cands):
            li = lcms[i]
            if ideal_mode and _disjoint(enc, elems[i].enc):
                keep.append(i)
                continue
            if any(_le(lcms[j], li) for j in cands[n + 1:]) or any(_le(lcms[j], li) for j in keep):
                continue
            keep.append(i)
        keep = [i for i in keep if not (ideal_mode and _disjoint(enc, elems[i].enc))]
        for (i, j), lij in list(pairs.items()):
            if elems[i].pos != pos or not _le(enc, lij):
                continue
            if _lcm_enc(elems[i].enc, enc) != lij and _lcm_enc(elems[j].enc, enc) != lij:
                del pairs[(i, j)]
        for i in keep:
            pairs[(i, idx)] = lcms[i]
            heapq.heappush(heap, (sum(lcms[i]), next(seq), "gg", i, idx))
        for i in cands:
            if _le(enc, elems[i].enc):
                elems[i].active = False
        elems.append(new)
        rebuild(pos)

    for f in gens:
        h = ctx.reduce(f, by_pos)
        if h:
            insert(h)

    while heap:
        _, _, kind, i, j = heapq.heappop(heap)
        if kind == "gg":
            if (i, j) not in pairs:
                continue
            del pairs[(i, j)]
            a, b = elems[i], elems[j]
            lcm = _lcm_enc(a.enc, b.enc)
            s = ctx.scale_shift(a.vec, _shift_to(lcm, a.enc), 1)
            ctx.axpy(s, b.vec, _shift_to(lcm, b.enc), 1)
        else:
            a = elems[i]
            shift = [0] * ctx.nvars
            shift[j] = -1 if a.exp[j] > 0 else 1
            s = ctx.scale_shift(a.vec, shift, 1)
        ctx.spairs += 1
        if ctx.spairs > ctx.max_spairs:
            raise BudgetExceeded(f"more than {ctx.max_spairs} S-pairs")
        h = ctx.reduce(s, by_pos)
        if h:
            insert(h)
    return [el for el in elems if el.active]


class GrobnerBasis:
    """Reduced Groebner basis of a submodule of ``A^rank`` (``A`` the Laurent ring)."""

    def __init__(self, ctx: AffineContext, rank: int, elements: list[dict]):
        self.ctx = ctx
        self.rank = rank
        self.elements = elements
        self._by_pos: dict[int, list] = {}
        for g in elements:
            pos, e = ctx.lead(g)
            self._by_pos.setdefault(pos, []).append((g, e))

    @classmethod
    def compute(cls, ctx: AffineContext, gens: Iterable[Mapping], rank: int = 1) -> GrobnerBasis:
        gens = [g for g in gens if g]
        for g in gens:
            if any(pos >= rank for pos, _ in g):
                raise ValueError("generator has a component outside the free module")
        raw = _buchberger(ctx, gens, rank)
        reduced = []
        for n, el in enumerate(raw):
            others: dict[int, list] = {}
            for m, o in enumerate(raw):
                if m != n:
                    others.setdefault(o.pos, []).append((o.vec, o.exp))
            reduced.append(ctx.monic(ctx.reduce(el.vec, others)))
        reduced.sort(key=lambda g: ctx.key(ctx.lead(g)))
        gb = cls(ctx, rank, reduced)
        ctx.bases.append(gb)
        return gb

    def leading_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        return [self.ctx.lead(g) for g in self.elements]

    def reduce(self, f: Mapping) -> dict:
        return self.ctx.reduce(f, self._by_pos)

    def contains(self, f: Mapping) -> bool:
        return not self.reduce(f)

    def is_everything(self) -> bool:
        zero = (0,) * self.ctx.nvars
        return all(any(e == zero for _, e in self._by_pos.get(p, ())) for p in range(self.rank))

    def encoded(self) -> list[dict]:
        """The reduced basis in ``P``, including surviving base relations ``(u_i v_i - 1) e_c``."""
        n = self.ctx.nvars
        out = [{(pos, _encode(e)): c for (pos, e), c in g.items()} for g in self.elements]
        for pos in range(self.rank):
            lts = [_encode(e) for _, e in self._by_pos.get(pos, ())]
            for i in range(n):
                uv = [0] * (2 * n)
                uv[2 * i] = uv[2 * i + 1] = 1
                if any(_le(lt, uv) for lt in lts):
                    continue
                out.append({(pos, tuple(uv)): self.ctx.field(1), (pos, (0,) * (2 * n)): self.ctx.field(-1)})
        return out

    def quotient_dimension(self) -> int | None:
        """Dimension of ``A^rank / M`` over the field, or None when infinite."""
        n = self.ctx.nvars
        total = 0
        for pos in range(self.rank):
            lts = [e for _, e in self._by_pos.get(pos, ())]
            if any(not any(e) for e in lts):
                continue
            ranges = []
            for k in range(n):
                up = [e[k] for e in lts if e[k] > 0 and all(x == 0 for j, x in enumerate(e) if j != k)]
                down = [-e[k] for e in lts if e[k] < 0 and all(x == 0 for j, x in enumerate(e) if j != k)]
                if not up or not down:
                    return None
                ranges.append(range(-min(down) + 1, min(up)))
            for mono in itertools.product(*ranges):
                if not any(_divides(e, mono) for e in lts):
                    total += 1
        return total


def _is_internal(k) -> bool:
    return isinstance(k, tuple) and len(k) == 2 and isinstance(k[1], tuple)


def groebner_basis(ctx: AffineContext, gens: Sequence, rank: int = 1) -> GrobnerBasis:
    """Reduced Groebner basis; ``gens`` are LaurentPolys, encoded dicts, or internal vectors."""
    vecs = []
    for g in gens:
        if isinstance(g, LaurentPoly):
            vecs.append(ctx.poly(g))
        elif g and _is_internal(next(iter(g))):
            vecs.append(dict(g))
        elif g:
            vecs.append(ctx.poly(g))
    return GrobnerBasis.compute(ctx, vecs, rank)


def laurent_to_affine(ctx: AffineContext, f: LaurentPoly) -> dict:
    return ctx.laurent_to_affine(f)


# ---------------------------------------------------------------------------
# Independent check in the plain polynomial ring P.


def _p_key(order: str, term):
    # ascending key = descending term
    pos, enc = term
    if order == "degrevlex":
        return (pos, -sum(enc)) + enc[::-1]
    return (pos,) + tuple(-x for x in enc)


def _p_reduces_to_zero(f: dict, reducers: list[tuple[tuple, list]], divisor: dict, order: str, p: int | None) -> bool:
    """Reduce ``f`` by monic ``reducers``; ``divisor`` caches the first reducer of each term."""
    f = dict(f)
    heap = [(_p_key(order, t), t) for t in f]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        if t not in f:
            continue
        if t not in divisor:
            pos, enc = t
            divisor[t] = next(
                (i for i, ((gpos, genc), _) in enumerate(reducers) if gpos == pos and _le(genc, enc)), None
            )
        i = divisor[t]
        if i is None:
            return False
        (_, genc), terms = reducers[i]
        q = tuple(map(sub, t[1], genc))
        coef = f[t]
        for (gp, ge), c in terms:
            k = (gp, tuple(map(add, ge, q)))
            old = f.get(k)
            if old is None:
                heapq.heappush(heap, (_p_key(order, k), k))
                old = 0
            v = old - coef * c
            if p:
                v %= p
            if v:
                f[k] = v
            else:
                del f[k]
    return True


def _redundant_pairs(leads: list[tuple[int, tuple]], ideal: bool) -> set[tuple[int, int]]:
    """Pairs whose syzygy is generated by pairs with strictly smaller lcm, or coprime leads.

    A pair ``(i, j)`` is dropped when some ``k`` has its lead dividing ``lcm(i, j)``
    with ``lcm(i, k)`` and ``lcm(j, k)`` both proper divisors of it; induction on
    the lcm shows the remaining pairs still generate every leading-term syzygy.
    """
    drop = set()
    for i, j in itertools.combinations(range(len(leads)), 2):
        (pi, ei), (pj, ej) = leads[i], leads[j]
        if pi != pj:
            continue
        if ideal and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            drop.add((i, j))
            continue
        lcm = _lcm_enc(ei, ej)
        for k, (pk, ek) in enumerate(leads):
            if k in (i, j) or pk != pi or not _le(ek, lcm):
                continue
            if _lcm_enc(ei, ek) != lcm and _lcm_enc(ej, ek) != lcm:
                drop.add((i, j))
                break
    return drop


def buchberger_certificate(gb: GrobnerBasis, exhaustive: bool = False) -> tuple[bool, int]:
    """Check in ``P`` that the S-polynomials of the full basis reduce to zero.

    Pairs made redundant by the coprime and chain criteria are skipped unless
    ``exhaustive`` is set. Returns ``(ok, number_of_pairs_checked)``.
    """
    order = gb.ctx.order
    p = gb.ctx.field.modulus
    polys = gb.encoded()
    basis = []
    for g in polys:
        lt = min(g, key=lambda t: _p_key(order, t))
        basis.append((g, lt))
    reducers = []
    for g, lt in basis:
        inv = 1 / g[lt] if p is None else pow(g[lt], -1, p)
        reducers.append((lt, [(t, c * inv if p is None else c * inv % p) for t, c in g.items()]))
    divisor: dict = {}
    drop = set() if exhaustive else _redundant_pairs([lt for _, lt in basis], gb.rank == 1)
    checked = 0
    for (i, (g1, (p1, e1))), (j, (g2, (p2, e2))) in itertools.combinations(enumerate(basis), 2):
        if p1 != p2 or (i, j) in drop:
            continue
        lcm = _lcm_enc(e1, e2)
        s = {}
        for g, e, sign in ((g1, e1, 1), (g2, e2, -1)):
            q = tuple(map(sub, lcm, e))
            lc = g[(p1, e)]
            inv = 1 / lc if p is None else pow(lc, -1, p)
            for (gp, ge), c in g.items():
                k = (gp, tuple(map(add, ge, q)))
                v = s.get(k, 0) + sign * c * inv
                if p:
                    v %= p
                if v:
                    s[k] = v
                else:
                    s.pop(k, None)
        checked += 1
        if not _p_reduces_to_zero(s, reducers, divisor, order, p):
            return False, checked
    return True, checked
