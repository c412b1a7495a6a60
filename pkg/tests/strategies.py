"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from reptor.charlat import LaurentPoly
from reptor.intlin import IntMatrix, Sublattice

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, elements=small):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(0, max_cols))
    entries = tuple(tuple(draw(elements) for _ in range(cols)) for _ in range(rows))
    return IntMatrix(rows, cols, entries)


@st.composite
def sublattices(draw, r, max_gens=None):
    n = draw(st.integers(0, max_gens if max_gens is not None else r + 1))
    return Sublattice.span(r, [[draw(small) for _ in range(r)] for _ in range(n)])


@st.composite
def laurent_polys(draw, r, max_terms=4, max_exp=2):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(-max_exp, max_exp)) for _ in range(r))
        terms[e] = terms.get(e, 0) + draw(st.integers(-3, 3))
    return LaurentPoly.from_dict(r, terms)
