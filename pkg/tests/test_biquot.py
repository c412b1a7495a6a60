import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reptor.biquot import (
    EnlargementFailed,
    Verdict,
    classify_pair,
    enlarge_torus,
    intersection_rank,
    vanishing_bound,
)
from reptor.charlat import TorusSubgroup
from reptor.intlin import IntMatrix, Sublattice, is_direct_summand, lattice_sum
from reptor.sampling import random_subtorus
from reptor.weyl import act_on_subgroup, build_root_datum, weyl_elements

SU3 = build_root_datum("SU(3)")
T2 = build_root_datum("T^2")
CIRCLE = TorusSubgroup.from_lattice(2, [(1, 1)])
TRIVIAL2 = TorusSubgroup.trivial(2)

SEMISIMPLE = ["SU(2)", "SU(3)", "Sp(2)", "SU(2) x SU(2)"]
ALL = SEMISIMPLE + ["T^2", "T^3", "SU(2) x T^1"]


def L(*rows):
    return TorusSubgroup.from_lattice(len(rows[0]), rows)


def test_intersection_rank_examples():
    assert intersection_rank(SU3, TRIVIAL2, CIRCLE) == 0
    for name in ALL:
        d = build_root_datum(name)
        assert intersection_rank(d, d.maximal_torus, d.maximal_torus) == d.rank
    assert intersection_rank(T2, L((1, 0)), L((1, 0))) == 1


def test_classify_examples():
    assert classify_pair(SU3, TRIVIAL2, CIRCLE).verdict is Verdict.STRICT
    cls = classify_pair(SU3, L((1, 2)), CIRCLE)
    assert cls.verdict is Verdict.NEITHER
    w = next(w for w in cls.witnesses if w.conjugate_k == ((1, 0),))
    assert w.sum_k == ((1, 0), (0, 2))
    assert Sublattice.span(2, w.sum_k).index() == 2
    assert not Sublattice.span(2, w.sum_k).contains(SU3.root_lattice)
    assert w.component_invariants == (2,)


def test_vanishing_bound_examples():
    assert vanishing_bound(SU3, TRIVIAL2, CIRCLE) == 1
    su2 = build_root_datum("SU(2)")
    assert vanishing_bound(su2, su2.maximal_torus, TorusSubgroup.trivial(1)) == 0
    t1 = build_root_datum("T^1")
    assert vanishing_bound(t1, TorusSubgroup.trivial(1), TorusSubgroup.trivial(1)) == 1


def test_enlarge_strict_circle_to_neither():
    res = enlarge_torus(SU3, TRIVIAL2, CIRCLE, seed=0)
    (v,) = res.subgroup.k.basis
    for line in [(1, 1), (1, 0), (0, 1)]:
        assert v[0] * line[1] - v[1] * line[0] != 0
    assert res.interrank == 0 and all(res.checks.values())


def test_enlarge_unchanged_when_maximal():
    res = enlarge_torus(SU3, SU3.maximal_torus, TRIVIAL2)
    assert res.subgroup == SU3.maximal_torus and res.attempts == 0


def test_enlarge_torus_ambient():
    res = enlarge_torus(T2, TRIVIAL2, L((1, 0)))
    assert res.subgroup.k.rank == 1
    assert lattice_sum(res.subgroup.k, Sublattice.span(2, [(1, 0)])).rank == 2
    assert is_direct_summand(res.subgroup.k)


def test_enlarge_is_deterministic():
    a = enlarge_torus(SU3, TRIVIAL2, CIRCLE, seed=5)
    b = enlarge_torus(SU3, TRIVIAL2, CIRCLE, seed=5)
    assert a == b


def test_enlarge_reports_exhaustion():
    with pytest.raises(EnlargementFailed):
        enlarge_torus(SU3, TRIVIAL2, CIRCLE, retries=0, doublings=0)


def test_enlarge_rejects_disconnected():
    with pytest.raises(ValueError):
        enlarge_torus(T2, L((2, 0), (0, 1)), TRIVIAL2)


instances = st.tuples(st.sampled_from(ALL), st.integers(0, 10**6))


def _pair(name, seed):
    d = build_root_datum(name)
    rng = random.Random(seed)
    return d, random_subtorus(rng, d.rank), random_subtorus(rng, d.rank), rng


@given(instances)
def test_interrank_symmetric_and_weyl_invariant(inst):
    d, s1, s2, rng = _pair(*inst)
    ir = intersection_rank(d, s1, s2)
    assert ir == intersection_rank(d, s2, s1)
    w = rng.choice(list(weyl_elements(d)))
    assert intersection_rank(d, s1, act_on_subgroup(w, s2)) == ir
    assert intersection_rank(d, act_on_subgroup(w, s1), s2) == ir


@given(instances)
def test_verdict_weyl_invariant(inst):
    d, s1, s2, rng = _pair(*inst)
    v = classify_pair(d, s1, s2).verdict
    w = rng.choice(list(weyl_elements(d)))
    assert classify_pair(d, act_on_subgroup(w, s1), s2).verdict is v
    assert classify_pair(d, s1, act_on_subgroup(w, s2)).verdict is v


@given(instances)
def test_verdict_implications(inst):
    d, s1, s2, _ = _pair(*inst)
    cls = classify_pair(d, s1, s2)
    ir = intersection_rank(d, s1, s2)
    if cls.verdict is Verdict.STRICT:
        assert ir == 0 and not cls.witnesses
    if cls.verdict is Verdict.LAX and not any(f.kind == "T" for f in d.spec.factors):
        assert ir == 0
    if d.is_torus:
        assert cls.satisfies_lax


@given(instances)
def test_action_convention_does_not_change_interrank(inst):
    # acting by the transpose-inverse (the cocharacter-side convention) gives the same answer
    d, s1, s2, _ = _pair(*inst)
    elems = list(weyl_elements(d))
    one = IntMatrix.identity(d.rank)
    other = 0
    for w in elems:
        inv = next(v for v in elems if (w * v).matrix == one)
        other = max(other, d.rank - lattice_sum(s1.k, s2.k.image(inv.matrix.transpose())).rank)
    assert other == intersection_rank(d, s1, s2)


@given(st.tuples(st.sampled_from(["SU(2)", "SU(3)", "Sp(2)", "T^3"]), st.integers(0, 10**6)))
def test_enlarge_post_conditions(inst):
    d, s1, s2, _ = _pair(*inst)
    res = enlarge_torus(d, s1, s2, seed=inst[1])
    base = intersection_rank(d, s1, s2)
    assert s1.k.contains(res.subgroup.k)
    assert is_direct_summand(res.subgroup.k)
    assert d.rank == res.subgroup.rank + s2.rank - res.interrank
    assert res.interrank == base == intersection_rank(d, res.subgroup, s2)
