import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmetric.quantales import ExtReal, PreconditionError, TruthValues, UnitTruncated, get_quantale
from qmetric.vmetric import (
    PointSequence,
    SpaceError,
    VSpace,
    check_axioms,
    converges_to,
    is_cauchy_prefix,
    is_complete,
    metric_closure,
    open_ball,
    product_space,
    random_space,
    self_space,
    truth_space_to_relation,
)

INF = math.inf


def space(dists, points="abc", q=None, **kw):
    q = q or ExtReal()
    pts = tuple(points)
    table = {(x, y): v for (x, y), v in dists.items()}
    return VSpace.from_function(q, pts, lambda x, y: 0.0 if x == y else table.get((x, y), table.get((y, x))), **kw)


def two_points(d, q=None):
    return space({("a", "b"): d}, "ab", q, separated=True)


def test_equilateral_passes():
    assert check_axioms(space({("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1})).passed


def test_triangle_violation_witness():
    rep = check_axioms(space({("a", "b"): 5, ("a", "c"): 1, ("c", "b"): 1}))
    assert not rep.passed
    assert ("a", "b", "c") in rep["subadditivity"].witnesses


def test_one_point_and_empty():
    assert check_axioms(VSpace(ExtReal(), ("a",), [[0.0]])).passed
    assert check_axioms(VSpace(ExtReal(), (), [])).passed


def test_separation_only_counts_when_declared():
    dup = space({("a", "b"): 0}, "ab")
    assert check_axioms(dup).passed and check_axioms(dup).pseudometric
    declared = space({("a", "b"): 0}, "ab", separated=True)
    assert not check_axioms(declared).passed
    assert check_axioms(declared).pseudometric


def test_vspace_validation():
    with pytest.raises(SpaceError):
        VSpace(ExtReal(), ("a", "a"), [[0, 0], [0, 0]])
    with pytest.raises(SpaceError):
        VSpace(ExtReal(), ("a", "b"), [[0.0]])


def test_product_examples():
    sp = two_points(3.0)
    p1 = product_space(sp, 1)
    assert [p1.d((x,), (y,)) for x in "ab" for y in "ab"] == [sp.d(x, y) for x in "ab" for y in "ab"]
    p2 = product_space(sp, 2)
    assert p2.d(("a", "a"), ("b", "b")) == 3.0
    assert p2.d(("a", "b"), ("a", "a")) == sp.d("a", "b")
    assert check_axioms(p2).passed
    with pytest.raises(SpaceError):
        product_space(sp, 13)


def test_self_space_examples():
    s = self_space(ExtReal(), [0.0, 1.0, 3.0])
    assert s.d("1.0", "3.0") == 2.0 and s.d("3.0", "3.0") == 0.0
    e = self_space(get_quantale("errors"), [0.2, 0.5, 0.9])
    assert all(e.dist[i, j] == e.dist[j, i] for i in range(3) for j in range(3))
    assert check_axioms(e).passed


def test_open_ball_examples():
    sp = two_points(1.0)
    assert open_ball(sp, "a", 1.0) == ("a",)
    assert open_ball(sp, "a", 2.0) == ("a", "b")
    with pytest.raises(PreconditionError):
        open_ball(sp, "a", 0.0)


def test_cauchy_examples():
    sp = two_points(1.0)
    const = PointSequence.constant(sp, "a")
    assert all(n == 0 for _, n in is_cauchy_prefix(const, 20).entries)
    tail = PointSequence.from_table(sp, ["b", "a", "b", "a", "a"])
    diag = is_cauchy_prefix(tail, 20)
    assert diag.passed and all(n == 3 for _, n in diag.entries)
    assert diag.conclusive
    alt = PointSequence(sp, rule=lambda n: "ab"[n % 2])
    diag = is_cauchy_prefix(alt, 20, eps_list=[1.0])
    assert diag.entries == [(1.0, None)] and not diag.passed and not diag.conclusive
    assert is_cauchy_prefix(alt, 20, eps_list=[2.0]).entries == [(2.0, 0)]


def test_convergence_examples():
    sp = two_points(1.0)
    assert converges_to(PointSequence.constant(sp, "a"), "a", 10).passed
    assert not converges_to(PointSequence.constant(sp, "a"), "b", 10).passed
    tail = PointSequence.from_table(sp, ["b", "b", "a"])
    assert all(n == 2 for _, n in converges_to(tail, "a", 10).entries)
    alt = PointSequence(sp, rule=lambda n: "ab"[n % 2])
    assert not converges_to(alt, "a", 10, eps_list=[0.5]).passed


def test_late_stabilisation_is_not_within_depth():
    sp = two_points(1.0)
    late = PointSequence.from_table(sp, ["a", "b"] * 8 + ["a"])
    assert not is_cauchy_prefix(late, 20, eps_list=[0.5]).passed
    assert is_cauchy_prefix(late, 40, eps_list=[0.5]).passed


def test_completeness():
    assert is_complete(two_points(1.0)).complete
    dup = space({("a", "b"): 0.0}, "ab")
    assert is_complete(dup).close_pairs == [("a", "b")]


def test_truth_relation_examples():
    q = TruthValues()
    disc = space({("a", "b"): INF, ("a", "c"): INF, ("b", "c"): INF}, q=q)
    r = truth_space_to_relation(disc)
    assert r.pairs == frozenset((x, x) for x in "abc") and r.equivalence
    indisc = space({("a", "b"): 0.0, ("a", "c"): 0.0, ("b", "c"): 0.0}, q=q)
    assert len(truth_space_to_relation(indisc).pairs) == 9
    with pytest.raises(Exception):
        truth_space_to_relation(two_points(1.0))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["truth", "extreal", "unit", "errors"]), st.integers(1, 6))
def test_random_spaces_are_pseudometrics(seed, name, n):
    q = get_quantale(name)
    sp = random_space(q, np.random.default_rng(seed), n)
    rep = check_axioms(sp)
    assert rep.pseudometric
    r = truth_space_to_relation(sp) if name == "truth" else None
    assert r is None or r.equivalence


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 64).map(lambda k: k / 8), min_size=3, max_size=3),)
def test_metric_closure_is_largest_below(entries):
    q = ExtReal()
    a, b, c = entries
    m = np.array([[0.0, a, b], [a, 0.0, c], [b, c, 0.0]], dtype=object)
    closed = metric_closure(q, m)
    sp = VSpace(q, "xyz", closed)
    assert check_axioms(sp).passed
    assert all(closed[i, j] <= m[i, j] for i in range(3) for j in range(3))
    if check_axioms(VSpace(q, "xyz", m)).passed:
        assert (closed == m).all()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 64).map(lambda k: k / 16), min_size=1, max_size=6))
def test_self_space_on_extreal_is_absolute_difference(xs):
    s = self_space(ExtReal(), xs)
    for x in xs:
        for y in xs:
            assert abs(s.d(ExtReal().format(x), ExtReal().format(y)) - abs(x - y)) <= 1e-9


def test_unit_self_space():
    s = self_space(UnitTruncated(), [0.0, 0.25, 1.0])
    assert s.d("0.0", "1.0") == 1.0 and check_axioms(s).passed
