import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import boxplus_on_grid, codirected_way_above, random_step
from qmetric.ddf import DDF, EPS0, ZERO_FUNCTION, DistanceDistribution, boxplus
from qmetric.lattice import FiniteLattice, LatticeError, chain, diamond, powerset_frame, random_lattice
from qmetric.quantales import PreconditionError, QuantaleError

step_dd = st.lists(
    st.tuples(st.integers(0, 24).map(lambda k: k / 8), st.integers(1, 16).map(lambda k: k / 16)),
    min_size=0, max_size=3,
).map(lambda pairs: DistanceDistribution._running_max(pairs))


def jump_at(t, v=1.0):
    return DistanceDistribution((float(t),), (float(v),))


# distance distributions --------------------------------------------------------

def test_canonical_form():
    F = DistanceDistribution.from_steps([(2, 1.0), (1, 0.5), (1.5, 0.5)])
    assert F.steps() == [(1.0, 0.5), (2.0, 1.0)]
    assert F(1.0) == 0.0 and F(1.5) == 0.5 and F(2.0) == 0.5 and F(2.5) == 1.0
    assert F.right_value(2.0) == 1.0
    with pytest.raises(QuantaleError):
        DistanceDistribution((1.0, 0.5), (0.5, 1.0))
    with pytest.raises(QuantaleError):
        DistanceDistribution.from_steps([(1, 0.7), (2, 0.3)])


def test_boxplus_examples():
    F = jump_at(1)
    G = DistanceDistribution.from_steps([(0.5, 0.25), (3, 0.75)])
    assert boxplus(EPS0, G) == G
    assert boxplus(F, F) == jump_at(2)
    assert boxplus(ZERO_FUNCTION, G) == ZERO_FUNCTION
    assert boxplus(F, G) == DistanceDistribution.from_steps([(1.5, 0.25), (4, 0.75)])


def test_ddf_order_examples(ddf):
    F = DistanceDistribution.from_steps([(1, 0.5)])
    assert ddf.leq(EPS0, F) and ddf.leq(F, ZERO_FUNCTION)
    assert ddf.leq(jump_at(1), jump_at(2))  # pointwise larger means closer
    assert not ddf.leq(jump_at(2), jump_at(1))
    assert ddf.meet([jump_at(1), jump_at(2)]) == jump_at(1)
    assert ddf.join([jump_at(1), jump_at(2)]) == jump_at(2)


def test_ddf_way_above_and_halve(ddf):
    assert ddf.way_above(DistanceDistribution.from_steps([(1, 0.5)]), EPS0)
    assert not ddf.way_above(jump_at(1), EPS0)  # reaches 1
    assert not ddf.way_above(DistanceDistribution.from_steps([(0, 0.5)]), EPS0)  # starts at 0
    eps = DistanceDistribution.from_steps([(1, 0.5)])
    d = ddf.halve(eps)
    assert ddf.way_above(d, EPS0) and ddf.way_above(eps, ddf.add(d, d))
    with pytest.raises(PreconditionError):
        ddf.halve(EPS0)


def test_ddf_safa(ddf):
    us = [ddf.safa(n) for n in range(12)]
    assert all(ddf.way_above(u, EPS0) for u in us)
    assert all(ddf.leq(b, a) for a, b in zip(us, us[1:]))


def test_ddf_truncated_sub_examples(ddf):
    assert ddf.truncated_sub(jump_at(3), jump_at(1)) == jump_at(2)
    assert ddf.truncated_sub(jump_at(1), jump_at(3)) == EPS0


def test_boxplus_matches_grid():
    rng = np.random.default_rng(3)
    for _ in range(15):
        F, G = random_step(rng), random_step(rng)
        H = boxplus(F, G)
        expect = boxplus_on_grid(F, G)
        got = np.array([H(x) for x in np.arange(0, 6 * 64) / 64 + 1 / 256])
        assert np.max(np.abs(got - expect)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(step_dd, step_dd, step_dd)
def test_boxplus_monoid(F, G, H):
    assert boxplus(F, G) == boxplus(G, F)
    assert boxplus(boxplus(F, G), H) == boxplus(F, boxplus(G, H))
    assert boxplus(F, EPS0) == F


@settings(max_examples=60, deadline=None)
@given(step_dd, step_dd, step_dd)
def test_ddf_adjunction(s, p, r):
    q = DDF(tol=0.0)
    assert q.leq(s, q.add(p, r)) == q.leq(q.truncated_sub(s, p), r)


# finite lattices ----------------------------------------------------------------

def test_powerset_frame_tables():
    cube = powerset_frame(3)
    assert len(cube) == 8 and cube.is_frame()
    x, y = cube.element("{0}"), cube.element("{1}")
    assert cube.add(x, y) == cube.element("{0,1}")
    assert cube.truncated_sub(cube.element("{0,1}"), x) == y
    assert cube.algebra_problems() == []


def test_chain_with_capped_addition():
    c = chain(4, add="sum")
    assert c.add(1, 2) == 3 and c.add(2, 3) == 3
    assert c.truncated_sub(3, 1) == 2
    assert not c.is_frame()


def test_lattice_order_errors():
    with pytest.raises(LatticeError, match="antisymmetric"):
        FiniteLattice.from_relation("zabct", [("z", "a"), ("a", "b"), ("b", "c"), ("c", "a"), ("c", "t")],
                                    "join", "z", "t")
    with pytest.raises(LatticeError, match="have no (meet|join)"):
        # a and b have two minimal upper bounds c and d
        pairs = [("z", "a"), ("z", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "t"), ("d", "t")]
        FiniteLattice.from_relation("zabcdt", pairs, "join", "z", "t")


def test_lattice_algebra_problems():
    leq = np.triu(np.ones((4, 4), dtype=bool))
    add = np.array([[0, 1, 2, 3], [1, 2, 2, 3], [2, 2, 3, 3], [3, 3, 3, 3]])
    lat = FiniteLattice("zabt", leq, add, 0, 3)
    names = [p[0] for p in lat.algebra_problems()]
    assert "associative" in names


@pytest.mark.parametrize("seed", range(6))
def test_way_above_matches_codirected_oracle(seed):
    lat = random_lattice(np.random.default_rng(seed), max_elements=10)
    wa = np.array([[lat.way_above(a, b) for b in lat.elements()] for a in lat.elements()])
    assert (wa == codirected_way_above(lat)).all()
    assert (wa == lat._leq.T).all()


def test_diamond_truncated_sub():
    lat = diamond()
    a, b, top = (lat.element(x) for x in "ab1")
    assert lat.truncated_sub(top, a) == b
    assert lat.truncated_sub(a, b) == a
    assert lat.truncated_sub(a, top) == lat.zero
