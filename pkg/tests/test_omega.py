import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmetric.lattice import chain, powerset_frame, random_frame
from qmetric.omega import (
    OmegaEqualitySet,
    PartialVSpace,
    check_omega_laws,
    check_partial_axioms,
    from_omega_set,
    random_partial_space,
    to_omega_set,
)
from qmetric.quantales import ExtReal, InstanceMismatch


def test_reflexive_space_passes():
    sp = PartialVSpace(ExtReal(), "ab", [[0.0, 1.0], [1.0, 0.0]])
    assert check_partial_axioms(sp).passed


def test_positive_self_distance_allowed():
    assert check_partial_axioms(PartialVSpace(ExtReal(), "x", [[1.0]])).passed


def test_large_self_distance_fails():
    rep = check_partial_axioms(PartialVSpace(ExtReal(), "xy", [[5.0, 1.0], [1.0, 0.0]]))
    assert not rep.passed
    assert ("x", "y", "5.0", "1.0") in rep["small self-distance"].witnesses


def test_zero_space_is_crisp():
    cube = powerset_frame(3)
    sp = PartialVSpace(cube, "ab", [[0, 0], [0, 0]])
    rep = check_omega_laws(to_omega_set(sp))
    assert rep.passed and "crisp" in rep.info


def test_two_element_frame_discrete():
    two = chain(2)
    sp = PartialVSpace(two, "ab", [[0, 1], [1, 0]])
    o = to_omega_set(sp)
    # top of Omega is the frame zero: E is supported on the diagonal
    assert [[o.leq(o.top, o.E[i, j]) for j in range(2)] for i in range(2)] == [[True, False], [False, True]]
    assert check_omega_laws(o, require_separated=True).passed


def test_asymmetric_equality_witness():
    cube = powerset_frame(3)
    x, y = cube.element("{0}"), cube.element("{1}")
    o = OmegaEqualitySet(cube, "uv", [[0, x], [y, 0]])
    rep = check_omega_laws(o)
    assert not rep.passed and rep["symmetry"].witnesses[0][:2] == ("u", "v")


def test_singleton_passes():
    o = OmegaEqualitySet(powerset_frame(2), "p", [[1]])
    assert check_omega_laws(o).passed


def test_non_frame_rejected():
    with pytest.raises(InstanceMismatch):
        to_omega_set(PartialVSpace(ExtReal(), "x", [[0.0]]))
    with pytest.raises(InstanceMismatch):
        OmegaEqualitySet(chain(4, add="sum"), "x", [[0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.sampled_from(["closed", "raw", "asym"]))
def test_dualization_round_trip_and_transport(seed, n, mode):
    rng = np.random.default_rng(seed)
    frame = random_frame(rng)
    sp = random_partial_space(frame, rng, n, mode)
    o = to_omega_set(sp)
    back = from_omega_set(o)
    assert (back.dist == sp.dist).all() and back.points == sp.points
    d, e = check_partial_axioms(sp), check_omega_laws(o)
    assert d["symmetry"].passed == e["symmetry"].passed
    assert d["subadditivity"].passed == e["transitivity"].passed
    assert d["small self-distance"].passed == e["E(x,y) <= E(x,x)"].passed


def test_closed_mode_always_passes():
    rng = np.random.default_rng(0)
    for _ in range(20):
        sp = random_partial_space(random_frame(rng), rng, 4, "closed")
        assert check_partial_axioms(sp)["subadditivity"].passed
        assert check_omega_laws(to_omega_set(sp))["transitivity"].passed
