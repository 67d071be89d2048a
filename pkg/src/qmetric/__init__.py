"""Quantale-valued metric spaces, structures and Galois types at desk scale."""

from qmetric.quantales import (
    INF,
    TOL,
    DescendingChain,
    Errors,
    ExtReal,
    InstanceMismatch,
    PreconditionError,
    Quantale,
    QuantaleError,
    TruthValues,
    UnitTruncated,
    get_quantale,
    way_above_refute,
)
from qmetric.ddf import DDF, EPS0, ZERO_FUNCTION, DistanceDistribution, boxplus
from qmetric.lattice import FiniteLattice, LatticeError

__version__ = "0.1.0"
