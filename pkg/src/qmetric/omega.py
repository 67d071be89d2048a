"""Partial quantale-valued pseudometrics and their reading as Omega-valued sets.

A partial space drops reflexivity: self-distances may be nonzero.  Over a
finite frame (addition = join in the distance order) the distance matrix,
read in the opposite order, is an Omega-valued equality ``E``; symmetry and
subadditivity of ``d`` become symmetry and transitivity of ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from qmetric.lattice import FiniteLattice
from qmetric.quantales import InstanceMismatch
from qmetric.report import CheckReport
from qmetric.vmetric import VSpace, metric_closure

AXIOM_NOTE = ("partial axioms used: symmetry, subadditivity and small self-distance "
              "d(x,x) <= d(x,y); the last is the standard partial-metric law, adopted by choice")
MAX_WITNESSES = 10


class PartialVSpace(VSpace):
    """A :class:`VSpace` whose diagonal is data rather than zero."""

    @property
    def self_distances(self) -> dict:
        return {p: self.dist[i, i] for i, p in enumerate(self.points)}


def check_partial_axioms(space: VSpace) -> CheckReport:
    q, P, D = space.quantale, space.points, space.dist
    n = len(P)
    report = CheckReport(space.name or "partial space", info={"quantale": q.name, "points": n,
                                                              "axioms": AXIOM_NOTE})
    sym = [(P[i], P[j]) for i in range(n) for j in range(i + 1, n) if not q.eq(D[i, j], D[j, i])]
    tri = [(P[i], P[j], P[k]) for i, j, k in product(range(n), repeat=3)
           if not q.leq(D[i, j], q.add(D[i, k], D[k, j]))]
    small = [(P[i], P[j], q.format(D[i, i]), q.format(D[i, j])) for i, j in product(range(n), repeat=2)
             if not q.leq(D[i, i], D[i, j])]
    report.add("symmetry", sym[:MAX_WITNESSES])
    report.add("subadditivity", tri[:MAX_WITNESSES])
    report.add("small self-distance", small[:MAX_WITNESSES])
    return report


def _require_frame(q):
    if not isinstance(q, FiniteLattice) or not q.is_frame():
        raise InstanceMismatch(f"Omega-set dualization needs a finite frame with join addition, got {q.name!r}")


@dataclass(eq=False)
class OmegaEqualitySet:
    """Points with frame-valued equality ``E``.

    ``frame`` is the distance-oriented lattice; ``E`` values are its
    elements read in the opposite order, so the Omega meet is the frame's
    join and the Omega top is the frame's zero.
    """

    frame: FiniteLattice
    points: tuple
    E: np.ndarray
    name: str = ""

    def __post_init__(self):
        _require_frame(self.frame)
        self.points = tuple(self.points)
        n = len(self.points)
        E = np.asarray(self.E, dtype=object).reshape(n, n)
        for v in E.flat:
            self.frame.check(v)
        E.flags.writeable = False
        self.E = E

    # the opposite order, spelled out
    def leq(self, a, b) -> bool:
        return self.frame.leq(b, a)

    def meet(self, a, b):
        return self.frame.join2(a, b)

    @property
    def top(self):
        return self.frame.zero

    def e(self, x, y):
        return self.E[self.points.index(x), self.points.index(y)]


def to_omega_set(space: VSpace) -> OmegaEqualitySet:
    _require_frame(space.quantale)
    return OmegaEqualitySet(space.quantale, space.points, space.dist.copy(), f"Omega-set of {space.name}".strip())


def from_omega_set(oset: OmegaEqualitySet) -> PartialVSpace:
    return PartialVSpace(oset.frame, oset.points, oset.E.copy(), name=oset.name)


def check_omega_laws(oset: OmegaEqualitySet, require_separated: bool = False) -> CheckReport:
    """Symmetry, transitivity and ``E(x,y) <= E(x,x)``; separation is reported and
    only counted when ``require_separated``."""
    P, E = oset.points, oset.E
    n = len(P)
    fmt = oset.frame.format
    report = CheckReport(oset.name or "omega set", info={"frame": oset.frame.name, "points": n})
    if n and all(oset.frame.eq(v, oset.top) for v in E.flat):
        report.info["crisp"] = "every equality value is top (the global, crisp case)"
    sym = [(P[i], P[j], fmt(E[i, j]), fmt(E[j, i])) for i in range(n) for j in range(i + 1, n)
           if not oset.frame.eq(E[i, j], E[j, i])]
    trans = [(P[i], P[j], P[k]) for i, j, k in product(range(n), repeat=3)
             if not oset.leq(oset.meet(E[i, j], E[j, k]), E[i, k])]
    bound = [(P[i], P[j]) for i, j in product(range(n), repeat=2) if not oset.leq(E[i, j], E[i, i])]
    report.add("symmetry", sym[:MAX_WITNESSES])
    report.add("transitivity", trans[:MAX_WITNESSES])
    report.add("E(x,y) <= E(x,x)", bound[:MAX_WITNESSES])
    glued = [(P[i], P[j]) for i in range(n) for j in range(i + 1, n)
             if oset.frame.eq(E[i, j], oset.meet(E[i, i], E[j, j]))]
    if require_separated:
        report.add("separated", glued)
    else:
        report.info["separated"] = "yes" if not glued else f"no, {len(glued)} glued pairs"
    return report


def random_partial_space(frame: FiniteLattice, rng: np.random.Generator, n: int, mode: str = "closed") -> PartialVSpace:
    """Random partial space: ``closed`` satisfies the axioms by path closure,
    ``raw`` is a random symmetric matrix, ``asym`` need not be symmetric."""
    els = frame.elements()
    m = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if mode == "asym" or j >= i:
                m[i, j] = els[int(rng.integers(len(els)))]
            else:
                m[i, j] = m[j, i]
    if mode == "closed":
        m = metric_closure(frame, m)
    return PartialVSpace(frame, tuple(f"p{i}" for i in range(n)), m)
