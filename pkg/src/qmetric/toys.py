"""Ready-made catalogs for the Galois engine."""

from __future__ import annotations

from itertools import combinations, permutations

from qmetric.galois import ToyClass
from qmetric.quantales import ExtReal, TruthValues
from qmetric.structures import Embedding, Signature, VStructure
from qmetric.vmetric import VSpace

POINT_NAMES = "abcdefgh"


def discrete_space(q, n: int, name: str = "") -> VSpace:
    pts = tuple(POINT_NAMES[:n])
    return VSpace.from_function(q, pts, lambda x, y: q.zero if x == y else q.top, separated=True, name=name)


def discrete_truth_class(max_points: int = 3) -> ToyClass:
    """Discrete truth-valued spaces on 0..max_points points with every injection."""
    q = TruthValues()
    structs = [VStructure(discrete_space(q, n, f"D{n}"), name=f"D{n}") for n in range(max_points + 1)]
    maps = []
    for a in structs:
        for b in structs:
            for img in permutations(b.points, len(a)):
                maps.append(Embedding(a, b, dict(zip(a.points, img))))
    return ToyClass(structs, maps, ls_bound=0, name=f"discrete-truth-{max_points}")


def _line_name(vals) -> str:
    return "L{" + ",".join(str(v) for v in vals) + "}"


def line_class(values=(0, 1, 2), drop=()) -> ToyClass:
    """Subsets of ``values`` on the real line, each point labelled by a unary relation ``R(x) = x``.

    The label makes every structure rigid, so the morphisms are the
    inclusions.  Dropping a subset (e.g. the whole line) removes the amalgam
    of its two halves.
    """
    q = ExtReal()
    sig = Signature(relations=(("R", 1),))
    structs = []
    for k in range(len(values) + 1):
        for vals in combinations(values, k):
            if _line_name(vals) in {_line_name(d) for d in drop}:
                continue
            pts = tuple(f"x{v}" for v in vals)
            sp = VSpace.from_function(q, pts, lambda x, y: abs(float(x[1:]) - float(y[1:])), separated=True)
            structs.append(VStructure(sp, sig, relations={"R": {(p,): float(p[1:]) for p in pts}},
                                      name=_line_name(vals)))
    maps = [Embedding(a, b, {p: p for p in a.points})
            for a in structs for b in structs if a is not b and set(a.points) <= set(b.points)]
    return ToyClass(structs, maps, name="line" if not drop else "line-minus-" + "-".join(_line_name(d) for d in drop))


def duplicate_class() -> ToyClass:
    """A pseudometric catalog: a point and a distance-zero twin, with every isometric embedding."""
    q = ExtReal()
    e = VStructure(VSpace(q, (), []), name="E")
    a = VStructure(VSpace(q, ("a",), [[0.0]]), name="A")
    d = VStructure(VSpace(q, ("a", "b"), [[0.0, 0.0], [0.0, 0.0]]), name="D")
    maps = [Embedding(e, a, {}), Embedding(a, d, {"a": "a"}), Embedding(a, d, {"a": "b"}),
            Embedding(d, d, {"a": "b", "b": "a"})]
    return ToyClass([e, a, d], maps, name="duplicate")


def ultrametric_class() -> ToyClass:
    """Equilateral ExtReal spaces of 0..3 points at mutual distance 1, every injection."""
    q = ExtReal()
    structs = []
    for n in range(4):
        pts = tuple(POINT_NAMES[:n])
        sp = VSpace.from_function(q, pts, lambda x, y: 0.0 if x == y else 1.0, separated=True)
        structs.append(VStructure(sp, name=f"U{n}"))
    maps = [Embedding(a, b, dict(zip(a.points, img)))
            for a in structs for b in structs for img in permutations(b.points, len(a))]
    return ToyClass(structs, maps, name="equilateral")


__all__ = ["discrete_space", "discrete_truth_class", "duplicate_class", "line_class", "ultrametric_class"]
