"""Finite quantale-valued (pseudo)metric spaces."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

from qmetric.quantales import InstanceMismatch, PreconditionError, Quantale, QuantaleError
from qmetric.report import CheckReport

DEFAULT_DEPTH = 64
DEFAULT_EPS_COUNT = 16
MAX_PRODUCT_POINTS = 4096


class SpaceError(QuantaleError):
    pass


@dataclass(eq=False)
class VSpace:
    """Points with a full distance matrix of quantale values.

    ``dist`` is an object array indexed by point position; use :meth:`d` to
    look distances up by point id.
    """

    quantale: Quantale
    points: tuple
    dist: np.ndarray
    separated: bool = False
    name: str = ""

    def __post_init__(self):
        self.points = tuple(self.points)
        if len(set(self.points)) != len(self.points):
            raise SpaceError("duplicate point ids")
        n = len(self.points)
        dist = np.asarray(self.dist, dtype=object)
        if n == 0:
            dist = dist.reshape(0, 0)
        if dist.shape != (n, n):
            raise SpaceError(f"distance matrix has shape {dist.shape}, expected {(n, n)}")
        for v in dist.flat:
            self.quantale.check(v)
        dist.flags.writeable = False
        self.dist = dist
        self._index = {p: i for i, p in enumerate(self.points)}

    @classmethod
    def from_function(cls, q: Quantale, points: Sequence, d: Callable, **kw) -> "VSpace":
        n = len(points)
        m = np.empty((n, n), dtype=object)
        for i, j in product(range(n), repeat=2):
            m[i, j] = d(points[i], points[j])
        return cls(q, tuple(points), m, **kw)

    def __len__(self) -> int:
        return len(self.points)

    def index(self, p: Hashable) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise SpaceError(f"unknown point {p!r}") from None

    def d(self, x, y):
        return self.dist[self.index(x), self.index(y)]

    def subspace(self, pts: Sequence) -> "VSpace":
        idx = [self.index(p) for p in pts]
        return VSpace(self.quantale, tuple(pts), self.dist[np.ix_(idx, idx)], self.separated)

    def __repr__(self) -> str:
        return f"VSpace({self.quantale.name}, {len(self)} points)"


class AxiomReport(CheckReport):
    """Reflexivity, symmetry, subadditivity and separation; separation only
    counts toward :attr:`passed` when the space is declared separated."""

    @property
    def pseudometric(self) -> bool:
        return all(c.passed for c in self.checks if c.name != "separation")

    @property
    def passed(self) -> bool:
        if self.info.get("separated"):
            return all(c.passed for c in self.checks)
        return self.pseudometric


def check_axioms(space: VSpace, max_witnesses: int = 10) -> AxiomReport:
    """Exhaustively check reflexivity, symmetry, subadditivity and separation."""
    q, P, D = space.quantale, space.points, space.dist
    n = len(P)
    refl = [(P[i],) for i in range(n) if not q.is_zero(D[i, i])]
    sym = [(P[i], P[j]) for i in range(n) for j in range(i + 1, n) if not q.eq(D[i, j], D[j, i])]
    tri = []
    if q.add_array is not None and n:
        F = q.as_array(D)
        # ok[i, k, j]: d(i, j) <= d(i, k) + d(k, j)
        ok = q.leq_array(F[:, None, :], q.add_array(F[:, :, None], F[None, :, :]))
        for i, k, j in zip(*np.nonzero(~ok)):
            tri.append((P[i], P[j], P[k]))
        tri.sort(key=lambda t: tuple(space.index(p) for p in t))
        tri = tri[:max_witnesses]
    else:
        for i, j, k in product(range(n), repeat=3):
            if not q.leq(D[i, j], q.add(D[i, k], D[k, j])):
                tri.append((P[i], P[j], P[k]))
                if len(tri) >= max_witnesses:
                    break
    sep = [(P[i], P[j]) for i in range(n) for j in range(n) if i != j and q.is_zero(D[i, j])]
    report = AxiomReport(space.name or "space", info={"quantale": q.name, "points": n,
                                                      "separated": space.separated})
    report.add("reflexivity", refl[:max_witnesses])
    report.add("symmetry", sym[:max_witnesses])
    report.add("subadditivity", tri)
    report.add("separation", sep[:max_witnesses],
               note="" if space.separated else "informational; the space is not declared separated")
    return report


def metric_closure(q: Quantale, matrix) -> np.ndarray:
    """Largest pseudometric below a symmetric matrix with zero diagonal (path meets)."""
    m = np.array(matrix, dtype=object)
    n = m.shape[0]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = q.add(m[i, k], m[k, j])
                if not q.leq(m[i, j], via):
                    m[i, j] = q.meet2(m[i, j], via)
    return m


def random_space(q: Quantale, rng: np.random.Generator, n: int, values: Optional[Sequence] = None) -> VSpace:
    """A random pseudometric on ``n`` points: random symmetric entries, then :func:`metric_closure`."""
    m = np.empty((n, n), dtype=object)
    for i in range(n):
        m[i, i] = q.zero
        for j in range(i + 1, n):
            v = values[int(rng.integers(len(values)))] if values is not None else q.random_value(rng)
            m[i, j] = m[j, i] = v
    return VSpace(q, tuple(f"p{i}" for i in range(n)), metric_closure(q, m))


def product_space(space: VSpace, k: int, max_points: int = MAX_PRODUCT_POINTS) -> VSpace:
    """``space^k`` with the distance ``join_i d(a_i, b_i)``."""
    if k < 1:
        raise SpaceError("product arity must be at least 1")
    n = len(space)
    if n ** k > max_points:
        raise SpaceError(f"product has {n}^{k} points, above the bound {max_points}")
    q = space.quantale
    tuples = list(product(range(n), repeat=k))
    m = np.empty((len(tuples), len(tuples)), dtype=object)
    for a, s in enumerate(tuples):
        for b, t in enumerate(tuples):
            m[a, b] = q.join(space.dist[i, j] for i, j in zip(s, t))
    pts = tuple(tuple(space.points[i] for i in s) for s in tuples)
    return VSpace(q, pts, m, space.separated, f"{space.name}^{k}")


def self_space(q: Quantale, samples: Sequence) -> VSpace:
    """The quantale as a space over itself: ``d(x, y) = (y -. x) + (x -. y)``.

    Point ids are the formatted values; repeated samples collapse.
    """
    pts, vals = [], []
    for v in samples:
        label = q.format(v)
        if label not in pts:
            pts.append(label)
            vals.append(v)
    m = np.empty((len(vals), len(vals)), dtype=object)
    for i, x in enumerate(vals):
        for j, y in enumerate(vals):
            m[i, j] = q.self_distance(x, y)
    return VSpace(q, tuple(pts), m, name=f"self({q.name})")


def open_ball(space: VSpace, center, eps) -> tuple:
    q = space.quantale
    if not q.way_above(eps, q.zero):
        raise PreconditionError(f"ball radius {q.format(eps)} is not way above zero")
    row = space.dist[space.index(center)]
    return tuple(p for p, v in zip(space.points, row) if q.way_above(eps, v))


@dataclass
class PointSequence:
    """``n -> x_n`` given by a finite table whose last entry repeats, or by a rule."""

    space: VSpace
    table: tuple = ()
    rule: Optional[Callable[[int], Hashable]] = None

    def __post_init__(self):
        if self.rule is None and not self.table:
            raise SpaceError("a sequence needs a table or a rule")
        for p in self.table:
            self.space.index(p)

    @classmethod
    def from_table(cls, space: VSpace, table: Sequence) -> "PointSequence":
        return cls(space, tuple(table))

    @classmethod
    def constant(cls, space: VSpace, p) -> "PointSequence":
        return cls(space, (p,))

    @property
    def eventually_constant(self) -> bool:
        return self.rule is None

    def __call__(self, n: int):
        if self.rule is not None:
            p = self.rule(n)
            self.space.index(p)
            return p
        return self.table[min(n, len(self.table) - 1)]

    def prefix(self, depth: int) -> list:
        return [self(n) for n in range(depth + 1)]


@dataclass
class Diagnostic:
    """Per-radius least index ``N`` (or ``None`` when not found within ``depth``)."""

    kind: str
    depth: int
    entries: list
    conclusive: bool = False

    @property
    def passed(self) -> bool:
        return all(n is not None for _, n in self.entries)


def default_eps(q: Quantale, count: int = DEFAULT_EPS_COUNT) -> list:
    return [q.safa(n) for n in range(count)]


def _check_eps(q, eps_list):
    if not eps_list:
        raise PreconditionError("eps list is empty")
    for e in eps_list:
        if not q.way_above(e, q.zero):
            raise PreconditionError(f"{q.format(e)} is not way above zero")


def _least_tail(bad: np.ndarray, depth: int) -> Optional[int]:
    """Least N with no bad entry at or after N, where bad[n] flags index n.

    A tail shorter than half the inspected prefix is no evidence at all (the
    last term alone always passes), so such an N is reported as not found.
    """
    hits = np.flatnonzero(bad)
    n = int(hits[-1]) + 1 if hits.size else 0
    return n if n <= depth // 2 else None


def is_cauchy_prefix(seq: PointSequence, depth: int = DEFAULT_DEPTH, eps_list=None) -> Diagnostic:
    """For each radius, the least N with ``eps >> d(x_n, x_m)`` for all ``N <= n, m <= depth``.

    ``N`` must leave at least the second half of the prefix as tail.
    """
    q = seq.space.quantale
    eps_list = default_eps(q) if eps_list is None else list(eps_list)
    _check_eps(q, eps_list)
    idx = [seq.space.index(p) for p in seq.prefix(depth)]
    sub = seq.space.dist[np.ix_(idx, idx)]
    entries = []
    for e in eps_list:
        far = np.vectorize(lambda v: not q.way_above(e, v), otypes=[bool])(sub)
        # a pair (n, m) spoils every N <= min(n, m)
        spoil = np.zeros(depth + 1, dtype=bool)
        for n, m in zip(*np.nonzero(far)):
            spoil[min(n, m)] = True
        entries.append((e, _least_tail(spoil, depth)))
    return Diagnostic("cauchy", depth, entries, seq.eventually_constant)


def converges_to(seq: PointSequence, limit, depth: int = DEFAULT_DEPTH, eps_list=None) -> Diagnostic:
    """For each radius, the least N with ``x_n`` in the open ball around ``limit`` for ``N <= n <= depth``."""
    q = seq.space.quantale
    eps_list = default_eps(q) if eps_list is None else list(eps_list)
    _check_eps(q, eps_list)
    pts = seq.prefix(depth)
    entries = []
    for e in eps_list:
        ball = set(open_ball(seq.space, limit, e))
        outside = np.array([p not in ball for p in pts])
        entries.append((e, _least_tail(outside, depth)))
    return Diagnostic("convergence", depth, entries, seq.eventually_constant)


@dataclass
class CompletenessReport:
    complete: bool
    close_pairs: list


def is_complete(space: VSpace, safa_depth: int = DEFAULT_EPS_COUNT) -> CompletenessReport:
    """A finite space is complete when no two distinct points are closer than every SAFA term.

    Then every Cauchy sequence is eventually constant, hence convergent.
    Pairs closer than all tested witnesses (pseudometric duplicates) are
    returned rather than judged.
    """
    q = space.quantale
    us = default_eps(q, safa_depth)
    close = []
    for i, j in product(range(len(space)), repeat=2):
        if i < j and all(q.way_above(u, space.dist[i, j]) for u in us):
            close.append((space.points[i], space.points[j]))
    return CompletenessReport(not close, close)


@dataclass
class RelationReport:
    pairs: frozenset
    reflexive: bool
    symmetric: bool
    transitive: bool

    @property
    def equivalence(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive


def truth_space_to_relation(space: VSpace) -> RelationReport:
    """The relation ``d(x, y) = 0`` of a truth-valued space, with its closure properties."""
    q = space.quantale
    if q.name != "truth":
        raise InstanceMismatch(f"expected a truth-valued space, got {q.name!r}")
    P = space.points
    rel = frozenset((x, y) for x in P for y in P if q.is_zero(space.d(x, y)))
    refl = all((x, x) in rel for x in P)
    sym = all((y, x) in rel for x, y in rel)
    trans = all((x, w) in rel for x, y in rel for z, w in rel if y == z)
    return RelationReport(rel, refl, sym, trans)
