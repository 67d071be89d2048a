"""Metric structures over a finitary signature and their embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Mapping, Optional

from qmetric.quantales import InstanceMismatch, PreconditionError, QuantaleError
from qmetric.report import CheckReport
from qmetric.vmetric import VSpace, check_axioms

MAX_WITNESSES = 10


class StructureError(QuantaleError):
    pass


@dataclass(frozen=True)
class Signature:
    constants: tuple = ()
    functions: tuple = ()  # (name, arity) pairs
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "functions", tuple((str(n), int(k)) for n, k in self.functions))
        object.__setattr__(self, "relations", tuple((str(n), int(k)) for n, k in self.relations))
        names = list(self.constants) + [n for n, _ in self.functions] + [n for n, _ in self.relations]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise StructureError(f"symbol names repeat: {sorted(dup)}")
        for n, k in self.functions + self.relations:
            if k < 1:
                raise StructureError(f"symbol {n!r} has arity {k}; arities must be at least 1")

    @property
    def empty(self) -> bool:
        return not (self.constants or self.functions or self.relations)


def tuple_distance(space: VSpace, xs, ys):
    """Join of componentwise distances, the metric on ``space^k``."""
    q = space.quantale
    return q.join(space.d(x, y) for x, y in zip(xs, ys))


@dataclass(eq=False)
class VStructure:
    """A space with interpretations; every function and relation table must be total."""

    space: VSpace
    signature: Signature = field(default_factory=Signature)
    constants: Mapping = field(default_factory=dict)
    functions: Mapping = field(default_factory=dict)
    relations: Mapping = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        sig, pts = self.signature, set(self.space.points)
        self.constants = dict(self.constants)
        self.functions = {f: {tuple(k): v for k, v in t.items()} for f, t in self.functions.items()}
        self.relations = {r: {tuple(k): v for k, v in t.items()} for r, t in self.relations.items()}
        if set(self.constants) != set(sig.constants):
            raise StructureError(f"constants {sorted(self.constants)} do not match the signature")
        for c, p in self.constants.items():
            if p not in pts:
                raise StructureError(f"constant {c!r} names unknown point {p!r}")
        for symbols, tables, kind in ((sig.functions, self.functions, "function"),
                                      (sig.relations, self.relations, "relation")):
            if set(tables) != {n for n, _ in symbols}:
                raise StructureError(f"{kind} tables {sorted(tables)} do not match the signature")
            for n, k in symbols:
                table = tables[n]
                for xs in product(self.space.points, repeat=k):
                    if xs not in table:
                        raise StructureError(f"{kind} {n!r} has no row for {xs!r}")
                for xs, v in table.items():
                    if len(xs) != k or any(x not in pts for x in xs):
                        raise StructureError(f"{kind} {n!r} has a row for a non-tuple {xs!r}")
                    if kind == "function" and v not in pts:
                        raise StructureError(f"function {n!r} sends {xs!r} to unknown point {v!r}")
                    if kind == "relation":
                        self.space.quantale.check(v)

    @property
    def quantale(self):
        return self.space.quantale

    @property
    def points(self) -> tuple:
        return self.space.points

    def __len__(self) -> int:
        return len(self.space)

    def arity(self, symbol: str) -> int:
        return dict(self.signature.functions + self.signature.relations)[symbol]

    def restrict(self, pts, name: str = "") -> "VStructure":
        """Induced substructure on ``pts`` (which must be closed)."""
        keep = set(pts)
        pts = tuple(p for p in self.points if p in keep)
        funcs = {f: {xs: v for xs, v in t.items() if set(xs) <= keep} for f, t in self.functions.items()}
        rels = {r: {xs: v for xs, v in t.items() if set(xs) <= keep} for r, t in self.relations.items()}
        return VStructure(self.space.subspace(pts), self.signature, self.constants, funcs, rels, name)

    def __repr__(self) -> str:
        return f"VStructure({self.name or '?'}, {len(self)} points)"


def check_structure(m: VStructure) -> CheckReport:
    """Space axioms, constants and nonexpansion of every interpretation, exhaustively."""
    q, sp = m.quantale, m.space
    report = CheckReport(m.name or "structure", info={"quantale": q.name, "points": len(m)})
    axioms = check_axioms(sp)
    for c in axioms.checks:
        if c.name != "separation" or sp.separated:
            report.add(f"space {c.name}", c.witnesses)
    report.add("constants interpreted", [(c,) for c, p in m.constants.items() if p not in sp.points])
    for f, k in m.signature.functions:
        bad = []
        for xs, ys in product(product(m.points, repeat=k), repeat=2):
            if not q.leq(sp.d(m.functions[f][xs], m.functions[f][ys]), tuple_distance(sp, xs, ys)):
                bad.append((xs, ys))
        report.add(f"function {f} nonexpanding", bad[:MAX_WITNESSES])
    for r, k in m.signature.relations:
        bad = []
        for xs, ys in product(product(m.points, repeat=k), repeat=2):
            gap = q.self_distance(m.relations[r][xs], m.relations[r][ys])
            if not q.leq(gap, tuple_distance(sp, xs, ys)):
                bad.append((xs, ys, q.format(m.relations[r][xs]), q.format(m.relations[r][ys])))
        report.add(f"relation {r} nonexpanding", bad[:MAX_WITNESSES])
    return report


@dataclass(eq=False)
class Embedding:
    source: VStructure
    target: VStructure
    mapping: Mapping
    name: str = ""

    def __post_init__(self):
        self.mapping = dict(self.mapping)
        if set(self.mapping) != set(self.source.points):
            missing = sorted(set(self.source.points) - set(self.mapping), key=str)
            raise StructureError(f"point map is not total on the source; missing {missing}")
        for x, y in self.mapping.items():
            if y not in self.target.space._index:
                raise StructureError(f"point map sends {x!r} to unknown point {y!r}")

    def __call__(self, x):
        return self.mapping[x]

    @property
    def key(self) -> tuple:
        """Identity of the morphism: endpoints plus the point map in source order."""
        return (self.source.name, self.target.name, tuple(self.mapping[p] for p in self.source.points))

    def __repr__(self) -> str:
        body = ", ".join(f"{x}->{y}" for x, y in self.mapping.items())
        return f"{self.source.name}->{self.target.name}[{body}]"


def identity(m: VStructure) -> Embedding:
    return Embedding(m, m, {p: p for p in m.points})


def compose(g: Embedding, f: Embedding) -> Embedding:
    """``g . f``: first ``f``, then ``g``."""
    if f.target is not g.source:
        raise StructureError(f"cannot compose {g!r} after {f!r}: endpoints differ")
    return Embedding(f.source, g.target, {x: g.mapping[y] for x, y in f.mapping.items()})


def check_embedding(h: Embedding) -> CheckReport:
    """Injectivity, exact isometry and preservation of constants, relations and functions."""
    a, b = h.source, h.target
    if a.signature != b.signature:
        raise StructureError("embedding endpoints have different signatures")
    if a.quantale.name != b.quantale.name:
        raise InstanceMismatch("embedding endpoints use different quantales")
    q = a.quantale
    report = CheckReport(repr(h))
    image = list(h.mapping.values())
    report.add("injective", [(x, y) for x, y in combinations(a.points, 2) if h(x) == h(y)][:MAX_WITNESSES])
    iso = [(x, y, q.format(a.space.d(x, y)), q.format(b.space.d(h(x), h(y))))
           for x, y in product(a.points, repeat=2) if not q.eq(a.space.d(x, y), b.space.d(h(x), h(y)))]
    report.add("isometry", iso[:MAX_WITNESSES])
    report.add("constants preserved", [(c,) for c in a.signature.constants if h(a.constants[c]) != b.constants[c]])
    rel_bad = []
    for r, k in a.signature.relations:
        for xs in product(a.points, repeat=k):
            u, v = a.relations[r][xs], b.relations[r][tuple(h(x) for x in xs)]
            if not q.eq(u, v):
                rel_bad.append((r, xs, q.format(u), q.format(v)))
    report.add("relations preserved", rel_bad[:MAX_WITNESSES])
    fun_bad = []
    for f, k in a.signature.functions:
        for xs in product(a.points, repeat=k):
            if h(a.functions[f][xs]) != b.functions[f][tuple(h(x) for x in xs)]:
                fun_bad.append((f, xs))
    report.add("functions preserved", fun_bad[:MAX_WITNESSES])
    report.info["image"] = len(set(image))
    return report


def _closed(m: VStructure, pts: set) -> bool:
    for f, k in m.signature.functions:
        for xs in product(sorted(pts, key=m.space.index), repeat=k):
            if m.functions[f][xs] not in pts:
                return False
    return True


def enumerate_substructures(m: VStructure, max_size: Optional[int] = None) -> list:
    """All closed subsets containing the constants, smallest first, with inclusions."""
    consts = set(m.constants.values())
    if max_size is None:
        max_size = len(m)
    if max_size < len(consts):
        raise PreconditionError(f"max size {max_size} is below the {len(consts)} constants")
    rest = [p for p in m.points if p not in consts]
    out = []
    for size in range(len(consts), min(max_size, len(m)) + 1):
        for extra in combinations(rest, size - len(consts)):
            pts = consts | set(extra)
            if not _closed(m, pts):
                continue
            label = ",".join(str(p) for p in m.points if p in pts)
            sub = m.restrict(pts, f"{m.name}{{{label}}}")
            out.append((sub, Embedding(sub, m, {p: p for p in sub.points})))
    return out


def all_embeddings(a: VStructure, b: VStructure) -> list:
    """Every injective point map ``a -> b`` that passes :func:`check_embedding`."""
    out = []
    for img in permutations(b.points, len(a)):
        h = Embedding(a, b, dict(zip(a.points, img)))
        if check_embedding(h).passed:
            out.append(h)
    return out
