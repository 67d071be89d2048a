"""Galois types over a finite catalog of structures and embeddings.

A :class:`ToyClass` stands in for an abstract class of metric structures:
amalgams, types and type distances are all searched for inside the
catalog, so every answer is relative to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Optional

from qmetric.quantales import PreconditionError, QuantaleError
from qmetric.report import CheckReport
from qmetric.structures import Embedding, check_embedding, compose, identity


class ClassError(QuantaleError):
    pass


class APError(PreconditionError):
    """Type computations need amalgamation; ~_M may not be transitive without it."""


@dataclass(frozen=True)
class PointedExtension:
    """``(f, a)`` with ``f: M -> N`` a class morphism and ``a`` a point of ``N``."""

    map: Embedding
    point: object

    @property
    def base(self):
        return self.map.source

    @property
    def key(self) -> tuple:
        return self.map.key + (self.point,)

    def __repr__(self) -> str:
        return f"({self.map!r}, {self.point})"


@dataclass(frozen=True)
class GaloisType:
    base: str
    id: int
    representative: PointedExtension
    members: tuple = field(repr=False, default=())

    def __repr__(self) -> str:
        return f"tp{self.id}/{self.base}{self.representative!r}"


@dataclass(frozen=True)
class Cocone:
    """Legs ``g0: N0 -> N``, ``g1: N1 -> N`` agreeing on the common base."""

    g0: Embedding
    g1: Embedding

    @property
    def apex(self):
        return self.g0.target


@dataclass
class TypeDistance:
    value: object
    witness: Optional[Cocone]
    cocones: int
    attained: bool


class ToyClass:
    """Named structures plus morphisms, closed under composition with identities added.

    Every morphism must pass :func:`check_embedding`; the closure is computed
    on construction.
    """

    def __init__(self, structures, morphisms=(), ls_bound: int = 0, name: str = "class", validate: bool = True):
        self.name = name
        self.ls_bound = ls_bound
        self.structures = {}
        for s in structures:
            if not s.name:
                raise ClassError("catalog structures need names")
            if s.name in self.structures:
                raise ClassError(f"structure name {s.name!r} repeats")
            self.structures[s.name] = s
        quantales = {s.quantale.name for s in self.structures.values()}
        if len(quantales) > 1:
            raise ClassError(f"catalog mixes quantales {sorted(quantales)}")
        sigs = {s.signature for s in self.structures.values()}
        if len(sigs) > 1:
            raise ClassError("catalog mixes signatures")
        self._order = {n: i for i, n in enumerate(self.structures)}
        homs: dict = {}

        def add(h):
            if h.source.name not in self.structures or h.target.name not in self.structures:
                raise ClassError(f"morphism {h!r} leaves the catalog")
            if self.structures[h.source.name] is not h.source or self.structures[h.target.name] is not h.target:
                raise ClassError(f"morphism {h!r} refers to a structure outside the catalog")
            if h.key in homs:
                return False
            if validate:
                rep = check_embedding(h)
                if not rep.passed:
                    bad = rep.failures()[0]
                    raise ClassError(f"morphism {h!r} is not an embedding: {bad.name} fails at {bad.witnesses[0]}")
            homs[h.key] = h
            return True

        for s in self.structures.values():
            add(identity(s))
        for h in morphisms:
            add(h)
        frontier = list(homs.values())
        while frontier:
            new = []
            for f in frontier:
                for g in list(homs.values()):
                    for a, b in ((g, f), (f, g)):
                        if b.target is a.source:
                            h = compose(a, b)
                            if add(h):
                                new.append(h)
            frontier = new
        self._homs = {}
        for h in sorted(homs.values(), key=self._mkey):
            self._homs.setdefault((h.source.name, h.target.name), []).append(h)
        self._ap = None
        self._types = {}
        self._cocones = {}

    # catalog access ------------------------------------------------------
    def _mkey(self, h: Embedding) -> tuple:
        tgt = h.target.space
        return (self._order[h.source.name], self._order[h.target.name],
                tuple(tgt.index(h.mapping[p]) for p in h.source.points))

    @property
    def quantale(self):
        return next(iter(self.structures.values())).quantale

    def structure(self, name: str):
        try:
            return self.structures[name]
        except KeyError:
            raise ClassError(f"no structure named {name!r} in {self.name}") from None

    def hom(self, src: str, tgt: str) -> list:
        return self._homs.get((src, tgt), [])

    def out_of(self, src: str) -> list:
        return [h for n in self.structures for h in self.hom(src, n)]

    def into(self, tgt: str) -> list:
        return [h for n in self.structures for h in self.hom(n, tgt)]

    @cached_property
    def morphisms(self) -> list:
        return [h for a in self.structures for b in self.structures for h in self.hom(a, b)]

    def contains(self, h: Embedding) -> bool:
        return any(g.key == h.key for g in self.hom(h.source.name, h.target.name))

    # amalgams ------------------------------------------------------------
    def cocones(self, f0: Embedding, f1: Embedding) -> list:
        """All ``(g0, g1)`` in the catalog with ``g0 . f0 = g1 . f1``."""
        if f0.source is not f1.source:
            raise ClassError("span legs have different sources")
        key = (f0.key, f1.key)
        if key not in self._cocones:
            out = []
            for n in self.structures:
                for g0 in self.hom(f0.target.name, n):
                    for g1 in self.hom(f1.target.name, n):
                        if all(g0(f0(m)) == g1(f1(m)) for m in f0.source.points):
                            out.append(Cocone(g0, g1))
            self._cocones[key] = out
        return self._cocones[key]

    def __repr__(self) -> str:
        return f"ToyClass({self.name}, {len(self.structures)} structures, {len(self.morphisms)} morphisms)"


def check_AP(cls: ToyClass) -> CheckReport:
    """Every span ``M0 <- M -> M1`` of class morphisms has a commuting co-cone in the catalog."""
    failures = []
    spans = 0
    for m in cls.structures:
        outs = cls.out_of(m)
        for i, j in combinations(range(len(outs)), 2):
            spans += 1
            if not cls.cocones(outs[i], outs[j]):
                failures.append((m, repr(outs[i]), repr(outs[j])))
        spans += len(outs)  # f against itself always amalgamates via identities
    report = CheckReport(f"AP {cls.name}", info={"structures": len(cls.structures),
                                                   "morphisms": len(cls.morphisms), "spans": spans,
                                                   "search universe": "catalog"})
    report.add("amalgamation", failures, checked=spans)
    cls._ap = report.passed
    return report


def _require_ap(cls: ToyClass):
    if cls._ap is None:
        check_AP(cls)
    if not cls._ap:
        raise APError(f"{cls.name} fails amalgamation; types are not well defined (run check_AP)")


def pointed_extensions(cls: ToyClass, base: str) -> list:
    cls.structure(base)
    return [PointedExtension(f, a) for f in cls.out_of(base) for a in f.target.points]


def equivalent(cls: ToyClass, p: PointedExtension, q: PointedExtension) -> bool:
    """``(f0, a0) ~ (f1, a1)``: some co-cone identifies the two points."""
    return any(c.g0(p.point) == c.g1(q.point) for c in cls.cocones(p.map, q.map))


def extension_relation(cls: ToyClass, base: str):
    """The raw relation ``~_M`` on pointed extensions, as a list and a boolean matrix."""
    exts = pointed_extensions(cls, base)
    rel = [[equivalent(cls, p, q) for q in exts] for p in exts]
    return exts, rel


def types_over(cls: ToyClass, base: str) -> list:
    """Galois types over ``base``, ordered by their least pointed extension."""
    _require_ap(cls)
    if base in cls._types:
        return cls._types[base]
    exts = pointed_extensions(cls, base)
    parent = list(range(len(exts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(len(exts)), 2):
        ri, rj = find(i), find(j)
        if ri != rj and equivalent(cls, exts[i], exts[j]):
            parent[max(ri, rj)] = min(ri, rj)  # least index stays the root
    groups: dict = {}
    for i in range(len(exts)):
        groups.setdefault(find(i), []).append(exts[i])
    types = [GaloisType(base, k, members[0], tuple(members))
             for k, (_, members) in enumerate(sorted(groups.items()))]
    cls._types[base] = types
    return types


def type_of(cls: ToyClass, ext: PointedExtension) -> GaloisType:
    for t in types_over(cls, ext.base.name):
        if any(m.key == ext.key for m in t.members):
            return t
    raise ClassError(f"{ext!r} is not a pointed extension in {cls.name}")


def _distance(cls, p: PointedExtension, q: PointedExtension) -> TypeDistance:
    V = cls.quantale
    cs = cls.cocones(p.map, q.map)
    if not cs:
        return TypeDistance(V.top, None, 0, False)
    vals = [c.apex.space.d(c.g0(p.point), c.g1(q.point)) for c in cs]
    value = V.meet(vals)
    hit = next((c for c, v in zip(cs, vals) if V.eq(v, value)), None)
    return TypeDistance(value, hit, len(cs), hit is not None)


def type_distance_report(cls: ToyClass, p: GaloisType, q: GaloisType) -> TypeDistance:
    """Meet over catalog co-cones of the distance between the designated points, with a witness."""
    if p.base != q.base:
        raise ClassError(f"types over different bases {p.base!r} and {q.base!r}")
    _require_ap(cls)
    return _distance(cls, p.representative, q.representative)


def type_distance(cls: ToyClass, p: GaloisType, q: GaloisType):
    return type_distance_report(cls, p, q).value


def distance_table(cls: ToyClass, base: str) -> list:
    ts = types_over(cls, base)
    return [[type_distance(cls, p, q) for q in ts] for p in ts]


def check_type_pseudometric(cls: ToyClass, base: str) -> CheckReport:
    """Reflexivity, symmetry and subadditivity of the type distance over ``base``.

    Also checks that the distance does not depend on the chosen
    representatives and records co-cone attainment of every meet.
    """
    V = cls.quantale
    ts = types_over(cls, base)
    D = distance_table(cls, base)
    n = len(ts)
    fmt = V.format
    report = CheckReport(f"type distance over {base}", info={"types": n, "search universe": "catalog"})
    report.add("reflexivity", [(i,) for i in range(n) if not V.is_zero(D[i][i])], checked=n)
    report.add("symmetry", [(i, j, fmt(D[i][j]), fmt(D[j][i]))
                            for i, j in combinations(range(n), 2) if not V.eq(D[i][j], D[j][i])],
               checked=n * (n - 1) // 2)
    report.add("subadditivity", [(i, j, k) for i, j, k in product(range(n), repeat=3)
                                 if not V.leq(D[i][j], V.add(D[i][k], D[k][j]))], checked=n ** 3)
    bad_rep = []
    for i, j in product(range(n), repeat=2):
        for a in ts[i].members:
            for b in ts[j].members:
                v = _distance(cls, a, b).value
                if not V.eq(v, D[i][j]):
                    bad_rep.append((i, j, repr(a), repr(b), fmt(v), fmt(D[i][j])))
                    break
            else:
                continue
            break
    report.add("independent of representatives", bad_rep)
    unattained = [(i, j) for i, j in product(range(n), repeat=2)
                  if not type_distance_report(cls, ts[i], ts[j]).attained]
    report.add("meet attained by a co-cone", unattained)
    return report


def check_separation_and_ctp(cls: ToyClass, base: str, safa_depth: int = 16) -> CheckReport:
    """Do distinct types ever sit at distance zero, and does the finite CTP analogue hold?

    CTP analogue: if for every ``n <= safa_depth`` some common extension puts
    ``a`` within ``u_n`` of a realization of ``p``, then ``a`` realizes ``p``.
    """
    V = cls.quantale
    ts = types_over(cls, base)
    report = CheckReport(f"separation and CTP over {base}", info={"types": len(ts), "safa depth": safa_depth})
    sep = []
    for p, q in combinations(ts, 2):
        if V.is_zero(type_distance(cls, p, q)):
            sep.append((p.id, q.id, repr(p.representative), repr(q.representative)))
    report.add("separation", sep)
    us = [V.safa(n) for n in range(safa_depth + 1)]
    ctp = []
    for ext in pointed_extensions(cls, base):
        own = type_of(cls, ext)
        for p in ts:
            if p.id == own.id:
                continue
            dists = [c.apex.space.d(c.g0(ext.point), c.g1(p.representative.point))
                     for c in cls.cocones(ext.map, p.representative.map)]
            if dists and all(any(V.leq(d, u) for d in dists) for u in us):
                ctp.append((repr(ext), own.id, p.id))
    report.add("CTP analogue", ctp)
    return report


def restrict_type(cls: ToyClass, p: GaloisType, chi: Embedding) -> GaloisType:
    """``p`` restricted along ``chi: X -> M``: the type of ``(f . chi, a)`` over ``X``."""
    if chi.target.name != p.base:
        raise ClassError(f"restriction map lands in {chi.target.name!r}, type lives over {p.base!r}")
    if not cls.contains(chi):
        raise ClassError(f"{chi!r} is not a morphism of {cls.name}")
    rep = p.representative
    f = next(g for g in cls.hom(chi.source.name, rep.map.target.name) if g.key == compose(rep.map, chi).key)
    return type_of(cls, PointedExtension(f, rep.point))


def small_maps(cls: ToyClass, base: str, kappa: int) -> list:
    """Class morphisms ``X -> base`` with ``|X| <= kappa``."""
    return [h for h in cls.into(base) if len(h.source) <= kappa]


def check_restriction_contractive(cls: ToyClass, base: str) -> CheckReport:
    V = cls.quantale
    ts = types_over(cls, base)
    bad, count = [], 0
    for chi in cls.into(base):
        for p, q in product(ts, repeat=2):
            count += 1
            d = type_distance(cls, p, q)
            dr = type_distance(cls, restrict_type(cls, p, chi), restrict_type(cls, q, chi))
            if not V.leq(dr, d):
                bad.append((repr(chi), p.id, q.id, V.format(dr), V.format(d)))
    report = CheckReport(f"restriction over {base}")
    report.add("restriction is contractive", bad, checked=count)
    return report


def check_tameness(cls: ToyClass, kappa: int, eps, delta=None, strong: bool = False) -> CheckReport:
    """Finite-scale tameness: delta-closeness of all restrictions to ``<= kappa``-point
    substructures must force eps-closeness of the types.

    ``strong`` (or ``delta=None``) uses ``delta = eps``.
    """
    V = cls.quantale
    if strong or delta is None:
        delta = eps
    for name, v in (("eps", eps), ("delta", delta)):
        if not V.way_above(v, V.zero):
            raise PreconditionError(f"{name} = {V.format(v)} is not way above zero")
    if kappa < 0:
        raise PreconditionError("kappa must be a natural number")
    _require_ap(cls)
    violations, pairs = [], 0
    for m in cls.structures:
        ts = types_over(cls, m)
        chis = small_maps(cls, m, kappa)
        for p, q in combinations(ts, 2):
            pairs += 1
            if all(V.way_above(delta, type_distance(cls, restrict_type(cls, p, c), restrict_type(cls, q, c)))
                   for c in chis):
                d = type_distance(cls, p, q)
                if not V.way_above(eps, d):
                    violations.append((m, p.id, q.id, repr(p.representative), repr(q.representative), V.format(d)))
    mode = "strong" if V.eq(delta, eps) else "plain"
    report = CheckReport(f"tameness {cls.name}", info={"kappa": kappa, "eps": V.format(eps),
                                                       "delta": V.format(delta), "mode": mode,
                                                       "type pairs": pairs})
    report.add(f"{'strongly ' if mode == 'strong' else ''}{kappa}-tame", violations, checked=pairs)
    return report


__all__ = [
    "APError", "ClassError", "Cocone", "GaloisType", "PointedExtension", "ToyClass", "TypeDistance",
    "check_AP", "check_restriction_contractive", "check_separation_and_ctp", "check_tameness",
    "check_type_pseudometric", "distance_table", "equivalent", "extension_relation", "pointed_extensions",
    "restrict_type", "small_maps", "type_distance", "type_distance_report", "type_of", "types_over",
]
