"""YAML readers for lattices, spaces, structures, classes and Omega-sets.

Every error names the file and the line of the offending node.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from qmetric.galois import ToyClass
from qmetric.lattice import FiniteLattice
from qmetric.omega import OmegaEqualitySet, PartialVSpace
from qmetric.quantales import TOL, Quantale, QuantaleError, get_quantale
from qmetric.structures import Embedding, Signature, VStructure, all_embeddings
from qmetric.vmetric import VSpace


class LoadError(QuantaleError):
    def __init__(self, path, line: Optional[int], msg: str):
        self.path, self.line = str(path), line
        where = f"{path}:{line}" if line else str(path)
        super().__init__(f"{where}: {msg}")


class _Map(dict):
    line = None


class _Seq(list):
    line = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    out = _Map(loader.construct_mapping(node, deep=True))
    out.line = node.start_mark.line + 1
    out.lines = {k.value: v.start_mark.line + 1 for k, v in node.value if hasattr(k, "value")}
    return out


def _construct_seq(loader, node):
    out = _Seq(loader.construct_sequence(node, deep=True))
    out.line = node.start_mark.line + 1
    out.lines = [v.start_mark.line + 1 for v in node.value]
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)


class _Doc:
    """A parsed file plus helpers that raise :class:`LoadError` with line numbers."""

    def __init__(self, path, data=None):
        self.path = Path(path)
        if data is None:
            try:
                text = self.path.read_text()
            except OSError as exc:
                raise LoadError(path, None, f"cannot read file: {exc.strerror}") from None
            try:
                data = yaml.load(text, Loader=_Loader)
            except yaml.YAMLError as exc:
                mark = getattr(exc, "problem_mark", None)
                raise LoadError(path, mark.line + 1 if mark else None, f"malformed YAML: {exc}") from None
        if not isinstance(data, dict):
            raise LoadError(path, None, "expected a mapping at the top level")
        self.data = data

    def fail(self, msg, node=None, key=None, index=None):
        line = None
        if key is not None and hasattr(node, "lines") and isinstance(node.lines, dict):
            line = node.lines.get(key)
        elif index is not None and hasattr(node, "lines") and isinstance(node.lines, list):
            line = node.lines[index] if index < len(node.lines) else node.line
        line = line or getattr(node, "line", None) or getattr(self.data, "line", None)
        raise LoadError(self.path, line, msg)

    def get(self, key, default=..., node=None):
        node = self.data if node is None else node
        if key not in node:
            if default is ...:
                self.fail(f"missing required field {key!r}", node)
            return default
        return node[key]

    def rows(self, key, width, node=None):
        node = self.data if node is None else node
        seq = self.get(key, [], node)
        if not isinstance(seq, list):
            self.fail(f"{key!r} must be a list", node, key=key)
        for i, row in enumerate(seq):
            if not isinstance(row, list) or (width is not None and len(row) != width):
                self.fail(f"{key!r} entry {i} must be a list of {width} items", seq, index=i)
            yield i, seq, row

    def relative(self, target: str) -> Path:
        p = Path(target)
        return p if p.is_absolute() else self.path.parent / p


def _quantale(doc: _Doc, node, tol: float) -> Quantale:
    qname = doc.get("quantale", node=node)
    if not isinstance(qname, str):
        doc.fail("quantale must be a name such as extreal or lattice:<path>", node, key="quantale")
    if qname.startswith("lattice:"):
        return load_lattice(doc.relative(qname[len("lattice:"):]))
    try:
        return get_quantale(qname, tol)
    except QuantaleError as exc:
        doc.fail(str(exc), node, key="quantale")


def _value(doc, q, literal, node, index):
    try:
        return q.parse(literal)
    except (QuantaleError, ValueError) as exc:
        doc.fail(f"bad value literal {literal!r}: {exc}", node, index=index)


# lattices ------------------------------------------------------------------
def load_lattice(path) -> FiniteLattice:
    doc = _Doc(path)
    names = doc.get("elements")
    if not isinstance(names, list) or not names:
        doc.fail("elements must be a nonempty list", doc.data, key="elements")
    names = [str(n) for n in names]
    known = set(names)
    pairs = []
    for i, seq, (a, b) in doc.rows("leq", 2):
        if str(a) not in known or str(b) not in known:
            doc.fail(f"leq pair {[a, b]} names an unknown element", seq, index=i)
        pairs.append((str(a), str(b)))
    add = doc.get("add", "join")
    if add != "join":
        triples = []
        for i, seq, row in doc.rows("add", 3):
            if any(str(x) not in known for x in row):
                doc.fail(f"add entry {row} names an unknown element", seq, index=i)
            triples.append(tuple(str(x) for x in row))
        add = triples
    try:
        return FiniteLattice.from_relation(names, pairs, add, str(doc.get("zero")), str(doc.get("top")),
                                           name=str(doc.get("name", Path(path).stem)))
    except QuantaleError as exc:
        doc.fail(str(exc), doc.data, key="leq" if "add" not in str(exc) else "add")


# spaces --------------------------------------------------------------------
def _space(doc: _Doc, node, tol: float, cls=VSpace, partial: bool = False, name: str = ""):
    q = _quantale(doc, node, tol)
    pts = doc.get("points", [], node)
    if not isinstance(pts, list):
        doc.fail("points must be a list", node, key="points")
    pts = [str(p) for p in pts]
    if len(set(pts)) != len(pts):
        doc.fail("point names repeat", node, key="points")
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    m = np.empty((n, n), dtype=object)
    seen = np.zeros((n, n), dtype=bool)
    for i, seq, (x, y, v) in doc.rows("distances", 3, node):
        x, y = str(x), str(y)
        if x not in idx or y not in idx:
            doc.fail(f"distance entry names unknown point {x if x not in idx else y!r}", seq, index=i)
        val = _value(doc, q, v, seq, i)
        a, b = idx[x], idx[y]
        if seen[a, b] and not q.eq(m[a, b], val):
            doc.fail(f"conflicting distances for ({x}, {y})", seq, index=i)
        m[a, b], seen[a, b] = val, True
    if partial:
        for i, seq, (x, v) in doc.rows("self", 2, node):
            if str(x) not in idx:
                doc.fail(f"self entry names unknown point {x!r}", seq, index=i)
            a = idx[str(x)]
            m[a, a], seen[a, a] = _value(doc, q, v, seq, i), True
    for a in range(n):
        for b in range(n):
            if seen[a, b]:
                continue
            if seen[b, a]:
                m[a, b] = m[b, a]
            elif a == b and not partial:
                m[a, b] = q.zero
            else:
                what = f"self-distance of {pts[a]}" if a == b else f"distance ({pts[a]}, {pts[b]})"
                doc.fail(f"missing {what}", node, key="distances")
    separated = bool(doc.get("separated", False, node))
    return cls(q, tuple(pts), m, separated=separated, name=name or str(doc.get("name", doc.path.stem, node)))


def load_space(path, tol: float = TOL) -> VSpace:
    doc = _Doc(path)
    return _space(doc, doc.data, tol)


def load_partial_space(path, tol: float = TOL) -> PartialVSpace:
    doc = _Doc(path)
    return _space(doc, doc.data, tol, PartialVSpace, partial=True)


# structures ----------------------------------------------------------------
def _structure(doc: _Doc, node, tol: float) -> VStructure:
    space = _space(doc, node, tol)
    name = space.name
    consts = doc.get("constants", {}, node) or {}
    if not isinstance(consts, dict):
        doc.fail("constants must be a mapping name: point", node, key="constants")
    consts = {str(c): str(p) for c, p in consts.items()}
    tables = {}
    sig_f, sig_r = [], []
    for kind, sig in (("functions", sig_f), ("relations", sig_r)):
        block = doc.get(kind, {}, node) or {}
        if not isinstance(block, dict):
            doc.fail(f"{kind} must be a mapping", node, key=kind)
        for sym, entry in block.items():
            if not isinstance(entry, dict) or "arity" not in entry:
                doc.fail(f"{kind[:-1]} {sym!r} needs an arity and rows", block, key=sym)
            k = entry["arity"]
            if not isinstance(k, int) or k < 1:
                doc.fail(f"{kind[:-1]} {sym!r} has bad arity {k!r}", entry, key="arity")
            table = {}
            for i, seq, row in doc.rows("rows", k + 1, entry):
                xs = tuple(str(x) for x in row[:k])
                if any(x not in space._index for x in xs):
                    doc.fail(f"row {row} names an unknown point", seq, index=i)
                if kind == "functions":
                    val = str(row[k])
                    if val not in space._index:
                        doc.fail(f"row {row} maps to unknown point {val!r}", seq, index=i)
                else:
                    val = _value(doc, space.quantale, row[k], seq, i)
                table[xs] = val
            sig.append((str(sym), k))
            tables[(kind, str(sym))] = table
    try:
        sig = Signature(tuple(consts), tuple(sig_f), tuple(sig_r))
        return VStructure(space, sig, consts,
                          {f: tables[("functions", f)] for f, _ in sig_f},
                          {r: tables[("relations", r)] for r, _ in sig_r}, name=name)
    except QuantaleError as exc:
        doc.fail(str(exc), node)


def load_structure(path, tol: float = TOL) -> VStructure:
    doc = _Doc(path)
    return _structure(doc, doc.data, tol)


# classes -------------------------------------------------------------------
def load_class(path, tol: float = TOL) -> ToyClass:
    doc = _Doc(path)
    entries = doc.get("structures")
    if not isinstance(entries, list) or not entries:
        doc.fail("structures must be a nonempty list", doc.data, key="structures")
    structs = []
    for i, entry in enumerate(entries):
        if isinstance(entry, str):
            structs.append(load_structure(doc.relative(entry), tol))
        elif isinstance(entry, dict):
            structs.append(_structure(doc, entry, tol))
        else:
            doc.fail("structure entries are file paths or inline mappings", entries, index=i)
    # one quantale object for the whole catalog
    q = structs[0].quantale
    for s in structs:
        if s.quantale.name != q.name:
            doc.fail(f"structure {s.name!r} uses quantale {s.quantale.name!r}, expected {q.name!r}", doc.data,
                     key="structures")
    by_name = {s.name: s for s in structs}
    maps = []
    gen = doc.get("generate", None)
    if gen not in (None, "embeddings"):
        doc.fail("generate must be 'embeddings'", doc.data, key="generate")
    if gen == "embeddings":
        for a in structs:
            for b in structs:
                maps.extend(all_embeddings(a, b))
    for i, seq, entry in ((i, s, r) for i, s, r in _mapping_rows(doc, "morphisms")):
        src, tgt = str(doc.get("source", node=entry)), str(doc.get("target", node=entry))
        for end in (src, tgt):
            if end not in by_name:
                doc.fail(f"morphism names unknown structure {end!r}", seq, index=i)
        pm = {}
        for _, rows, pair in doc.rows("map", 2, entry):
            pm[str(pair[0])] = str(pair[1])
        try:
            maps.append(Embedding(by_name[src], by_name[tgt], pm))
        except QuantaleError as exc:
            doc.fail(str(exc), seq, index=i)
    try:
        return ToyClass(structs, maps, ls_bound=int(doc.get("ls_bound", 0)), name=str(doc.get("name", doc.path.stem)))
    except QuantaleError as exc:
        doc.fail(str(exc), doc.data, key="morphisms")


def _mapping_rows(doc, key):
    seq = doc.get(key, [])
    if not isinstance(seq, list):
        doc.fail(f"{key!r} must be a list", doc.data, key=key)
    for i, entry in enumerate(seq):
        if not isinstance(entry, dict):
            doc.fail(f"{key!r} entry {i} must be a mapping", seq, index=i)
        yield i, seq, entry


# Omega-sets ----------------------------------------------------------------
def load_omega(path, tol: float = TOL):
    """Either an Omega-set (``equality`` rows, no mirroring) or a partial space (``distances``)."""
    doc = _Doc(path)
    if "equality" not in doc.data:
        return load_partial_space(path, tol)
    q = _quantale(doc, doc.data, tol)
    pts = [str(p) for p in doc.get("points")]
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    E = np.empty((n, n), dtype=object)
    seen = np.zeros((n, n), dtype=bool)
    for i, seq, (x, y, v) in doc.rows("equality", 3):
        if str(x) not in idx or str(y) not in idx:
            doc.fail("equality entry names an unknown point", seq, index=i)
        E[idx[str(x)], idx[str(y)]] = _value(doc, q, v, seq, i)
        seen[idx[str(x)], idx[str(y)]] = True
    if not seen.all():
        a, b = map(int, np.argwhere(~seen)[0])
        doc.fail(f"missing equality value for ({pts[a]}, {pts[b]}); Omega-sets list every ordered pair",
                 doc.data, key="equality")
    try:
        return OmegaEqualitySet(q, tuple(pts), E, name=str(doc.get("name", doc.path.stem)))
    except QuantaleError as exc:
        doc.fail(str(exc), doc.data, key="quantale")
