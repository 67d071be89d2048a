"""User-supplied finite quantales given by an order relation and an addition table."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from qmetric.quantales import InstanceMismatch, Quantale, QuantaleError

MAX_ELEMENTS = 64


class LatticeError(QuantaleError):
    pass


def _closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean relation (Warshall)."""
    out = rel.copy()
    np.fill_diagonal(out, True)
    for k in range(len(out)):
        out |= np.outer(out[:, k], out[k, :])
    return out


class FiniteLattice(Quantale):
    """A finite lattice with a commutative monoid ``add`` whose unit is the bottom.

    Elements are the integers ``0..n-1``; ``names`` gives their labels.  The
    order relation is validated (partial order with all binary meets and
    joins, ``zero`` least, ``top`` greatest) on construction.  The algebraic
    laws of ``add`` are *not* enforced here: :meth:`algebra_problems` lists
    them and the law suite reports them with witnesses.
    """

    finite = True

    def __init__(self, names, leq, add, zero, top, name: str = "lattice"):
        super().__init__()
        self.names = [str(x) for x in names]
        n = len(self.names)
        if n == 0:
            raise LatticeError("a lattice needs at least one element")
        if n > MAX_ELEMENTS:
            raise LatticeError(f"at most {MAX_ELEMENTS} elements are supported, got {n}")
        if len(set(self.names)) != n:
            raise LatticeError("element names must be distinct")
        self.name = name
        self._leq = np.array(leq, dtype=bool)
        self._add = np.array(add, dtype=np.int64)
        if self._leq.shape != (n, n) or self._add.shape != (n, n):
            raise LatticeError("leq and add must be n x n tables")
        if self._add.min() < 0 or self._add.max() >= n:
            raise LatticeError("add table refers to unknown elements")
        self._zero, self._top = int(zero), int(top)
        self._validate_order()
        self._meet = self._bound_table(lower=True)
        self._join = self._bound_table(lower=False)
        self._tsub = self._tsub_table()
        self._leq.setflags(write=False)
        self._add.setflags(write=False)

    # construction -------------------------------------------------------
    @classmethod
    def from_relation(cls, names, pairs, add, zero, top, name="lattice"):
        """Build from generating ``(x, y)`` pairs meaning ``x <= y`` (closure applied).

        ``add`` is either a full table of ``(x, y, x+y)`` name triples
        (commutative pairs may be given once) or the string ``"join"``.
        """
        names = [str(x) for x in names]
        idx = {x: i for i, x in enumerate(names)}
        n = len(names)
        rel = np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            try:
                rel[idx[str(x)], idx[str(y)]] = True
            except KeyError as exc:
                raise LatticeError(f"leq mentions unknown element {exc.args[0]!r}") from None
        leq = _closure(rel)
        if isinstance(add, str):
            if add != "join":
                raise LatticeError(f"unknown addition shorthand {add!r}")
            table = None
        else:
            table = -np.ones((n, n), dtype=np.int64)
            for row in add:
                try:
                    x, y, z = (idx[str(v)] for v in row)
                except KeyError as exc:
                    raise LatticeError(f"add mentions unknown element {exc.args[0]!r}") from None
                except ValueError:
                    raise LatticeError(f"add rows must be triples, got {row!r}") from None
                for a, b in ((x, y), (y, x)):
                    if table[a, b] not in (-1, z):
                        raise LatticeError(f"add gives two values for ({names[x]}, {names[y]})")
                    table[a, b] = z
            missing = np.argwhere(table < 0)
            if len(missing):
                a, b = missing[0]
                raise LatticeError(f"add table has no entry for ({names[a]}, {names[b]})")
        try:
            zi, ti = idx[str(zero)], idx[str(top)]
        except KeyError as exc:
            raise LatticeError(f"unknown element {exc.args[0]!r}") from None
        if table is None:
            lat = cls(names, leq, np.zeros((n, n), dtype=np.int64), zi, ti, name)
            return lat.with_add(lat._join)
        return cls(names, leq, table, zi, ti, name)

    @classmethod
    def frame(cls, names, leq, zero, top, name="frame"):
        """The quantale whose addition is the binary join (the meet of the dual frame)."""
        n = len(names)
        lat = cls(names, leq, np.zeros((n, n), dtype=np.int64), zero, top, name)
        return lat.with_add(lat._join)

    def with_add(self, table) -> "FiniteLattice":
        return FiniteLattice(self.names, self._leq, table, self._zero, self._top, self.name)

    def _validate_order(self):
        L = self._leq
        n = len(L)
        if not L.diagonal().all():
            i = int(np.argmin(L.diagonal()))
            raise LatticeError(f"leq is not reflexive at {self.names[i]}")
        both = L & L.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise LatticeError(f"leq is not antisymmetric: {self.names[i]} <= {self.names[j]} <= {self.names[i]}")
        for k in range(n):
            bad = np.outer(L[:, k], L[k, :]) & ~L
            if bad.any():
                i, j = np.argwhere(bad)[0]
                raise LatticeError(
                    f"leq is not transitive: {self.names[i]} <= {self.names[k]} <= {self.names[j]}")
        if not L[self._zero, :].all():
            raise LatticeError(f"zero {self.names[self._zero]} is not the least element")
        if not L[:, self._top].all():
            raise LatticeError(f"top {self.names[self._top]} is not the greatest element")

    def _bound_table(self, lower: bool) -> np.ndarray:
        L = self._leq if lower else self._leq.T
        n = len(L)
        out = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                cands = np.flatnonzero(L[:, a] & L[:, b])
                # greatest lower bound: the candidate above all others
                best = [c for c in cands if L[cands, c].all()]
                if len(best) != 1:
                    kind = "meet" if lower else "join"
                    raise LatticeError(f"{self.names[a]} and {self.names[b]} have no {kind}")
                out[a, b] = out[b, a] = best[0]
        return out

    def _tsub_table(self) -> np.ndarray:
        n = len(self.names)
        out = np.empty((n, n), dtype=np.int64)
        for q in range(n):
            for p in range(n):
                out[q, p] = self._meet_many(np.flatnonzero(self._leq[q, self._add[p, :]]))
        return out

    def _meet_many(self, idxs) -> int:
        out = self._top
        for i in idxs:
            out = self._meet[out, i]
        return int(out)

    # Quantale interface ---------------------------------------------------
    def __len__(self):
        return len(self.names)

    def elements(self) -> list:
        return list(range(len(self.names)))

    def contains(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x < len(self.names)

    @property
    def zero(self):
        return self._zero

    @property
    def top(self):
        return self._top

    def leq(self, a, b) -> bool:
        self.check(a, b)
        return bool(self._leq[a, b])

    def eq(self, a, b) -> bool:
        self.check(a, b)
        return a == b

    def meet2(self, a, b):
        return int(self._meet[a, b])

    def join2(self, a, b):
        return int(self._join[a, b])

    def add(self, a, b):
        self.check(a, b)
        return int(self._add[a, b])

    def as_array(self, values):
        return values.astype(np.int64)

    def add_array(self, a, b):
        return self._add[a, b]

    def leq_array(self, a, b):
        return self._leq[a, b]

    def way_above(self, a, b) -> bool:
        # codirected subsets of a finite lattice contain their meet
        return self.leq(b, a)

    def truncated_sub(self, q, p):
        self.check(q, p)
        return int(self._tsub[q, p])

    def halve(self, eps):
        # way-above is >= here, so zero always qualifies; eps itself does when eps + eps <= eps
        self.check(eps)
        return eps if self.leq(self.add(eps, eps), eps) else self._zero

    def safa(self, n: int):
        return self._zero

    def boundary(self):
        return self.elements()

    def standard_families(self, b):
        up = [x for x in self.elements() if self._leq[b, x]]
        return [[b], up]

    def random_value(self, rng):
        return int(rng.integers(0, len(self.names)))

    def parse(self, literal):
        if isinstance(literal, (int, np.integer)) and not isinstance(literal, bool) and str(literal) not in self.names:
            if self.contains(literal):
                return int(literal)
        try:
            return self.names.index(str(literal))
        except ValueError:
            raise InstanceMismatch(f"{literal!r} is not an element of lattice {self.name!r}") from None

    def format(self, value) -> str:
        return self.names[value]

    def element(self, name: str) -> int:
        return self.parse(name)

    # checks -------------------------------------------------------------
    def is_join_addition(self) -> bool:
        return bool((self._add == self._join).all())

    def is_distributive(self) -> bool:
        M, J = self._meet, self._join
        n = len(M)
        for a in range(n):
            lhs = M[a][J]  # a ^ (b v c)
            rhs = J[M[a][:, None], M[a][None, :]]  # (a ^ b) v (a ^ c)
            if not (lhs == rhs).all():
                return False
        return True

    def is_frame(self) -> bool:
        """Distributive with addition equal to binary join (the dual frame's meet)."""
        return self.is_join_addition() and self.is_distributive()

    def algebra_problems(self) -> list:
        """First witnesses of failed monoid / distributivity laws (exhaustive)."""
        A, M = self._add, self._meet
        n = len(A)
        problems = []
        if not (A == A.T).all():
            a, b = np.argwhere(A != A.T)[0]
            problems.append(("commutative", (int(a), int(b))))
        if not (A[self._zero] == np.arange(n)).all():
            a = int(np.argmin(A[self._zero] == np.arange(n)))
            problems.append(("identity", (a,)))
        ab_c = A[A[:, :, None], np.arange(n)[None, None, :]]
        a_bc = A[np.arange(n)[:, None, None], A[None, :, :]]
        if not (ab_c == a_bc).all():
            a, b, c = np.argwhere(ab_c != a_bc)[0]
            problems.append(("associative", (int(a), int(b), int(c))))
        dist_l = A[np.arange(n)[:, None, None], M[None, :, :]]
        dist_r = M[A[:, :, None], A[:, None, :]]
        if not (dist_l == dist_r).all():
            a, b, c = np.argwhere(dist_l != dist_r)[0]
            problems.append(("distributes over meets", (int(a), int(b), int(c))))
        if not (A[:, self._top] == self._top).all():
            a = int(np.argmin(A[:, self._top] == self._top))
            problems.append(("distributes over the empty meet", (a,)))
        return problems

    def __repr__(self):
        return f"FiniteLattice({self.name!r}, {len(self.names)} elements)"


# generators ---------------------------------------------------------------

def powerset_frame(k: int) -> FiniteLattice:
    """Subsets of a k-set under inclusion, addition = union."""
    n = 1 << k
    names = ["{" + ",".join(str(i) for i in range(k) if m >> i & 1) + "}" for m in range(n)]
    leq = np.array([[(a & b) == a for b in range(n)] for a in range(n)])
    return FiniteLattice.frame(names, leq, 0, n - 1, name=f"powerset{k}")


def chain(n: int, add: str = "join") -> FiniteLattice:
    leq = np.triu(np.ones((n, n), dtype=bool))
    names = [str(i) for i in range(n)]
    if add == "join":
        return FiniteLattice.frame(names, leq, 0, n - 1, name=f"chain{n}")
    table = np.minimum(np.add.outer(np.arange(n), np.arange(n)), n - 1)
    return FiniteLattice(names, leq, table, 0, n - 1, name=f"chain{n}+")


def diamond() -> FiniteLattice:
    """``0 < a, b < 1`` with addition = join."""
    leq = np.array([[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]], dtype=bool)
    return FiniteLattice.frame(["0", "a", "b", "1"], leq, 0, 3, name="diamond")


def random_lattice(rng, max_elements: int = 12, ground: int = 4, add: str = "join") -> FiniteLattice:
    """Closure system of random subsets of a small ground set, ordered by inclusion.

    Intersection-closed families containing the whole set are lattices; the
    bottom is the intersection of everything.
    """
    full = (1 << ground) - 1
    while True:
        fam = {full}
        for _ in range(int(rng.integers(1, ground + 3))):
            fam.add(int(rng.integers(0, full + 1)))
        changed = True
        while changed:
            changed = False
            for a, b in combinations(list(fam), 2):
                if a & b not in fam:
                    fam.add(a & b)
                    changed = True
        if len(fam) <= max_elements:
            break
    sets = sorted(fam, key=lambda m: (bin(m).count("1"), m))
    n = len(sets)
    leq = np.array([[(a & b) == a for b in sets] for a in sets])
    names = [f"s{m:0{ground}b}" for m in sets]
    lat = FiniteLattice(names, leq, np.zeros((n, n), dtype=np.int64), 0, n - 1, name="random")
    return lat.with_add(lat._join) if add == "join" else lat


def random_frame(rng, max_elements: int = 16, points: int = 4) -> FiniteLattice:
    """Down-sets of a random poset, ordered by inclusion, addition = union.

    Down-set lattices are distributive, hence finite frames.
    """
    while True:
        k = int(rng.integers(1, points + 1))
        rel = np.zeros((k, k), dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                rel[i, j] = rng.random() < 0.35
        P = _closure(rel)
        downsets = []
        for m in range(1 << k):
            members = [i for i in range(k) if m >> i & 1]
            if all(m >> j & 1 for i in members for j in range(k) if P[j, i]):
                downsets.append(m)
        if len(downsets) <= max_elements:
            break
    downsets.sort(key=lambda m: (bin(m).count("1"), m))
    leq = np.array([[(a & b) == a for b in downsets] for a in downsets])
    names = ["d" + format(m, f"0{k}b") for m in downsets]
    return FiniteLattice.frame(names, leq, 0, len(downsets) - 1, name="random-frame")
