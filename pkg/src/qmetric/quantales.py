"""Built-in commutative quantales and the operations shared by all of them.

Every quantale here is presented in the *distance* orientation: ``zero`` is
the bottom of the lattice and the identity for ``add``, ``top`` is the
"infinite distance".  Values are plain Python payloads (floats for the
real-valued instances, :class:`~qmetric.ddf.DistanceDistribution` for
distance distributions, ``int`` element ids for finite lattices); the
quantale object carries all of the structure.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

TOL = 1e-9
INF = math.inf


class QuantaleError(ValueError):
    pass


class InstanceMismatch(QuantaleError):
    """A value does not belong to the carrier of the quantale it was used with."""


class PreconditionError(QuantaleError):
    pass


@dataclass(frozen=True)
class DescendingChain:
    """A parametrised codirected family ``n -> term(n)`` with a known meet."""

    term: Callable[[int], Any]
    meet: Any
    label: str = "chain"

    def prefix(self, depth: int) -> list:
        return [self.term(n) for n in range(depth + 1)]


class Quantale:
    """Interface shared by all quantale instances.

    Subclasses provide ``leq``, ``add``, ``way_above``, ``truncated_sub``,
    ``halve``, ``safa``, carrier membership and literal parsing.  Binary
    ``meet``/``join`` default to a total-order implementation.
    """

    name = "quantale"
    finite = False
    real_valued = False

    def __init__(self, tol: float = TOL):
        self.tol = tol

    # carrier -----------------------------------------------------------
    def contains(self, x) -> bool:
        raise NotImplementedError

    def check(self, *xs) -> None:
        for x in xs:
            if not self.contains(x):
                raise InstanceMismatch(f"{x!r} is not a value of quantale {self.name!r}")

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def top(self):
        raise NotImplementedError

    # order -------------------------------------------------------------
    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def meet2(self, a, b):
        return a if self.leq(a, b) else b

    def join2(self, a, b):
        return b if self.leq(a, b) else a

    def meet(self, values: Iterable):
        """Greatest lower bound of a finite family; the empty meet is ``top``."""
        out = self.top
        for v in values:
            self.check(v)
            out = self.meet2(out, v)
        return out

    def join(self, values: Iterable):
        """Least upper bound of a finite family; the empty join is ``zero``."""
        out = self.zero
        for v in values:
            self.check(v)
            out = self.join2(out, v)
        return out

    # algebra -----------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def way_above(self, a, b) -> bool:
        """``a >> b``: every codirected family with meet <= b has a member <= a."""
        raise NotImplementedError

    def truncated_sub(self, q, p):
        """``q -. p``, the least ``r`` with ``p + r >= q``."""
        raise NotImplementedError

    def halve(self, eps):
        """Some ``d >> 0`` with ``eps >> d + d``."""
        raise NotImplementedError

    def safa(self, n: int):
        """Term ``u_n`` of the canonical sequence approximating ``zero`` from above."""
        raise NotImplementedError

    # vectorised forms over numeric payload arrays; add_array is None when unsupported
    add_array = None

    def as_array(self, values: np.ndarray) -> np.ndarray:
        return values.astype(float)

    def leq_array(self, a, b):
        raise NotImplementedError

    def self_distance(self, x, y):
        """The metric the quantale carries on itself: ``(y -. x) + (x -. y)``."""
        return self.add(self.truncated_sub(y, x), self.truncated_sub(x, y))

    # refutation --------------------------------------------------------
    def standard_families(self, b) -> list:
        """Codirected families with meet <= b used to hunt for way-above failures."""
        return [[b], DescendingChain(lambda n, b=b: self.add(b, self.safa(n)), b, "b+u_n")]

    # literals ----------------------------------------------------------
    def parse(self, literal):
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def boundary(self) -> list:
        """Distinguished values the sampler emits before random draws."""
        out = [self.zero, self.top]
        for n in range(6):
            u = self.safa(n)
            if not any(self.eq(u, v) for v in out):
                out.append(u)
        return out

    def random_value(self, rng):
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def way_above_refute(q: Quantale, a, b, families: Optional[Sequence] = None, depth: int = 64):
    """Search sample families for a witness that ``a >> b`` fails.

    Each family is either a finite list (checked to be codirected) or a
    :class:`DescendingChain` (checked antitone to ``depth``).  The meet of
    every family must lie below ``b``.  Returns the first family none of
    whose (inspected) members lies below ``a``, or ``None``.  ``None`` is
    not a proof that ``a >> b``.  Membership below ``a`` is tested without
    tolerance: a slack would let ``b + 2^-40`` pass as ``<= b``.
    """
    q.check(a, b)
    if families is None:
        families = q.standard_families(b)
    exact = copy.copy(q)
    exact.tol = 0.0
    for fam in families:
        if isinstance(fam, DescendingChain):
            terms = fam.prefix(depth)
            for x, y in zip(terms, terms[1:]):
                if not q.leq(y, x):
                    raise QuantaleError(f"family {fam.label!r} is not descending")
            meet = fam.meet
            if not all(q.leq(meet, t) for t in terms):
                raise QuantaleError(f"family {fam.label!r}: stated meet is not a lower bound")
            # chains approach their meet strictly; terms that rounded onto it are not members
            terms = [t for t in terms if t != meet] or terms
        else:
            terms = list(fam)
            if not terms:
                raise QuantaleError("empty family")
            q.check(*terms)
            for x in terms:
                for y in terms:
                    if not any(q.leq(z, x) and q.leq(z, y) for z in terms):
                        raise QuantaleError("family is not codirected")
            meet = q.meet(terms)
        if not q.leq(meet, b):
            raise QuantaleError("family meet is not <= b")
        if not any(exact.leq(t, a) for t in terms):
            return fam
    return None


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and not math.isnan(x)


class _Interval(Quantale):
    """Real-valued instances; payloads are floats compared with tolerance."""

    real_valued = True
    lo = 0.0
    hi = INF
    reversed = False

    def contains(self, x) -> bool:
        return _is_real(x) and self.lo <= x <= self.hi

    def leq(self, a, b) -> bool:
        self.check(a, b)
        if self.reversed:
            a, b = b, a
        if a == b:
            return True
        return a <= b + self.tol

    def leq_array(self, a, b):
        if self.reversed:
            a, b = b, a
        return (a == b) | (a <= b + self.tol)

    def meet(self, values):
        vals = list(values)
        self.check(*vals)
        if not vals:
            return self.top
        return max(vals) if self.reversed else min(vals)

    def join(self, values):
        vals = list(values)
        self.check(*vals)
        if not vals:
            return self.zero
        return min(vals) if self.reversed else max(vals)

    def parse(self, literal):
        if isinstance(literal, str):
            s = literal.strip().lower()
            value = INF if s in ("inf", "infinity", "oo") else float(s)
        elif _is_real(literal):
            value = float(literal)
        else:
            raise InstanceMismatch(f"cannot read {literal!r} as a {self.name} value")
        if not self.contains(value):
            raise InstanceMismatch(f"{literal!r} is outside the carrier of {self.name}")
        return value

    def format(self, value) -> str:
        return "inf" if value == INF else repr(float(value))


class ExtReal(_Interval):
    """``[0, inf]`` with the usual order and addition."""

    name = "extreal"

    @property
    def zero(self):
        return 0.0

    @property
    def top(self):
        return INF

    def add(self, a, b):
        self.check(a, b)
        return a + b

    def add_array(self, a, b):
        return a + b

    def way_above(self, a, b) -> bool:
        self.check(a, b)
        return a == INF or a > b

    def truncated_sub(self, q, p):
        self.check(q, p)
        if p == INF:
            return 0.0
        if q == INF:
            return INF
        return max(q - p, 0.0)

    def halve(self, eps):
        self.check(eps)
        if not self.way_above(eps, 0.0):
            raise PreconditionError(f"halve needs eps >> 0, got {eps!r}")
        return 1.0 if eps == INF else eps / 4

    def safa(self, n: int):
        return 2.0 ** -n

    def standard_families(self, b):
        fams = [[b], DescendingChain(lambda n: b + 2.0 ** -n, b, "b+2^-n")]
        if b == INF:
            fams = [[INF], DescendingChain(lambda n: 2.0 ** -n, 0.0, "2^-n")]
        return fams

    def random_value(self, rng):
        r = rng.random()
        if r < 0.35:
            return float(rng.integers(0, 161)) / 16
        if r < 0.45:
            return float(rng.integers(0, 9)) / 8
        return float(rng.exponential(4.0))


class UnitTruncated(_Interval):
    """``[0, 1]`` with truncated addition ``min(a + b, 1)``."""

    name = "unit"
    hi = 1.0

    @property
    def zero(self):
        return 0.0

    @property
    def top(self):
        return 1.0

    def add(self, a, b):
        self.check(a, b)
        return min(a + b, 1.0)

    def add_array(self, a, b):
        return np.minimum(a + b, 1.0)

    def way_above(self, a, b) -> bool:
        self.check(a, b)
        return a == 1.0 or a > b

    def truncated_sub(self, q, p):
        self.check(q, p)
        return max(q - p, 0.0)

    def halve(self, eps):
        self.check(eps)
        if not self.way_above(eps, 0.0):
            raise PreconditionError(f"halve needs eps >> 0, got {eps!r}")
        return eps / 4

    def safa(self, n: int):
        return 2.0 ** -n

    def standard_families(self, b):
        return [[b], DescendingChain(lambda n: min(b + 2.0 ** -n, 1.0), b, "b+2^-n")]

    def random_value(self, rng):
        if rng.random() < 0.4:
            return float(rng.integers(0, 17)) / 16
        return float(rng.random())


class Errors(_Interval):
    """The unit interval under the *reversed* order, ``a (+) b = max(a + b - 1, 0)``.

    Payloads are numeric: the quantale zero is ``1.0`` and the top is ``0.0``.
    """

    name = "errors"
    hi = 1.0
    reversed = True

    @property
    def zero(self):
        return 1.0

    @property
    def top(self):
        return 0.0

    def add(self, a, b):
        self.check(a, b)
        return max(a + b - 1.0, 0.0)

    def add_array(self, a, b):
        return np.maximum(a + b - 1.0, 0.0)

    def way_above(self, a, b) -> bool:
        self.check(a, b)
        return a == 0.0 or a < b

    def truncated_sub(self, q, p):
        self.check(q, p)
        return min(q - p + 1.0, 1.0)

    def halve(self, eps):
        self.check(eps)
        if not self.way_above(eps, 1.0):
            raise PreconditionError(f"halve needs eps >> 0, got {eps!r}")
        # midpoint toward 1; then d (+) d = d - (1 - d) leaves a margin above eps
        return (eps + 3.0) / 4

    def safa(self, n: int):
        return 1.0 - 2.0 ** -(n + 1)

    def standard_families(self, b):
        return [[b], DescendingChain(lambda n: max(b - 2.0 ** -n, 0.0), b, "b-2^-n")]

    def random_value(self, rng):
        if rng.random() < 0.4:
            return float(rng.integers(0, 17)) / 16
        return float(rng.random())


class TruthValues(Quantale):
    """``{0, inf}`` with ``0 < inf`` and addition ``max``."""

    name = "truth"
    finite = True

    def contains(self, x) -> bool:
        return _is_real(x) and (x == 0 or x == INF)

    @property
    def zero(self):
        return 0.0

    @property
    def top(self):
        return INF

    def leq(self, a, b) -> bool:
        self.check(a, b)
        return a == 0 or b == INF

    def add(self, a, b):
        self.check(a, b)
        return max(a, b)

    def add_array(self, a, b):
        return np.maximum(a, b)

    def leq_array(self, a, b):
        return (a == 0) | (b == INF)

    def way_above(self, a, b) -> bool:
        return self.leq(b, a)

    def truncated_sub(self, q, p):
        self.check(q, p)
        return 0.0 if self.leq(q, p) else INF

    def halve(self, eps):
        self.check(eps)
        return eps

    def safa(self, n: int):
        return 0.0

    def elements(self) -> list:
        return [0.0, INF]

    def boundary(self):
        return self.elements()

    def standard_families(self, b):
        return [[b], [b, INF]]

    def parse(self, literal):
        if isinstance(literal, str) and literal.strip().lower() in ("inf", "infinity", "oo", "true"):
            return INF
        if isinstance(literal, str) and literal.strip().lower() in ("0", "false"):
            return 0.0
        if _is_real(literal) and self.contains(float(literal)):
            return float(literal)
        raise InstanceMismatch(f"{literal!r} is not a truth value (use 0 or inf)")

    def format(self, value) -> str:
        return "inf" if value == INF else "0"

    def random_value(self, rng):
        return INF if rng.random() < 0.5 else 0.0


def get_quantale(name: str, tol: float = TOL) -> Quantale:
    """Look a quantale up by name: ``truth``, ``extreal``, ``unit``, ``errors``,
    ``ddf`` or ``lattice:<path>``."""
    from qmetric.ddf import DDF

    table = {"truth": TruthValues, "extreal": ExtReal, "unit": UnitTruncated,
             "errors": Errors, "ddf": DDF}
    if name in table:
        return table[name](tol=tol)
    if name.startswith("lattice:"):
        from qmetric.io import load_lattice

        return load_lattice(name[len("lattice:"):])
    raise QuantaleError(f"unknown quantale {name!r}")
