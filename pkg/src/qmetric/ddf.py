"""Distance distribution functions and the quantale they form.

A :class:`DistanceDistribution` is a left-continuous nondecreasing step
function ``F: [0, inf) -> [0, 1]``.  It is stored as breakpoints
``b_0 < b_1 < ...`` with values ``v_0 < v_1 < ...``; ``F(t) = v_i`` for
``t`` in ``(b_i, b_{i+1}]`` and ``F(t) = 0`` for ``t <= b_0``.  In particular
``F(0) = 0`` for every element, including the quantale zero ``eps0`` which
jumps to 1 right after 0.

The quantale order is the *opposite* of the pointwise order, so meets are
pointwise maxima and joins pointwise minima.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable

from qmetric.quantales import (
    DescendingChain,
    InstanceMismatch,
    PreconditionError,
    Quantale,
    QuantaleError,
    _is_real,
)


@dataclass(frozen=True)
class DistanceDistribution:
    breakpoints: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        b, v = self.breakpoints, self.values
        if len(b) != len(v):
            raise QuantaleError("breakpoints and values differ in length")
        for x in b:
            if not _is_real(x) or x < 0 or x == float("inf"):
                raise QuantaleError(f"breakpoint {x!r} is not a finite nonnegative real")
        for y in v:
            if not _is_real(y) or not 0 < y <= 1:
                raise QuantaleError(f"value {y!r} is not in (0, 1]")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise QuantaleError("breakpoints must be strictly increasing")
        if any(x >= y for x, y in zip(v, v[1:])):
            raise QuantaleError("values must be strictly increasing in canonical form")

    @classmethod
    def from_steps(cls, steps: Iterable) -> "DistanceDistribution":
        """Canonical form of the step function with the given ``(breakpoint, value)`` pairs.

        Pairs may be unsorted and redundant; values must be nondecreasing in
        breakpoint order.
        """
        pts: dict = {}
        for t, y in steps:
            t, y = float(t), float(y)
            pts[t] = max(pts.get(t, 0.0), y)
        b, v = [], []
        for t in sorted(pts):
            y = pts[t]
            if v and y < v[-1]:
                raise QuantaleError(f"values decrease at breakpoint {t}")
            if y <= 0 or (v and y == v[-1]):
                continue
            b.append(t)
            v.append(y)
        return cls(tuple(b), tuple(v))

    @classmethod
    def _running_max(cls, pairs) -> "DistanceDistribution":
        """Canonical step function ``t -> max{y : (b, y) in pairs, b < t}``."""
        b, v = [], []
        best = 0.0
        for t, y in sorted(pairs):
            if y <= best:
                continue
            best = y
            if b and b[-1] == t:
                v[-1] = y
            else:
                b.append(t)
                v.append(y)
        return cls(tuple(b), tuple(v))

    def __call__(self, t: float) -> float:
        """``F(t)``: value of the last breakpoint strictly below ``t``."""
        i = bisect_left(self.breakpoints, t)
        return self.values[i - 1] if i else 0.0

    def right_value(self, t: float) -> float:
        """``F(t+)``, the limit from the right."""
        i = bisect_right(self.breakpoints, t)
        return self.values[i - 1] if i else 0.0

    def steps(self) -> list:
        return list(zip(self.breakpoints, self.values))

    def __repr__(self) -> str:
        if not self.breakpoints:
            return "DDF(0)"
        body = ", ".join(f"{b:g}:{v:g}" for b, v in self.steps())
        return f"DDF({body})"


EPS0 = DistanceDistribution((0.0,), (1.0,))
ZERO_FUNCTION = DistanceDistribution()


def boxplus(F: DistanceDistribution, G: DistanceDistribution) -> DistanceDistribution:
    """Sup-convolution ``(F [+] G)(x) = sup_{u+v<=x} (F(u) + G(v) - 1)``, clamped at 0.

    For step functions the supremum is attained on breakpoint pairs: the pair
    ``(i, j)`` contributes ``v_i + w_j - 1`` for every ``x > b_i + c_j``.
    """
    pairs = []
    for a, f in zip(F.breakpoints, F.values):
        for c, g in zip(G.breakpoints, G.values):
            y = f + g - 1.0
            if y > 0:
                pairs.append((a + c, y))
    return DistanceDistribution._running_max(pairs)


def pointwise_max(fs) -> DistanceDistribution:
    # each F is a running max of its own steps, so the max of all is the running max of the union
    return DistanceDistribution._running_max([st for F in fs for st in F.steps()])


def pointwise_min(fs) -> DistanceDistribution:
    fs = list(fs)
    cuts = sorted({t for F in fs for t in F.breakpoints})
    steps = [(t, min(F.right_value(t) for F in fs)) for t in cuts]
    return DistanceDistribution.from_steps(steps)


class DDF(Quantale):
    """Distance distribution functions under the opposite pointwise order and ``[+]``.

    Comparisons allow a Levy-style slack ``tol`` in both the argument and the
    value; for inputs on a common dyadic grid every operation is exact.
    """

    name = "ddf"

    def contains(self, x) -> bool:
        return isinstance(x, DistanceDistribution)

    @property
    def zero(self):
        return EPS0

    @property
    def top(self):
        return ZERO_FUNCTION

    def leq(self, F, G) -> bool:
        """``F <= G`` in the quantale, i.e. ``G(t) <= F(t + tol) + tol`` for all ``t``."""
        self.check(F, G)
        tol = self.tol
        return all(w <= F.right_value(c + tol) + tol for c, w in zip(G.breakpoints, G.values))

    def meet(self, values):
        vals = list(values)
        self.check(*vals)
        return pointwise_max(vals) if vals else self.top

    def join(self, values):
        vals = list(values)
        self.check(*vals)
        return pointwise_min(vals) if vals else self.zero

    def meet2(self, a, b):
        return pointwise_max([a, b])

    def join2(self, a, b):
        return pointwise_min([a, b])

    def add(self, F, G):
        self.check(F, G)
        return boxplus(F, G)

    def way_above(self, F, G) -> bool:
        """Exact test for step functions: every step ``(b, v)`` of ``F`` has ``v < G(b)``.

        ``F`` is the pointwise join of the atoms ``v * 1_(b, inf)``; such an
        atom lies way below ``G`` pointwise exactly when ``v < G(b)``.
        """
        self.check(F, G)
        return all(v < G(b) for b, v in zip(F.breakpoints, F.values))

    def truncated_sub(self, q, p):
        """``q -. p`` as the largest left-continuous minorant of
        ``H(v) = min(1, min_i (1 - p_i + q((a_i + v)+)))``."""
        self.check(q, p)
        cuts = {0.0}
        for a in p.breakpoints:
            for c in q.breakpoints:
                if c >= a:
                    cuts.add(c - a)
        steps = []
        for v in sorted(cuts):
            h = 1.0
            for a, pv in zip(p.breakpoints, p.values):
                h = min(h, 1.0 - pv + q.right_value(a + v))
            steps.append((v, h))
        return DistanceDistribution.from_steps(steps)

    def halve(self, eps):
        self.check(eps)
        if not self.way_above(eps, EPS0):
            raise PreconditionError(f"halve needs eps >> eps0, got {eps!r}")
        if not eps.breakpoints:
            return DistanceDistribution((1.0,), (0.5,))
        b0, vmax = eps.breakpoints[0], eps.values[-1]
        return DistanceDistribution((b0 / 4,), ((3.0 + vmax) / 4,))

    def safa(self, n: int):
        h = 2.0 ** -n
        return DistanceDistribution.from_steps([(h, 1.0 - h)])

    def standard_families(self, b):
        def shifted(n, b=b):
            h = 2.0 ** -n
            return DistanceDistribution(tuple(t + h for t in b.breakpoints), b.values)

        def lowered(n, b=b):
            h = 2.0 ** -n
            return DistanceDistribution.from_steps((t, max(y - h, 0.0)) for t, y in b.steps())

        return super().standard_families(b) + [
            DescendingChain(shifted, b, "shift 2^-n"),
            DescendingChain(lowered, b, "lower 2^-n"),
        ]

    def parse(self, literal):
        if isinstance(literal, DistanceDistribution):
            return literal
        if isinstance(literal, str):
            s = literal.strip().lower()
            if s in ("eps0", "0"):
                return EPS0
            if s in ("inf", "top"):
                return ZERO_FUNCTION
            if s.startswith("["):
                try:
                    return self.parse(json.loads(s))
                except ValueError:
                    pass
            raise InstanceMismatch(f"cannot read {literal!r} as a distance distribution")
        try:
            return DistanceDistribution.from_steps((float(t), float(y)) for t, y in literal)
        except (TypeError, ValueError) as exc:
            raise InstanceMismatch(f"cannot read {literal!r} as a distance distribution: {exc}") from None

    def format(self, value) -> str:
        return "[" + ", ".join(f"[{b!r}, {v!r}]" for b, v in value.steps()) + "]"

    def random_value(self, rng):
        k = int(rng.integers(1, 4))
        bps = sorted(rng.choice(25, size=k, replace=False) / 8.0)
        vals = sorted((rng.choice(16, size=k, replace=False) + 1) / 16.0)
        return DistanceDistribution.from_steps(zip(bps, vals))
