"""Deterministic, boundary-first value streams for law checking."""

from __future__ import annotations

import os
from itertools import islice
from typing import Iterator

import numpy as np

from qmetric.quantales import Quantale

SEED_ENV = "QMETRIC_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def seeded_sampler(seed: int, q: Quantale) -> Iterator:
    """Yield ``zero``, ``top`` and the first SAFA terms, then pseudo-random values forever.

    Finite lattices yield every element once before random draws.  The
    stream depends only on ``seed`` and the quantale.
    """
    yield from q.boundary()
    rng = np.random.default_rng(seed)
    while True:
        yield q.random_value(rng)


def sample_pool(q: Quantale, size: int, seed: int) -> list:
    return list(islice(seeded_sampler(seed, q), size))
