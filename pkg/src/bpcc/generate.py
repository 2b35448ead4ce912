"""Synthetic instance generators for tests and experiments."""

from __future__ import annotations

import random

from .instance_io import CategoryScheme, DerivationSpec, derive_bpcc
from .model import TABLE1, CompatibilityMatrix, Instance


def random_weights(rng: random.Random, n: int, b: int, lo: float = 0.05, hi: float = 0.7) -> list[int]:
    """``n`` integer weights drawn uniformly from ``[lo*b, hi*b]`` (clamped to ``1..b``)."""
    low = max(1, int(lo * b))
    high = max(low, min(b, int(hi * b)))
    return [rng.randint(low, high) for _ in range(n)]


def random_instance(
    seed: int,
    n: int,
    b: int = 100,
    capacity_factor: float = 100,
    scheme: CategoryScheme | str = CategoryScheme.UNIFORM_RANDOM,
    matrix: CompatibilityMatrix = TABLE1,
    lo: float = 0.05,
    hi: float = 0.7,
) -> Instance:
    """A classical instance with capacity ``b``, then derived like the benchmark sets."""
    rng = random.Random(seed)
    weights = random_weights(rng, n, b, lo, hi)
    spec = DerivationSpec(capacity_factor, scheme, matrix.p, seed, matrix)
    return derive_bpcc((n, b, weights), spec, name=f"rand-{seed}-n{n}")


def random_matrix(rng: random.Random, p: int, density: float = 0.5) -> CompatibilityMatrix:
    """Symmetric reflexive 0/1 matrix with off-diagonal ones at rate ``density``."""
    rows = [[1 if k == l else 0 for l in range(p)] for k in range(p)]
    for k in range(p):
        for l in range(k + 1, p):
            if rng.random() < density:
                rows[k][l] = rows[l][k] = 1
    return CompatibilityMatrix(tuple(tuple(r) for r in rows))


def hard_bpp(seed: int, n: int = 200, b: int = 10_000) -> tuple[int, int, list[int]]:
    """Weights concentrated between b/3 and b/2, the regime where FFD wastes space."""
    rng = random.Random(seed)
    return n, b, [rng.randint(-(-b // 3), b // 2) for _ in range(n)]
