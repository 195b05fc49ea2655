"""Seeded test sequences with interspersed zeros.

Every sample is reproducible from ``(seed, k)`` and declares its support, so
the zerofree version is always computable.
"""
from __future__ import annotations

import numpy as np

from .sequences import SCALAR, CoordinateSpace, ComputableSequence, Embedded, tabulated


def _vector_tail(coords: CoordinateSpace, direction: np.ndarray, fn):
    if coords.dim == 1:
        return fn
    return lambda n: fn(n)[:, None] * direction


def dense_samples(count: int, seed: int, depth: int, zero_fraction: float = 0.3,
                  coords: CoordinateSpace = SCALAR) -> list[ComputableSequence]:
    """Random coordinates up to ``depth + depth // 4``, then a nonzero n^-2 tail.

    Samples cycle through three zero patterns: random positions, every
    second index, and a finitely supported variant.
    """
    out = []
    size = depth + depth // 4
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        shape = (size,) if coords.dim == 1 else (size, coords.dim)
        table = rng.standard_normal(shape) * rng.uniform(0.1, 10.0)
        direction = rng.standard_normal(coords.dim)
        kind = k % 3
        if kind == 0:
            table[rng.random(size) < zero_fraction] = 0
        elif kind == 1:
            table[1::2] = 0
        else:
            table[rng.random(size) < zero_fraction] = 0
            table[size // 2:] = 0
            out.append(tabulated(table, None, coords, label=f"finite[{seed},{k}]"))
            continue
        tail = _vector_tail(coords, direction, lambda n: n ** -2.0)
        out.append(tabulated(table, tail, coords, label=f"dense[{seed},{k}]"))
    return out


def decaying_samples(count: int, seed: int, depth: int,
                     exponents: tuple = (0.3, 2.5)) -> list[ComputableSequence]:
    """c n^-alpha with multiplicative jitter, alpha drawn from ``exponents``.

    Odd-numbered samples live on a sparse pattern (nonzero at 3j - 1 only);
    the others carry random zeros in the tabulated head.
    """
    out = []
    size = depth + depth // 4
    lo, hi = exponents
    for k in range(count):
        rng = np.random.default_rng([seed, 1000 + k])
        alpha = float(rng.uniform(lo, hi))
        c = float(rng.uniform(0.1, 10.0))
        jitter = rng.uniform(0.5, 1.5, size)
        signs = rng.choice([-1.0, 1.0], size)
        if k % 2:
            def gen(n, alpha=alpha, c=c, jitter=jitter, signs=signs):
                out = np.zeros(n.shape)
                hit = n % 3 == 2
                j = (n[hit] + 1) // 3
                jj = np.minimum(j, size) - 1
                out[hit] = c * signs[jj] * jitter[jj] * j.astype(np.float64) ** -alpha
                return out
            positions = lambda j: 3 * np.asarray(j, dtype=np.int64) - 1
            out.append(ComputableSequence(gen, Embedded(positions),
                                          label=f"sparse-decay[{seed},{k},a={alpha:.3f}]"))
        else:
            n = np.arange(1, size + 1, dtype=np.float64)
            table = c * signs * jitter * n ** -alpha
            table[rng.random(size) < 0.3] = 0
            out.append(tabulated(table, lambda n, a=alpha, c=c: c * n ** -a,
                                 label=f"decay[{seed},{k},a={alpha:.3f}]"))
    return out
