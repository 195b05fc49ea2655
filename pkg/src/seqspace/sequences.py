"""Lazy X-valued sequences and the block-interleaving skeleton.

Sequences are indexed from 1.  A sequence never materializes more than the
coordinates somebody asks for: generators are vectorized maps from an int64
index array to values, shape ``(n,)`` for scalar coordinates and ``(n, d)``
for ``d``-dimensional ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "CoordinateSpace", "SCALAR", "Support", "Finite", "AllNonzero", "Embedded",
    "Unknown", "ComputableSequence", "Combination", "BlockPartition", "BLOCKS",
    "UndecidableSupport", "IndexOverflow", "evaluate", "zerofree", "block_index",
    "block_of", "interleave", "combine", "truncate", "block_restriction",
    "zero_sequence", "from_formula", "tabulated",
]

INDEX_MAX = np.iinfo(np.int64).max
EVAL_CHUNK = 1 << 20


class UndecidableSupport(ValueError):
    """Zero pattern of a sequence cannot be decided from its declared support."""


class IndexOverflow(OverflowError):
    """An index does not fit in int64; the requested truncation depth is too large."""


@dataclass(frozen=True)
class CoordinateSpace:
    """``K^d`` with the ``exponent``-(quasi)norm, standing in for the Banach space X."""

    dim: int = 1
    exponent: float = 2.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if not self.exponent > 0:
            raise ValueError(f"norm exponent must be in (0, inf], got {self.exponent}")

    def norms(self, values: np.ndarray) -> np.ndarray:
        """Coordinate norms of a block of values, shape ``(n,)``."""
        values = np.asarray(values)
        if self.dim == 1:
            return np.abs(values).astype(np.float64, copy=False)
        a = np.abs(values)
        r = self.exponent
        if math.isinf(r):
            return a.max(axis=-1)
        if r == 1:
            return a.sum(axis=-1)
        if r == 2:
            return np.sqrt((a * a).sum(axis=-1))
        return (a ** r).sum(axis=-1) ** (1.0 / r)

    def norm(self, v) -> float:
        return float(self.norms(np.asarray(v).reshape(1, *(() if self.dim == 1 else (self.dim,))))[0])


SCALAR = CoordinateSpace(1)


# Support metadata.  "Finitely many nonzero coordinates" is undecidable for
# a black-box generator, so every sequence carries one of these.

class Support:
    pass


@dataclass(frozen=True)
class Finite(Support):
    """Coordinates beyond ``bound`` are exactly zero."""
    bound: int


@dataclass(frozen=True)
class AllNonzero(Support):
    """Every coordinate with index > ``after`` is nonzero; ``after=0`` means all."""
    after: int = 0


@dataclass(frozen=True)
class Embedded(Support):
    """Nonzero exactly at ``positions(j)``, j = 1, 2, ..., a strictly increasing map."""
    positions: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Unknown(Support):
    pass


@dataclass(frozen=True, eq=False)
class ComputableSequence:
    """A deterministic map n -> X with declared support.

    ``fn`` takes an int64 array of indices (all >= 1) and returns the values.
    ``overrides`` take precedence over ``fn`` at the listed indices.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    support: Support = field(default_factory=Unknown)
    coords: CoordinateSpace = SCALAR
    overrides: tuple = ()
    label: str = ""

    @property
    def dim(self) -> int:
        return self.coords.dim

    def at(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and idx.min() < 1:
            raise ValueError("sequence indices start at 1")
        out = np.asarray(self.fn(idx))
        if self.dim == 1:
            out = np.broadcast_to(out, idx.shape)
        else:
            out = np.broadcast_to(out, idx.shape + (self.dim,))
        if self.overrides:
            out = np.array(out, dtype=np.result_type(out, *[np.asarray(v) for _, v in self.overrides]))
            for k, v in self.overrides:
                out[idx == k] = v
        return out

    def values(self, start: int, stop: int) -> np.ndarray:
        """Coordinates ``start, ..., stop - 1``."""
        if stop - 1 > INDEX_MAX:
            raise IndexOverflow(f"index {stop - 1} exceeds int64")
        return self.at(np.arange(start, stop, dtype=np.int64))

    def norms(self, start: int, stop: int) -> np.ndarray:
        return self.coords.norms(self.values(start, stop))

    def chunks(self, stop: int, start: int = 1, size: int = EVAL_CHUNK):
        """Yield ``(first_index, values)`` blocks covering ``start .. stop - 1``."""
        lo = start
        while lo < stop:
            hi = min(stop, lo + size)
            yield lo, self.values(lo, hi)
            lo = hi

    def __call__(self, n: int):
        return evaluate(self, n)

    def __repr__(self):
        return f"ComputableSequence({self.label or '<anonymous>'}, support={self.support})"


def _zeros_like_fn(coords: CoordinateSpace):
    if coords.dim == 1:
        return lambda n: np.zeros(n.shape)
    return lambda n: np.zeros(n.shape + (coords.dim,))


def zero_sequence(coords: CoordinateSpace = SCALAR) -> ComputableSequence:
    return ComputableSequence(_zeros_like_fn(coords), Finite(0), coords, label="0")


def from_formula(fn, support: Support | None = None, coords: CoordinateSpace = SCALAR,
                 label: str = "", overrides: Sequence = ()) -> ComputableSequence:
    """Wrap a vectorized formula of the float index ``n``."""
    def gen(n):
        return fn(n.astype(np.float64))
    return ComputableSequence(gen, support if support is not None else Unknown(), coords,
                              tuple(overrides), label)


def tabulated(table, tail=None, coords: CoordinateSpace = SCALAR, label: str = "") -> ComputableSequence:
    """Sequence given by ``table`` for n <= len(table), then ``tail(n)``.

    With ``tail=None`` the sequence has finite support.  Otherwise ``tail``
    must be nonzero everywhere; the support is then declared as
    ``AllNonzero(after=len(table))``.
    """
    table = np.array(table, dtype=np.result_type(np.asarray(table), np.float64))
    size = len(table)
    if tail is None:
        nz = np.flatnonzero(coords.norms(table)) if size else np.array([], dtype=np.int64)
        bound = int(nz[-1]) + 1 if nz.size else 0

        def gen(n):
            out = np.zeros(n.shape + table.shape[1:], dtype=table.dtype)
            inside = n <= size
            out[inside] = table[n[inside] - 1]
            return out
        return ComputableSequence(gen, Finite(bound), coords, label=label)

    def gen(n):
        out = np.empty(n.shape + table.shape[1:], dtype=table.dtype)
        inside = n <= size
        out[inside] = table[n[inside] - 1]
        if not inside.all():
            out[~inside] = tail(n[~inside].astype(np.float64))
        return out
    return ComputableSequence(gen, AllNonzero(after=size), coords, label=label)


def evaluate(x: ComputableSequence, n: int):
    """The n-th coordinate of ``x``: a float for scalar sequences, else a d-vector."""
    if n < 1:
        raise ValueError("sequence indices start at 1")
    v = x.at(np.array([n], dtype=np.int64))[0]
    return v.item() if x.dim == 1 else np.array(v)


def truncate(x: ComputableSequence, N: int) -> np.ndarray:
    """First ``N`` coordinates as an array of length ``N``."""
    if N < 1:
        raise ValueError("truncation depth must be >= 1")
    return np.array(x.values(1, N + 1))


# -- zerofree version --------------------------------------------------------

def _nonzero_positions(x: ComputableSequence, upto: int) -> np.ndarray:
    found = []
    for lo, vals in x.chunks(upto + 1):
        nz = np.flatnonzero(x.coords.norms(vals))
        found.append(nz + lo)
    return np.concatenate(found) if found else np.array([], dtype=np.int64)


def _scanned_zerofree(x: ComputableSequence, bound: int) -> ComputableSequence:
    """Zerofree version when every coordinate beyond ``bound`` is nonzero."""
    head = _nonzero_positions(x, bound)
    k = len(head)

    def positions(j):
        j = np.asarray(j, dtype=np.int64)
        out = np.empty_like(j)
        inside = j <= k
        out[inside] = head[j[inside] - 1]
        out[~inside] = bound + (j[~inside] - k)
        return out

    def gen(j):
        return x.at(positions(j))
    return ComputableSequence(gen, AllNonzero(), x.coords, label=f"{x.label}^0")


def zerofree(x: ComputableSequence, scan_bound: int | None = None) -> ComputableSequence:
    """Zerofree version x^0: the nonzero coordinates of ``x``, in order.

    Returns the zero sequence when ``x`` has only finitely many nonzero
    coordinates.  ``scan_bound`` is the caller's guarantee that every
    coordinate beyond it is nonzero; it is required when the declared support
    is ``Unknown``.
    """
    s = x.support
    if isinstance(s, Finite):
        # overrides are finitely many, so the support stays finite
        return zero_sequence(x.coords)
    if scan_bound is not None:
        return _scanned_zerofree(x, max([scan_bound] + [k for k, _ in x.overrides]))
    if isinstance(s, AllNonzero):
        zero_over = [k for k, v in x.overrides if x.coords.norm(v) == 0]
        bound = max([s.after] + zero_over)
        if bound == 0:
            return x
        return _scanned_zerofree(x, bound)
    if isinstance(s, Embedded):
        if x.overrides:
            raise UndecidableSupport("overrides on an embedded-support sequence; supply scan_bound")

        def gen(j):
            return x.at(s.positions(np.asarray(j, dtype=np.int64)))
        return ComputableSequence(gen, AllNonzero(), x.coords, label=f"{x.label}^0")
    raise UndecidableSupport(
        f"cannot decide the zero pattern of {x!r}; declare support or pass scan_bound")


# -- partition of N into blocks ---------------------------------------------

def block_index(i: int, j: int) -> int:
    """Position of the j-th element of the i-th block: 2^(i-1) * (2j - 1)."""
    if i < 1 or j < 1:
        raise ValueError("block coordinates start at 1")
    n = (1 << (i - 1)) * (2 * j - 1)
    if n > INDEX_MAX:
        raise IndexOverflow(f"block_index({i}, {j}) = {n} exceeds int64")
    return n


def block_of(n: int) -> tuple[int, int]:
    """Inverse of :func:`block_index`."""
    if n < 1:
        raise ValueError("indices start at 1")
    low = n & -n
    return low.bit_length(), (n // low + 1) // 2


def block_index_array(i, j) -> np.ndarray:
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    if np.any(i < 1) or np.any(j < 1):
        raise ValueError("block coordinates start at 1")
    # 2^(i-1) * (2j - 1) <= INDEX_MAX  <=>  2j - 1 <= INDEX_MAX >> (i - 1)
    if np.any(i > 63) or np.any(2 * j - 1 > (INDEX_MAX >> np.minimum(i - 1, 62))):
        raise IndexOverflow("block index exceeds int64")
    return np.left_shift(np.int64(1), i - 1) * (2 * j - 1)


def block_of_array(n) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(n, dtype=np.int64)
    low = n & -n
    odd = n // low
    i = np.zeros_like(n)
    # trailing-zero count; low is an exact power of two so log2 is exact
    i[:] = np.log2(low.astype(np.float64)).astype(np.int64) + 1
    return i, (odd + 1) // 2


@dataclass(frozen=True)
class BlockPartition:
    """N split into infinitely many infinite blocks N_i = {2^(i-1)(2j-1) : j >= 1}."""

    def index(self, i: int, j: int) -> int:
        return block_index(i, j)

    def of(self, n: int) -> tuple[int, int]:
        return block_of(n)

    def count_upto(self, i: int, depth: int) -> int:
        """How many elements of block i are <= depth."""
        return (depth // (1 << (i - 1)) + 1) // 2


BLOCKS = BlockPartition()


def interleave(x0: ComputableSequence, i: int) -> ComputableSequence:
    """y_i: x0_j placed at block_index(i, j), zero elsewhere."""
    if i < 1:
        raise ValueError("block numbers start at 1")
    zeros = _zeros_like_fn(x0.coords)
    step = 1 << (i - 1)

    def gen(n):
        out = zeros(n)
        hit = (n % (2 * step)) == step
        if hit.any():
            out = np.array(out, dtype=np.result_type(out, x0.at(np.array([1], dtype=np.int64))))
            out[hit] = x0.at((n[hit] // step + 1) // 2)
        return out

    def positions(j):
        return block_index_array(np.full_like(j, i), j)

    support = Embedded(positions) if isinstance(x0.support, AllNonzero) and x0.support.after == 0 \
        else Unknown()
    return ComputableSequence(gen, support, x0.coords, label=f"y_{i}[{x0.label}]")


@dataclass(frozen=True, eq=False, kw_only=True)
class Combination(ComputableSequence):
    """z = sum_i a_i y_i, evaluated blockwise with one multiplication per coordinate."""

    coefficients: tuple = ()
    x0: ComputableSequence | None = None
    partition: BlockPartition = BLOCKS

    @property
    def m(self) -> int:
        return len(self.coefficients)

    def block(self, i: int) -> ComputableSequence:
        return block_restriction(self, i)


def combine(a: Sequence, x0: ComputableSequence) -> Combination:
    """The finite combination sum_{i <= len(a)} a_i y_i built from a zerofree witness."""
    coeffs = tuple(a)
    m = len(coeffs)
    arr = np.array(coeffs) if m else np.zeros(0)
    zeros = _zeros_like_fn(x0.coords)

    def gen(n):
        out = zeros(n)
        if m == 0:
            return out
        i, j = block_of_array(n)
        hit = i <= m
        if hit.any():
            vals = x0.at(j[hit])
            c = arr[i[hit] - 1]
            if x0.dim > 1:
                c = c[:, None]
            prod = c * vals
            out = np.array(out, dtype=np.result_type(out, prod))
            out[hit] = prod
        return out

    support = Finite(0) if not any(coeffs) else Unknown()
    return Combination(fn=gen, support=support, coords=x0.coords,
                       label=f"z[{x0.label}]", coefficients=coeffs, x0=x0)


def block_restriction(x: ComputableSequence, i: int) -> ComputableSequence:
    """j -> x_{block_index(i, j)}: the coordinates of ``x`` sitting in block i."""
    if isinstance(x, Combination) and x.x0 is not None:
        # same single product a_i * x0_j that combine() computes, minus the index round trip
        x0 = x.x0
        c = x.coefficients[i - 1] if i <= x.m else 0.0

        def direct(j):
            return c * x0.at(j)
        return ComputableSequence(direct, Unknown(), x.coords, label=f"{x.label}|block{i}")

    def gen(j):
        return x.at(block_index_array(np.full_like(j, i), j))
    return ComputableSequence(gen, Unknown(), x.coords, label=f"{x.label}|block{i}")
