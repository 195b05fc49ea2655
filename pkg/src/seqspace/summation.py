"""Deterministic accumulation of long nonnegative series.

Terms are grouped into fixed chunks of ``CHUNK`` *nonzero* terms, each chunk
reduced with numpy's pairwise sum, and the chunk totals combined with
``math.fsum``.  Zeros are dropped before chunking, so a sequence and any
re-indexing of it that only inserts zeros reduce to bit-identical values, and
the result does not depend on how the caller slices its input.

``ChunkedSum(extended=True)`` runs the same scheme in x87 extended precision
(chunk totals then combined in a fixed pairwise order); callers use it when a
final root would amplify double rounding, as in p-norms with p < 1.
"""
from __future__ import annotations

import math

import numpy as np

CHUNK = 1 << 16


class ChunkedSum:
    def __init__(self, extended: bool = False):
        self.extended = extended
        self._dtype = np.longdouble if extended else np.float64
        self._totals: list = []
        self._buf = np.zeros(0, dtype=self._dtype)
        self.count = 0  # nonzero terms absorbed so far

    def _partial(self, extra=None):
        buf = self._buf if extra is None else np.concatenate([self._buf, extra])
        if self.extended:
            return np.sum(np.array(self._totals + [np.sum(buf)], dtype=np.longdouble))
        return math.fsum(self._totals + [float(np.sum(buf))])

    def value(self) -> float:
        return float(self._partial())

    def raw_value(self):
        """The running total at working precision (np.longdouble when extended)."""
        return self._partial()

    def _commit(self, terms: np.ndarray) -> None:
        self.count += len(terms)
        pos = 0
        while pos < len(terms):
            room = CHUNK - len(self._buf)
            piece = terms[pos:pos + room]
            self._buf = np.concatenate([self._buf, piece])
            pos += len(piece)
            if len(self._buf) == CHUNK:
                total = np.sum(self._buf)
                self._totals.append(total if self.extended else float(total))
                self._buf = np.zeros(0, dtype=self._dtype)

    def add(self, terms) -> "ChunkedSum":
        terms = np.asarray(terms, dtype=self._dtype).ravel()
        self._commit(terms[terms != 0])
        return self

    def add_until(self, terms, threshold: float) -> int | None:
        """Absorb ``terms`` until the running value first exceeds ``threshold``.

        Returns the 0-based position in ``terms`` of the term that pushed the
        value over, or None if the value is still <= threshold after all of
        them.  On a crossing, terms after that position are not absorbed.
        """
        terms = np.asarray(terms, dtype=self._dtype).ravel()
        where = np.flatnonzero(terms)
        nz = terms[where]
        pos = 0
        while pos < len(nz):
            piece = nz[pos:pos + CHUNK - len(self._buf)]
            if self._partial(piece) > threshold:
                k = self._locate(piece, threshold)
                self._commit(piece[:k])
                return int(where[pos + k - 1])
            self._commit(piece)
            pos += len(piece)
        return None

    def _locate(self, piece: np.ndarray, threshold: float) -> int:
        # cumsum gives a candidate; the defining reduction settles the exact spot
        base = self._partial()
        k = int(np.argmax(base + np.cumsum(piece) > threshold)) + 1
        while k > 1 and self._partial(piece[:k - 1]) > threshold:
            k -= 1
        while self._partial(piece[:k]) <= threshold:
            k += 1
        return k


def stable_sum(terms) -> float:
    """Deterministic sum of nonnegative terms (see module docstring)."""
    return ChunkedSum().add(terms).value()
