"""Spaces of operators attaining their norm at a fixed point x0.

An operator u: (K^d, ||.||_r) -> l_q is stored as a matrix whose rows are
the nonzero output coordinates, together with the l_q positions of those
rows.  Lifting relocates row j to position block_index(k, j), so different
lifts have disjoint output supports and T(a) = sum a_k u^(k) satisfies
||T(a) x||_q = ||a||_q ||u x||_q exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .sequences import block_index
from .summation import stable_sum

__all__ = [
    "FiniteOperator", "AttainmentPoint", "LiftedFamily", "AttainmentReport",
    "DegenerateDirection", "make_attaining", "lift", "na_combine", "attainment_check",
    "family_independence", "operator_norm", "unit_sphere_samples", "vector_norm",
]


class DegenerateDirection(ValueError):
    pass


def vector_norm(v, r: float, axis: int = -1):
    """r-norm along ``axis``; r = inf is the max norm."""
    a = np.abs(np.asarray(v, dtype=np.float64))
    if math.isinf(r):
        return a.max(axis=axis)
    if r == 1:
        return a.sum(axis=axis)
    if r == 2:
        return np.sqrt((a * a).sum(axis=axis))
    return (a ** r).sum(axis=axis) ** (1.0 / r)


def _lq(values: np.ndarray, q: float) -> float:
    a = np.abs(np.ravel(values))
    if math.isinf(q):
        return float(a.max(initial=0.0))
    return stable_sum(a ** q) ** (1.0 / q)


@dataclass(frozen=True, eq=False)
class FiniteOperator:
    """u: (K^d, ||.||_r) -> l_q with finitely many nonzero output coordinates."""

    matrix: np.ndarray  # shape (rows, d)
    r: float  # domain norm exponent
    q: float  # target exponent, 1 <= q < inf
    positions: tuple = ()  # l_q index of each row; defaults to 1..rows

    def __post_init__(self):
        mat = np.atleast_2d(np.asarray(self.matrix, dtype=np.float64))
        object.__setattr__(self, "matrix", mat)
        if not self.positions:
            object.__setattr__(self, "positions", tuple(range(1, mat.shape[0] + 1)))
        if len(self.positions) != mat.shape[0]:
            raise ValueError("one output position per row")
        if len(set(self.positions)) != len(self.positions) or min(self.positions) < 1:
            raise ValueError("output positions must be distinct and >= 1")
        if not (1 <= self.q < math.inf):
            raise ValueError("target exponent q must lie in [1, inf)")
        if not self.r >= 1:
            raise ValueError("domain exponent r must lie in [1, inf]")

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    def apply(self, x) -> dict:
        """u(x) as a sparse l_q vector {position: value}."""
        vals = self.matrix @ np.asarray(x, dtype=np.float64)
        return dict(zip(self.positions, vals))

    def image_norm(self, x) -> float:
        return _lq(self.matrix @ np.asarray(x, dtype=np.float64), self.q)

    def image_norms(self, X: np.ndarray) -> np.ndarray:
        """||u(x)||_q for every row x of X."""
        Y = np.asarray(X, dtype=np.float64) @ self.matrix.T
        return vector_norm(Y, self.q, axis=1)


@dataclass(frozen=True)
class AttainmentPoint:
    x0: tuple
    r: float

    def __post_init__(self):
        nrm = float(vector_norm(self.x0, self.r))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"attainment point must have norm 1, got {nrm!r}")

    @classmethod
    def normalized(cls, v, r: float) -> "AttainmentPoint":
        v = np.asarray(v, dtype=np.float64)
        nrm = float(vector_norm(v, r))
        if nrm == 0:
            raise DegenerateDirection("cannot normalize the zero vector")
        return cls(tuple(v / nrm), r)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.x0)


def norming_functional(x0: AttainmentPoint) -> np.ndarray:
    """phi with ||phi||_{r'} = 1 and phi(x0) = ||x0||_r = 1."""
    v = x0.vector
    r = x0.r
    if not np.any(v):
        raise DegenerateDirection("x0 = 0 has no norming functional")
    if r == 1:
        return np.sign(v)
    if math.isinf(r):
        k = int(np.argmax(np.abs(v)))
        phi = np.zeros_like(v)
        phi[k] = np.sign(v[k])
        return phi
    return np.sign(v) * np.abs(v) ** (r - 1)


def make_attaining(x0: AttainmentPoint, w, q: float, positions: Sequence[int] = ()) -> FiniteOperator:
    """Rank-one u(x) = phi(x) w with phi norming x0; ||u|| = ||w||_q = ||u(x0)||_q."""
    w = np.asarray(w, dtype=np.float64).ravel()
    if not np.any(w):
        raise ValueError("w must be a nonzero element of l_q")
    phi = norming_functional(x0)
    return FiniteOperator(np.outer(w, phi), x0.r, q, tuple(positions))


def lift(u: FiniteOperator, k: int) -> FiniteOperator:
    """u^(k): output row at l_q position j moves to block_index(k, j)."""
    if k < 1:
        raise ValueError("block numbers start at 1")
    return FiniteOperator(u.matrix, u.r, u.q, tuple(block_index(k, j) for j in u.positions))


@dataclass(frozen=True, eq=False)
class LiftedFamily:
    """T(a) = sum_k a_k u^(k)."""

    base: FiniteOperator
    lifts: tuple
    coefficients: tuple

    @property
    def m(self) -> int:
        return len(self.coefficients)

    def operator(self) -> FiniteOperator:
        """T(a) as one FiniteOperator (rows of all lifts stacked)."""
        rows = [a * L.matrix for a, L in zip(self.coefficients, self.lifts)]
        pos = [p for L in self.lifts for p in L.positions]
        return FiniteOperator(np.vstack(rows), self.base.r, self.base.q, tuple(pos))

    def apply(self, x) -> dict:
        out = {}
        for a, L in zip(self.coefficients, self.lifts):
            for pos, val in L.apply(x).items():
                assert pos not in out, "lift supports overlap"
                out[pos] = a * val
        return out

    def image_norm(self, x) -> float:
        return _lq(np.array(list(self.apply(x).values())), self.base.q)

    def analytic_norm_at(self, x) -> float:
        """||a||_q ||u(x)||_q."""
        return _lq(np.array(self.coefficients), self.base.q) * self.base.image_norm(x)

    def piece_norms(self) -> list[float]:
        """Operator norms ||a_k u^(k)||."""
        return [abs(a) * operator_norm(L) for a, L in zip(self.coefficients, self.lifts)]


def na_combine(a: Sequence[float], u: FiniteOperator) -> LiftedFamily:
    coeffs = tuple(float(v) for v in a)
    return LiftedFamily(u, tuple(lift(u, k) for k in range(1, len(coeffs) + 1)), coeffs)


def operator_norm(u: FiniteOperator) -> float:
    """Exact ||u|| where a closed form exists, else ValueError.

    r = 1: largest column q-norm.  r = q = 2: largest singular value.
    Rank one: ||phi||_{r'} ||w||_q.
    """
    M = u.matrix
    if u.r == 1:
        return float(vector_norm(M, u.q, axis=0).max())
    if u.r == 2 and u.q == 2:
        return float(np.linalg.norm(M, 2))
    U, s, Vt = np.linalg.svd(M)
    if s.size and (s.size == 1 or s[1] <= 1e-14 * s[0]):
        w = U[:, 0] * s[0]
        phi = Vt[0]
        r = u.r
        rdual = 1.0 if math.isinf(r) else (math.inf if r == 1 else r / (r - 1))
        return float(vector_norm(phi, rdual)) * _lq(w, u.q)
    raise ValueError("no closed-form operator norm; use sampled mode")


def unit_sphere_samples(d: int, r: float, count: int, seed: int = 0) -> np.ndarray:
    """``count`` points on the unit sphere of (R^d, ||.||_r), seeded."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((count, d))
    return X / vector_norm(X, r, axis=1)[:, None]


@dataclass
class AttainmentReport:
    d: int
    r: float
    q: float
    m: int
    max_ratio: float
    analytic_norm: float
    attained: float
    samples: int
    seed: int
    mode: str
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.attained + self.tol

    def to_record(self) -> dict:
        return {"d": self.d, "r": _num(self.r), "q": self.q, "m": self.m,
                "max_ratio": self.max_ratio, "analytic_norm": self.analytic_norm,
                "samples": self.samples, "seed": self.seed}


def _num(v):
    return "inf" if isinstance(v, float) and math.isinf(v) else v


def attainment_check(fam: LiftedFamily, x0: AttainmentPoint, samples: int | None = 10_000,
                     seed: int = 0, tol: float = 1e-9) -> AttainmentReport:
    """Compare ||T(a)|| (exact or sampled) with ||T(a)(x0)||.

    ``samples=None`` selects exact mode, available for r = 1 and for
    r = 2 with rank-one or Hilbert-target operators.
    """
    T = fam.operator()
    attained = fam.image_norm(x0.vector)
    analytic = fam.analytic_norm_at(x0.vector)
    if samples is None:
        best = operator_norm(T)
        mode, count = "exact", 0
    else:
        X = unit_sphere_samples(T.d, T.r, samples, seed)
        best = float(T.image_norms(X).max())
        mode, count = "sampled", samples
    return AttainmentReport(T.d, T.r, T.q, fam.m, best, analytic, attained, count, seed, mode, tol)


def family_independence(u: FiniteOperator, coefficient_vectors: Sequence[Sequence[float]]) -> bool:
    """Whether T(a^(1)), ..., T(a^(n)) are linearly independent.

    Lifts occupy disjoint blocks, so for u != 0 this is independence of the
    coefficient vectors themselves.
    """
    if not np.any(u.matrix):
        return False
    vecs = [list(map(float, v)) for v in coefficient_vectors]
    if not vecs:
        return True
    width = max(len(v) for v in vecs)
    A = np.zeros((len(vecs), width))
    for i, v in enumerate(vecs):
        A[i, :len(v)] = v
    return int(np.linalg.matrix_rank(A)) == len(vecs)
