"""Finite-depth evaluation of sequence-space (quasi-)norms, with certificates.

Everything here works on truncations.  A :class:`PartialNormReport` with
direction ``"partial"`` is a lower bound for the true value of a sum-type
norm; ``"certified-upper"`` adds a rigorous tail bound from an envelope.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .sequences import ComputableSequence, EVAL_CHUNK, Finite, zerofree
from .summation import ChunkedSum

__all__ = [
    "NonFinite", "EnvelopeDiverges", "ZeroSequence", "NoBracket",
    "MissingMembershipCertificate", "PartialNormReport", "PowerLogEnvelope",
    "GeometricEnvelope",
    "DivergenceCertificate", "OrliczFunction", "SpaceDescriptor",
    "lp_power_sum", "lp_partial", "lp_tail_upper_bound", "lp_certified",
    "divergence_certificate", "lorentz_partial", "lorentz_certified",
    "orlicz_luxemburg", "check_axioms", "reports_to_csv", "orlicz_function",
    "ORLICZ_CATALOG",
]


class NonFinite(ArithmeticError):
    pass


class EnvelopeDiverges(ValueError):
    """The envelope's tail series diverges, so it certifies nothing."""


class ZeroSequence(ValueError):
    pass


class NoBracket(ArithmeticError):
    """Could not find rho values on both sides of the Luxemburg level set."""


class MissingMembershipCertificate(ValueError):
    pass


@dataclass
class PartialNormReport:
    value: float
    depth: int
    direction: str = "partial"  # or "certified-upper"
    family: str = "lp"
    params: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "depth": self.depth,
                "value": self.value, "direction": self.direction}


CSV_COLUMNS = ("family", "p", "q", "N", "value", "direction")


def reports_to_csv(reports: Iterable[PartialNormReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([r.family, r.params.get("p", ""), r.params.get("q", ""), r.depth,
                    repr(r.value), r.direction])
    return buf.getvalue()


def _checked(norms: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(norms)):
        raise NonFinite("coordinate norm is NaN or infinite")
    return norms


def _norm_chunks(x: ComputableSequence, N: int, start: int = 1, size: int = EVAL_CHUNK):
    for lo, vals in x.chunks(N + 1, start=start, size=size):
        yield lo, _checked(x.coords.norms(vals))


# -- l_q ---------------------------------------------------------------------

def lp_power_sum(x: ComputableSequence, q: float, N: int) -> float:
    """sum_{n <= N} ||x_n||^q, deterministic compensated reduction."""
    if N < 1:
        raise ValueError("depth must be >= 1")
    acc = ChunkedSum()
    for _, nrm in _norm_chunks(x, N):
        acc.add(nrm ** q)
    return acc.value()


def lp_partial(x: ComputableSequence, q: float, N: int) -> PartialNormReport:
    if N < 1:
        raise ValueError("depth must be >= 1")
    if math.isinf(q):
        value = 0.0
        for _, nrm in _norm_chunks(x, N):
            value = max(value, float(nrm.max()))
    else:
        # extended precision keeps value(c x) = |c| value(x) within 2 ulp even
        # when the 1/q root amplifies rounding (q < 1)
        acc = ChunkedSum(extended=True)
        ld_q = np.longdouble(q)
        for _, nrm in _norm_chunks(x, N):
            acc.add(nrm.astype(np.longdouble) ** ld_q)
        value = float(acc.raw_value() ** (np.longdouble(1) / ld_q))
    return PartialNormReport(value, N, "partial", "lp", {"p": q})


@dataclass(frozen=True)
class PowerLogEnvelope:
    """g(n) = scale * n^(-alpha) * log(n + 1)^(-beta), non-increasing for alpha, beta >= 0."""

    scale: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.scale <= 0 or self.alpha < 0 or self.beta < 0:
            raise ValueError("envelope needs scale > 0 and alpha, beta >= 0")

    def __call__(self, n):
        n = np.asarray(n, dtype=np.float64)
        out = self.scale * n ** -self.alpha
        if self.beta:
            out = out * np.log1p(n) ** -self.beta
        return out

    def sup_beyond(self, N: int) -> float:
        return float(self(N + 1))

    def weighted_tail(self, q: float, N: int, weight: float = 0.0) -> float:
        """Upper bound on sum_{n > N} n^weight * g(n)^q by the integral test."""
        if N < 2:
            raise ValueError("tail bounds need N >= 2")
        a = self.alpha * q - weight
        b = self.beta * q
        if abs(a - 1.0) <= 1e-12:
            a = 1.0
        if a < 1.0 or (a == 1.0 and b <= 1.0):
            raise EnvelopeDiverges(f"sum n^-{a} log(n+1)^-{b} diverges")
        c = self.scale ** q
        bounds = []
        if a > 1.0:
            # log(t+1)^-b <= log(N+1)^-b on [N, inf)
            bounds.append(math.log(N + 1) ** -b * N ** (1.0 - a) / (a - 1.0))
        if b > 1.0:
            # t^-a <= t^-1 and log(t+1) >= log t on [N, inf), N >= 2
            bounds.append(math.log(N) ** (1.0 - b) / (b - 1.0))
        return c * min(bounds)

    def to_record(self) -> dict:
        return {"scale": self.scale, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class GeometricEnvelope:
    """g(n) = scale * ratio^n with 0 < ratio < 1."""

    scale: float = 1.0
    ratio: float = 0.5

    def __post_init__(self):
        if self.scale <= 0 or not 0 < self.ratio < 1:
            raise ValueError("geometric envelope needs scale > 0 and 0 < ratio < 1")

    def __call__(self, n):
        return self.scale * self.ratio ** np.asarray(n, dtype=np.float64)

    def sup_beyond(self, N: int) -> float:
        return float(self(N + 1))

    def weighted_tail(self, q: float, N: int, weight: float = 0.0) -> float:
        """Exact sum_{n > N} g(n)^q; only the unweighted case is supported."""
        if weight:
            raise ValueError("weighted tails are only implemented for power-log envelopes")
        rq = self.ratio ** q
        return self.scale ** q * rq ** (N + 1) / (1.0 - rq)

    def to_record(self) -> dict:
        return {"scale": self.scale, "ratio": self.ratio}


def _check_dominated(x: ComputableSequence, envelope, lo: int, hi: int) -> None:
    if hi < lo:
        return
    for start, nrm in _norm_chunks(x, hi, start=lo):
        n = np.arange(start, start + len(nrm))
        g = envelope(n)
        bad = nrm > g * (1 + 4 * np.finfo(float).eps)
        if bad.any():
            k = int(n[np.argmax(bad)])
            raise ValueError(f"envelope does not dominate the sequence at n = {k}")


def lp_tail_upper_bound(x: ComputableSequence, q: float, N: int, envelope,
                        check_window: int = 1000) -> float:
    """Upper bound on sum_{n > N} ||x_n||^q from a dominating envelope.

    Domination is the caller's guarantee; it is spot-checked on
    ``(N, N + check_window]``.
    """
    _check_dominated(x, envelope, N + 1, N + check_window)
    return envelope.weighted_tail(q, N)


def lp_certified(x: ComputableSequence, q: float, N: int, envelope,
                 check_window: int = 1000) -> PartialNormReport:
    """Certified upper bound for ||x||_q: partial sum plus envelope tail."""
    if math.isinf(q):
        _check_dominated(x, envelope, N + 1, N + check_window)
        value = max(lp_partial(x, q, N).value, envelope.sup_beyond(N))
    else:
        tail = lp_tail_upper_bound(x, q, N, envelope, check_window)
        value = (lp_power_sum(x, q, N) + tail) ** (1.0 / q)
    return PartialNormReport(value, N, "certified-upper", "lp", {"p": q})


@dataclass
class DivergenceCertificate:
    q: float
    threshold: float
    n_max: int
    depth: int | None  # first N whose partial q-power sum (or sup) exceeds threshold
    value: float  # q-power sum (sup for q = inf) at depth, or at n_max on failure
    checkpoints: list = field(default_factory=list)  # (N, value) at N = 1, 2, 4, ...

    @property
    def reached(self) -> bool:
        return self.depth is not None

    def to_record(self) -> dict:
        return {"q": self.q, "threshold": self.threshold, "n_max": self.n_max,
                "depth": self.depth, "value": self.value, "reached": self.reached}


def divergence_certificate(x: ComputableSequence, q: float, T: float, N_max: int,
                           chunk: int = EVAL_CHUNK) -> DivergenceCertificate:
    """Smallest N <= N_max with sum_{n <= N} ||x_n||^q > T (sup_{n <= N} for q = inf).

    The scan records doubling checkpoints N = 1, 2, 4, ... along the way.
    A failure (``depth is None``) means the threshold was not reached within
    the cap; it is not evidence of membership.
    """
    if not T > 0:
        raise ValueError("threshold must be positive")
    acc = ChunkedSum()
    best = 0.0
    checkpoints = []
    next_cp = 1
    for lo, nrm in _norm_chunks(x, N_max, size=chunk):
        hi = lo + len(nrm)
        if math.isinf(q):
            above = np.flatnonzero(nrm > T)
            if above.size:
                depth = lo + int(above[0])
                while next_cp <= depth:
                    checkpoints.append((next_cp, max(best, float(nrm[:next_cp - lo + 1].max()))))
                    next_cp *= 2
                return DivergenceCertificate(q, T, N_max, depth, float(nrm[above[0]]), checkpoints)
            while next_cp < hi:
                checkpoints.append((next_cp, max(best, float(nrm[:next_cp - lo + 1].max()))))
                next_cp *= 2
            best = max(best, float(nrm.max()))
            continue
        terms = nrm ** q
        while next_cp < hi:
            # checkpoint values read off a scratch accumulator that shares the committed state
            scratch = _fork(acc)
            scratch.add(terms[:next_cp - lo + 1])
            checkpoints.append((next_cp, scratch.value()))
            next_cp *= 2
        pos = acc.add_until(terms, T)
        if pos is not None:
            depth = lo + pos
            checkpoints = [c for c in checkpoints if c[0] <= depth]
            return DivergenceCertificate(q, T, N_max, depth, acc.value(), checkpoints)
    final = best if math.isinf(q) else acc.value()
    return DivergenceCertificate(q, T, N_max, None, final, checkpoints)


def _fork(acc: ChunkedSum) -> ChunkedSum:
    twin = ChunkedSum()
    twin._totals = list(acc._totals)
    twin._buf = acc._buf.copy()
    twin.count = acc.count
    return twin


# -- Lorentz -----------------------------------------------------------------

def _rearranged(x: ComputableSequence, N: int) -> np.ndarray:
    nrm = _checked(x.norms(1, N + 1))
    # descending, ties by ascending original index
    order = np.argsort(-nrm, kind="stable")
    return nrm[order]


def lorentz_partial(x: ComputableSequence, p: float, q: float, N: int) -> PartialNormReport:
    """(sum_{n <= N} n^(q/p - 1) (x*_n)^q)^(1/q) over the non-increasing rearrangement."""
    if N < 1:
        raise ValueError("depth must be >= 1")
    star = _rearranged(x, N).astype(np.longdouble)
    n = np.arange(1, N + 1, dtype=np.longdouble)
    ld_p, ld_q = np.longdouble(p), np.longdouble(q)
    terms = n ** (ld_q / ld_p - 1) * star ** ld_q
    value = float(ChunkedSum(extended=True).add(terms).raw_value() ** (1 / ld_q))
    return PartialNormReport(value, N, "partial", "lorentz", {"p": p, "q": q})


def lorentz_certified(x: ComputableSequence, p: float, q: float, N: int,
                      envelope: PowerLogEnvelope) -> PartialNormReport:
    """Certified upper bound for ||x||_{p,q} from a non-increasing dominating envelope.

    If ||x_n|| <= g(n) for all n with g non-increasing, then x*_n <= g(n),
    so the Lorentz sum is dominated termwise by that of g.
    """
    _check_dominated(x, envelope, 1, N)
    n = np.arange(1, N + 1, dtype=np.float64)
    w = q / p - 1.0
    head = ChunkedSum().add(n ** w * envelope(n) ** q).value()
    tail = envelope.weighted_tail(q, N, weight=w)
    return PartialNormReport((head + tail) ** (1.0 / q), N, "certified-upper", "lorentz",
                             {"p": p, "q": q})


# -- Orlicz ------------------------------------------------------------------

@dataclass(frozen=True)
class OrliczFunction:
    """Orlicz function M: [0, inf) -> [0, inf), vectorized."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    convex: bool = True

    def __post_init__(self):
        if float(self.fn(np.zeros(1))[0]) != 0.0:
            raise ValueError(f"Orlicz function {self.name} must satisfy M(0) = 0")
        grid = np.concatenate([[0.0], np.geomspace(1e-6, 1e6, 241)])
        vals = self.fn(grid)
        if np.any(np.diff(vals) < 0):
            raise ValueError(f"Orlicz function {self.name} is not nondecreasing")
        if not vals[-1] > 0:
            raise ValueError(f"Orlicz function {self.name} is degenerate")

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=np.float64))


def orlicz_power(p: float) -> OrliczFunction:
    return OrliczFunction(f"pow:{p:g}", lambda t: t ** p, convex=p >= 1)


def orlicz_tlog(c: float = 1.0) -> OrliczFunction:
    """t log(1 + c t) / log(1 + c), normalized so that M(1) = 1."""
    scale = math.log1p(c)
    return OrliczFunction(f"tlog:{c:g}", lambda t: t * np.log1p(c * t) / scale)


ORLICZ_CATALOG = {
    "t": orlicz_power(1.0),
    "t2": orlicz_power(2.0),
    "tlog1": orlicz_tlog(1.0),
    "tlog10": orlicz_tlog(10.0),
}


def orlicz_function(ident: str) -> OrliczFunction:
    """Look up ``t``, ``t2``, ``tlog1``, ``tlog10``, ``pow:<p>`` or ``tlog:<c>``."""
    if ident in ORLICZ_CATALOG:
        return ORLICZ_CATALOG[ident]
    kind, _, arg = ident.partition(":")
    if kind == "pow" and arg:
        return orlicz_power(float(arg))
    if kind == "tlog" and arg:
        return orlicz_tlog(float(arg))
    raise KeyError(f"unknown Orlicz function id {ident!r}")


def orlicz_luxemburg(x: ComputableSequence, M: OrliczFunction, N: int,
                     tol: float = 1e-9, max_expand: int = 2000) -> PartialNormReport:
    """Luxemburg gauge inf{rho > 0 : sum_{n <= N} M(||x_n|| / rho) <= 1} by bisection.

    The returned value is the upper end of the final bracket, so it is itself
    feasible and overshoots the infimum by less than ``tol`` relative.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    nrm = _checked(x.norms(1, N + 1))
    t = nrm[nrm != 0]
    params = {"M": M.name}
    if t.size == 0:
        raise ZeroSequence("first N coordinates vanish; the gauge is 0 by convention")

    def level(rho: float) -> float:
        return ChunkedSum().add(M(t / rho)).value()

    # bracket from nonzero data only, so inserting zeros cannot change the result
    hi = float(t.max()) * t.size
    lo = float(t.max())
    for _ in range(max_expand):
        if level(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise NoBracket(f"{M.name}: sum never drops to 1")
    for _ in range(max_expand):
        if level(lo) > 1.0:
            break
        lo /= 2.0
    else:
        raise NoBracket(f"{M.name}: sum never exceeds 1")
    while (hi - lo) / (0.5 * (hi + lo)) >= tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if level(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return PartialNormReport(hi, N, "partial", "orlicz", params)


# -- space descriptors ---------------------------------------------------------

FAMILIES = ("lp", "lorentz", "orlicz", "c0")


@dataclass(frozen=True)
class SpaceDescriptor:
    """An implemented invariant sequence space over the coordinate space of its inputs."""

    family: str
    p: float | None = None
    q: float | None = None
    orlicz: OrliczFunction | None = None
    K: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "lp" and not (self.p is not None and self.p > 0):
            raise ValueError("lp needs p in (0, inf]")
        if self.family == "lorentz":
            if not (self.p and self.q and 0 < self.p < math.inf and 0 < self.q < math.inf):
                raise ValueError("Lorentz space needs p, q in (0, inf)")
        if self.family == "orlicz" and self.orlicz is None:
            raise ValueError("Orlicz space needs an Orlicz function")
        if self.K < 1:
            raise ValueError("K must be >= 1")

    @classmethod
    def lp(cls, p: float) -> "SpaceDescriptor":
        return cls("lp", p=float(p))

    @classmethod
    def lorentz(cls, p: float, q: float) -> "SpaceDescriptor":
        return cls("lorentz", p=float(p), q=float(q))

    @classmethod
    def orlicz_space(cls, M: OrliczFunction) -> "SpaceDescriptor":
        return cls("orlicz", orlicz=M)

    @classmethod
    def c0(cls) -> "SpaceDescriptor":
        return cls("c0", p=math.inf)

    @property
    def stilde(self) -> float:
        """1 for a Banach space, s for an s-Banach space."""
        if self.family == "lp":
            return min(1.0, self.p)
        if self.family == "lorentz":
            return min(1.0, self.p, self.q)
        return 1.0

    @property
    def params(self) -> dict:
        if self.family == "orlicz":
            return {"M": self.orlicz.name}
        if self.family == "lorentz":
            return {"p": self.p, "q": self.q}
        return {"p": self.p}

    @property
    def name(self) -> str:
        if self.family == "lp":
            return f"l_{self.p:g}"
        if self.family == "lorentz":
            return f"l_{self.p:g},{self.q:g}"
        if self.family == "orlicz":
            return f"l_M[{self.orlicz.name}]"
        return "c_0"

    def evaluate(self, x: ComputableSequence, N: int, tol: float = 1e-9) -> PartialNormReport:
        if self.family in ("lp", "c0"):
            rep = lp_partial(x, self.p, N)
        elif self.family == "lorentz":
            rep = lorentz_partial(x, self.p, self.q, N)
        else:
            rep = orlicz_luxemburg(x, self.orlicz, N, tol)
        rep.family = self.family
        rep.params = self.params
        return rep

    def certified_upper(self, x: ComputableSequence, N: int, envelope) -> PartialNormReport:
        if envelope is None:
            raise MissingMembershipCertificate(f"no membership envelope for {self.name}")
        if self.family in ("lp", "c0"):
            rep = lp_certified(x, self.p, N, envelope)
        elif self.family == "lorentz":
            rep = lorentz_certified(x, self.p, self.q, N, envelope)
        else:
            raise MissingMembershipCertificate("no certified upper bound for Orlicz norms")
        rep.family = self.family
        rep.params = self.params
        return rep


# -- axioms (b1), (b2) -------------------------------------------------------

@dataclass
class AxiomReport:
    space: str
    depth: int
    K: float
    records: list = field(default_factory=list)

    @property
    def max_b1_ratio(self) -> float:
        vals = [r["b1_ratio"] for r in self.records if r["b1_ratio"] is not None]
        return max(vals, default=0.0)

    @property
    def max_b1_deviation(self) -> float:
        vals = [r["b1_rel_dev"] for r in self.records if r["b1_rel_dev"] is not None]
        return max(vals, default=0.0)

    @property
    def max_b2_violation(self) -> float:
        return max((r["b2_violation"] for r in self.records), default=0.0)

    def passed(self, b1_rtol: float = 1e-12) -> bool:
        return (self.max_b1_ratio <= self.K * (1 + b1_rtol)
                and self.max_b1_deviation <= b1_rtol
                and self.max_b2_violation <= 0.0)

    def to_record(self) -> dict:
        return {"space": self.space, "depth": self.depth, "K": self.K,
                "max_b1_ratio": self.max_b1_ratio, "max_b1_rel_dev": self.max_b1_deviation,
                "max_b2_violation": self.max_b2_violation, "samples": len(self.records),
                "pass": self.passed()}


def check_axioms(space: SpaceDescriptor, samples: Sequence[ComputableSequence], N: int,
                 tol: float = 1e-9) -> AxiomReport:
    """Empirical (b1) and (b2) on truncations.

    (b1) compares ||x|| at depth N with ||x^0|| at the depth holding the same
    nonzero coordinates; (b2) checks ||x_j|| <= ||x|| for every j <= N.
    Violations are recorded, never raised.
    """
    report = AxiomReport(space.name, N, space.K)
    for k, x in enumerate(samples):
        nrm = x.norms(1, N + 1)
        nonzero = int(np.count_nonzero(nrm))
        full = space.evaluate(x, N, tol).value
        rec = {"sample": k, "label": x.label, "nonzero": nonzero, "norm": full,
               "b1_ratio": None, "b1_rel_dev": None}
        x0 = zerofree(x)
        # (b1) speaks only about x with x^0 != 0
        if nonzero and not isinstance(x0.support, Finite):
            reduced = space.evaluate(x0, nonzero, tol).value
            rec["zerofree_norm"] = reduced
            rec["b1_ratio"] = full / reduced
            rec["b1_rel_dev"] = abs(full - reduced) / reduced
        rec["b2_violation"] = max(0.0, float(nrm.max()) - full)
        report.records.append(rec)
    return report
