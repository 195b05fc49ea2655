"""Command-line front end.

    seqspace construct --family lp --p 1 --gamma 0.5 --m 5
    seqspace certify   --family lp --p inf --avoid c0
    seqspace axioms    --family lp --p 0.5 --samples 20
    seqspace catalog
    seqspace attain    --d 4 --r 1 --q 2 --a 3 4

Exit codes: 0 all checks pass, 1 a check failed, 2 no witness (E - A empty
or not cataloged), 3 bad configuration.  Reports go to ``--out`` or stdout.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .norm_attaining import (
    AttainmentPoint, attainment_check, make_attaining, na_combine,
)
from .norms import SpaceDescriptor, check_axioms, divergence_certificate, orlicz_function
from .samples import dense_samples
from .sequences import block_index
from .spaceability import (
    AvoidanceSet, NotAvailable, avoidance_check, build_basis, catalog_entries,
    embedding_bound_check, independence_check, witness_catalog,
)

EXIT_OK, EXIT_FAIL, EXIT_EMPTY, EXIT_CONFIG = 0, 1, 2, 3
COMMANDS = ("construct", "certify", "axioms", "catalog", "attain")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str = "lp"
    p: float | None = None
    q: float | None = None
    orlicz_id: str | None = None
    gamma: list = field(default_factory=list)
    avoid: str = "lq"
    m: int = 5
    depth: int = 100_000
    threshold: float = 1e3
    n_max: int = 100_000_000
    tolerance: float = 1e-9
    seed: int = 0
    samples: int | None = None
    d: int = 4
    r: float = 2.0
    a: list = field(default_factory=lambda: [1.0])
    format: str = "json"
    out: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for name in ("m", "depth", "n_max", "d"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be >= 1")
        if not self.threshold > 0 or not self.tolerance > 0:
            raise ConfigError("threshold and tolerance must be positive")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("--samples must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format is json or csv")
        if self.avoid not in ("lq", "c0"):
            raise ConfigError("--avoid is lq or c0")
        if any(not g > 0 for g in self.gamma):
            raise ConfigError("--gamma exponents must be positive")

    def space(self) -> SpaceDescriptor:
        try:
            if self.family == "lp":
                return SpaceDescriptor.lp(self._need("p"))
            if self.family == "lorentz":
                return SpaceDescriptor.lorentz(self._need("p"), self._need("q"))
            if self.family == "orlicz":
                if not self.orlicz_id:
                    raise ConfigError("orlicz family needs --orlicz-id")
                return SpaceDescriptor.orlicz_space(orlicz_function(self.orlicz_id))
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc
        raise ConfigError(f"unknown family {self.family!r}")

    def avoidance(self) -> AvoidanceSet:
        if self.avoid == "c0":
            return AvoidanceSet.c0()
        if not self.gamma:
            raise ConfigError("--avoid lq needs --gamma")
        return AvoidanceSet.union_lq(self.gamma)

    def _need(self, name):
        v = getattr(self, name)
        if v is None:
            raise ConfigError(f"--{name} is required for family {self.family}")
        return v


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, numpy scalars become Python ones."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = report["results"]
    cols = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([json.dumps(row[k], sort_keys=True) if isinstance(row.get(k), (dict, list))
                    else row.get(k, "") for k in cols])
    return buf.getvalue()


def _battery(m: int, seed: int, extra: int = 3) -> list[list[float]]:
    vecs = [[1.0 if i == k else 0.0 for i in range(m)] for k in range(m)]
    vecs.append([1.0] * m)
    vecs.append([(-1.0) ** i for i in range(m)])
    rng = np.random.default_rng(seed)
    vecs.extend(rng.standard_normal((extra, m)).round(6).tolist())
    return vecs


def _witness_or_empty(cfg: RunConfig):
    space, avoid = cfg.space(), cfg.avoidance()
    w = witness_catalog(space, avoid)
    return space, avoid, w


def cmd_construct(cfg: RunConfig):
    space, avoid, w = _witness_or_empty(cfg)
    if isinstance(w, NotAvailable):
        return EXIT_EMPTY, [{"check": "witness", "space": space.name,
                             "avoid": avoid.to_record(), "reason": w.reason, "pass": False}]
    results = [dict(check="witness", **w.to_record(), **{"pass": True})]
    basis = build_basis(w, cfg.m)
    D = block_index(cfg.m, 1)
    results.append({"check": "independence", "m": cfg.m, "depth": D,
                    "block_starts": [block_index(i, 1) for i in range(1, cfg.m + 1)],
                    "pass": independence_check(basis, D)})
    for a in _battery(cfg.m, cfg.seed):
        emb = embedding_bound_check(a, w, cfg.depth)
        results.append({"check": "embedding", **emb.to_record()})
        av = avoidance_check(a, w, cfg.threshold, cfg.n_max)
        results.append({"check": "avoidance", **av.to_record()})
    ok = all(r["pass"] for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), results


def cmd_certify(cfg: RunConfig):
    space, avoid, w = _witness_or_empty(cfg)
    if isinstance(w, NotAvailable):
        return EXIT_EMPTY, [{"check": "witness", "space": space.name,
                             "avoid": avoid.to_record(), "reason": w.reason, "pass": False}]
    results = [dict(check="witness", **w.to_record(), **{"pass": True})]
    upper = space.certified_upper(w.sequence, cfg.depth, w.envelope)
    results.append({"check": "membership", **upper.to_record(),
                    "pass": math.isfinite(upper.value)})
    if avoid.kind == "c0":
        k = np.arange(1, 1001)
        idx = w.separated(k)
        vals = w.sequence.coords.norms(w.sequence.at(idx))
        count = int(np.count_nonzero(vals >= w.delta))
        results.append({"check": "c0-separation", "delta": w.delta, "requested": len(k),
                        "count": count, "pass": count == len(k)})
    else:
        for q in avoid.gamma:
            cert = divergence_certificate(w.sequence, q, cfg.threshold, cfg.n_max)
            results.append({"check": "divergence", **cert.to_record(), "pass": cert.reached})
    ok = all(r["pass"] for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), results


def cmd_axioms(cfg: RunConfig):
    space = cfg.space()
    samples = dense_samples(cfg.samples or 20, cfg.seed, cfg.depth)
    rep = check_axioms(space, samples, cfg.depth, cfg.tolerance)
    return (EXIT_OK if rep.passed() else EXIT_FAIL), [{"check": "axioms", **rep.to_record()}]


def cmd_catalog(cfg: RunConfig):
    return EXIT_OK, [{"check": "catalog", **e, "pass": True} for e in catalog_entries()]


def cmd_attain(cfg: RunConfig):
    if not (1 <= cfg.q < math.inf if cfg.q is not None else False):
        raise ConfigError("attain needs a target exponent --q in [1, inf)")
    if not cfg.r >= 1:
        raise ConfigError("attain needs a domain exponent --r >= 1")
    rng = np.random.default_rng(cfg.seed)
    x0 = AttainmentPoint.normalized(rng.standard_normal(cfg.d), cfg.r)
    w = rng.uniform(0.5, 2.0, 3) * rng.choice([-1.0, 1.0], 3)
    u = make_attaining(x0, w, cfg.q)
    fam = na_combine(cfg.a, u)
    rep = attainment_check(fam, x0, cfg.samples or 10_000, cfg.seed, cfg.tolerance)
    ux0 = u.image_norm(x0.vector)
    rel = abs(rep.attained - rep.analytic_norm) / rep.analytic_norm
    l1 = math.fsum(fam.piece_norms())
    l1_expected = ux0 * math.fsum(abs(c) for c in cfg.a)
    results = [
        {"check": "attainment", **rep.to_record(), "attained": rep.attained,
         "pass": rep.passed},
        {"check": "norm-identity", "value": rep.attained, "analytic_norm": rep.analytic_norm,
         "u_x0": ux0, "rel_err": rel, "pass": rel <= 1e-12},
        {"check": "l1-sum", "value": l1, "expected": l1_expected,
         "rel_err": abs(l1 - l1_expected) / l1_expected,
         "pass": abs(l1 - l1_expected) <= 1e-12 * l1_expected},
    ]
    ok = all(r["pass"] for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), results


DISPATCH = {"construct": cmd_construct, "certify": cmd_certify, "axioms": cmd_axioms,
            "catalog": cmd_catalog, "attain": cmd_attain}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="seqspace", description="Spaceability constructions and certificates")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--family", default="lp", choices=("lp", "lorentz", "orlicz"))
    ap.add_argument("--p", type=float)
    ap.add_argument("--q", type=float)
    ap.add_argument("--orlicz-id")
    ap.add_argument("--gamma", type=float, nargs="+", default=[])
    ap.add_argument("--avoid", default="lq", choices=("lq", "c0"))
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--depth", type=int, default=100_000)
    ap.add_argument("--threshold", type=float, default=1e3)
    ap.add_argument("--n-max", type=int, default=100_000_000)
    ap.add_argument("--tolerance", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--r", type=float, default=2.0)
    ap.add_argument("--a", type=float, nargs="+", default=[1.0])
    ap.add_argument("--format", default="json", choices=("json", "csv"))
    ap.add_argument("--out")
    return ap


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a config; returns (exit code, rendered report)."""
    cfg.validate()
    code, results = DISPATCH[cfg.command](cfg)
    # the output path is where the report goes, not what it says
    config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    report = {"config": config, "results": results, "pass": code == EXIT_OK}
    return code, render(report, cfg.format)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        code, text = run(cfg)
    except ConfigError as exc:
        print(f"seqspace: bad config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
