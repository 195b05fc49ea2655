"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a ``[criterion k] PASS|FAIL`` line; the lines are repeated in
the terminal summary.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from seqspace.cli import EXIT_EMPTY, EXIT_OK
from seqspace.norm_attaining import AttainmentPoint, attainment_check, make_attaining, na_combine
from seqspace.norms import (
    SpaceDescriptor, check_axioms, divergence_certificate, lorentz_partial, lp_partial,
    lp_power_sum, orlicz_function, orlicz_luxemburg, orlicz_power,
)
from seqspace.samples import decaying_samples, dense_samples
from seqspace.sequences import (
    BLOCKS, block_index, block_index_array, block_of, block_of_array, block_restriction, combine,
)
from seqspace.spaceability import (
    AvoidanceSet, avoidance_check, build_basis, c0_predicate, check_proposition_conditions,
    dominant_block, embedding_bound_check, lq_predicate, witness_catalog,
)

P_GRID = (0.5, 1.0, 2.0)


def lp_witness(p):
    return witness_catalog(SpaceDescriptor.lp(p), AvoidanceSet.union_lq([p / 2]))


def coefficient_battery(count, seed, max_m=6):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = int(rng.integers(1, max_m + 1))
        a = rng.standard_normal(m) * rng.uniform(0.01, 100.0)
        a[rng.random(m) < 0.2] = 0.0
        if np.any(a):
            out.append(a.tolist())
    return out


def test_criterion_01_partition_bijection(acceptance_line):
    t0 = time.perf_counter()
    n = np.arange(1, 10**6 + 1, dtype=np.int64)
    i, j = block_of_array(n)
    forward = np.array_equal(block_index_array(i, j), n)
    # every (i, j) with block_index(i, j) <= 10^6, block by block
    backward = True
    for b in range(1, 21):
        jj = np.arange(1, BLOCKS.count_upto(b, 10**6) + 1, dtype=np.int64)
        bi, bj = block_of_array(block_index_array(np.full_like(jj, b), jj))
        backward &= bool(np.all(bi == b) and np.array_equal(bj, jj))
    covered = sum(BLOCKS.count_upto(b, 10**6) for b in range(1, 21)) == 10**6
    elapsed = time.perf_counter() - t0
    # scalar implementation agrees on a seeded sample
    rng = np.random.default_rng(0)
    spot = all(block_index(*block_of(int(k))) == int(k) for k in rng.integers(1, 10**6, 2000))
    ok = forward and backward and covered and spot and elapsed < 1.0
    acceptance_line(1, "partition round trip for n <= 1e6", ok, f"{elapsed:.3f} s")
    assert ok


def test_criterion_02_axiom_suite(acceptance_line):
    spaces = [SpaceDescriptor.lp(p) for p in (0.5, 1.0, 2.0, math.inf)]
    spaces += [SpaceDescriptor.lorentz(p, q) for p in P_GRID for q in P_GRID]
    spaces += [SpaceDescriptor.orlicz_space(orlicz_function(k)) for k in ("t", "t2", "tlog1", "tlog10")]
    samples = dense_samples(20, seed=2024, depth=10**4)
    failures, worst_b1 = [], 0.0
    for space in spaces:
        rep = check_axioms(space, samples, 10**4)
        worst_b1 = max(worst_b1, rep.max_b1_deviation)
        if not (rep.passed(b1_rtol=1e-12) and rep.max_b2_violation == 0.0 and rep.K == 1.0):
            failures.append(space.name)
    ok = not failures
    acceptance_line(2, "axioms (b1) K=1 to 1e-12, (b2) exact", ok,
                    f"{len(spaces)} spaces x 20 samples, max b1 dev {worst_b1:.1e}, failed {failures}")
    assert ok


def test_criterion_03_norm_cross_checks(acceptance_line):
    t0 = time.perf_counter()
    samples = dense_samples(100, seed=7, depth=1000)
    worst = 0.0
    for x in samples:
        for p in P_GRID:
            ref = lp_partial(x, p, 1000).value
            worst = max(worst, abs(lorentz_partial(x, p, p, 1000).value - ref) / ref)
        for p in (1.0, 1.5, 2.0, 3.0):
            ref = lp_partial(x, p, 1000).value
            worst = max(worst, abs(orlicz_luxemburg(x, orlicz_power(p), 1000).value - ref) / ref)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10.0
    acceptance_line(3, "Lorentz(p,p) and Orlicz(t^p) vs l_p", ok,
                    f"max rel err {worst:.1e}, {elapsed:.2f} s")
    assert ok


@pytest.mark.parametrize("p", P_GRID)
def test_criterion_04_witness_validity(acceptance_line, p):
    w = lp_witness(p)
    q = p / 2
    upper = w.home.certified_upper(w.sequence, 1000, w.envelope)
    t0 = time.perf_counter()
    cert = divergence_certificate(w.sequence, q, 1e3, 10**8)
    elapsed = time.perf_counter() - t0
    ok = (math.isfinite(upper.value) and upper.direction == "certified-upper"
          and cert.reached and cert.value > 1e3 and elapsed < 60.0)
    if cert.reached:
        # the analytic divergence profile sits below the computed q-sum
        ok &= w.profiles[q](cert.depth) <= cert.value
    acceptance_line(4, f"witness p={p:g}, q={q:g}", ok,
                    f"||x||_p <= {upper.value:.6g}, crossing depth {cert.depth}, {elapsed:.1f} s")
    assert ok


def test_criterion_05_norm_transfer(acceptance_line):
    J = 10**4
    mismatches = []
    for p in P_GRID:
        w = lp_witness(p)
        basis = build_basis(w, 5)
        for r in (p / 2, p, math.inf):
            ref = lp_partial(basis.x0, r, J).value
            for i, y in enumerate(basis.vectors, start=1):
                got = lp_partial(y, r, block_index(i, J)).value
                if got != ref:
                    mismatches.append((p, r, i, got, ref))
    ok = not mismatches
    acceptance_line(5, "norm transfer y_i -> x0 bit-identical", ok,
                    f"3 witnesses x 3 exponents x 5 blocks, mismatches {mismatches}")
    assert ok


def test_criterion_06_embedding(acceptance_line):
    battery = coefficient_battery(200, seed=6)
    worst, s_ok = {}, True
    for p in P_GRID:
        w = lp_witness(p)
        errs = []
        for a in battery:
            rep = embedding_bound_check(a, w, 1000)
            errs.append(rep.identity_rel_err)
            if p == 0.5:
                s_ok &= rep.stilde == 0.5 and rep.holds
        worst[p] = max(errs)
    ok = all(v <= 1e-12 for v in worst.values()) and s_ok
    detail = ", ".join(f"p={p:g}: {v:.1e}" for p, v in worst.items())
    acceptance_line(6, "embedding identity on 200 vectors, s~-inequality at p=1/2", ok,
                    f"max rel err {detail}; s~ inequality {'holds' if s_ok else 'FAILS'}")
    assert ok


def test_criterion_07_avoidance_scaling(acceptance_line):
    J = 10**4
    battery = coefficient_battery(50, seed=77)
    worst, exact_coords = 0.0, True
    for k, a in enumerate(battery):
        p = P_GRID[k % 3]
        w = lp_witness(p)
        q = p / 2
        x0 = w.zerofree
        z = combine(a, x0)
        m = dominant_block(a)
        am = a[m - 1]
        j = np.arange(1, J + 1, dtype=np.int64)
        # matched indexing: the generic index path equals the one-product shortcut bitwise
        generic = z.at(block_index_array(np.full_like(j, m), j))
        exact_coords &= np.array_equal(generic, am * x0.at(j))
        exact_coords &= np.array_equal(generic, block_restriction(z, m).at(j))
        lhs = lp_power_sum(block_restriction(z, m), q, J)
        rhs = abs(am) ** q * lp_power_sum(x0, q, J)
        worst = max(worst, abs(lhs - rhs) / rhs)
    ok = exact_coords and worst <= 1e-12
    acceptance_line(7, "block q-sums = |a_m|^q * witness q-sums", ok,
                    f"50 vectors, coordinates bit-exact: {exact_coords}, max rel err {worst:.1e}")
    assert ok


def test_criterion_08_c0_avoidance(acceptance_line):
    w = witness_catalog(SpaceDescriptor.lp(math.inf), AvoidanceSet.c0())
    t0 = time.perf_counter()
    ok = w.name == "linf-constant-one"
    for a in coefficient_battery(50, seed=8):
        rep = avoidance_check(a, w, 1e3, 10)
        ok &= rep.passed and rep.c0["count"] >= 1000 and rep.c0["bound"] == abs(a[rep.block - 1])
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 2.0
    acceptance_line(8, "c0 avoidance with the constant-one witness", ok,
                    f"50 vectors, >= 1000 coordinates each, {elapsed:.2f} s")
    assert ok


def test_criterion_09_norm_attaining(acceptance_line):
    t0 = time.perf_counter()
    worst_id = worst_l1 = 0.0
    violations = 0
    for r in (1.0, 2.0):
        for q in (1.0, 2.0):
            for seed in range(3):
                rng = np.random.default_rng([seed, int(r), int(q)])
                x0 = AttainmentPoint.normalized(rng.standard_normal(4), r)
                u = make_attaining(x0, rng.standard_normal(5), q)
                a = rng.standard_normal(6)
                fam = na_combine(a, u)
                rep = attainment_check(fam, x0, 10_000, seed=seed, tol=1e-9)
                violations += not rep.passed
                worst_id = max(worst_id, abs(rep.attained - rep.analytic_norm) / rep.analytic_norm)
                l1 = math.fsum(fam.piece_norms())
                expect = u.image_norm(x0.vector) * math.fsum(abs(c) for c in a)
                worst_l1 = max(worst_l1, abs(l1 - expect) / expect)
    elapsed = time.perf_counter() - t0
    ok = worst_id <= 1e-12 and worst_l1 <= 1e-12 and violations == 0 and elapsed < 10.0
    acceptance_line(9, "norm-attaining family d=4, m=6", ok,
                    f"identity {worst_id:.1e}, l1-sum {worst_l1:.1e}, "
                    f"sphere violations {violations}, {elapsed:.2f} s")
    assert ok


def test_criterion_10_proposition_conditions(acceptance_line):
    samples = decaying_samples(50, seed=10, depth=10**4)
    reports = []
    for q in (0.5, 1.0, 2.0):
        A = AvoidanceSet.custom(lq_predicate(q), f"l_{q:g}")
        witness = witness_catalog(SpaceDescriptor.lp(2 * q), AvoidanceSet.union_lq([q])).sequence
        reports.append(check_proposition_conditions(A, samples, witness, 10**4, seed=1))
    c0_witness = witness_catalog(SpaceDescriptor.lp(math.inf), AvoidanceSet.c0()).sequence
    reports.append(check_proposition_conditions(AvoidanceSet.custom(c0_predicate(), "c_0"),
                                                samples, c0_witness, 10**4, seed=1))
    ok = all(r.passed for r in reports)
    detail = "; ".join(f"{r.set_name}: i {len(r.condition_i)}, ii {len(r.condition_ii)} "
                       f"(+{len(r.undecided)} undecided), iii {r.condition_iii['ok']}"
                       for r in reports)
    acceptance_line(10, "proposition conditions (i)-(iii)", ok, detail)
    assert ok


def _construct(args, out):
    cmd = [sys.executable, "-m", "seqspace", "construct", *args, "--out", str(out)]
    return subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE)


def test_criterion_11_cli_determinism(acceptance_line, tmp_path):
    cases = {
        "l1": (["--family", "lp", "--p", "1", "--gamma", "0.5", "--m", "5"], EXIT_OK),
        "l2": (["--family", "lp", "--p", "2", "--gamma", "2"], EXIT_EMPTY),
        "linf": (["--family", "lp", "--p", "inf", "--avoid", "c0", "--m", "3"], EXIT_OK),
    }
    t0 = time.perf_counter()
    procs = {(name, k): _construct(args, tmp_path / f"{name}-{k}.json")
             for name, (args, _) in cases.items() for k in (1, 2)}
    codes = {key: proc.wait() for key, proc in procs.items()}
    elapsed = time.perf_counter() - t0
    ok, notes = True, []
    for name, (_, expected) in cases.items():
        same = (tmp_path / f"{name}-1.json").read_bytes() == (tmp_path / f"{name}-2.json").read_bytes()
        good = codes[(name, 1)] == codes[(name, 2)] == expected
        ok &= same and good
        notes.append(f"{name}: exit {codes[(name, 1)]}, identical {same}")
    acceptance_line(11, "construct reports byte-identical, exit codes", ok,
                    "; ".join(notes) + f", {elapsed:.0f} s")
    assert ok
