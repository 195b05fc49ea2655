import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqspace.norms import MissingMembershipCertificate, PowerLogEnvelope, SpaceDescriptor, lp_partial
from seqspace.samples import decaying_samples
from seqspace.sequences import (
    AllNonzero, CoordinateSpace, block_index, block_of_array, combine, from_formula, tabulated,
)
from seqspace.spaceability import (
    AvoidanceSet, DepthTooShallow, NotAvailable, PowerLogLowerBound, Witness, avoidance_check,
    build_basis, c0_predicate, catalog_entries, check_proposition_conditions, decay_exponent,
    dominant_block, embedding_bound_check, independence_check, lq_predicate, rescale_witness,
    witness_catalog,
)


def lp_witness(p, gamma):
    return witness_catalog(SpaceDescriptor.lp(p), AvoidanceSet.union_lq(gamma))


W1 = lp_witness(1, [0.5])
W2 = lp_witness(2, [1])
WHALF = lp_witness(0.5, [0.25])
WINF = witness_catalog(SpaceDescriptor.lp(math.inf), AvoidanceSet.c0())


# -- avoidance sets and predicates ----------------------------------------------

def test_avoidance_set_validation():
    with pytest.raises(ValueError):
        AvoidanceSet.union_lq([])
    with pytest.raises(ValueError):
        AvoidanceSet.union_lq([0.0])
    with pytest.raises(ValueError):
        AvoidanceSet.custom(lq_predicate(1), "partial", declares=("i", "ii"))
    assert AvoidanceSet.union_lq([2, math.inf, 1]).gamma == (1.0, 2.0, math.inf)


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.0, 2.0])
def test_decay_exponent_of_power_law(alpha):
    x = from_formula(lambda n: n ** -alpha, AllNonzero())
    assert decay_exponent(x, 10_000) == pytest.approx(alpha, rel=1e-9)


def test_predicates_on_simple_sequences():
    x = from_formula(lambda n: n ** -0.75, AllNonzero())
    assert lq_predicate(2)(x, 10_000)
    assert not lq_predicate(1)(x, 10_000)
    assert c0_predicate()(x, 10_000)
    assert not c0_predicate()(from_formula(np.ones_like, AllNonzero()), 10_000)
    assert lq_predicate(0.1)(tabulated([1.0, 2.0]), 10)


# -- witness catalog --------------------------------------------------------------

def test_catalog_l1_against_half_oracle():
    assert W1.name == "lp-powerlog"
    N = 10**7
    n = np.arange(1, N + 1, dtype=np.float64)
    w = 1.0 / (n * np.log(n + 1) ** 2)
    head = math.fsum(w)
    # sum w_n converges: head plus integral-test tail is the certified norm
    up = W1.home.certified_upper(W1.sequence, N, W1.envelope).value
    assert head < up <= (head + 1.0 / math.log(N)) * (1 + 1e-12)
    assert up == pytest.approx(head + W1.envelope.weighted_tail(1, N), rel=1e-12)
    # sum w_n^(1/2) = sum n^-1/2 / log(n+1) diverges: compare with the integral bracket
    half = np.sqrt(w)
    partial = math.fsum(half)
    lower = W1.profiles[0.5](N)
    assert lower <= partial
    # crude upper bracket from log(n + 1) >= log 2 and sum n^-1/2 <= 2 sqrt(N)
    assert partial <= 2 * math.sqrt(N) / math.log(2)
    assert math.fsum(half[: N // 100]) < partial / 5


def test_catalog_not_available_cases():
    assert isinstance(lp_witness(2, [2]), NotAvailable)
    assert not lp_witness(2, [2])
    assert isinstance(lp_witness(2, [1, 3]), NotAvailable)
    assert isinstance(witness_catalog(SpaceDescriptor.lp(1), AvoidanceSet.c0()), NotAvailable)
    assert isinstance(witness_catalog(SpaceDescriptor.lp(math.inf), AvoidanceSet.union_lq([math.inf])),
                      NotAvailable)
    custom = AvoidanceSet.custom(lq_predicate(1), "l1")
    assert isinstance(witness_catalog(SpaceDescriptor.lp(2), custom), NotAvailable)


def test_catalog_constant_one():
    assert WINF.name == "linf-constant-one"
    assert WINF.delta == 1.0
    np.testing.assert_array_equal(WINF.sequence.values(1, 100), 1.0)


def test_catalog_entries_and_records():
    entries = catalog_entries()
    assert len(entries) >= 3
    assert {e["formula-id"] for e in entries} == {"lp-powerlog", "linf-constant-one", "lorentz-powerlog"}
    rec = W1.to_record()
    assert set(rec) == {"space", "params", "avoid", "formula-id", "certificate-params", "provisional"}
    assert rec["certificate-params"]["envelope"] == {"scale": 1.0, "alpha": 1.0, "beta": 2.0}


@pytest.mark.parametrize("s, r, gamma", [(2, 1, [1]), (1, 2, [1]), (2, 2, [1]), (0.5, 1, [0.25])])
def test_lorentz_witnesses(s, r, gamma):
    w = witness_catalog(SpaceDescriptor.lorentz(s, r), AvoidanceSet.union_lq(gamma))
    assert w.provisional
    up = w.home.certified_upper(w.sequence, 1000, w.envelope).value
    assert math.isfinite(up)
    assert w.home.evaluate(w.sequence, 10**5).value <= up
    q = gamma[0]
    for N in (10, 1000, 10**5):
        partial = lp_partial(w.sequence, q, N).value ** q
        assert w.profiles[q](N) <= partial
    rep = embedding_bound_check([1.0, -2.0, 0.5], w, 2000)
    assert rep.holds


def test_lorentz_witness_unavailable_when_contained():
    assert isinstance(witness_catalog(SpaceDescriptor.lorentz(1, 1), AvoidanceSet.union_lq([1])),
                      NotAvailable)
    assert isinstance(witness_catalog(SpaceDescriptor.lorentz(1, 2), AvoidanceSet.union_lq([2])),
                      NotAvailable)


def test_lower_bound_rejects_convergent_series():
    with pytest.raises(ValueError):
        PowerLogLowerBound(1.0, 1.0, 2.0)


@given(st.sampled_from([0.25, 0.5, 0.9]), st.floats(0.0, 3.0), st.integers(1, 20_000))
@settings(max_examples=40)
def test_lower_bound_profile_against_direct_sum(a, b, N):
    L = PowerLogLowerBound(1.0, a, b)
    n = np.arange(1, N + 1, dtype=np.float64)
    assert L(N) <= math.fsum(n ** -a * np.log(n + 1) ** -b)


def test_rescale_witness():
    x = rescale_witness(W1.sequence, 1, 2)
    n = np.arange(1, 1001)
    np.testing.assert_allclose(x.at(n), W2.sequence.at(n), rtol=4e-16)
    assert x.support == W1.sequence.support


# -- basis and independence ---------------------------------------------------------

def test_basis_single_vector_on_odd_indices():
    basis = build_basis(W1, 1)
    v = basis.vectors[0].values(1, 101)
    assert np.all(v[0::2] != 0) and np.all(v[1::2] == 0)


def test_basis_supports_disjoint():
    basis = build_basis(W2, 6)
    sup = basis.supports_upto(10_000)
    flat = np.concatenate(sup)
    assert len(flat) == len(set(flat.tolist()))
    assert sum(map(len, sup)) == 10_000 - 10_000 // 64


def test_independence_examples():
    assert independence_check(build_basis(W1, 5), 64)
    with pytest.raises(DepthTooShallow):
        independence_check(build_basis(W1, 8), 64)
    assert independence_check(build_basis(WINF, 1), 1)


def test_build_basis_rejects_finite_witness():
    w = Witness("finite", tabulated([1.0, 2.0]), SpaceDescriptor.lp(1), AvoidanceSet.union_lq([0.5]),
                profiles={0.5: lambda N: 0.0})
    with pytest.raises(ValueError):
        build_basis(w, 2)


# -- embedding ------------------------------------------------------------------------

def test_embedding_single_block_equality():
    rep = embedding_bound_check([1.0], W1, 5000)
    x0_norm = lp_partial(W1.sequence, 1, 5000).value
    assert rep.z_norm == x0_norm
    assert rep.passed


def test_embedding_three_four_against_interleaved_direct_sum():
    N = 3000
    rep = embedding_bound_check([3.0, 4.0], W2, N)
    # oracle: rebuild z coordinate by coordinate from the block formula
    n = np.arange(1, rep.depth + 1)
    i, j = block_of_array(n)
    xj = j ** -0.5 * np.log(j + 1.0) ** -1.0
    z = np.where(i == 1, 3.0 * xj, np.where(i == 2, 4.0 * xj, 0.0))
    # matched depths: every block cut at the same inner index N
    matched = math.fsum(z[j <= N] ** 2)
    x0_sq = math.fsum(xj[(i == 1) & (j <= N)] ** 2)
    assert abs(matched - 25 * x0_sq) <= 1e-12 * matched
    # the report matches each block at its own count inside depth D
    assert rep.z_norm ** 2 == pytest.approx(math.fsum(z ** 2), rel=1e-13)
    assert rep.identity_lhs == pytest.approx(math.fsum(z ** 2), rel=1e-13)
    assert rep.identity_rel_err <= 1e-12 and rep.passed


def test_embedding_quasi_norm_half():
    rep = embedding_bound_check([1.0, 1.0], WHALF, 2000)
    assert rep.stilde == 0.5
    n = np.arange(1, 2001, dtype=np.float64)
    x = n ** -2.0 * np.log(n + 1) ** -4.0
    direct = math.fsum(np.sqrt(x)) ** 2
    assert math.sqrt(direct) <= math.sqrt(rep.x0_upper) * 2
    assert rep.holds and rep.passed


def test_embedding_requires_envelope():
    w = Witness("bare", W1.sequence, W1.home, W1.avoid, None, W1.profiles)
    with pytest.raises(MissingMembershipCertificate):
        embedding_bound_check([1.0], w, 100)


def test_embedding_vector_valued_witness():
    X = CoordinateSpace(3, 2.0)
    env = PowerLogEnvelope(1.0, 1.0, 2.0)
    u = np.array([0.6, 0.0, -0.8])  # unit 2-norm direction
    seq = from_formula(lambda n: env(n)[:, None] * u, AllNonzero(), coords=X)
    w = Witness("vector-powerlog", seq, SpaceDescriptor.lp(1), AvoidanceSet.union_lq([0.5]), env,
                {0.5: W1.profiles[0.5]})
    rep = embedding_bound_check([2.0, -1.0, 0.5], w, 2000)
    assert rep.passed
    av = avoidance_check([2.0, -1.0, 0.5], w, 50.0, 10**6)
    assert av.coordinate_identity and av.passed


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=6)
       .filter(lambda a: any(a)))
@settings(max_examples=25)
def test_embedding_identity_property(a):
    rep = embedding_bound_check(a, W1, 500)
    assert rep.passed


# -- avoidance --------------------------------------------------------------------------

def test_dominant_block():
    assert dominant_block([0, 2]) == 2
    assert dominant_block([-3, 3, 1]) == 1
    with pytest.raises(ValueError):
        dominant_block([0, 0])


def test_avoidance_scaled_profile():
    rep = avoidance_check([0.0, 2.0], W2, 50.0, 10**7)
    assert rep.block == 2 and rep.alpha == 2.0
    cert = rep.certificates[0]
    assert cert["reached"] and cert["scaled_by"] == 2.0
    # oracle: direct partial q-sum of the block coordinates at the certified depth
    j = np.arange(1, cert["depth"] + 1, dtype=np.float64)
    direct = math.fsum(2.0 * j ** -0.5 / np.log(j + 1))
    assert direct > 50.0 * 2.0
    assert direct >= cert["profile_bound"] == 2.0 * W2.profiles[1.0](cert["depth"])
    assert rep.passed


def test_avoidance_c0_constant_one():
    rep = avoidance_check([1.0], WINF, 1e3, 10)
    assert rep.c0["count"] == 1000
    assert rep.passed


def test_alpha_realized_on_coordinates():
    rep = avoidance_check([0.5, -7.25, 3.0], W1, 1.0, 10**5)
    assert rep.coordinate_identity
    assert rep.alpha == 7.25
    assert rep.alpha_rel_err <= 2 * np.finfo(float).eps


def test_avoidance_reports_threshold_not_reached():
    rep = avoidance_check([1.0], W1, 1e3, 1000)
    assert rep.status == "ThresholdNotReached"
    assert not rep.passed


def test_avoidance_sup_branch():
    ramp = from_formula(lambda n: n, AllNonzero(), label="n")
    w = Witness("ramp", ramp, SpaceDescriptor.lp(math.inf), AvoidanceSet.union_lq([math.inf]),
                PowerLogEnvelope(1.0, 0.0, 0.0), {math.inf: lambda N: N})
    rep = avoidance_check([1.0, -3.0], w, 100.0, 10**4)
    cert = rep.certificates[0]
    assert cert["depth"] == 101 and cert["scaled_by"] == 3.0
    assert rep.passed


# -- proposition conditions ----------------------------------------------------------------

def test_proposition_lq_and_c0():
    samples = decaying_samples(12, 5, 4000)
    A = AvoidanceSet.custom(lq_predicate(1), "l_1")
    rep = check_proposition_conditions(A, samples, lp_witness(2, [1]).sequence, 4000)
    assert rep.passed
    A = AvoidanceSet.custom(c0_predicate(), "c_0")
    rep = check_proposition_conditions(A, samples, WINF.sequence, 4000)
    assert rep.passed
    assert rep.to_record()["iii"]["ok"]


def test_proposition_rejects_member_witness():
    A = AvoidanceSet.custom(lq_predicate(2), "l_2")
    rep = check_proposition_conditions(A, [], W1.sequence, 4000)
    assert not rep.condition_iii["outside"]
    assert not rep.passed


def test_proposition_subsequence_example():
    # y = 3 * (every other coordinate of x), x in l_1
    x = from_formula(lambda n: n ** -1.5, AllNonzero())
    y = from_formula(lambda j: 3 * (2 * j) ** -1.5, AllNonzero())
    assert lq_predicate(1)(x, 10_000) and lq_predicate(1)(y, 10_000)


def test_combination_support_is_independent_of_zeros():
    z = combine([1.0, 0.0, 2.0], W1.zerofree)
    v = z.values(1, block_index(3, 50) + 1)
    assert np.all(v[1::4] == 0)  # block 2 vanishes
