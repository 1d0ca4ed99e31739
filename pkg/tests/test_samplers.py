import math

import numpy as np
import pytest

from guegen import dominator, hermite, samplers, vanveen
from guegen.errors import BudgetError, ParameterError
from guegen.rng import RandomStream
from guegen.stats import ks_one_sample, ks_two_sample


def test_degree_zero_returns_plain_normals():
    a = samplers.sample_phi_sq_many(0, 7, RandomStream(5))
    b = RandomStream(5).standard_normals(7)
    assert np.array_equal(a, b)
    s = RandomStream(5)
    assert samplers.sample_phi_sq_squeeze(0, s) == RandomStream(5).standard_normal()


def test_scalar_samplers_deterministic():
    for fn in (samplers.sample_phi_sq_plain, samplers.sample_phi_sq_squeeze):
        a = [fn(4, RandomStream(21)) for _ in range(1)]
        b = [fn(4, RandomStream(21)) for _ in range(1)]
        assert a == b


def test_batch_deterministic():
    a = samplers.sample_phi_sq_many(12, 500, RandomStream(77), "squeeze")
    b = samplers.sample_phi_sq_many(12, 500, RandomStream(77), "squeeze")
    assert np.array_equal(a, b)


def test_squeeze_decisions_imply_exact_decisions():
    # replay raw proposals: a quick accept must also pass the exact test,
    # a quick reject must also fail it
    for k in (7, 200):
        spec = dominator.make_spec(k)
        stream = RandomStream(1000 + k)
        x = dominator.sample_envelope_many(spec, stream, 10_000)
        u = stream.uniforms(10_000)
        uh = u * dominator.envelope_many(spec, x)
        window = np.abs(x) <= spec.x1
        lo, up = vanveen.squeeze_bounds_many(k, x[window])
        phi = hermite.phi_squared_many(k, x[window])
        uhw = uh[window]
        assert np.all(uhw[uhw <= lo] <= phi[uhw <= lo])
        assert np.all(uhw[uhw > up] > phi[uhw > up])


def test_plain_ks_against_quadrature_cdf():
    xs = samplers.sample_phi_sq_many(1, 20_000, RandomStream(3), "plain")
    res = ks_one_sample(xs, lambda s: hermite.phi_sq_cdf_many(1, s, tol=1e-8))
    assert res.scaled < 1.95


def test_output_sign_symmetric():
    xs = samplers.sample_phi_sq_many(6, 40_000, RandomStream(8), "squeeze")
    assert abs((xs > 0).mean() - 0.5) < 3.0 * 0.5 / math.sqrt(xs.size)


def test_wald_proposals_per_accept():
    k = 10
    spec = dominator.make_spec(k)
    stats = samplers.SamplerStats()
    samplers.sample_phi_sq_many(k, 20_000, RandomStream(9), "squeeze", stats)
    sigma = math.sqrt((spec.mass**2 - spec.mass) / stats.accepted)
    assert abs(stats.proposals / stats.accepted - spec.mass) < 3.0 * sigma


def test_stats_counter_invariants():
    stats = samplers.SamplerStats()
    samplers.sample_phi_sq_many(100, 5_000, RandomStream(10), "squeeze", stats)
    assert stats.accepted == 5_000
    assert stats.accepted <= stats.proposals
    assert (
        stats.exact_evals
        <= stats.proposals - stats.squeeze_lower_accepts - stats.squeeze_upper_rejects
    )
    assert stats.elapsed > 0.0


def test_exact_share_declines_with_degree():
    shares = []
    for k in (100, 10_000):
        stats = samplers.SamplerStats()
        samplers.sample_phi_sq_many(k, 2_000, RandomStream(900 + k), "squeeze", stats)
        shares.append(stats.exact_evals / stats.proposals)
    # measured ~0.60 at degree 100 and ~0.24 at degree 10^4
    assert shares[1] < shares[0]
    assert shares[1] < 0.30


def test_budget_error_scalar_and_batch():
    with pytest.raises(BudgetError):
        samplers.sample_phi_sq_plain(5, RandomStream(0), max_proposals=1)
    with pytest.raises(BudgetError):
        samplers.sample_phi_sq_many(5, 4, RandomStream(0), "plain", max_proposals=1)


def test_mode_validation():
    with pytest.raises(ParameterError):
        samplers.sample_phi_sq_many(3, 10, RandomStream(1), "fancy")
    with pytest.raises(ParameterError):
        samplers.sample_phi_sq_many(-1, 10, RandomStream(1))
    with pytest.raises(ParameterError):
        samplers.sample_gue_eigenvalues(0, 10, RandomStream(1))


def test_config_validation():
    samplers.SamplerConfig(mode="plain", k=3, n=10)
    with pytest.raises(ParameterError):
        samplers.SamplerConfig(mode="other")
    with pytest.raises(ParameterError):
        samplers.SamplerConfig(k=5, n=5)  # mixture requires k < n


def test_mixture_size_one_is_standard_normal():
    count = 5_000
    xs = samplers.sample_gue_eigenvalues(1, count, RandomStream(44))
    ref_stream = RandomStream(44)
    ref_stream.indices(1, count)  # the mixture draws its indices first
    assert np.array_equal(xs, ref_stream.standard_normals(count))


def test_mixture_agrees_with_explicit_conditioning():
    # grouping by index and sampling each degree reproduces the engine
    n, count = 4, 400
    xs = samplers.sample_gue_eigenvalues(n, count, RandomStream(45))
    st = RandomStream(45)
    ks = st.indices(n, count)
    ref = np.empty(count)
    for k in np.unique(ks):
        sel = ks == k
        ref[sel] = samplers.sample_phi_sq_many(int(k), int(sel.sum()), st)
    assert np.array_equal(xs, ref)


def test_mixture_second_moment_short():
    xs = samplers.sample_gue_eigenvalues(50, 30_000, RandomStream(46))
    sq = xs * xs
    assert abs(sq.mean() - 50.0) < 3.0 * sq.std() / math.sqrt(sq.size)


def test_mixture_mass_concentrates_in_bulk():
    # nearly all of the n=1000 spectrum sits inside [-2.1, 2.1] * sqrt(n)
    n = 1000
    xs = samplers.sample_gue_eigenvalues(n, 20_000, RandomStream(49))
    inside = np.abs(xs / math.sqrt(n)) <= 2.1
    assert inside.mean() >= 0.999


def test_plain_and_squeeze_share_acceptance_law():
    a = samplers.sample_phi_sq_many(3, 20_000, RandomStream(47), "plain")
    b = samplers.sample_phi_sq_many(3, 20_000, RandomStream(48), "squeeze")
    assert ks_two_sample(a, b).passes(0.01)


def test_benchmark_rows():
    rows = samplers.benchmark("squeeze", [10, 100], 300, seed=1)
    assert [r.n for r in rows] == [10, 100]
    for r in rows:
        assert r.accepted == 300
        assert r.proposals_per_accept > 1.0
        assert r.cost_proxy >= r.proposals_per_accept
        assert 0.0 <= r.exact_share <= 1.0
    with pytest.raises(ParameterError):
        samplers.benchmark("squeeze", [], 10)
