import json

import numpy as np
import pytest

from swipt_sinr import montecarlo as mc
from swipt_sinr.distributions import ScalarLaw
from swipt_sinr.montecarlo import (
    ComparisonReport,
    EmpiricalDist,
    analytical_scalar_law,
    compare,
    ks_statistic,
    run_matrix_trace,
    run_scenario,
)
from swipt_sinr.system import SystemConfig, with_fields

SCALAR_CFG = SystemConfig(K=3, N_t=8, N_r=8, N_u=1, N_sel=8, alpha=0.2, seed=101)


def test_run_scenario_deterministic():
    a = run_scenario(SCALAR_CFG, "uplink_perfect", 5000)
    b = run_scenario(SCALAR_CFG, "uplink_perfect", 5000)
    np.testing.assert_array_equal(a.samples, b.samples)


def test_run_scenario_empty():
    emp = run_scenario(SCALAR_CFG, "uplink_perfect", 0)
    assert emp.n == 0
    law, _ = analytical_scalar_law(SCALAR_CFG, "uplink_perfect")
    with pytest.raises(ValueError, match="empty"):
        ks_statistic(emp, law)
    with pytest.raises(ValueError, match="empty"):
        compare(emp, law)


def test_run_scenario_rejects_matrix_config():
    cfg = with_fields(SCALAR_CFG, N_u=2)
    with pytest.raises(ValueError, match="N_u"):
        run_scenario(cfg, "uplink_perfect", 100)


def test_run_scenario_rejects_unknown_scenario():
    with pytest.raises(ValueError, match="scenario"):
        run_scenario(SCALAR_CFG, "sidelink_perfect", 100)


def test_parallel_matches_serial():
    # Enough samples for three RNG blocks.
    n = 10_000
    serial = run_scenario(SCALAR_CFG, "downlink_perfect", n, workers=1)
    parallel = run_scenario(SCALAR_CFG, "downlink_perfect", n, workers=4)
    np.testing.assert_array_equal(serial.samples, parallel.samples)


def test_empirical_mean_increases_with_receive_antennas():
    means = []
    for n_r in (4, 8):
        cfg = with_fields(SCALAR_CFG, N_r=n_r, N_t=n_r, N_sel=n_r)
        means.append(run_scenario(cfg, "uplink_perfect", 20_000).mean())
    assert means[1] > means[0]


def test_empirical_dist_binning():
    emp = run_scenario(SCALAR_CFG, "uplink_perfect", 20_000)
    assert emp.bin_mass.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(emp.samples >= 0)
    assert np.all(np.diff(emp.samples) >= 0)
    assert emp.bin_edges.size == emp.bin_mass.size + 1
    assert emp.bin_mass.size <= mc.MAX_BINS


def test_ecdf_is_exact_on_sorted_samples():
    emp = EmpiricalDist.from_samples(np.arange(1.0, 11.0))
    i = np.arange(1, 11)
    np.testing.assert_allclose(
        np.searchsorted(emp.samples, emp.samples, side="right") / emp.n, i / 10
    )


def test_ks_self_consistency_gamma():
    rng = np.random.default_rng(7)
    law = ScalarLaw("gamma_of_wishart", (8.0, 1.0))
    emp = EmpiricalDist.from_samples(law.sample(rng, 100_000))
    assert ks_statistic(emp, law) <= 0.02


def test_ks_self_consistency_beta_prime():
    rng = np.random.default_rng(8)
    law = ScalarLaw("beta_prime", (8.2, 22.9))
    emp = EmpiricalDist.from_samples(law.sample(rng, 100_000))
    assert ks_statistic(emp, law) <= 0.02


def test_ks_degenerate_mass_at_zero():
    law = ScalarLaw("gamma_of_wishart", (2.0, 1.0))
    emp = EmpiricalDist.from_samples(np.zeros(100))
    assert ks_statistic(emp, law) == pytest.approx(1.0)


def test_analytical_law_uplink_pass_through():
    cfg = with_fields(SCALAR_CFG, p_u=1.0, sigma_u2=1.0)
    law, notes = analytical_scalar_law(cfg, "uplink_perfect")
    assert law.kind == "gamma_of_wishart"
    assert law.params == (8.0, 1.0)
    assert notes == []


def test_analytical_law_downlink_unit_weight_collapse():
    # Vanishing composite noise and power ratio drive the matched weight
    # to one, collapsing the parameters to (N_t, N_v).
    cfg = with_fields(SCALAR_CFG, p_d=1e9)
    law, _ = analytical_scalar_law(cfg, "downlink_perfect")
    n1, n2 = law.params
    assert n1 == pytest.approx(cfg.N_t, rel=1e-6)
    from swipt_sinr.downlink import moment_match_perfect

    assert n2 == pytest.approx(moment_match_perfect(cfg).n_v, rel=1e-6)


def test_analytical_law_alpha_zero_degeneration():
    cfg = with_fields(SCALAR_CFG, alpha=0.0)
    perfect, _ = analytical_scalar_law(cfg, "uplink_perfect")
    imperfect, _ = analytical_scalar_law(cfg, "uplink_imperfect")
    assert perfect == imperfect


def test_analytical_law_requires_scalar_mode():
    cfg = with_fields(SCALAR_CFG, N_u=2)
    with pytest.raises(ValueError, match="N_u"):
        analytical_scalar_law(cfg, "uplink_perfect")


def test_compare_flags_undefined_moments():
    rng = np.random.default_rng(9)
    law = ScalarLaw("beta_prime", (3.0, 0.9))
    emp = EmpiricalDist.from_samples(rng.gamma(2.0, 1.0, 5000))
    report = compare(emp, law)
    assert report.mean_rel_err is None
    assert any("N2 <= 1" in f for f in report.validity_flags)


def test_compare_low_sample_flag():
    law = ScalarLaw("gamma_of_wishart", (8.0, 1.0))
    emp = EmpiricalDist.from_samples(law.sample(np.random.default_rng(10), 10))
    report = compare(emp, law)
    assert any("low_sample_count" in f for f in report.validity_flags)


def test_report_round_trip():
    emp = run_scenario(SCALAR_CFG, "downlink_imperfect", 5000)
    law, notes = analytical_scalar_law(SCALAR_CFG, "downlink_imperfect")
    report = compare(emp, law, scenario="downlink_imperfect", flags=notes)
    payload = json.dumps(report.to_dict())
    restored = ComparisonReport.from_dict(json.loads(payload))
    assert restored == report


def test_matrix_trace_uplink_moments():
    cfg = SystemConfig(K=3, N_t=8, N_r=8, N_u=2, N_sel=8)
    system_traces, law_traces = run_matrix_trace(cfg, "uplink_perfect", 20_000)
    assert system_traces.mean() == pytest.approx(law_traces.mean(), rel=0.05)


def test_matrix_trace_downlink_runs():
    cfg = SystemConfig(K=3, N_t=8, N_r=8, N_u=2, N_sel=8)
    system_traces, law_traces = run_matrix_trace(cfg, "downlink_perfect", 2000)
    assert np.all(np.isfinite(system_traces))
    assert np.all(np.isfinite(law_traces))
    # The matched law is an approximation; means agree loosely.
    assert system_traces.mean() == pytest.approx(law_traces.mean(), rel=0.25)
