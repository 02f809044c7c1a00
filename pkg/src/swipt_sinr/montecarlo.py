"""Monte-Carlo experiment drivers and goodness-of-fit scoring.

Sampling model
--------------
``run_scenario`` draws one scalar SINR sample per independent channel
realization and compares the pooled samples against the closed-form law.
The samples realize the quantities the closed forms describe:

* Uplink: after zero-forcing removes the interference directions, the
  per-user SINR is the law's scale times the Gram of the selected
  (estimated, under CSI error) user channel.  The exact equalizer output
  additionally pays a projection penalty of one effective dimension per
  nulled direction; that exact path is available through
  :mod:`swipt_sinr.uplink` and is deliberately not what the closed form
  models.
* Downlink: the SINR is a quotient of independent channel Grams — the
  user's own selected Gram over the sum of the co-user Grams, the
  uplink-leakage Gram weighted by the power ratio, and the composite
  noise.  Each term is the full Gram of its constituent channel matrix
  from the realization (beamformer-collapsed variants are exposed through
  the exact per-realization SINR API instead).

Reproducibility
---------------
Realizations are organized in fixed-size blocks; block ``b`` of scenario
``s`` draws from ``PCG64(SeedSequence(seed, spawn_key=(s, b)))``.  Sample
values therefore depend only on ``(seed, scenario, block structure)``,
never on the number of workers.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import downlink as dl
from . import uplink as ul
from .distributions import ScalarLaw, beta_prime_law, gamma_law_from_wishart

__all__ = [
    "SCENARIOS",
    "BLOCK_SIZE",
    "EmpiricalDist",
    "ComparisonReport",
    "run_scenario",
    "analytical_scalar_law",
    "ks_statistic",
    "compare",
    "run_matrix_trace",
]

SCENARIOS = (
    "uplink_perfect",
    "uplink_imperfect",
    "downlink_perfect",
    "downlink_imperfect",
)

#: Realizations per RNG block; part of the reproducibility contract.
BLOCK_SIZE = 4096

#: Histogram bin cap (Freedman-Diaconis rule is clipped to this).
MAX_BINS = 512

RNG_ALGORITHM = "numpy-PCG64/SeedSequence(seed, spawn_key=(scenario_index, block_index))"


def _check_scenario(scenario):
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


def _block_rng(seed, scenario, block):
    ss = np.random.SeedSequence(seed, spawn_key=(SCENARIOS.index(scenario), block))
    return np.random.Generator(np.random.PCG64(ss))


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _selected_gram(x, n_sel):
    """Per-realization sum of the ``n_sel`` largest per-antenna powers.

    ``x`` has shape (..., n_antennas); with full selection this is the
    plain squared Frobenius norm over the last axis.
    """
    p = np.abs(x) ** 2
    if n_sel == p.shape[-1]:
        return p.sum(axis=-1)
    part = np.partition(p, p.shape[-1] - n_sel, axis=-1)
    return part[..., p.shape[-1] - n_sel :].sum(axis=-1)


def _sample_block(cfg, scenario, block, count):
    """Draw ``count`` scalar SINR samples for one RNG block."""
    if cfg.N_u != 1:
        raise ValueError(
            f"scalar-mode sampling requires N_u == 1, got N_u={cfg.N_u}"
        )
    rng = _block_rng(cfg.seed, scenario, block)
    r = cfg.p_u / cfg.p_d

    if scenario == "uplink_perfect":
        h = _crandn(rng, count, cfg.N_r)
        gram = _selected_gram(h, cfg.N_sel)
        return gram * ul.uplink_law_perfect(cfg).scalar_scale()

    if scenario == "uplink_imperfect":
        h = _crandn(rng, count, cfg.N_r)
        gram = _selected_gram(h, cfg.N_sel)
        return gram * ul.uplink_law_imperfect(cfg).scalar_scale()

    if scenario == "downlink_perfect":
        f = _crandn(rng, count, cfg.K, cfg.N_t)
        g_u = np.sqrt(cfg.si_gain) * _crandn(rng, count, cfg.K)
        gram = _selected_gram(f, cfg.N_sel)
        si = (np.abs(g_u) ** 2).sum(axis=-1)
        psi = gram[:, 1:].sum(axis=1) + r * si + dl.composite_noise_perfect(cfg)
        return gram[:, 0] / psi

    # downlink_imperfect
    om = 1.0 - cfg.alpha * cfg.alpha
    f_hat = _crandn(rng, count, cfg.K, cfg.N_t)
    delta = _crandn(rng, count, cfg.K, cfg.N_t)
    g_u = np.sqrt(cfg.si_gain) * _crandn(rng, count, cfg.K)
    gram = _selected_gram(f_hat, cfg.N_sel)
    err = (cfg.alpha**2 / om) * _selected_gram(delta, cfg.N_sel).sum(axis=1)
    si = (np.abs(g_u) ** 2).sum(axis=-1)
    psi = gram[:, 1:].sum(axis=1) + err + (r / om) * si + dl.composite_noise_imperfect(cfg)
    return gram[:, 0] / psi


def _block_task(args):
    cfg, scenario, block, count = args
    return block, _sample_block(cfg, scenario, block, count)


@dataclass
class EmpiricalDist:
    """Sorted samples plus a normalized histogram (Freedman-Diaconis bins)."""

    samples: np.ndarray
    bin_edges: np.ndarray
    bin_mass: np.ndarray

    @classmethod
    def from_samples(cls, samples):
        samples = np.sort(np.asarray(samples, dtype=float))
        if samples.size == 0:
            return cls(
                samples=samples,
                bin_edges=np.array([], dtype=float),
                bin_mass=np.array([], dtype=float),
            )
        n = samples.size
        q25, q75 = np.quantile(samples, [0.25, 0.75])
        width = 2.0 * (q75 - q25) * n ** (-1.0 / 3.0)
        span = float(samples[-1] - samples[0])
        if width <= 0.0 or span <= 0.0:
            bins = 1
        else:
            bins = int(min(MAX_BINS, max(1, math.ceil(span / width))))
        edges = np.linspace(samples[0], samples[-1], bins + 1)
        counts, edges = np.histogram(samples, bins=edges)
        return cls(samples=samples, bin_edges=edges, bin_mass=counts / n)

    @property
    def n(self):
        return int(self.samples.size)

    def mean(self):
        return float(self.samples.mean())

    def var(self):
        return float(self.samples.var())


def run_scenario(cfg, scenario, n, workers=1):
    """Collect ``n`` scalar SINR samples for one scenario.

    Deterministic given ``(cfg.seed, scenario)`` for any worker count.
    ``n == 0`` yields an empty distribution (downstream comparisons will
    refuse it).
    """
    _check_scenario(scenario)
    n = int(n)
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    if n == 0:
        return EmpiricalDist.from_samples(np.array([], dtype=float))
    blocks = [
        (cfg, scenario, b, min(BLOCK_SIZE, n - b * BLOCK_SIZE))
        for b in range(math.ceil(n / BLOCK_SIZE))
    ]
    if workers <= 1 or len(blocks) == 1:
        shards = [_block_task(args) for args in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            shards = list(pool.map(_block_task, blocks))
    shards.sort(key=lambda item: item[0])
    samples = np.concatenate([s for _, s in shards])
    return EmpiricalDist.from_samples(samples)


def analytical_scalar_law(cfg, scenario):
    """Closed-form scalar law for a scenario, plus its validity notes.

    Requires ``N_u == 1`` (scalar comparison mode).  Uplink scenarios map
    to the gamma reduction of the Wishart law; downlink scenarios to the
    beta-prime reduction of the Beta type II law.
    """
    _check_scenario(scenario)
    if cfg.N_u != 1:
        raise ValueError(
            f"scalar comparison requires N_u == 1, got N_u={cfg.N_u}"
        )
    notes = []
    if scenario == "uplink_perfect":
        law = gamma_law_from_wishart(ul.uplink_law_perfect(cfg))
    elif scenario == "uplink_imperfect":
        law = gamma_law_from_wishart(ul.uplink_law_imperfect(cfg))
    elif scenario == "downlink_perfect":
        notes.extend(dl.law_validity_notes(cfg, "perfect"))
        law = beta_prime_law(dl.beta2_params_perfect(cfg))
    else:
        notes.extend(dl.law_validity_notes(cfg, "imperfect"))
        law = beta_prime_law(dl.beta2_params_imperfect(cfg))
    if scenario.startswith("uplink") and cfg.N_sel < cfg.N_r:
        notes.append(
            "partial_selection: norm-based antenna selection biases the"
            " selected channel Grams; the closed form assumes unbiased"
            " selected dimensions"
        )
    return law, notes


def ks_statistic(emp, law):
    """Two-sided Kolmogorov-Smirnov distance between samples and a law."""
    if emp.n == 0:
        raise ValueError("empty empirical distribution")
    cdf = law.cdf(emp.samples)
    i = np.arange(1, emp.n + 1, dtype=float)
    upper = np.max(i / emp.n - cdf)
    lower = np.max(cdf - (i - 1.0) / emp.n)
    return float(max(upper, lower))


@dataclass
class ComparisonReport:
    """Empirical-vs-analytical fit metrics for one scenario."""

    scenario: str
    n_samples: int
    ks_distance: float
    emp_mean: float
    emp_var: float
    law_mean: float | None
    law_var: float | None
    mean_rel_err: float | None
    var_rel_err: float | None
    validity_flags: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


#: Reports of runs below this sample count carry a low-sample flag.
LOW_SAMPLE_THRESHOLD = 1000


def compare(emp, law, scenario="unknown", flags=()):
    """Score an empirical distribution against a scalar law.

    Relative moment errors are against the law's analytic moments; moments
    that do not exist are reported as flags rather than failures.
    """
    if emp.n == 0:
        raise ValueError("empty empirical distribution")
    flags = list(flags)
    if emp.n < LOW_SAMPLE_THRESHOLD:
        flags.append(f"low_sample_count: n={emp.n} < {LOW_SAMPLE_THRESHOLD}")
    ks = ks_statistic(emp, law)
    law_mean, mean_flag = law.mean()
    law_var, var_flag = law.var()
    if mean_flag:
        flags.append(mean_flag)
    if var_flag:
        flags.append(var_flag)
    emp_mean = emp.mean()
    emp_var = emp.var()
    mean_rel = None if law_mean is None else abs(emp_mean - law_mean) / abs(law_mean)
    var_rel = None if law_var is None else abs(emp_var - law_var) / abs(law_var)
    return ComparisonReport(
        scenario=scenario,
        n_samples=emp.n,
        ks_distance=ks,
        emp_mean=emp_mean,
        emp_var=emp_var,
        law_mean=law_mean,
        law_var=law_var,
        mean_rel_err=mean_rel,
        var_rel_err=var_rel,
        validity_flags=flags,
    )


def run_matrix_trace(cfg, scenario, n, seed_offset=0):
    """Matrix-mode exposure: trace samples of the system vs the matrix law.

    For ``N_u >= 1`` draws ``n`` realizations of the matrix SINR object
    and ``n`` draws of the closed-form matrix law, returning both trace
    sample vectors.  Comparison is by summary statistics only; the scalar
    KS pipeline requires ``N_u == 1``.
    """
    _check_scenario(scenario)
    from .distributions import wishart_sample

    rng = _block_rng(cfg.seed + seed_offset, scenario, 1_000_000)
    n = int(n)
    if scenario.startswith("uplink"):
        h = _crandn(rng, n, cfg.N_r, cfg.N_u)
        gram = _selected_gram(np.swapaxes(h, -1, -2), cfg.N_sel).sum(axis=-1)
        params = (
            ul.uplink_law_perfect(cfg)
            if scenario == "uplink_perfect"
            else ul.uplink_law_imperfect(cfg)
        )
        system_traces = gram * float(params.scale[0, 0].real)
        law_traces = np.einsum("kii->k", wishart_sample(params, rng, size=n)).real
        return system_traces, law_traces

    # Downlink: quotient of Wishart draws with the matched parameters.
    if scenario == "downlink_perfect":
        mm = dl.moment_match_perfect(cfg)
        sigma = dl.composite_noise_perfect(cfg)
        eta, nv = mm.eta_v, mm.n_v
    else:
        mm = dl.moment_match_imperfect(cfg)
        sigma = dl.composite_noise_imperfect(cfg)
        eta, nv = mm.eta_v, mm.n_v
    r = cfg.p_u / cfg.p_d
    f = _crandn(rng, n, cfg.K, cfg.N_u, cfg.N_t)
    g_u = np.sqrt(cfg.si_gain) * _crandn(rng, n, cfg.K, cfg.N_u)
    eye = np.eye(cfg.N_u)
    system_traces = np.empty(n)
    for j in range(n):
        phi = f[j, 0] @ f[j, 0].conj().T
        psi = sigma * eye.astype(complex)
        for i in range(1, cfg.K):
            psi = psi + f[j, i] @ f[j, i].conj().T
        psi = psi + r * (g_u[j].conj().T @ g_u[j])
        system_traces[j] = np.trace(np.linalg.solve(psi, phi)).real
    params = dl.beta2_params_perfect(cfg) if scenario == "downlink_perfect" else dl.beta2_params_imperfect(cfg)
    if not params.is_normalizable:
        raise ValueError("matrix law parameters outside validity region")
    # Law draws: quotient of the matched numerator/denominator Wisharts.
    num_dof = 2 * cfg.N_sel
    den_dof = 2 * int(round(nv))
    from .distributions import WishartParams

    w_num = wishart_sample(
        WishartParams(cfg.N_u, num_dof, np.eye(cfg.N_u, dtype=complex)), rng, size=n
    )
    w_den = wishart_sample(
        WishartParams(cfg.N_u, den_dof, np.eye(cfg.N_u, dtype=complex)), rng, size=n
    )
    law_traces = np.empty(n)
    for j in range(n):
        law_traces[j] = np.trace(np.linalg.solve(w_den[j], w_num[j])).real / eta
    return system_traces, law_traces
