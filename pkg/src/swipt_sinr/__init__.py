"""SINR distribution toolkit for a full-duplex SWIPT MU-MIMO link.

The package provides:

* a complex-matrix kernel (:mod:`swipt_sinr.linalg`),
* system configuration and channel generation (:mod:`swipt_sinr.system`),
* uplink zero-forcing SINR machinery and its Wishart law
  (:mod:`swipt_sinr.uplink`),
* downlink power-splitting SINR machinery and its matrix-variate
  Beta type II law (:mod:`swipt_sinr.downlink`),
* distribution kernels: multivariate gamma, Wishart pdf/sampler,
  Beta type II pdf, scalar reductions (:mod:`swipt_sinr.distributions`),
* Monte-Carlo drivers and goodness-of-fit scoring
  (:mod:`swipt_sinr.montecarlo`),
* a command-line front end (:mod:`swipt_sinr.cli`).
"""

__version__ = "0.1.0"

from .system import SystemConfig, ChannelSet, sample_channels, validate_config
from .distributions import (
    WishartParams,
    BetaIIParams,
    ScalarLaw,
    log_multivariate_gamma,
    wishart_logpdf,
    wishart_sample,
    beta2_logpdf,
)
from .montecarlo import (
    EmpiricalDist,
    ComparisonReport,
    run_scenario,
    analytical_scalar_law,
    ks_statistic,
    compare,
    SCENARIOS,
)

__all__ = [
    "__version__",
    "SystemConfig",
    "ChannelSet",
    "sample_channels",
    "validate_config",
    "WishartParams",
    "BetaIIParams",
    "ScalarLaw",
    "log_multivariate_gamma",
    "wishart_logpdf",
    "wishart_sample",
    "beta2_logpdf",
    "EmpiricalDist",
    "ComparisonReport",
    "run_scenario",
    "analytical_scalar_law",
    "ks_statistic",
    "compare",
    "SCENARIOS",
]
