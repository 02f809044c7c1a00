"""System configuration, channel generation, and antenna selection.

The aggregator (AGG) serves ``K`` sensor users (SUs).  The AGG has ``N_t``
transmit and ``N_r`` receive antennas (equal by assumption), each SU has
``N_u`` antennas.  All channel entries are i.i.d. circular complex Gaussian
with zero mean and unit variance; self-interference channels are scaled by
``si_gain``.  SUs split received power with ratio ``rho`` and imperfect CSI
follows ``H = sqrt(1 - alpha^2) H_hat + alpha Delta``.
"""

import json
import math
from dataclasses import dataclass, field, asdict, replace

import numpy as np

__all__ = [
    "SystemConfig",
    "ChannelSet",
    "CONFIG_FIELDS",
    "validate_config",
    "load_config",
    "config_to_dict",
    "sample_channels",
    "compose_true_channel",
    "select_antennas",
    "selected_indices",
    "derived_dims",
    "crandn",
]

SELECTION_STRATEGIES = ("all", "first_n", "max_norm", "random")

#: Default antenna-selection strategy used during channel generation.
DEFAULT_STRATEGY = "max_norm"


@dataclass(frozen=True)
class SystemConfig:
    """All scalar parameters of the link.

    Counts: ``K`` users, ``N_t``/``N_r`` AGG antennas, ``N_u`` SU antennas,
    ``N_sel`` selected antennas (uplink receive / downlink transmit).
    Powers and variances are linear (watts).  ``rho`` is the power-splitting
    ratio on the information-decoding branch, ``alpha`` the CSI error
    coefficient, ``eta_eh`` the energy-harvesting conversion efficiency and
    ``si_gain`` the self-interference variance scale.
    """

    K: int = 3
    N_t: int = 8
    N_r: int = 8
    N_u: int = 2
    N_sel: int = 8
    p_u: float = 1.0
    p_d: float = 1.0
    sigma_u2: float = 1.0
    sigma_d2: float = 1.0
    sigma_s2: float = 1.0
    rho: float = 0.3
    alpha: float = 0.2
    eta_eh: float = 0.4
    si_gain: float = 1.0
    seed: int = 0
    mc_samples: int = 100_000


CONFIG_FIELDS = tuple(SystemConfig.__dataclass_fields__)

_COUNT_FIELDS = ("K", "N_t", "N_r", "N_u", "N_sel", "seed", "mc_samples")


def validate_config(cfg):
    """Check every configuration invariant; return the list of violations.

    An empty list means the configuration is valid.  Each violation names
    the offending field.
    """
    errors = []
    for name in _COUNT_FIELDS:
        v = getattr(cfg, name)
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            errors.append(f"{name}: must be an integer, got {v!r}")
    if errors:
        return errors

    if cfg.K < 1:
        errors.append(f"K: must be >= 1, got {cfg.K}")
    if cfg.N_t != cfg.N_r:
        errors.append(
            f"N_t: transmit and receive antenna counts must be equal "
            f"(N_t={cfg.N_t}, N_r={cfg.N_r})"
        )
    if cfg.N_u < 1:
        errors.append(f"N_u: must be >= 1, got {cfg.N_u}")
    if cfg.N_r < cfg.N_u:
        errors.append(
            f"N_r: must be >= N_u (antenna ordering), got N_r={cfg.N_r}, N_u={cfg.N_u}"
        )
    if not (1 <= cfg.N_sel <= cfg.N_r):
        errors.append(f"N_sel: must satisfy 1 <= N_sel <= N_r, got {cfg.N_sel}")
    for name in ("p_u", "p_d", "sigma_u2", "sigma_d2", "sigma_s2"):
        v = getattr(cfg, name)
        if not (isinstance(v, (int, float)) and v > 0):
            errors.append(f"{name}: must be > 0, got {v!r}")
    if not (0.0 < cfg.rho <= 1.0):
        errors.append(f"rho: must be in (0, 1], got {cfg.rho}")
    if not (0.0 <= cfg.alpha < 1.0):
        errors.append(f"alpha: must be in [0, 1), got {cfg.alpha}")
    if not (0.0 < cfg.eta_eh <= 1.0):
        errors.append(f"eta_eh: must be in (0, 1], got {cfg.eta_eh}")
    if not (isinstance(cfg.si_gain, (int, float)) and cfg.si_gain >= 0):
        errors.append(f"si_gain: must be >= 0, got {cfg.si_gain!r}")
    if cfg.seed < 0:
        errors.append(f"seed: must be >= 0, got {cfg.seed}")
    if cfg.mc_samples < 0:
        errors.append(f"mc_samples: must be >= 0, got {cfg.mc_samples}")
    return errors


def config_to_dict(cfg):
    """Plain dict snapshot with the exact config keys."""
    return asdict(cfg)


def load_config(path):
    """Load a :class:`SystemConfig` from a JSON key-value file.

    Every key must be one of the config field names; unknown keys are an
    error (fail-closed).  Missing keys take the defaults.

    Raises
    ------
    ValueError
        On unknown keys, non-object documents, or wrongly typed values.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config parse error in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    unknown = sorted(set(raw) - set(CONFIG_FIELDS))
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        if key in _COUNT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"config key {key} must be an integer, got {value!r}")
            kwargs[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"config key {key} must be a number, got {value!r}")
            kwargs[key] = float(value)
    return SystemConfig(**kwargs)


def derived_dims(cfg):
    """Stream ranks implied by the configuration.

    Returns ``(d_k, q_k, d_total)``: the uplink per-user stream rank, the
    downlink per-user projection rank (both equal to ``N_u`` — each user
    carries a full complement of streams), and the total stream count
    ``K * N_u``.
    """
    return cfg.N_u, cfg.N_u, cfg.K * cfg.N_u


def crandn(rng, *shape):
    """Circular complex Gaussian draws, zero mean, unit variance per entry."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def compose_true_channel(h_hat, delta, alpha):
    """True channel from estimate and error: ``sqrt(1-alpha^2) h_hat + alpha delta``.

    With unit-variance independent inputs the output entries keep unit
    variance.  ``alpha == 0`` returns ``h_hat`` bit-exactly.
    """
    h_hat = np.asarray(h_hat, dtype=np.complex128)
    delta = np.asarray(delta, dtype=np.complex128)
    if h_hat.shape != delta.shape:
        raise ValueError(
            f"shape mismatch: h_hat {h_hat.shape} vs delta {delta.shape}"
        )
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if alpha == 0.0:
        return h_hat.copy()
    return math.sqrt(1.0 - alpha * alpha) * h_hat + alpha * delta


def selected_indices(channel, n_sel, strategy=DEFAULT_STRATEGY, rng=None):
    """Indices (sorted ascending) of the selected rows of ``channel``.

    ``max_norm`` picks the ``n_sel`` rows of largest Euclidean norm, ties
    broken by lowest index.  ``all`` requires ``n_sel == rows``.  ``random``
    needs an explicit ``rng``.
    """
    channel = np.asarray(channel)
    if channel.ndim == 1:
        channel = channel[:, None]
    rows = channel.shape[0]
    if not (1 <= n_sel <= rows):
        raise ValueError(f"n_sel must be in [1, {rows}], got {n_sel}")
    if strategy not in SELECTION_STRATEGIES:
        raise ValueError(f"unknown selection strategy {strategy!r}")
    if strategy == "all":
        if n_sel != rows:
            raise ValueError(
                f"strategy 'all' requires n_sel == rows ({rows}), got {n_sel}"
            )
        return np.arange(rows)
    if strategy == "first_n":
        return np.arange(n_sel)
    if strategy == "random":
        if rng is None:
            raise ValueError("strategy 'random' requires an rng")
        return np.sort(rng.choice(rows, size=n_sel, replace=False))
    norms = np.linalg.norm(channel, axis=1)
    # Stable ranking: descending norm, ascending index on ties.
    order = np.lexsort((np.arange(rows), -norms))
    return np.sort(order[:n_sel])


def select_antennas(channel, n_sel, strategy=DEFAULT_STRATEGY, rng=None):
    """Diagonal 0/1 antenna-selection matrix with exactly ``n_sel`` ones."""
    channel = np.asarray(channel)
    rows = channel.shape[0] if channel.ndim > 1 else channel.shape[0]
    idx = selected_indices(channel, n_sel, strategy, rng)
    v = np.zeros((rows, rows), dtype=np.complex128)
    v[idx, idx] = 1.0
    return v


@dataclass
class ChannelSet:
    """One realization of every channel, beamformer, and selection.

    Shapes: ``H_hat`` (K, N_r, N_u) estimated uplink channels and
    ``Delta_u`` their errors; ``F_hat`` (K, N_u, N_t) estimated downlink
    channels and ``Delta_d`` their errors; ``G_d`` (N_r, N_t) AGG
    self-interference; ``G_u`` (K, N_u) SU-side self-interference;
    ``w_u`` (K, N_u, 1) unit-norm uplink beamformers; ``w_d`` (K, N_t, N_u)
    downlink precoders with unit-norm columns; ``sel_u``/``sel_d``
    (K, N_sel) selected receive/transmit antenna indices.
    """

    alpha: float
    H_hat: np.ndarray
    Delta_u: np.ndarray
    F_hat: np.ndarray
    Delta_d: np.ndarray
    G_d: np.ndarray
    G_u: np.ndarray
    w_u: np.ndarray
    w_d: np.ndarray
    sel_u: np.ndarray
    sel_d: np.ndarray

    @property
    def K(self):
        return self.H_hat.shape[0]

    def true_uplink_channel(self, k):
        """Composed true uplink channel of user ``k`` (N_r x N_u)."""
        return compose_true_channel(self.H_hat[k], self.Delta_u[k], self.alpha)

    def true_downlink_channel(self, k):
        """Composed true downlink channel of user ``k`` (N_u x N_t)."""
        return compose_true_channel(self.F_hat[k], self.Delta_d[k], self.alpha)

    def selection_matrix_u(self, k):
        """Diagonal uplink (receive-side) selection matrix of user ``k``."""
        n = self.H_hat.shape[1]
        v = np.zeros((n, n), dtype=np.complex128)
        v[self.sel_u[k], self.sel_u[k]] = 1.0
        return v

    def selection_matrix_d(self, k):
        """Diagonal downlink (transmit-side) selection matrix of user ``k``."""
        n = self.w_d.shape[1]
        v = np.zeros((n, n), dtype=np.complex128)
        v[self.sel_d[k], self.sel_d[k]] = 1.0
        return v


def sample_channels(cfg, rng, strategy=DEFAULT_STRATEGY):
    """Draw one full channel realization.

    Deterministic given the generator state.  Beamformers are drawn from
    the complex Gaussian ensemble and normalized once per realization,
    independently of the channels (the distributional results require that
    independence).  Selection uses per-user channel norms under
    ``strategy`` (degenerates to all-antennas when ``N_sel == N_r``).
    """
    K, N_r, N_t, N_u, n_sel = cfg.K, cfg.N_r, cfg.N_t, cfg.N_u, cfg.N_sel

    h_hat = crandn(rng, K, N_r, N_u)
    delta_u = crandn(rng, K, N_r, N_u)
    f_hat = crandn(rng, K, N_u, N_t)
    delta_d = crandn(rng, K, N_u, N_t)
    g_d = np.sqrt(cfg.si_gain) * crandn(rng, N_r, N_t)
    g_u = np.sqrt(cfg.si_gain) * crandn(rng, K, N_u)

    w_u = crandn(rng, K, N_u, 1)
    w_u /= np.linalg.norm(w_u, axis=1, keepdims=True)
    w_d = crandn(rng, K, N_t, N_u)
    w_d /= np.linalg.norm(w_d, axis=1, keepdims=True)

    sel_u = np.empty((K, n_sel), dtype=np.intp)
    sel_d = np.empty((K, n_sel), dtype=np.intp)
    for k in range(K):
        sel_u[k] = selected_indices(h_hat[k], n_sel, strategy, rng)
        sel_d[k] = selected_indices(f_hat[k].conj().T, n_sel, strategy, rng)

    return ChannelSet(
        alpha=float(cfg.alpha),
        H_hat=h_hat,
        Delta_u=delta_u,
        F_hat=f_hat,
        Delta_d=delta_d,
        G_d=g_d,
        G_u=g_u,
        w_u=w_u,
        w_d=w_d,
        sel_u=sel_u,
        sel_d=sel_d,
    )


def with_fields(cfg, **kwargs):
    """Copy of ``cfg`` with the given fields replaced."""
    return replace(cfg, **kwargs)
