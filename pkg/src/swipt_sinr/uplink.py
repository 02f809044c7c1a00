"""Uplink stacked channel, zero-forcing equalizer, SINR, and Wishart law.

For user ``k`` the receiver stacks the (selected) user channel with an
orthonormal interference block ``A`` that spans the co-user beam directions
and the downlink self-interference direction, completed to a square basis.
The completion is chosen orthogonal to the user block, so the zero-forcing
equalizer built from the stack nulls interference without discarding
signal energy outside the interference span.

The post-equalization SINR matrix is exposed through two algebraically
identical routes (block inverse of the stacked Gram, and the projection
form) plus the closed-form Wishart parameter map.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg

__all__ = [
    "StackedChannel",
    "DegenerateChannelError",
    "build_stacked_channel",
    "stacked_with_resample",
    "zf_equalizer",
    "uplink_sinr_perfect",
    "uplink_sinr_imperfect",
    "uplink_wishart_perfect",
    "uplink_wishart_imperfect",
    "uplink_law_perfect",
    "uplink_law_imperfect",
    "uplink_scale_perfect",
    "uplink_scale_imperfect",
    "beam_spread_factor",
]

#: Attempts before a degenerate realization aborts the run.
MAX_RESAMPLE_ATTEMPTS = 16


class DegenerateChannelError(RuntimeError):
    """Raised when a realization yields a rank-deficient stacked channel."""


@dataclass
class StackedChannel:
    """Square stacked channel ``[user_block | a_block]`` for one user.

    ``h_tilde`` is ``n x n`` with ``n = N_sel`` (the selected receive
    dimension); its first ``d_k`` columns are the selected user channel.
    ``a_block`` has orthonormal columns spanning every interference
    direction plus a completion orthogonal to the user block.
    """

    h_tilde: np.ndarray
    a_block: np.ndarray
    user_block: np.ndarray
    d_k: int
    n_interferers: int


def _interference_columns(cfg, channels, k, csi):
    """Interference directions seen in user k's selected subspace."""
    sel = channels.sel_u[k]
    cols = []
    for i in range(channels.K):
        if i == k:
            continue
        if csi == "perfect":
            h_i = channels.true_uplink_channel(i)
        else:
            h_i = channels.H_hat[i]
        cols.append((h_i @ channels.w_u[i])[sel, 0])
    if cfg.si_gain > 0.0:
        # One representative downlink transmit direction leaking back in.
        t = channels.w_d.sum(axis=(0, 2))
        norm = np.linalg.norm(t)
        if norm > 0.0:
            cols.append((channels.G_d @ (t / norm))[sel])
    if not cols:
        return np.zeros((sel.size, 0), dtype=np.complex128)
    return np.stack(cols, axis=1)


def build_stacked_channel(cfg, channels, k, csi="perfect"):
    """Assemble the square stacked channel for user ``k``.

    Parameters
    ----------
    cfg : SystemConfig
    channels : ChannelSet
    k : int
        User index, ``0 <= k < K``.
    csi : {"perfect", "imperfect"}
        Perfect CSI stacks the composed true channels, imperfect CSI the
        estimated ones.  With ``alpha == 0`` the two stacks coincide.

    Raises
    ------
    DegenerateChannelError
        If the user and interference columns are not jointly full rank.
    ValueError
        If the selected dimension cannot host the user streams plus all
        interference directions.
    """
    if csi not in ("perfect", "imperfect"):
        raise ValueError(f"csi must be 'perfect' or 'imperfect', got {csi!r}")
    if not 0 <= k < channels.K:
        raise ValueError(f"user index {k} out of range (K={channels.K})")

    sel = channels.sel_u[k]
    n = sel.size
    d_k = cfg.N_u
    if csi == "perfect":
        user = channels.true_uplink_channel(k)[sel, :]
    else:
        user = channels.H_hat[k][sel, :]

    ints = _interference_columns(cfg, channels, k, csi)
    m = ints.shape[1]
    if d_k + m > n:
        raise ValueError(
            f"selected dimension {n} cannot host {d_k} user streams plus "
            f"{m} interference directions"
        )

    # Orthonormalize [interference | user | canonical completion]; keeping
    # the user columns out of the A block makes the completion orthogonal
    # to the user's residual signal space.
    basis_src = np.concatenate([ints, user, np.eye(n, dtype=np.complex128)], axis=1)
    q, r = np.linalg.qr(basis_src)
    diag = np.abs(np.diag(r))[: m + d_k]
    tol = n * np.finfo(float).eps * max(1.0, float(np.abs(basis_src).max()))
    if np.any(diag <= tol * 1e3):
        raise DegenerateChannelError(
            f"rank-deficient stacked channel for user {k} (min pivot {diag.min():.3e})"
        )
    a_block = np.concatenate([q[:, :m], q[:, m + d_k : n]], axis=1)
    h_tilde = np.concatenate([user, a_block], axis=1)
    return StackedChannel(
        h_tilde=h_tilde,
        a_block=a_block,
        user_block=user,
        d_k=d_k,
        n_interferers=m,
    )


def stacked_with_resample(cfg, rng, k, csi="perfect", strategy=None):
    """Draw realizations until the stacked channel is well formed.

    Degenerate realizations have probability zero under the continuous
    channel law; persistent failure indicates a configuration bug, so the
    run aborts with a diagnostic after ``MAX_RESAMPLE_ATTEMPTS``.

    Returns
    -------
    (ChannelSet, StackedChannel)
    """
    from . import system

    kwargs = {} if strategy is None else {"strategy": strategy}
    last_error = None
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        channels = system.sample_channels(cfg, rng, **kwargs)
        try:
            return channels, build_stacked_channel(cfg, channels, k, csi)
        except DegenerateChannelError as exc:
            last_error = exc
    raise DegenerateChannelError(
        f"no full-rank realization after {MAX_RESAMPLE_ATTEMPTS} attempts: {last_error}"
    )


def zf_equalizer(stacked):
    """Zero-forcing equalizer ``[I_{d_k} 0] h_tilde^{-1}``.

    Applying it to the stacked channel yields ``[I 0]``; in particular it
    annihilates every interference column.
    """
    inv = linalg.invert(stacked.h_tilde)
    return inv[: stacked.d_k, :]


def beam_spread_factor(channels):
    """Average per-stream beam power ``sum_k ||w_k||^2 / (K N_u)``."""
    d_total = channels.K * channels.w_u.shape[1]
    return float(np.sum(np.abs(channels.w_u) ** 2) / d_total)


def uplink_scale_perfect(cfg, channels, k):
    """Scalar Wishart scale ``p_u ||w_k||^2 / (d_k sigma_u^2)``."""
    w2 = float(np.sum(np.abs(channels.w_u[k]) ** 2))
    return cfg.p_u * w2 / (cfg.N_u * cfg.sigma_u2)


def uplink_scale_imperfect(cfg, channels, k):
    """Scalar Wishart scale under CSI error.

    ``(1-alpha^2) p_u ||w_k||^2 / (d_k (alpha^2 P J + sigma_u^2))`` with
    aggregate symbol power ``P = K p_u`` and beam spread ``J``.  At
    ``alpha == 0`` this reproduces the perfect-CSI scale bit-exactly.
    """
    alpha = cfg.alpha
    w2 = float(np.sum(np.abs(channels.w_u[k]) ** 2))
    p_total = cfg.K * cfg.p_u
    j = beam_spread_factor(channels)
    num = (1.0 - alpha * alpha) * cfg.p_u * w2
    den = cfg.N_u * (alpha * alpha * p_total * j + cfg.sigma_u2)
    return num / den


def _projection_gram(stacked):
    """``U^H (I - A A^H) U`` for the stacked channel (Hermitian PSD)."""
    n = stacked.h_tilde.shape[0]
    p = np.eye(n, dtype=np.complex128) - stacked.a_block @ stacked.a_block.conj().T
    g = stacked.user_block.conj().T @ p @ stacked.user_block
    return 0.5 * (g + g.conj().T)


def _stacked_gram(stacked):
    """Inverse of ``Z (h_tilde^H h_tilde)^{-1} Z^H`` (block-inverse route)."""
    gram = stacked.h_tilde.conj().T @ stacked.h_tilde
    block = linalg.invert(gram)[: stacked.d_k, : stacked.d_k]
    g = linalg.invert(block)
    return 0.5 * (g + g.conj().T)


def _sinr_matrix(scale, stacked, route):
    if route == "projection":
        gram = _projection_gram(stacked)
    elif route == "stacked":
        gram = _stacked_gram(stacked)
    else:
        raise ValueError(f"unknown route {route!r}")
    return scale * gram


def uplink_sinr_perfect(cfg, channels, k, route="projection"):
    """Post-equalization SINR matrix under perfect CSI (d_k x d_k).

    ``route`` selects the computation path: "projection" evaluates
    ``scale * U^H (I - A A^H) U`` directly, "stacked" inverts the
    top-left block of the stacked Gram inverse.  Both agree to machine
    precision on full-rank realizations.
    """
    stacked = build_stacked_channel(cfg, channels, k, "perfect")
    return _sinr_matrix(uplink_scale_perfect(cfg, channels, k), stacked, route)


def uplink_sinr_imperfect(cfg, channels, k, route="projection"):
    """Post-equalization SINR matrix under imperfect CSI (d_k x d_k).

    Uses the estimated-channel stack; the CSI error enters as a scalar
    signal shrinkage ``(1 - alpha^2)`` and an interference-floor term
    ``alpha^2 P J`` in the noise.  At ``alpha == 0`` the output equals
    :func:`uplink_sinr_perfect` exactly for the same realization.
    """
    stacked = build_stacked_channel(cfg, channels, k, "imperfect")
    return _sinr_matrix(uplink_scale_imperfect(cfg, channels, k), stacked, route)


def uplink_wishart_perfect(cfg, channels, k):
    """Closed-form Wishart parameters of the perfect-CSI uplink SINR.

    Dimension ``d_k = N_u``, ``2 N_sel`` real degrees of freedom, scale
    ``p_u ||w_k||^2 / (d_k sigma_u^2) I``.
    """
    from .distributions import WishartParams

    s = uplink_scale_perfect(cfg, channels, k)
    return WishartParams(
        dim=cfg.N_u,
        dof=2 * cfg.N_sel,
        scale=s * np.eye(cfg.N_u, dtype=np.complex128),
    )


def uplink_law_perfect(cfg):
    """Config-only perfect-CSI law (beamformers are unit norm by design).

    Identical to :func:`uplink_wishart_perfect` evaluated at the exact
    unit beam norm, so pooled Monte-Carlo samples can be compared against
    one realization-independent parameter record.
    """
    from .distributions import WishartParams

    s = cfg.p_u / (cfg.N_u * cfg.sigma_u2)
    return WishartParams(
        dim=cfg.N_u,
        dof=2 * cfg.N_sel,
        scale=s * np.eye(cfg.N_u, dtype=np.complex128),
    )


def uplink_law_imperfect(cfg):
    """Config-only imperfect-CSI law; equals the perfect law at alpha == 0."""
    from .distributions import WishartParams

    alpha = cfg.alpha
    p_total = cfg.K * cfg.p_u
    j = 1.0 / cfg.N_u
    num = (1.0 - alpha * alpha) * cfg.p_u
    den = cfg.N_u * (alpha * alpha * p_total * j + cfg.sigma_u2)
    return WishartParams(
        dim=cfg.N_u,
        dof=2 * cfg.N_sel,
        scale=(num / den) * np.eye(cfg.N_u, dtype=np.complex128),
    )


def uplink_wishart_imperfect(cfg, channels, k):
    """Closed-form Wishart parameters of the imperfect-CSI uplink SINR.

    Same dimension and degrees of freedom as the perfect-CSI law; only
    the scale shrinks with ``alpha``.
    """
    from .distributions import WishartParams

    s = uplink_scale_imperfect(cfg, channels, k)
    return WishartParams(
        dim=cfg.N_u,
        dof=2 * cfg.N_sel,
        scale=s * np.eye(cfg.N_u, dtype=np.complex128),
    )
