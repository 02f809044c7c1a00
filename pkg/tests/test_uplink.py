import numpy as np
import pytest

from swipt_sinr import system, uplink
from swipt_sinr.system import SystemConfig
from swipt_sinr.uplink import (
    StackedChannel,
    build_stacked_channel,
    stacked_with_resample,
    uplink_law_imperfect,
    uplink_law_perfect,
    uplink_sinr_imperfect,
    uplink_sinr_perfect,
    uplink_wishart_imperfect,
    uplink_wishart_perfect,
    zf_equalizer,
)


def make(cfg, seed=0):
    return system.sample_channels(cfg, np.random.default_rng(seed))


def test_stacked_shape_and_user_columns():
    cfg = SystemConfig(K=3, N_t=8, N_r=8, N_u=2, N_sel=8)
    ch = make(cfg)
    st = build_stacked_channel(cfg, ch, 1, "perfect")
    assert st.h_tilde.shape == (8, 8)
    np.testing.assert_array_equal(
        st.h_tilde[:, :2], ch.true_uplink_channel(1)[ch.sel_u[1], :]
    )
    # A block is orthonormal.
    np.testing.assert_allclose(
        st.a_block.conj().T @ st.a_block, np.eye(6), atol=1e-12
    )


def test_stacked_single_user_no_si():
    cfg = SystemConfig(K=1, N_t=6, N_r=6, N_u=1, N_sel=6, si_gain=0.0)
    ch = make(cfg)
    st = build_stacked_channel(cfg, ch, 0, "perfect")
    assert st.n_interferers == 0
    assert st.h_tilde.shape == (6, 6)
    np.testing.assert_allclose(
        st.a_block.conj().T @ st.a_block, np.eye(5), atol=1e-12
    )


def test_stacked_alpha_zero_degeneration():
    cfg = SystemConfig(N_u=1, alpha=0.0)
    ch = make(cfg, seed=5)
    a = build_stacked_channel(cfg, ch, 0, "perfect")
    b = build_stacked_channel(cfg, ch, 0, "imperfect")
    np.testing.assert_array_equal(a.h_tilde, b.h_tilde)


def test_stacked_rejects_overfull_interference():
    cfg = SystemConfig(K=6, N_t=6, N_r=6, N_u=2, N_sel=6)
    ch = make(cfg)
    with pytest.raises(ValueError, match="interference directions"):
        build_stacked_channel(cfg, ch, 0, "perfect")


def test_zf_identity_stack():
    eye = np.eye(5, dtype=complex)
    st = StackedChannel(
        h_tilde=eye, a_block=eye[:, 2:], user_block=eye[:, :2], d_k=2, n_interferers=0
    )
    u = zf_equalizer(st)
    np.testing.assert_allclose(u, eye[:2, :], atol=1e-14)


def test_zf_recovers_identity_and_nulls_interference():
    cfg = SystemConfig(K=3, N_t=8, N_r=8, N_u=2, N_sel=8)
    for seed in range(5):
        ch = make(cfg, seed=seed)
        st = build_stacked_channel(cfg, ch, 0, "perfect")
        u = zf_equalizer(st)
        target = np.concatenate(
            [np.eye(2, dtype=complex), np.zeros((2, 6), dtype=complex)], axis=1
        )
        assert np.abs(u @ st.h_tilde - target).max() < 1e-8
        assert np.abs(u @ st.a_block).max() < 1e-8


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(K=3, N_t=8, N_r=8, N_u=2, N_sel=8),
        dict(K=3, N_t=8, N_r=8, N_u=1, N_sel=8),
        dict(K=2, N_t=6, N_r=6, N_u=2, N_sel=6),
        dict(K=4, N_t=12, N_r=12, N_u=3, N_sel=12),
    ],
)
def test_dual_route_equality(kwargs):
    cfg = SystemConfig(**kwargs)
    worst = 0.0
    for seed in range(100):
        ch = make(cfg, seed=seed)
        a = uplink_sinr_perfect(cfg, ch, 0, route="projection")
        b = uplink_sinr_perfect(cfg, ch, 0, route="stacked")
        worst = max(worst, np.abs(a - b).max() / max(np.abs(a).max(), 1e-30))
    assert worst <= 1e-8


def test_power_scaling_doubles_eigenvalues():
    cfg = SystemConfig(N_u=2)
    ch = make(cfg, seed=9)
    g1 = uplink_sinr_perfect(cfg, ch, 0)
    g2 = uplink_sinr_perfect(system.with_fields(cfg, p_u=2.0), ch, 0)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(g2), 2.0 * np.linalg.eigvalsh(g1), rtol=1e-10
    )


def test_scalar_no_interference_matches_hand_computation():
    cfg = SystemConfig(K=1, N_t=8, N_r=8, N_u=1, N_sel=8, si_gain=0.0)
    ch = make(cfg, seed=3)
    gamma = uplink_sinr_perfect(cfg, ch, 0)
    # One user, no self-interference: the equalizer keeps the whole
    # effective channel, so the SINR is (p/sigma^2) ||H w||^2.
    h_eff = ch.true_uplink_channel(0) @ ch.w_u[0]
    expected = cfg.p_u * np.linalg.norm(h_eff) ** 2 / cfg.sigma_u2
    assert gamma[0, 0].real == pytest.approx(expected, rel=1e-10)


def test_imperfect_alpha_zero_equals_perfect():
    cfg = SystemConfig(N_u=2, alpha=0.0)
    ch = make(cfg, seed=11)
    np.testing.assert_array_equal(
        uplink_sinr_imperfect(cfg, ch, 0), uplink_sinr_perfect(cfg, ch, 0)
    )


def test_imperfect_sinr_strictly_degrades():
    cfg0 = SystemConfig(N_u=2, alpha=0.0)
    ch = make(cfg0, seed=13)
    base = np.linalg.eigvalsh(uplink_sinr_imperfect(cfg0, ch, 0))
    prev = base
    for alpha in (0.1, 0.2, 0.4, 0.7):
        cfg = SystemConfig(N_u=2, alpha=alpha)
        eig = np.linalg.eigvalsh(uplink_sinr_imperfect(cfg, ch, 0))
        assert np.all(eig < prev)
        prev = eig


def test_wishart_params_unit_normalization():
    cfg = SystemConfig(K=1, N_t=8, N_r=8, N_u=1, N_sel=8, si_gain=0.0)
    ch = make(cfg)
    params = uplink_wishart_perfect(cfg, ch, 0)
    assert params.dim == 1
    assert params.dof == 16
    assert params.scale[0, 0].real == pytest.approx(1.0, rel=1e-12)


def test_wishart_dof_tracks_antennas_not_alpha():
    for n_r in (4, 8):
        cfg = SystemConfig(N_t=n_r, N_r=n_r, N_sel=n_r, N_u=2, alpha=0.3)
        ch = make(cfg)
        assert uplink_wishart_perfect(cfg, ch, 0).dof == 2 * n_r
        assert uplink_wishart_imperfect(cfg, ch, 0).dof == 2 * n_r


def test_wishart_scale_is_psd():
    cfg = SystemConfig(N_u=2)
    ch = make(cfg)
    params = uplink_wishart_perfect(cfg, ch, 0)
    assert np.linalg.eigvalsh(params.scale)[0] >= 0


def test_imperfect_scale_ratio():
    cfg = SystemConfig(K=3, N_u=1, alpha=0.2)
    ch = make(cfg, seed=17)
    s_perfect = uplink_wishart_perfect(cfg, ch, 0).scale[0, 0].real
    s_imperfect = uplink_wishart_imperfect(cfg, ch, 0).scale[0, 0].real
    # P = K p_u = 3, J = 1 in scalar mode, unit powers and noise.
    expected_ratio = (1 - 0.04) / (0.04 * 3.0 * 1.0 + 1.0)
    assert s_imperfect / s_perfect == pytest.approx(expected_ratio, rel=1e-12)


def test_imperfect_params_alpha_zero_identical():
    cfg = SystemConfig(N_u=1, alpha=0.0)
    ch = make(cfg, seed=19)
    a = uplink_wishart_perfect(cfg, ch, 0)
    b = uplink_wishart_imperfect(cfg, ch, 0)
    assert a.dof == b.dof and a.dim == b.dim
    np.testing.assert_array_equal(a.scale, b.scale)


def test_config_level_laws_match_realization_params():
    cfg = SystemConfig(N_u=1, alpha=0.2)
    ch = make(cfg, seed=23)
    np.testing.assert_allclose(
        uplink_law_perfect(cfg).scale,
        uplink_wishart_perfect(cfg, ch, 0).scale,
        rtol=1e-12,
    )
    np.testing.assert_allclose(
        uplink_law_imperfect(cfg).scale,
        uplink_wishart_imperfect(cfg, ch, 0).scale,
        rtol=1e-12,
    )


def test_stacked_with_resample_returns():
    cfg = SystemConfig(N_u=1)
    channels, stacked = stacked_with_resample(cfg, np.random.default_rng(29), 0)
    assert stacked.h_tilde.shape == (cfg.N_sel, cfg.N_sel)
