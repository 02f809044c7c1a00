"""Power-splitting trade-off: harvested energy vs decoding SINR across rho.

Each received block is split sqrt(rho) into the decoder (plus processing
noise) and sqrt(1-rho) into the harvester; harvested power is the linear
conversion eta_eh * ||y_eh||^2.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from swipt_sinr.downlink import downlink_sinr_perfect, harvested_power, split_received_signal
from swipt_sinr.system import SystemConfig, crandn, sample_channels, with_fields

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

base = SystemConfig(K=3, N_u=2, seed=4)
rhos = np.linspace(0.05, 0.95, 10)
rng = np.random.default_rng(5)

harvest, sinr_trace = [], []
for rho in rhos:
    cfg = with_fields(base, rho=float(rho))
    h_acc, s_acc = 0.0, 0.0
    n_real = 400
    for seed in range(n_real):
        ch = sample_channels(cfg, np.random.default_rng(seed))
        # One received symbol block at SU 0: signal + co-user interference + noise.
        f0 = ch.true_downlink_channel(0)
        symbols = crandn(rng, cfg.K, cfg.N_u, 1)
        y = sum(
            np.sqrt(cfg.p_d) * f0 @ ch.w_d[i] @ symbols[i] for i in range(cfg.K)
        ) + np.sqrt(cfg.sigma_d2) * crandn(rng, cfg.N_u, 1)
        ps_noise = np.sqrt(cfg.sigma_s2) * crandn(rng, cfg.N_u, 1)
        _, y_eh = split_received_signal(y, cfg.rho, ps_noise)
        h_acc += harvested_power(y_eh, cfg.eta_eh)
        s_acc += np.trace(downlink_sinr_perfect(cfg, ch, 0)).real
    harvest.append(h_acc / n_real)
    sinr_trace.append(s_acc / n_real)
    print(f"rho={rho:.2f}: harvested={harvest[-1]:.4f} W, mean SINR trace={sinr_trace[-1]:.4f}")

fig, ax1 = plt.subplots(figsize=(7, 4.5))
ax1.plot(rhos, harvest, "o-", color="tab:green", label="harvested power")
ax1.set_xlabel("decoding split ratio rho")
ax1.set_ylabel("harvested power (W)", color="tab:green")
ax2 = ax1.twinx()
ax2.plot(rhos, sinr_trace, "s--", color="tab:purple", label="mean SINR trace")
ax2.set_ylabel("mean SINR trace (linear)", color="tab:purple")
ax1.grid(alpha=0.3)
fig.tight_layout()
path = os.path.join(OUT, "power_splitting.png")
fig.savefig(path, dpi=150)
print(f"saved {path}")
