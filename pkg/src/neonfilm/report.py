"""Figure rendering for run and campaign outputs.

Figures are written next to the delimited output by the CLI. Rendering is
headless (Agg) so it works in batch jobs and containers.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import pearson_r  # noqa: E402
from .config import ModelConfig  # noqa: E402
from .engine import CampaignEvent, TelemetryRecord  # noqa: E402
from .thermo import phase_boundary_points  # noqa: E402


def render_run_figure(records: list[TelemetryRecord], cfg: ModelConfig,
                      path: str) -> None:
    t = np.array([r.t_s for r in records])
    T = np.array([r.T_cell_K for r in records])
    T_set = np.array([r.T_set_K for r in records])
    P = np.array([r.P_Pa for r in records])
    d = np.array([r.d_local_m for r in records])
    df = np.array([r.df_corr_Hz for r in records])

    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    ax = axes[0, 0]
    ax.plot(t, T, lw=1.2, label="cell")
    ax.plot(t, T_set, lw=0.8, ls="--", color="gray", label="setpoint")
    ax.axhline(cfg.diagram.T_triple, color="k", lw=0.5, alpha=0.4)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("T (K)")
    ax.legend(fontsize=8)

    ax = axes[0, 1]
    boundary = phase_boundary_points(cfg.diagram)["points"]
    for branch in ("liquid", "solid"):
        pts = [(b["T_K"], b["P_Pa"]) for b in boundary if b["branch"] == branch]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=0.8, label=branch)
    live = P > 0
    ax.plot(T[live], P[live], lw=1.4, color="C3", label="trajectory")
    ax.set_yscale("log")
    ax.set_xlabel("T (K)")
    ax.set_ylabel("P (Pa)")
    ax.legend(fontsize=8)

    ax = axes[1, 0]
    ax.plot(t, d * 1e9, lw=1.2)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("local thickness (nm)")

    ax = axes[1, 1]
    ax.plot(t, df * 1e-3, lw=1.2)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("corrected shift (kHz)")

    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_campaign_figure(events: list[CampaignEvent], path: str) -> None:
    d_liq = np.array([e.d_liquid_m for e in events])
    d_sol = np.array([e.d_solid_m for e in events])
    ok = (d_liq > 0) & (d_sol > 0)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    ax = axes[0]
    ax.scatter(d_liq[ok] * 1e9, d_sol[ok] * 1e9, s=10, alpha=0.5)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("liquid thickness (nm)")
    ax.set_ylabel("solid thickness (nm)")
    if ok.sum() >= 3:
        try:
            r = pearson_r(d_liq[ok], d_sol[ok], log_space=True)
            ax.set_title(f"n={int(ok.sum())}, r(log)={r:.3f}", fontsize=9)
        except ValueError:
            pass

    ax = axes[1]
    logs = np.log10(d_sol[ok] * 1e9)
    if logs.size:
        lo = math.floor(logs.min() * 4) / 4
        hi = math.ceil(logs.max() * 4) / 4
        nbin = max(1, int(round((hi - lo) * 4)))
        ax.hist(logs, bins=np.linspace(lo, hi, nbin + 1), alpha=0.8)
    ax.set_xlabel("log10 solid thickness (nm)")
    ax.set_ylabel("events")

    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
