"""Figure rendering for the CLI report paths.

Report commands write delimited data first; these helpers render a PNG of
the same data next to it.  Everything runs on the Agg backend so the CLI
stays headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _style(ax):
    ax.grid(True, alpha=0.3, linewidth=0.5)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)


def figure1_plot(rows, path):
    """Closed-form curves of the disk/triangle distances, MC markers on top."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=150)
    h = [r.h for r in rows]
    ax.plot(h, [r.pi_delta1_closed for r in rows], color="tab:blue",
            label=r"$\pi\,\delta_1(D_2, T(h))$")
    ax.plot(h, [r.delta1_closed for r in rows], color="tab:red",
            label=r"$\Delta_1(D_2, T(h))$")
    mc = [r for r in rows if r.pi_delta1_mc is not None]
    if mc:
        ax.errorbar([r.h for r in mc], [r.pi_delta1_mc for r in mc],
                    yerr=[3.0 * r.pi_delta1_mc_std for r in mc], fmt="o", ms=3.5,
                    color="tab:blue", alpha=0.7, label="MC (support sampling)")
        ax.errorbar([r.h for r in mc], [r.delta1_mc for r in mc],
                    yerr=[3.0 * r.delta1_mc_std for r in mc], fmt="s", ms=3.5,
                    color="tab:red", alpha=0.7, label="MC (intrinsic widths)")
    ax.set_xlabel("h (circumradius 1 + h)")
    ax.set_ylabel("distance to the unit disk")
    ax.legend(frameon=False, fontsize=9)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def harness_plot(result, path, target=None, label=""):
    """Scaled means vs budget with the extrapolated limit."""
    fig, ax = plt.subplots(figsize=(6.5, 4.2), dpi=150)
    budgets = [s.budget for s in result.summaries]
    ax.errorbar(budgets, [s.scaled_mean for s in result.summaries],
                yerr=[3.0 * s.std_error for s in result.summaries],
                fmt="o-", capsize=3, color="tab:blue", label=label or "scaled mean")
    ax.axhline(result.limit, color="tab:red", linewidth=1.0,
               label=f"extrapolated limit {result.limit:.4g}")
    ax.fill_between([budgets[0], budgets[-1]],
                    result.limit - 3 * result.limit_std_error,
                    result.limit + 3 * result.limit_std_error,
                    color="tab:red", alpha=0.15)
    if target is not None:
        ax.axhline(target, color="k", linestyle="--", linewidth=1.0,
                   label=f"target {target:.4g}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("budget N")
    ax.set_ylabel(r"$N^{2/(n-1)}\,\cdot$ mean deviation")
    ax.legend(frameon=False, fontsize=9)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
