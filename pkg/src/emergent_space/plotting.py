"""Figure rendering for orbit and context reports.

Rendering is opt-in: the CLI always emits its JSON/CSV payloads, and these
helpers additionally write a matplotlib figure next to them when asked. The
Agg backend is forced so the functions work headless.
"""

from __future__ import annotations

import numpy as np

from .context import SpectralContext
from .spinlab import OrbitReport

__all__ = ["plot_orbit", "plot_context_weights"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_orbit(report: OrbitReport, path: str, title: str = "Bloch orbit") -> str:
    """Render the sampled Bloch trajectory: 3-D path plus components over time."""
    plt = _pyplot()
    samples = np.asarray(report.bloch_samples)
    times = np.asarray(report.times)

    fig = plt.figure(figsize=(10, 4.2))
    ax3 = fig.add_subplot(1, 2, 1, projection="3d")
    ax3.plot(samples[:, 0], samples[:, 1], samples[:, 2], lw=0.9)
    ax3.scatter(*samples[0], color="tab:red", s=24, label="start")
    axis = np.asarray(report.plane_axis)
    ax3.plot(
        [-axis[0], axis[0]], [-axis[1], axis[1]], [-axis[2], axis[2]],
        color="tab:gray", ls="--", lw=1.0, label="field axis",
    )
    ax3.set_xlim(-1, 1); ax3.set_ylim(-1, 1); ax3.set_zlim(-1, 1)
    ax3.set_box_aspect((1, 1, 1))
    ax3.set_title(f"{title} ({report.classification.value})")
    ax3.legend(loc="upper left", fontsize=8)

    ax2 = fig.add_subplot(1, 2, 2)
    for i, lab in enumerate(("$b_x$", "$b_y$", "$b_z$")):
        ax2.plot(times, samples[:, i], label=lab, lw=1.0)
    if report.period_estimate is not None:
        ax2.axvline(report.period_estimate, color="k", ls=":", lw=1.0,
                    label="return period")
    ax2.set_xlabel("t")
    ax2.set_ylabel("Bloch components")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_context_weights(ctx: SpectralContext, path: str, title: str = "Born weights") -> str:
    """Bar chart of the context's measure over its eigenvalue points."""
    plt = _pyplot()
    labels = [
        "(" + ", ".join(f"{v:g}" for v in p) + ")" if len(p) > 1 else f"{p[0]:g}"
        for p in ctx.points
    ]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(labels)), 3.4))
    ax.bar(range(len(labels)), ctx.weights, color="tab:blue", width=0.6)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("weight")
    ax.set_ylim(0, 1.05)
    names = ", ".join(o.name or "?" for o in ctx.observables)
    ax.set_title(f"{title}: {names}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
