"""Render speed-vs-position figures next to the CSV telemetry.

Matplotlib stays out of the core modules; only the report path of the CLI
imports this. Figures use the Agg backend so headless runs work.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

STRATEGY_COLORS = {
    "tightening": "tab:blue",
    "conservative": "tab:orange",
    "none": "tab:red",
}


def render_speed_profiles(profiles, out_path, obstacle_position=None,
                          title="Speed along path"):
    """Plot one or more speed profiles to a file.

    profiles: iterable of SpeedProfile; obstacle_position draws a dashed
    marker line (e.g. the cyclist location).
    """
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for profile in profiles:
        if not profile.samples:
            continue
        xs = [s for s, _ in profile.samples]
        ys = [v for _, v in profile.samples]
        label = f"{profile.agent_id} ({profile.strategy})"
        ax.plot(xs, ys, label=label,
                color=STRATEGY_COLORS.get(profile.strategy))
    if obstacle_position is not None:
        ax.axvline(obstacle_position, linestyle="--", color="gray",
                   linewidth=1.0, label=f"obstacle @ {obstacle_position:g} m")
    ax.set_xlabel("path position [m]")
    ax.set_ylabel("speed [m/s]")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
