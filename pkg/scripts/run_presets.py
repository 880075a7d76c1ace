#!/usr/bin/env python3
"""Run the built-in presets, dump CSV traces, and plot the engagement.

Usage: python scripts/run_presets.py [--out DIR] [--t-end T] [--no-plots]

Produces, per preset: trace.csv / events.csv (same format as the CLI) and,
unless --no-plots, a four-panel figure with planar trajectories, ranges,
enclosing area (log scale) and the channel energies.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from encircle import PRESETS, run
from encircle.acceptance import RunSummary, run_checks
from encircle.cli import emit_events, emit_trace
from encircle.sim import los_rates


def plot_trace(tr, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 2, figsize=(11, 8))
    n = tr.cfg.n

    ax = axes[0, 0]
    for i in range(n):
        ax.plot(tr.x[:, i], tr.y[:, i], lw=0.8, label=f"attacker {i + 1}")
    ax.plot(tr.target_x, tr.target_y, "k--", lw=1.2, label="target")
    ax.set_xlabel("x (km)")
    ax.set_ylabel("y (km)")
    ax.set_title("planar trajectories")
    ax.legend(fontsize=7)
    ax.set_aspect("equal", adjustable="datalim")

    ax = axes[0, 1]
    for i in range(n):
        ax.plot(tr.t, tr.r[:, i], lw=0.8)
    ax.axhline(tr.cfg.intercept_eps, color="r", ls=":", lw=0.8)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("R (km)")
    ax.set_title("ranges")

    ax = axes[1, 0]
    ax.semilogy(tr.t, np.maximum(tr.area, 1e-16), lw=0.8)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("S (km$^2$)")
    ax.set_title("enclosing area")

    ax = axes[1, 1]
    if tr.cfg.mode == "observer":
        ax.semilogy(tr.t, np.maximum(tr.v3, 1e-16), lw=0.8, label="V3")
    else:
        ax.semilogy(tr.t, np.maximum(tr.v1, 1e-16), lw=0.8, label="V1")
        ax.semilogy(tr.t, np.maximum(tr.v2, 1e-16), lw=0.8, label="V2")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("energy")
    ax.set_title("channel energies")
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output directory root")
    ap.add_argument("--t-end", type=float, default=None,
                    help="override simulation horizon (s)")
    ap.add_argument("--no-plots", action="store_true")
    args = ap.parse_args()

    root = Path(args.out)
    for name, factory in PRESETS.items():
        cfg = factory()
        if args.t_end is not None:
            cfg.t_end = args.t_end
        t0 = time.perf_counter()
        tr = run(cfg)
        wall = time.perf_counter() - t0

        out = root / name
        out.mkdir(parents=True, exist_ok=True)
        emit_trace(tr, out / "trace.csv")
        emit_events(tr, out / "events.csv")

        summary = RunSummary.from_trace(tr)
        print(f"== {name} ({cfg.mode}, {tr.t[-1]:.1f} s simulated, {wall:.2f} s wall)")
        times = ", ".join(f"{t:.3f}" for t in summary.intercept_times) or "none"
        print(f"   intercepts (s): {times}")
        print(f"   final ranges (km): "
              + ", ".join(f"{r:.4f}" for r in tr.r[-1]))
        print(f"   area S0 -> min: {tr.area[0]:.4g} -> {np.min(tr.area):.4g} km^2")
        print(f"   peak |LOS rate| last step: {np.max(np.abs(los_rates(tr)[-1])):.4g} rad/s")
        for res in run_checks(tr):
            print("   " + res.line())
        if not args.no_plots:
            plot_trace(tr, out / "overview.png")
            print(f"   wrote {out / 'overview.png'}")


if __name__ == "__main__":
    main()
