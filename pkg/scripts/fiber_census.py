#!/usr/bin/env python3
"""Census of range-difference fiber sizes over the measurement plane.

Samples a grid of difference pairs, classifies each against the exact
region decomposition, and cross-checks the predicted fiber size by running
the closed-form inversion.  Writes a labeled CSV plus a JSON summary, and a
region map PNG when matplotlib is installed.

Example:

    python scripts/fiber_census.py --receivers "0,0 1,0 0,1" --out out/census
"""
import argparse
import json
import math
import sys
from collections import Counter
from pathlib import Path

import numpy as np

import rangegeom as rg


def parse_receivers(text: str):
    pts = []
    for chunk in text.replace(";", " ").split():
        xy = [float(v) for v in chunk.split(",")]
        if len(xy) != 2:
            raise SystemExit(f"receiver {chunk!r} is not x,y")
        pts.append(xy)
    return rg.validate_config(pts)


def census(config, extent: float, resolution: int):
    lim = extent * config.d_max
    axis = np.linspace(-lim, lim, resolution)
    rows = []
    counts = Counter()
    mismatches = 0
    for t1 in axis:
        for t2 in axis:
            region = rg.classify_tau(config, (t1, t2))
            counts[region.label] += 1
            solutions = ""
            if not config.is_collinear and region.fiber in (1, 2):
                sol = rg.invert_tdoa(config, (t1, t2))
                if len(sol.points) != region.fiber:
                    mismatches += 1
                solutions = ";".join(
                    "%.17g:%.17g" % (p[0], p[1]) for p in sol.points
                )
            fiber = "inf" if region.fiber == math.inf else str(region.fiber)
            rows.append((t1, t2, region.label, fiber, solutions))
    return rows, counts, mismatches


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--receivers", default="0,0 1,0 0,1")
    parser.add_argument("--extent", type=float, default=1.2, help="half-width in units of d_max")
    parser.add_argument("--resolution", type=int, default=161)
    parser.add_argument("--out", default="out/census")
    args = parser.parse_args(argv)

    config = parse_receivers(args.receivers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows, counts, mismatches = census(config, args.extent, args.resolution)

    csv_path = out_dir / "census.csv"
    with csv_path.open("w", encoding="utf-8") as fh:
        fh.write("tau1,tau2,label,fiber,solutions\n")
        for t1, t2, label, fiber, solutions in rows:
            fh.write("%.17g,%.17g,%s,%s,%s\n" % (t1, t2, label, fiber, solutions))
    print("wrote", csv_path)

    summary = {
        "receivers": [list(map(float, config.m(i))) for i in range(1, config.n + 1)],
        "collinear": config.is_collinear,
        "samples": len(rows),
        "regions": dict(sorted(counts.items())),
        "fiber_count_mismatches": mismatches,
    }
    json_path = out_dir / "summary.json"
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
    print("wrote", json_path)
    print(json.dumps(summary["regions"], indent=2, sort_keys=True))
    if mismatches:
        print(f"WARNING: {mismatches} samples had fiber/solution-count disagreement")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping census.png", file=sys.stderr)
        return 0
    labels = sorted({r[2] for r in rows})
    index = {lbl: i for i, lbl in enumerate(labels)}
    n = args.resolution
    img = np.array([index[r[2]] for r in rows], dtype=float).reshape(n, n)
    fig, ax = plt.subplots(figsize=(7, 6))
    mesh = ax.pcolormesh(
        np.linspace(-args.extent * config.d_max, args.extent * config.d_max, n),
        np.linspace(-args.extent * config.d_max, args.extent * config.d_max, n),
        img.T,
        cmap="tab10",
        vmin=-0.5,
        vmax=max(9.5, len(labels) - 0.5),
    )
    cbar = fig.colorbar(mesh, ax=ax, ticks=range(len(labels)))
    cbar.ax.set_yticklabels(labels)
    ax.set_xlabel("tau1")
    ax.set_ylabel("tau2")
    ax.set_aspect("equal")
    ax.set_title("range-difference region decomposition")
    png_path = out_dir / "census.png"
    fig.savefig(png_path, dpi=140, bbox_inches="tight")
    plt.close(fig)
    print("wrote", png_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
