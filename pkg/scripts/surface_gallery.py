#!/usr/bin/env python3
"""Export the full geometric inventory of a receiver triangle.

Writes, for one configuration:

* ``surface.csv``       -- grid of ranges and Gaussian curvature (plot-ready)
* ``inventory.json``    -- shape parameters, nodes, tropes, arcs, facets
* ``arcs.csv``          -- sampled source-space traces of the 12 conic arcs
* ``gallery.png``       -- curvature sign map with the arcs overlaid
                           (only when matplotlib is installed)

Example:

    python scripts/surface_gallery.py --receivers "0,0 1,0 0,1" --out out/gallery
"""
import argparse
import json
import sys
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


def write_surface(config, out_dir: Path, extent: float, resolution: int) -> Path:
    lo = -extent * config.d_max
    hi = (1.0 + extent) * config.d_max
    axis = np.linspace(lo, hi, resolution)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel()], axis=-1)
    T = config.distances(pts)
    K = rg.gaussian_curvature(config, pts)
    path = out_dir / "surface.csv"
    with path.open("w", encoding="utf-8") as fh:
        fh.write("x,y,T1,T2,T3,K\n")
        for row in range(pts.shape[0]):
            vals = (pts[row, 0], pts[row, 1], T[row, 0], T[row, 1], T[row, 2], K[row])
            fh.write(",".join("%.17g" % v for v in vals) + "\n")
    return path


def write_inventory(config, out_dir: Path) -> Path:
    a, b, c = rg.abc_from_config(config)
    nt = rg.nodes_and_tropes(config)
    payload = {
        "receivers": [list(map(float, config.m(i))) for i in (1, 2, 3)],
        "abc": [a, b, c],
        "cayley_residual": rg.cayley_residual(a, b, c),
        "q3_facets": list(rg.Q3_FACETS),
        "hull_components": list(rg.HULL_COMPONENTS),
        "nodes": {
            n.label: {"homogeneous": list(map(float, n.homogeneous)), "kind": n.kind}
            for n in nt.nodes
        },
        "tropes": {
            t.node_label: {"arc": t.label, "homogeneous": list(map(float, t.homogeneous))}
            for t in nt.tropes
        },
    }
    path = out_dir / "inventory.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    return path


def write_arcs(config, out_dir: Path, n: int) -> Path:
    path = out_dir / "arcs.csv"
    with path.open("w", encoding="utf-8") as fh:
        fh.write("arc,x,y,T1,T2,T3\n")
        for label in rg.ARC_LABELS:
            arc = rg.conic_arc(config, label)
            src = arc.sample_sources(n=n, extent=2.0)
            T = config.distances(src)
            for row in range(src.shape[0]):
                vals = (src[row, 0], src[row, 1], T[row, 0], T[row, 1], T[row, 2])
                fh.write(label + "," + ",".join("%.17g" % v for v in vals) + "\n")
    return path


def render(config, out_dir: Path, extent: float, resolution: int):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping gallery.png", file=sys.stderr)
        return None
    lo = -extent * config.d_max
    hi = (1.0 + extent) * config.d_max
    axis = np.linspace(lo, hi, resolution)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    K = rg.gaussian_curvature(config, np.stack([xx.ravel(), yy.ravel()], axis=-1))
    fig, ax = plt.subplots(figsize=(7, 6))
    ax.pcolormesh(xx, yy, np.sign(K).reshape(xx.shape), cmap="coolwarm", vmin=-1, vmax=1)
    for label in rg.ARC_LABELS:
        src = rg.conic_arc(config, label).sample_sources(n=128, extent=2.0)
        ax.plot(src[:, 0], src[:, 1], "k-", lw=0.8)
    rec = np.array([config.m(i) for i in (1, 2, 3)], dtype=float)
    ax.plot(rec[:, 0], rec[:, 1], "k^", ms=9)
    ax.set_aspect("equal")
    ax.set_title("sign of the Gaussian curvature; conic-arc preimages in black")
    path = out_dir / "gallery.png"
    fig.savefig(path, dpi=140, bbox_inches="tight")
    plt.close(fig)
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--receivers",
        default="0,0 1,0 0,1",
        help='three receivers as "x1,y1 x2,y2 x3,y3"',
    )
    parser.add_argument("--extent", type=float, default=1.0, help="grid margin in units of d_max")
    parser.add_argument("--resolution", type=int, default=160, help="grid points per axis")
    parser.add_argument("--arc-samples", type=int, default=64)
    parser.add_argument("--out", default="out/gallery", help="output directory")
    args = parser.parse_args(argv)

    config = parse_receivers(args.receivers)
    if config.is_collinear:
        raise SystemExit("collinear receivers have no quartic gallery; pick a triangle")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for path in (
        write_surface(config, out_dir, args.extent, args.resolution),
        write_inventory(config, out_dir),
        write_arcs(config, out_dir, args.arc_samples),
        render(config, out_dir, args.extent, args.resolution),
    ):
        if path is not None:
            print("wrote", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
