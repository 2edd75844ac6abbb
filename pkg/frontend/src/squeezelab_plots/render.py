"""Render exported Q-function grids as multi-panel contour figures.

Input is the metadata JSON written next to each CSV grid: either a single
panel object or a sweep file of the form {"preset": ..., "panels": [...]}.
Each panel object must carry the grid extents, resolution and the CSV file
name; the CSV schema is a `re,im,q` header followed by nx*ny rows in
row-major order (rows of constant im).

Rendering is a pure function of the input files: fixed DPI, no timestamps,
fixed SVG hash salt, so identical inputs give identical output bytes.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "squeezelab-plots"

import matplotlib.pyplot as plt  # noqa: E402


class SchemaError(ValueError):
    """Metadata or CSV content does not match the exported grid schema."""


_REQUIRED_META = ("csv", "x_min", "x_max", "y_min", "y_max", "nx", "ny")


@dataclass
class PanelSpec:
    """One contour panel: grid data, extents and a title."""

    xs: np.ndarray
    ys: np.ndarray
    q: np.ndarray  # shape (ny, nx)
    title: str
    source: str

    @property
    def extents(self):
        return (float(self.xs[0]), float(self.xs[-1]),
                float(self.ys[0]), float(self.ys[-1]))


def _read_grid_csv(path, nx, ny):
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "re,im,q":
                raise SchemaError(
                    f"{path}: expected header 're,im,q', got {header!r}")
            try:
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
            except ValueError as exc:
                raise SchemaError(f"{path}: malformed CSV body: {exc}") from exc
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read grid CSV: {exc}") from exc
    if data.shape != (nx * ny, 3):
        raise SchemaError(
            f"{path}: expected {nx * ny} rows of 3 columns, got {data.shape}")
    xs = data[:nx, 0]
    ys = data[::nx, 1]
    q = data[:, 2].reshape(ny, nx)
    return xs, ys, q


def load_panel(meta, base_dir):
    """PanelSpec from one panel metadata object."""
    if not isinstance(meta, dict):
        raise SchemaError("panel metadata must be a JSON object")
    for key in _REQUIRED_META:
        if key not in meta:
            raise SchemaError(
                f"panel metadata for {meta.get('csv', '?')} lacks {key!r}")
    path = os.path.join(base_dir, meta["csv"])
    nx, ny = int(meta["nx"]), int(meta["ny"])
    if nx < 2 or ny < 2:
        raise SchemaError(f"{path}: nx, ny must be >= 2")
    xs, ys, q = _read_grid_csv(path, nx, ny)
    for name, got, want in (("x_min", xs[0], meta["x_min"]),
                            ("x_max", xs[-1], meta["x_max"]),
                            ("y_min", ys[0], meta["y_min"]),
                            ("y_max", ys[-1], meta["y_max"])):
        if abs(got - want) > 1e-9 * max(1.0, abs(want)):
            raise SchemaError(
                f"{path}: column {name} disagrees with metadata "
                f"({got} vs {want})")
    title = meta.get("title") or meta.get("description") or meta["csv"]
    return PanelSpec(xs=xs, ys=ys, q=q, title=str(title), source=path)


def load_meta(meta_path):
    """List of PanelSpec from a metadata JSON file (single panel or sweep)."""
    try:
        with open(meta_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{meta_path}: cannot read metadata: {exc}") from exc
    base = os.path.dirname(os.path.abspath(meta_path))
    if isinstance(meta, dict) and "panels" in meta:
        panels = meta["panels"]
    else:
        panels = [meta]
    if not isinstance(panels, list):
        raise SchemaError(f"{meta_path}: 'panels' must be a list")
    return [load_panel(p, base) for p in panels]


def render_panels(specs, out_path, levels=12, shared_scale=False, dpi=150):
    """One multi-panel contour figure; axes labeled Re alpha / Im alpha."""
    if not specs:
        raise SchemaError("no panels to render")
    if levels < 1:
        raise SchemaError("need at least one contour level")
    if shared_scale:
        ext0 = specs[0].extents
        for s in specs[1:]:
            if s.extents != ext0:
                raise SchemaError(
                    f"{s.source}: extents differ from {specs[0].source}; "
                    "shared scale requires identical grids")
        q_max = max(float(np.max(s.q)) for s in specs)

    n = len(specs)
    ncols = min(4, n)
    nrows = math.ceil(n / ncols)
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(3.2 * ncols, 3.0 * nrows))
    for i, spec in enumerate(specs):
        ax = axes[i // ncols][i % ncols]
        top = q_max if shared_scale else float(np.max(spec.q))
        if top <= 0.0:
            raise SchemaError(f"{spec.source}: grid has no positive values")
        # 12 linear levels up to the maximum, zero level excluded
        lv = np.linspace(top / levels, top, levels)
        ax.contour(spec.xs, spec.ys, spec.q, levels=lv, linewidths=0.7)
        ax.set_title(spec.title, fontsize=9)
        ax.set_xlabel(r"Re $\alpha$", fontsize=8)
        ax.set_ylabel(r"Im $\alpha$", fontsize=8)
        ax.tick_params(labelsize=7)
        ax.set_aspect("equal")
    for i in range(n, nrows * ncols):
        axes[i // ncols][i % ncols].set_axis_off()
    fig.tight_layout()

    ext = os.path.splitext(out_path)[1].lower()
    if ext == ".png":
        fig.savefig(out_path, dpi=dpi, metadata={"Software": None})
    elif ext == ".svg":
        fig.savefig(out_path, metadata={"Date": None})
    else:
        raise SchemaError(f"unsupported output format {ext!r}; use .png or .svg")
    plt.close(fig)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plotqgrid",
        description="Render exported Q-function grids as contour plots.")
    parser.add_argument("--meta", required=True,
                        help="metadata JSON (single panel or preset sweep)")
    parser.add_argument("--out", required=True, help="output .png or .svg")
    parser.add_argument("--levels", type=int, default=12)
    parser.add_argument("--shared-scale", action="store_true")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        specs = load_meta(args.meta)
        render_panels(specs, args.out, levels=args.levels,
                      shared_scale=args.shared_scale, dpi=args.dpi)
    except SchemaError as exc:
        print(f"plotqgrid: {exc}", file=sys.stderr)
        return 2
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
