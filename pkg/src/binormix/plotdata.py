"""Machine-readable plot data: contours, singular set, ridgeline, image data.

The bundle mirrors the usual presentation of a pair: density contours and the
singular set in the source plane, and the image of the plane, of the
ridgeline, and of the singular set under x -> (f1(x), f2(x)) in the target
plane. Everything is emitted as plain CSV so any plotting tool can consume it
without bespoke parsing.

Contours are extracted by marching squares on the same padded lattice the
mode oracle uses, at eight log-spaced levels from peak/1000 up to just below
the peak (the top level is shaved by 3 percent so it still cuts the sampled
surface).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from skimage import measure

from .classify import PairType, classify_pair, singular_set_branches
from .gaussian import Gaussian2D, GaussianPair, Mixture, density
from .modes import bounding_box
from .ridgeline import RidgeSample, ridge_samples

__all__ = ["PlotBundle", "build_plot_bundle", "write_plot_bundle", "contour_polylines"]

_N_LEVELS = 8
_LEVEL_FLOOR = 1e-3
_TOP_LEVEL_SHAVE = 0.97


@dataclass(frozen=True, eq=False)
class PlotBundle:
    contours_f1: list[np.ndarray]
    contours_f2: list[np.ndarray]
    singular_set: list[np.ndarray]
    ridgeline: list[RidgeSample]
    image_points: np.ndarray
    image_ridgeline: np.ndarray
    singular_value_set: list[np.ndarray]
    cusp: np.ndarray | None


def _grid(p: GaussianPair, n: int, padding_sigmas: float):
    lo, hi = bounding_box(p, padding_sigmas)
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="xy")
    return xs, ys, np.stack([grid_x, grid_y], axis=-1)


def contour_polylines(
    g: Gaussian2D, xs: np.ndarray, ys: np.ndarray, z: np.ndarray
) -> list[np.ndarray]:
    """Level curves of a sampled density, in data coordinates."""
    peak = g.peak_value
    levels = np.geomspace(_LEVEL_FLOOR * peak, _TOP_LEVEL_SHAVE * peak, _N_LEVELS)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    polylines = []
    for level in levels:
        for contour in measure.find_contours(z, level):
            # find_contours returns (row, col) = (y index, x index)
            pts = np.column_stack([xs[0] + contour[:, 1] * dx, ys[0] + contour[:, 0] * dy])
            polylines.append(pts)
    return polylines


def build_plot_bundle(
    m: Mixture,
    grid_n: int = 256,
    n_ridge: int = 500,
    n_singular: int = 800,
    padding_sigmas: float = 5.0,
) -> PlotBundle:
    p = m.pair
    report = classify_pair(p)
    xs, ys, pts = _grid(p, grid_n, padding_sigmas)
    z1 = density(p.f1, pts)
    z2 = density(p.f2, pts)
    branches = singular_set_branches(p, n_singular)
    samples = ridge_samples(p, n_ridge)
    ridge_pts = np.array([s.x_star for s in samples])
    image_ridge = np.column_stack(
        [
            [s.alpha for s in samples],
            density(p.f1, ridge_pts),
            density(p.f2, ridge_pts),
        ]
    )
    image_points = np.column_stack([z1.ravel(), z2.ravel()])
    value_set = [
        np.column_stack([density(p.f1, branch), density(p.f2, branch)])
        for branch in branches
    ]
    cusp = report.cusp if report.pair_type is PairType.TYPE1 else None
    return PlotBundle(
        contours_f1=contour_polylines(p.f1, xs, ys, z1),
        contours_f2=contour_polylines(p.f2, xs, ys, z2),
        singular_set=branches,
        ridgeline=samples,
        image_points=image_points,
        image_ridgeline=image_ridge,
        singular_value_set=value_set,
        cusp=cusp,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_polylines(path: Path, polylines: list[np.ndarray], header: str) -> None:
    lines = [header]
    for index, poly in enumerate(polylines):
        for row in poly:
            lines.append(f"{index}," + ",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_plot_bundle(bundle: PlotBundle, outdir) -> list[Path]:
    """Write every bundle table as CSV into outdir; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    targets = [
        ("contours_f1.csv", bundle.contours_f1, "id,x,y"),
        ("contours_f2.csv", bundle.contours_f2, "id,x,y"),
        ("singular_set.csv", bundle.singular_set, "id,x,y"),
        ("singular_value_set.csv", bundle.singular_value_set, "id,f1,f2"),
    ]
    for name, polylines, header in targets:
        path = out / name
        _write_polylines(path, polylines, header)
        written.append(path)

    ridge_path = out / "ridgeline.csv"
    lines = ["alpha,x,y,f1,f2,q"]
    for s in bundle.ridgeline:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (s.alpha, s.x_star[0], s.x_star[1], s.f1_val, s.f2_val, s.q_val)
            )
        )
    ridge_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(ridge_path)

    image_path = out / "image_points.csv"
    lines = ["f1,f2"]
    lines.extend(",".join(_fmt(v) for v in row) for row in bundle.image_points)
    image_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(image_path)

    image_ridge_path = out / "image_ridgeline.csv"
    lines = ["alpha,f1,f2"]
    lines.extend(",".join(_fmt(v) for v in row) for row in bundle.image_ridgeline)
    image_ridge_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(image_ridge_path)

    if bundle.cusp is not None:
        cusp_path = out / "cusp.csv"
        cusp_path.write_text(
            "x,y\n" + ",".join(_fmt(v) for v in bundle.cusp) + "\n", encoding="utf-8"
        )
        written.append(cusp_path)
    return written
