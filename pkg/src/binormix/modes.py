"""Certified mode counting for two-component mixtures.

Two independent methods are provided and cross-checked in the test suite:

* ascent on the mixture density seeded along the ridgeline (which contains
  every critical point of every mixing proportion): a monotone fixed-point
  sweep collapses the seeds onto candidates, and damped Newton polishes them
  to machine accuracy;
* a brute-force lattice scan for 8-neighborhood local maxima over a padded
  bounding box, refined by the same Newton polish.

A point only counts as a mode when its gradient norm is below
1e-9 * value * max precision norm and its Hessian is negative definite with
a decisively negative largest eigenvalue; converged points with a numerically
vanishing largest eigenvalue are reported separately and never counted, since
they sit at merge or plateau configurations that are genuinely ambiguous.

The module also hosts the seeded random pair sampler (covariance eigenvalues
log-uniform, means uniform in a box, with per-class constructions) and a
Monte Carlo harness checking the per-class mode-count caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .classify import (
    DEFAULT_REL_TOL,
    PairType,
    codirectionality_residual,
    proportionality_residual,
)
from .errors import NewtonDivergence
from .gaussian import Gaussian2D, GaussianPair, Mixture
from .linalg2 import rotation
from .ridgeline import modality_bound, ridge_points

__all__ = [
    "SearchMethod",
    "Mode",
    "ModeReport",
    "SearchConfig",
    "BoundViolationRecord",
    "BoundReport",
    "bounding_box",
    "find_modes",
    "grid_oracle_modes",
    "random_spd",
    "sample_pair",
    "verify_bounds",
]

GRADIENT_CERT_RTOL = 1e-9
_CONVERGENCE_RTOL = 1e-13
_DEGENERATE_HESSIAN_RTOL = 1e-10
_ARMIJO = 1e-4


class SearchMethod(Enum):
    NEWTON_SEEDED = "NewtonSeeded"
    GRID_ORACLE = "GridOracle"


@dataclass(frozen=True, eq=False)
class Mode:
    location: np.ndarray
    value: float
    hessian_negdef: bool


@dataclass(frozen=True, eq=False)
class ModeReport:
    """Certified modes sorted by descending value.

    `degenerate` holds converged critical points whose largest Hessian
    eigenvalue was too close to zero to certify; they are excluded from
    `count`.
    """

    modes: tuple[Mode, ...]
    count: int
    method: SearchMethod
    degenerate: tuple[Mode, ...] = ()


@dataclass(frozen=True)
class SearchConfig:
    seeds: int = 200
    grid_resolution: int = 512
    padding_sigmas: float = 5.0
    dedupe_radius: float | None = None  # default: 1e-4 of the box diagonal
    max_newton_iters: int = 50

    def __post_init__(self):
        if min(self.seeds, self.grid_resolution, self.max_newton_iters) < 1:
            raise ValueError("search configuration counts must be positive")
        if self.padding_sigmas <= 0:
            raise ValueError("padding must be positive")
        if self.dedupe_radius is not None and self.dedupe_radius <= 0:
            raise ValueError("dedupe radius must be positive")


@dataclass(frozen=True, eq=False)
class BoundViolationRecord:
    kind: PairType
    trial: int
    c: float
    count: int
    allowed: int
    mu1: np.ndarray
    sigma1: np.ndarray
    mu2: np.ndarray
    sigma2: np.ndarray


@dataclass(frozen=True, eq=False)
class BoundReport:
    sampler_seed: int
    trials_per_type: int
    c_values: tuple[float, ...]
    max_counts: dict[PairType, int]
    violations: tuple[BoundViolationRecord, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def _spectral_norm(m: np.ndarray) -> float:
    half_trace = 0.5 * (m[0, 0] + m[1, 1])
    radius = np.hypot(0.5 * (m[0, 0] - m[1, 1]), m[0, 1])
    return float(abs(half_trace) + radius)


def _precision_norm(p: GaussianPair) -> float:
    return max(_spectral_norm(p.f1.sigma_inv), _spectral_norm(p.f2.sigma_inv))


def bounding_box(p: GaussianPair, padding_sigmas: float = 5.0):
    """Axis-aligned box around both means, padded by the largest sigma."""
    sigma_max = np.sqrt(max(_spectral_norm(p.f1.sigma), _spectral_norm(p.f2.sigma)))
    mus = np.stack([p.f1.mu, p.f2.mu])
    pad = padding_sigmas * sigma_max
    return mus.min(axis=0) - pad, mus.max(axis=0) + pad


def _dedupe_radius(p: GaussianPair, cfg: SearchConfig) -> float:
    if cfg.dedupe_radius is not None:
        return cfg.dedupe_radius
    lo, hi = bounding_box(p, cfg.padding_sigmas)
    return 1e-4 * float(np.hypot(*(hi - lo)))


def _mixture_vgh(m: Mixture, x: np.ndarray, y: np.ndarray):
    """Fused value / gradient / Hessian of the mixture at column arrays.

    One pass shares the exponentials between the three quantities; the
    Newton loop is overhead-bound, so everything stays in flat component
    arrays instead of stacked (n, 2, 2) tensors.
    """
    val = 0.0
    gx = gy = 0.0
    hxx = hxy = hyy = 0.0
    for w, g in ((m.c, m.pair.f1), (1.0 - m.c, m.pair.f2)):
        if w == 0.0:
            continue
        p = g.sigma_inv
        dx = x - g.mu[0]
        dy = y - g.mu[1]
        ax = p[0, 0] * dx + p[0, 1] * dy
        ay = p[0, 1] * dx + p[1, 1] * dy
        f = w * np.exp(g.log_norm_const - 0.5 * (dx * ax + dy * ay))
        val = val + f
        gx = gx - f * ax
        gy = gy - f * ay
        hxx = hxx + f * (ax * ax - p[0, 0])
        hxy = hxy + f * (ax * ay - p[0, 1])
        hyy = hyy + f * (ay * ay - p[1, 1])
    return val, gx, gy, hxx, hxy, hyy


def _mixture_v(m: Mixture, x: np.ndarray, y: np.ndarray):
    val = 0.0
    for w, g in ((m.c, m.pair.f1), (1.0 - m.c, m.pair.f2)):
        if w == 0.0:
            continue
        p = g.sigma_inv
        dx = x - g.mu[0]
        dy = y - g.mu[1]
        quad = p[0, 0] * dx * dx + 2.0 * p[0, 1] * dx * dy + p[1, 1] * dy * dy
        val = val + w * np.exp(g.log_norm_const - 0.5 * quad)
    return val


def _mean_shift_candidates(
    m: Mixture, seeds: np.ndarray, cluster_radius: float, max_iters: int = 80
) -> np.ndarray:
    """Monotone fixed-point sweep collapsing seeds onto critical points.

    The stationarity condition of the mixture is x = W(x)^-1 b(x) with
    W = r1 P1 + r2 P2, b = r1 P1 mu1 + r2 P2 mu2 and r_i the weighted
    component densities at x; iterating that map increases the mixture value
    at every step, so no line search is needed. The surviving points are
    clustered at a radius far below the mode-identity radius and handed to
    the Newton polish, which does the actual certification.
    """
    p1 = m.pair.f1.sigma_inv
    p2 = m.pair.f2.sigma_inv
    b1 = p1 @ m.pair.f1.mu
    b2 = p2 @ m.pair.f2.mu
    x = np.array(seeds[:, 0], dtype=float)
    y = np.array(seeds[:, 1], dtype=float)
    g1, g2 = m.pair.f1, m.pair.f2
    for _ in range(max_iters):
        dx1 = x - g1.mu[0]
        dy1 = y - g1.mu[1]
        dx2 = x - g2.mu[0]
        dy2 = y - g2.mu[1]
        q1 = p1[0, 0] * dx1 * dx1 + 2 * p1[0, 1] * dx1 * dy1 + p1[1, 1] * dy1 * dy1
        q2 = p2[0, 0] * dx2 * dx2 + 2 * p2[0, 1] * dx2 * dy2 + p2[1, 1] * dy2 * dy2
        r1 = m.c * np.exp(g1.log_norm_const - 0.5 * q1)
        r2 = (1.0 - m.c) * np.exp(g2.log_norm_const - 0.5 * q2)
        total = r1 + r2
        ok = total > 1e-280
        w00 = r1 * p1[0, 0] + r2 * p2[0, 0]
        w01 = r1 * p1[0, 1] + r2 * p2[0, 1]
        w11 = r1 * p1[1, 1] + r2 * p2[1, 1]
        rhs0 = r1 * b1[0] + r2 * b2[0]
        rhs1 = r1 * b1[1] + r2 * b2[1]
        det = np.where(ok, w00 * w11 - w01 * w01, 1.0)
        new_x = np.where(ok, (w11 * rhs0 - w01 * rhs1) / det, x)
        new_y = np.where(ok, (-w01 * rhs0 + w00 * rhs1) / det, y)
        move = np.max(np.hypot(new_x - x, new_y - y))
        x, y = new_x, new_y
        if move < 1e-3 * cluster_radius:
            break
    order = np.argsort(x, kind="stable")
    reps_x: list[float] = []
    reps_y: list[float] = []
    for i in order:
        if all(np.hypot(x[i] - rx, y[i] - ry) > cluster_radius for rx, ry in zip(reps_x, reps_y)):
            reps_x.append(x[i])
            reps_y.append(y[i])
    return np.column_stack([reps_x, reps_y])


def _newton_ascent(m: Mixture, seeds: np.ndarray, cfg: SearchConfig) -> np.ndarray:
    """Vectorized damped Newton ascent on the mixture density.

    Returns the final iterates; certification happens afterwards. Rows are
    retired once converged, stalled in the line search, or lost to the far
    tail, and the working set shrinks accordingly.
    """
    x = np.array(seeds[:, 0], dtype=float)
    y = np.array(seeds[:, 1], dtype=float)
    prec = _precision_norm(m.pair)
    active = np.arange(len(x))
    for _ in range(cfg.max_newton_iters):
        if len(active) == 0:
            break
        ax, ay = x[active], y[active]
        val, gx, gy, hxx, hxy, hyy = _mixture_vgh(m, ax, ay)
        gnorm = np.hypot(gx, gy)
        keep = (gnorm > _CONVERGENCE_RTOL * prec * val) & (val > 1e-280)
        if not keep.any():
            break
        active = active[keep]
        ax, ay = ax[keep], ay[keep]
        val, gx, gy = val[keep], gx[keep], gy[keep]
        hxx, hxy, hyy = hxx[keep], hxy[keep], hyy[keep]

        det = hxx * hyy - hxy * hxy
        negdef = (det > 0) & (hxx < 0)
        safe_det = np.where(det != 0.0, det, 1.0)
        sx = np.where(negdef, -(hyy * gx - hxy * gy) / safe_det, 0.0)
        sy = np.where(negdef, -(-hxy * gx + hxx * gy) / safe_det, 0.0)
        hnorm = np.sqrt(hxx * hxx + 2 * hxy * hxy + hyy * hyy) + 1e-300
        sx = np.where(negdef, sx, gx / hnorm)
        sy = np.where(negdef, sy, gy / hnorm)
        slope = sx * gx + sy * gy

        # Inside a concave basin with a tiny step, Newton contracts on its
        # own; the value increment is below rounding there, so an Armijo test
        # would reject sound steps and strand rows just above the gradient
        # certificate.
        terminal = negdef & (np.hypot(sx, sy) <= 1e-6 * (1.0 + np.hypot(ax, ay)))

        t = np.ones(len(active))
        accepted = terminal.copy()
        todo = np.nonzero(~terminal)[0]
        for _ in range(30):
            if len(todo) == 0:
                break
            cand = _mixture_v(m, ax[todo] + t[todo] * sx[todo], ay[todo] + t[todo] * sy[todo])
            ok = cand >= val[todo] + _ARMIJO * t[todo] * slope[todo]
            accepted[todo[ok]] = True
            todo = todo[~ok]
            t[todo] *= 0.5
        x[active[accepted]] = (ax + t * sx)[accepted]
        y[active[accepted]] = (ay + t * sy)[accepted]
        active = active[accepted]  # line search exhausted: retire the row
    return np.column_stack([x, y])


def _certify(m: Mixture, points: np.ndarray, radius: float):
    """Split converged points into certified modes and degenerate criticals."""
    val, gx, gy, hxx, hxy, hyy = _mixture_vgh(m, points[:, 0], points[:, 1])
    prec = _precision_norm(m.pair)
    gnorm = np.hypot(gx, gy)
    converged = gnorm <= GRADIENT_CERT_RTOL * prec * val
    half_trace = 0.5 * (hxx + hyy)
    rad = np.hypot(0.5 * (hxx - hyy), hxy)
    lam_max = half_trace + rad
    hscale = np.maximum(val * prec * prec, 1e-300)
    degenerate_mask = converged & (np.abs(lam_max) < _DEGENERATE_HESSIAN_RTOL * hscale)
    mode_mask = converged & (lam_max < 0) & ~degenerate_mask

    def collect(mask: np.ndarray, negdef: bool) -> list[Mode]:
        idx = np.nonzero(mask)[0]
        idx = idx[np.argsort(-val[idx], kind="stable")]
        kept: list[Mode] = []
        for i in idx:
            loc = points[i]
            if all(np.hypot(*(loc - k.location)) > radius for k in kept):
                kept.append(Mode(location=loc, value=float(val[i]), hessian_negdef=negdef))
        return kept

    return collect(mode_mask, True), collect(degenerate_mask, False), int(converged.sum())


def _single_component_report(g: Gaussian2D, method: SearchMethod) -> ModeReport:
    mode = Mode(location=g.mu.copy(), value=g.peak_value, hessian_negdef=True)
    return ModeReport(modes=(mode,), count=1, method=method)


def find_modes(m: Mixture, cfg: SearchConfig = SearchConfig()) -> ModeReport:
    """Ridgeline-seeded search with gradient/Hessian certificates.

    Seeds spread along the ridgeline (which carries every critical point of
    every mixing proportion) are collapsed onto critical-point candidates by
    the monotone fixed-point sweep and then polished by damped Newton; a
    candidate only counts with the full gradient and negative-definite
    Hessian certificates. c = 0 and c = 1 short-circuit to the single active
    component, whose only mode is its mean.
    """
    if m.c == 1.0:
        return _single_component_report(m.pair.f1, SearchMethod.NEWTON_SEEDED)
    if m.c == 0.0:
        return _single_component_report(m.pair.f2, SearchMethod.NEWTON_SEEDED)
    alphas = np.linspace(0.0, 1.0, cfg.seeds)
    seeds = ridge_points(m.pair, alphas)
    radius = _dedupe_radius(m.pair, cfg)
    candidates = _mean_shift_candidates(m, seeds, cluster_radius=1e-3 * radius)
    final = _newton_ascent(m, candidates, cfg)
    modes, degenerate, n_converged = _certify(m, final, _dedupe_radius(m.pair, cfg))
    if n_converged == 0:
        raise NewtonDivergence("no Newton seed converged; check the configuration")
    return ModeReport(
        modes=tuple(modes),
        count=len(modes),
        method=SearchMethod.NEWTON_SEEDED,
        degenerate=tuple(degenerate),
    )


def grid_oracle_modes(m: Mixture, cfg: SearchConfig = SearchConfig()) -> ModeReport:
    """Independent oracle: lattice local maxima refined by Newton."""
    lo, hi = bounding_box(m.pair, cfg.padding_sigmas)
    n = cfg.grid_resolution
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="xy")
    z = _mixture_v(m, grid_x, grid_y)

    center = z[1:-1, 1:-1]
    # A symmetric mixture on a symmetric lattice produces bit-exact ties
    # between mirrored cells, so a purely strict comparison would drop both;
    # plateau cells are kept (>= everywhere, > somewhere) and the Newton
    # polish plus deduplication merges the duplicates.
    is_max = np.ones_like(center, dtype=bool)
    beats_one = np.zeros_like(center, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor = z[1 + di : n - 1 + di, 1 + dj : n - 1 + dj]
            is_max &= center >= neighbor
            beats_one |= center > neighbor
    rows, cols = np.nonzero(is_max & beats_one)
    if len(rows) == 0:
        row, col = np.unravel_index(np.argmax(z), z.shape)
        seeds = np.array([[grid_x[row, col], grid_y[row, col]]])
    else:
        seeds = np.column_stack([grid_x[rows + 1, cols + 1], grid_y[rows + 1, cols + 1]])

    final = _newton_ascent(m, seeds, cfg)
    modes, degenerate, _ = _certify(m, final, _dedupe_radius(m.pair, cfg))
    return ModeReport(
        modes=tuple(modes),
        count=len(modes),
        method=SearchMethod.GRID_ORACLE,
        degenerate=tuple(degenerate),
    )


def random_spd(rng: np.random.Generator, eig_range=(0.1, 10.0)) -> np.ndarray:
    """Random SPD matrix: log-uniform eigenvalues, uniformly rotated frame."""
    lo, hi = eig_range
    eigs = np.exp(rng.uniform(np.log(lo), np.log(hi), size=2))
    rot = rotation(rng.uniform(0.0, np.pi))
    return rot @ np.diag(eigs) @ rot.T


def _random_means(rng: np.random.Generator, box: float) -> tuple[np.ndarray, np.ndarray]:
    while True:
        mu1, mu2 = rng.uniform(-box, box, size=(2, 2))
        if np.hypot(*(mu2 - mu1)) > 1e-6:
            return mu1, mu2


def sample_pair(
    rng: np.random.Generator,
    kind: PairType | None = None,
    *,
    mean_box: float = 3.0,
    eig_range=(0.1, 10.0),
    boundary_margin: float = 1e-6,
) -> GaussianPair:
    """Random pair, optionally conditioned to one classification type.

    Generic draws are redrawn while they fall within `boundary_margin` of the
    proportional or codirectional boundary, so a requested type is decisive.
    Codirectional pairs are built with both covariance eigenframes aligned to
    the mean displacement; proportional pairs share one covariance up to a
    positive factor.
    """
    mu1, mu2 = _random_means(rng, mean_box)
    if kind is PairType.TYPE3:
        sigma1 = random_spd(rng, eig_range)
        ratio = np.exp(rng.uniform(np.log(0.2), np.log(5.0)))
        return GaussianPair(Gaussian2D(mu1, sigma1), Gaussian2D(mu2, ratio * sigma1))

    if kind is PairType.TYPE2:
        d = mu2 - mu1
        u = d / np.hypot(*d)
        frame = np.column_stack([u, [-u[1], u[0]]])
        lo, hi = eig_range
        while True:
            e1 = np.exp(rng.uniform(np.log(lo), np.log(hi), size=2))
            e2 = np.exp(rng.uniform(np.log(lo), np.log(hi), size=2))
            # distinct eigenvalue ratios keep the pair away from proportional
            if abs(np.log(e1[0] / e2[0]) - np.log(e1[1] / e2[1])) > 1e-3:
                break
        sigma1 = frame @ np.diag(e1) @ frame.T
        sigma2 = frame @ np.diag(e2) @ frame.T
        return GaussianPair(Gaussian2D(mu1, sigma1), Gaussian2D(mu2, sigma2))

    # generic draw, kept decisively away from both boundaries
    while True:
        pair = GaussianPair(
            Gaussian2D(mu1, random_spd(rng, eig_range)),
            Gaussian2D(mu2, random_spd(rng, eig_range)),
        )
        prop_res, _ = proportionality_residual(pair.f1.sigma, pair.f2.sigma)
        if prop_res > boundary_margin and codirectionality_residual(pair) > boundary_margin:
            return pair


def verify_bounds(
    sampler_seed: int,
    trials_per_type: int,
    c_values: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9),
    cfg: SearchConfig = SearchConfig(),
    rel_tol: float = DEFAULT_REL_TOL,
) -> BoundReport:
    """Sweep random pairs of every type and record any mode-count violations.

    Each trial derives its own generator from (sampler_seed, type, trial), so
    results are reproducible and trials are independent. For every trial and
    mixing proportion the observed mode count must respect both the per-type
    cap (3 / 2 / 2) and the pair's root-count bound.
    """
    if trials_per_type < 1:
        raise ValueError("need at least one trial per type")
    max_counts = {k: 0 for k in PairType}
    violations: list[BoundViolationRecord] = []
    kinds = (PairType.TYPE1, PairType.TYPE2, PairType.TYPE3)
    for kind_index, kind in enumerate(kinds):
        cap = 3 if kind is PairType.TYPE1 else 2
        for trial in range(trials_per_type):
            rng = np.random.default_rng(
                np.random.SeedSequence((sampler_seed, kind_index, trial))
            )
            pair = sample_pair(rng, kind)
            bound = modality_bound(pair, rel_tol)
            allowed = min(cap, bound.bound)
            for c in c_values:
                count = find_modes(Mixture(pair, c), cfg).count
                max_counts[kind] = max(max_counts[kind], count)
                if count > allowed:
                    violations.append(
                        BoundViolationRecord(
                            kind=kind,
                            trial=trial,
                            c=c,
                            count=count,
                            allowed=allowed,
                            mu1=pair.f1.mu,
                            sigma1=pair.f1.sigma,
                            mu2=pair.f2.mu,
                            sigma2=pair.f2.sigma,
                        )
                    )
    return BoundReport(
        sampler_seed=sampler_seed,
        trials_per_type=trials_per_type,
        c_values=tuple(c_values),
        max_counts=max_counts,
        violations=tuple(violations),
    )
