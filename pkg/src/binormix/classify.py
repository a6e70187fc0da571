"""Classification of a pair of bivariate normals by its singular-set geometry.

A pair (f1, f2) with distinct means falls into exactly one of three classes,
decided by two affine-invariant conditions on the parameters:

* proportional covariances (sigma1 = r * sigma2 for some r > 0), which makes
  the singular set of x -> (f1(x), f2(x)) a straight line;
* codirectional means, which makes it two intersecting lines;
* neither, which makes it a hyperbola carrying exactly one cusp point.

Codirectionality is tested in the form cross(sigma1^-1 d, sigma2^-1 d) = 0
with d the mean difference. This is equivalent to d being a common principal
direction whenever the covariances are simultaneously diagonalizable along d,
it is implied by the eigenvector form of the condition, and unlike the raw
eigenvector test it is preserved by every invertible affine change of
coordinates, which is what makes the classification a coordinate-free
statement.

Every pair can be pushed to a canonical coordinate system where f1 is the
standard normal and f2 has a diagonal covariance; the singular set is then
the zero set of the explicit quadratic

    lambda(x, y) = -(s1 - s2) x y + m2 s1 x - m1 s2 y

with (m1, m2) the canonical second mean and (s1, s2) the canonical variances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BinormixError, NotType1, ProportionalCovariances
from .gaussian import Gaussian2D, GaussianPair, log_density_grad
from .linalg2 import (
    Affine2,
    affine_apply,
    affine_compose,
    affine_inverse,
    cross2,
    spd_inv_sqrt,
    sym_eigen,
)

__all__ = [
    "DEFAULT_REL_TOL",
    "PairType",
    "ConicKind",
    "CanonicalForm",
    "SingularConic",
    "ClassificationReport",
    "CuspResult",
    "is_proportional",
    "proportionality_residual",
    "codirectionality_residual",
    "is_codirectional",
    "canonicalize",
    "canonical_pair",
    "swap_canonical_axes",
    "pair_type",
    "singular_conic",
    "conic_lambda",
    "singular_set_branches",
    "sample_singular_set",
    "locate_cusp",
    "locate_cusp_detailed",
    "classify_pair",
]

# One tolerance governs proportionality, codirectionality and the canonical
# trichotomy; two independent ladders could classify a near-boundary pair
# inconsistently.
DEFAULT_REL_TOL = 1e-9

# Width of the excluded interval around the hyperbola asymptote, where the
# rational parameterization of the singular set blows up.
_ASYMPTOTE_GUARD = 1e-6


class PairType(Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"


class ConicKind(Enum):
    HYPERBOLA = "Hyperbola"
    TWO_LINES = "TwoLines"
    LINE = "Line"


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Reduced parameters and the source-space map that produced them.

    Applying to_canonical to the original pair yields mean1 = 0, sigma1 = I,
    sigma2 = diag(s1_sq, s2_sq) and mean2 = m.
    """

    m: np.ndarray
    s1_sq: float
    s2_sq: float
    to_canonical: Affine2

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (2,) or not np.all(np.isfinite(m)) or not np.any(m):
            raise ValueError("canonical second mean must be finite and nonzero")
        if not (self.s1_sq > 0.0 and self.s2_sq > 0.0):
            raise ValueError("canonical variances must be positive")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)


@dataclass(frozen=True, eq=False)
class SingularConic:
    """Quadratic lambda(x, y) = x^T Q x + L . x cut out by the singular set."""

    Q: np.ndarray
    L: np.ndarray
    kind: ConicKind


@dataclass(frozen=True, eq=False)
class CuspResult:
    """Certified cusp location with the bracketing evidence."""

    point: np.ndarray
    canonical_point: np.ndarray
    criterion_value: float
    bracket: tuple[float, float]
    n_candidates: int
    ambiguous: bool


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    pair_type: PairType
    proportional: bool
    proportionality_ratio: float | None
    codirectional: bool | None
    canonical: CanonicalForm
    conic: SingularConic
    cusp: np.ndarray | None
    cusp_ambiguous: bool


def proportionality_residual(s1: np.ndarray, s2: np.ndarray) -> tuple[float, float]:
    """Relative residual of the best trace-matched multiple, plus the ratio."""
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    ratio = (s1[0, 0] + s1[1, 1]) / (s2[0, 0] + s2[1, 1])
    residual = np.max(np.abs(s1 - ratio * s2)) / np.max(np.abs(s1))
    return float(residual), float(ratio)


def is_proportional(
    s1: np.ndarray, s2: np.ndarray, rel_tol: float = DEFAULT_REL_TOL
) -> tuple[bool, float | None]:
    """Test sigma1 = r * sigma2; returns (flag, r) with r only when true."""
    residual, ratio = proportionality_residual(s1, s2)
    if residual <= rel_tol:
        return True, ratio
    return False, None


def codirectionality_residual(p: GaussianPair) -> float:
    """|sin| of the angle between sigma1^-1 d and sigma2^-1 d, d = mean2 - mean1."""
    d = p.f2.mu - p.f1.mu
    u = p.f1.sigma_inv @ d
    v = p.f2.sigma_inv @ d
    return float(abs(cross2(u, v)) / (np.hypot(*u) * np.hypot(*v)))


def is_codirectional(p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """Whether the mean displacement is a shared principal direction.

    Only defined for non-proportional covariances; proportional input raises
    ProportionalCovariances.
    """
    flag, _ = is_proportional(p.f1.sigma, p.f2.sigma, rel_tol)
    if flag:
        raise ProportionalCovariances(
            "codirectionality is undefined for proportional covariances"
        )
    return codirectionality_residual(p) <= rel_tol


def pair_type(p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL) -> PairType:
    """Type3 if proportional, else Type2 if codirectional, else Type1."""
    flag, _ = is_proportional(p.f1.sigma, p.f2.sigma, rel_tol)
    if flag:
        return PairType.TYPE3
    if codirectionality_residual(p) <= rel_tol:
        return PairType.TYPE2
    return PairType.TYPE1


def canonicalize(p: GaussianPair) -> CanonicalForm:
    """Affine reduction to mean1 = 0, sigma1 = I, sigma2 diagonal.

    The map translates by -mean1, whitens with sigma1^-1/2, then rotates so
    the whitened sigma2 is diagonal with entries in decreasing order. Among
    proper rotations compatible with that ordering, the one with the smallest
    angle is taken, so an already-diagonal ordered matrix maps by the
    identity.
    """
    whiten = spd_inv_sqrt(p.f1.sigma)
    b = whiten @ p.f2.sigma @ whiten
    b = 0.5 * (b + b.T)
    lam1, lam2, rot = sym_eigen(b)
    linear = rot.T @ whiten
    to_canonical = Affine2(linear, -linear @ p.f1.mu)
    m = linear @ (p.f2.mu - p.f1.mu)
    return CanonicalForm(m=m, s1_sq=lam1, s2_sq=lam2, to_canonical=to_canonical)


def canonical_pair(cf: CanonicalForm) -> GaussianPair:
    """The pair in canonical coordinates: N(0, I) and N(m, diag(s1, s2))."""
    return GaussianPair(
        Gaussian2D(np.zeros(2), np.eye(2)),
        Gaussian2D(cf.m, np.diag([cf.s1_sq, cf.s2_sq])),
    )


def swap_canonical_axes(cf: CanonicalForm) -> CanonicalForm:
    """Rotate the canonical frame a quarter turn, swapping the two axes."""
    quarter = Affine2(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.zeros(2))
    return CanonicalForm(
        m=np.array([cf.m[1], -cf.m[0]]),
        s1_sq=cf.s2_sq,
        s2_sq=cf.s1_sq,
        to_canonical=affine_compose(quarter, cf.to_canonical),
    )


def singular_conic(cf: CanonicalForm, rel_tol: float = DEFAULT_REL_TOL) -> SingularConic:
    """Coefficients and kind of the canonical singular-set quadratic."""
    s1, s2 = cf.s1_sq, cf.s2_sq
    m1, m2 = cf.m
    half = -0.5 * (s1 - s2)
    q = np.array([[0.0, half], [half, 0.0]])
    ell = np.array([m2 * s1, -m1 * s2])
    if abs(s1 - s2) <= rel_tol * max(s1, s2):
        kind = ConicKind.LINE
    elif abs(m1 * m2) <= rel_tol * (m1 * m1 + m2 * m2):
        kind = ConicKind.TWO_LINES
    else:
        kind = ConicKind.HYPERBOLA
    return SingularConic(Q=q, L=ell, kind=kind)


def conic_lambda(conic: SingularConic, pt: np.ndarray) -> np.ndarray:
    """Evaluate lambda(x, y); zero exactly on the singular set."""
    pt = np.asarray(pt, dtype=float)
    quad = np.einsum("...i,ij,...j->...", pt, conic.Q, pt)
    return quad + pt @ conic.L


def _hyperbola_y(cf: CanonicalForm, x: np.ndarray) -> np.ndarray:
    s1, s2 = cf.s1_sq, cf.s2_sq
    m1, m2 = cf.m
    return s1 * m2 * x / ((s1 - s2) * x + s2 * m1)


def _hyperbola_slope(cf: CanonicalForm, x: np.ndarray) -> np.ndarray:
    s1, s2 = cf.s1_sq, cf.s2_sq
    m1, m2 = cf.m
    return s1 * m2 * s2 * m1 / ((s1 - s2) * x + s2 * m1) ** 2


def _asymptote_x(cf: CanonicalForm) -> float:
    return -cf.s2_sq * cf.m[0] / (cf.s1_sq - cf.s2_sq)


def _window_half_width(cf: CanonicalForm) -> float:
    return float(np.hypot(*cf.m) + 6.0 * np.sqrt(max(1.0, cf.s1_sq, cf.s2_sq)))


def _canonical_branches(cf: CanonicalForm, kind: ConicKind, n: int) -> list[np.ndarray]:
    """Sampled branches of the canonical conic, each a (k, 2) polyline."""
    m1, m2 = cf.m
    s1, s2 = cf.s1_sq, cf.s2_sq
    w = _window_half_width(cf)
    if kind is ConicKind.LINE:
        direction = cf.m / np.hypot(m1, m2)
        ts = np.linspace(-w, w, n)
        return [ts[:, None] * direction]
    if kind is ConicKind.TWO_LINES:
        n_first = n - n // 2
        ts1 = np.linspace(-w, w, n_first)
        ts2 = np.linspace(-w, w, n // 2)
        if abs(m2) <= abs(m1):
            # mean on the first axis: branches y = 0 and x = s2 m1 / (s2 - s1)
            x0 = s2 * m1 / (s2 - s1)
            first = np.column_stack([ts1, np.zeros_like(ts1)])
            second = np.column_stack([np.full_like(ts2, x0), ts2])
        else:
            y0 = s1 * m2 / (s1 - s2)
            first = np.column_stack([np.zeros_like(ts1), ts1])
            second = np.column_stack([ts2, np.full_like(ts2, y0)])
        return [first, second]
    x_asym = _asymptote_x(cf)
    guard = max(_ASYMPTOTE_GUARD, 1e-9 * max(abs(x_asym), w))
    branches = []
    for side, count in ((-1.0, n // 2), (1.0, n - n // 2)):
        offsets = np.geomspace(guard, w, count) if count > 1 else np.array([w])
        xs = np.sort(x_asym + side * offsets)
        branches.append(np.column_stack([xs, _hyperbola_y(cf, xs)]))
    return branches


def singular_set_branches(
    p: GaussianPair, n: int, rel_tol: float = DEFAULT_REL_TOL
) -> list[np.ndarray]:
    """Polylines covering every branch of the singular set, original coordinates."""
    if n < 2:
        raise ValueError("need at least two sample points")
    cf = canonicalize(p)
    conic = singular_conic(cf, rel_tol)
    back = affine_inverse(cf.to_canonical)
    return [affine_apply(back, branch) for branch in _canonical_branches(cf, conic.kind, n)]


def sample_singular_set(
    p: GaussianPair, n: int, rel_tol: float = DEFAULT_REL_TOL
) -> np.ndarray:
    """n points on the singular set (all branches), original coordinates."""
    return np.vstack(singular_set_branches(p, n, rel_tol))


def _kernel_direction(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Right-singular direction of the smaller singular value of [[g1], [g2]].

    The density factors of the Jacobian are strictly positive, so its kernel
    coincides with the kernel of the stacked log-gradient rows; using the
    factored rows keeps the computation meaningful in far tails where the
    densities themselves underflow.
    """
    rows = np.stack([g1, g2], axis=-2)
    _, _, vt = np.linalg.svd(rows)
    return vt[..., 1, :]


def _orient_consecutive(vs: np.ndarray) -> np.ndarray:
    """Flip signs so consecutive rows have positive dot products."""
    dots = np.einsum("ij,ij->i", vs[1:], vs[:-1])
    flips = np.concatenate([[1.0], np.cumprod(np.where(dots < 0, -1.0, 1.0))])
    return vs * flips[:, None]


def _cusp_criterion_at(
    cf: CanonicalForm, pair_c: GaussianPair, x: float, ref: np.ndarray
) -> float:
    pt = np.array([x, float(_hyperbola_y(cf, np.asarray(x)))])
    g1 = log_density_grad(pair_c.f1, pt)
    g2 = log_density_grad(pair_c.f2, pt)
    k = _kernel_direction(g1, g2)
    if k @ ref < 0:
        k = -k
    t = np.array([1.0, float(_hyperbola_slope(cf, np.asarray(x)))])
    return float(cross2(k, t / np.hypot(*t)))


def locate_cusp_detailed(
    p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL, scan_points: int = 4000
) -> CuspResult:
    """Locate the unique cusp on a hyperbolic singular set.

    The cusp is the one point where the kernel direction of the Jacobian is
    tangent to the singular set. Both hyperbola branches are scanned for a
    sign change of cross(kernel, tangent), with the kernel field oriented by
    propagation along each branch, and the change is bisected down to a
    bracket of width 1e-10 in the branch parameter.
    """
    if pair_type(p, rel_tol) is not PairType.TYPE1:
        raise NotType1("the singular set carries a cusp only for Type1 pairs")
    cf = canonicalize(p)
    pair_c = canonical_pair(cf)
    x_asym = _asymptote_x(cf)
    half_width = 10.0 * max(float(np.hypot(*cf.m)), np.sqrt(max(1.0, cf.s1_sq, cf.s2_sq)))
    guard = max(_ASYMPTOTE_GUARD, 1e-9 * max(abs(x_asym), half_width))

    candidates = []
    for side in (-1.0, 1.0):
        offsets = np.unique(
            np.concatenate(
                [
                    np.geomspace(guard, half_width, scan_points // 2),
                    np.linspace(guard, half_width, scan_points // 2),
                ]
            )
        )
        xs = np.sort(x_asym + side * offsets)
        pts = np.column_stack([xs, _hyperbola_y(cf, xs)])
        g1 = log_density_grad(pair_c.f1, pts)
        g2 = log_density_grad(pair_c.f2, pts)
        kernels = _orient_consecutive(_kernel_direction(g1, g2))
        slopes = _hyperbola_slope(cf, xs)
        tangents = np.column_stack([np.ones_like(xs), slopes])
        tangents /= np.hypot(tangents[:, 0], tangents[:, 1])[:, None]
        crit = cross2(kernels, tangents)
        flips = np.nonzero(crit[:-1] * crit[1:] < 0)[0]
        for i in flips:
            a, b = float(xs[i]), float(xs[i + 1])
            slope = abs(crit[i + 1] - crit[i]) / (b - a)
            ref = kernels[i].copy()
            fa = _cusp_criterion_at(cf, pair_c, a, ref)
            while b - a > 1e-10:
                mid = 0.5 * (a + b)
                fm = _cusp_criterion_at(cf, pair_c, mid, ref)
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            x_root = 0.5 * (a + b)
            candidates.append((slope, x_root, (a, b), ref))

    if not candidates:
        raise BinormixError("cusp scan found no kernel-tangency sign change")
    candidates.sort(key=lambda item: -item[0])
    _, x_root, bracket, ref = candidates[0]
    canonical_point = np.array([x_root, float(_hyperbola_y(cf, np.asarray(x_root)))])
    point = affine_apply(affine_inverse(cf.to_canonical), canonical_point)
    value = abs(_cusp_criterion_at(cf, pair_c, x_root, ref))
    return CuspResult(
        point=point,
        canonical_point=canonical_point,
        criterion_value=value,
        bracket=bracket,
        n_candidates=len(candidates),
        ambiguous=len(candidates) > 1,
    )


def locate_cusp(p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Original-coordinates cusp location; see locate_cusp_detailed."""
    return locate_cusp_detailed(p, rel_tol).point


def classify_pair(
    p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL
) -> ClassificationReport:
    """Full classification: flags, canonical form, conic, and cusp if any."""
    proportional, ratio = is_proportional(p.f1.sigma, p.f2.sigma, rel_tol)
    codirectional = None
    if not proportional:
        codirectional = codirectionality_residual(p) <= rel_tol
    if proportional:
        ptype = PairType.TYPE3
    elif codirectional:
        ptype = PairType.TYPE2
    else:
        ptype = PairType.TYPE1
    canonical = canonicalize(p)
    conic = singular_conic(canonical, rel_tol)
    cusp = None
    ambiguous = False
    if ptype is PairType.TYPE1:
        result = locate_cusp_detailed(p, rel_tol)
        cusp = result.point
        ambiguous = result.ambiguous
    return ClassificationReport(
        pair_type=ptype,
        proportional=proportional,
        proportionality_ratio=ratio,
        codirectional=codirectional,
        canonical=canonical,
        conic=conic,
        cusp=cusp,
        cusp_ambiguous=ambiguous,
    )
