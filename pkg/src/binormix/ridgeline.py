"""Ridgeline curve, the q function, and root-count modality bounds.

For a pair with means mu1, mu2 and precisions P1 = sigma1^-1, P2 = sigma2^-1,
the ridgeline is

    x*(alpha) = S_alpha^-1 [(1 - alpha) P1 mu1 + alpha P2 mu2],
    S_alpha   = (1 - alpha) P1 + alpha P2,        alpha in [0, 1],

a curve from mu1 to mu2 that contains every critical point of every mixture
c f1 + (1 - c) f2. The number of curvature sign changes of the image of the
ridgeline under x -> (f1(x), f2(x)) equals the number of zeros in [0, 1] of

    q(alpha) = 1 - alpha (1 - alpha) p(alpha),
    p(alpha) = d^T P1 S^-1 P2 S^-1 P2 S^-1 P1 d,   d = mu2 - mu1,

and a mixture can have at most n/2 + 1 modes when q has n roots there.

The adjugate entries of S_alpha are linear in alpha and det S_alpha is
quadratic, so det(S_alpha)^3 q(alpha) is a polynomial of degree at most six.
It is recovered exactly (up to rounding) by interpolation at seven Chebyshev
nodes, and its real roots in [0, 1] are isolated by subdividing at the
critical points of the polynomial, found recursively down to quadratics, so
that every sign change sits in a monotone bracket.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .classify import DEFAULT_REL_TOL, CanonicalForm, PairType, pair_type
from .errors import AlphaOutOfRange, NotType2Canonical
from .gaussian import GaussianPair, density

__all__ = [
    "RidgeSample",
    "QPolynomial",
    "QRoot",
    "ModalityBound",
    "s_alpha",
    "det_s_alpha",
    "ridge_point",
    "ridge_points",
    "ridge_samples",
    "p_of_alpha",
    "q_of_alpha",
    "q_numerator",
    "real_roots_in_unit_interval",
    "q_roots_in_unit",
    "modality_bound",
    "type2_cubic",
]

# Derivative magnitude below which a root of q counts as a tangency (a touch
# point rather than a crossing).
TANGENCY_DERIVATIVE_TOL = 1e-7

_CHEB_NODES_7 = 0.5 + 0.5 * np.cos(np.pi * (2.0 * np.arange(7) + 1.0) / 14.0)

# --- compensated (double-longdouble) helpers -------------------------------
#
# det(S_alpha)^3 can span ten or more decades across [0, 1] while q stays of
# order one, so reproducing q(alpha) = N(alpha) / det^3 to 1e-9 needs the
# numerator polynomial carried to roughly twice extended precision at its
# small end. Error-free transformations give that without any third-party
# arbitrary-precision dependency.

_LD = np.longdouble
_SPLITTER = _LD(2) ** 32 + _LD(1)  # Veltkamp splitter for the 64-bit mantissa


def _two_sum(a, b):
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _two_prod(a, b):
    p = a * b
    aa = _SPLITTER * a
    a_hi = aa - (aa - a)
    a_lo = a - a_hi
    bb = _SPLITTER * b
    b_hi = bb - (bb - b)
    b_lo = b - b_hi
    return p, ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo


def _dd_horner(hi: np.ndarray, lo: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate sum_i (hi_i + lo_i) x^i with a compensated Horner scheme."""
    s = np.full_like(x, hi[-1])
    e = np.full_like(x, lo[-1])
    for h, l in zip(hi[-2::-1], lo[-2::-1]):
        p, p_err = _two_prod(s, x)
        s, s_err = _two_sum(p, h)
        e = e * x + (p_err + s_err + l)
    return s + e


def _residual_compensated(v: np.ndarray, rhs: np.ndarray, c: np.ndarray) -> np.ndarray:
    """rhs - v @ c with compensated dot products (all longdouble)."""
    out = np.empty_like(rhs)
    for i in range(len(rhs)):
        s = rhs[i]
        e = _LD(0)
        for j in range(v.shape[1]):
            p, p_err = _two_prod(v[i, j], c[j])
            s, s_err = _two_sum(s, -p)
            e += s_err - p_err
        out[i] = s + e
    return out


@dataclass(frozen=True, eq=False)
class RidgeSample:
    alpha: float
    x_star: np.ndarray
    f1_val: float
    f2_val: float
    q_val: float


@dataclass(frozen=True, eq=False)
class QPolynomial:
    """Ascending coefficients of det(S_alpha)^3 q(alpha), degree <= 6.

    `coeffs` holds the correctly rounded extended-precision coefficients; the
    private `_lo` field carries the unevaluated rounding remainder so that
    evaluation can run at roughly doubled extended precision. Power-basis
    evaluation loses one digit per decade of the numerator's dynamic range
    over [0, 1], which reaches ten decades for strongly mismatched
    covariances, so plain double (or even extended) Horner cannot reproduce
    q = numerator / det^3 to 1e-9 everywhere.
    """

    coeffs: np.ndarray
    _lo: np.ndarray | None = None

    def __post_init__(self):
        if self._lo is None:
            object.__setattr__(self, "_lo", np.zeros_like(np.asarray(self.coeffs)))

    def __call__(self, alpha):
        x = np.asarray(alpha, dtype=np.longdouble)
        scalar = x.ndim == 0
        result = _dd_horner(
            np.asarray(self.coeffs, dtype=np.longdouble),
            np.asarray(self._lo, dtype=np.longdouble),
            np.atleast_1d(x),
        )
        return result[0] if scalar else result


@dataclass(frozen=True)
class QRoot:
    """One root of q in [0, 1]; tangent marks a touch point (|q'| < 1e-7)."""

    alpha: float
    tangent: bool
    q_prime: float = np.nan


@dataclass(frozen=True)
class ModalityBound:
    """Root count of q on [0, 1] and the implied cap on the number of modes."""

    n_roots: int
    bound: int
    has_tangency: bool = False


def _check_alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
        raise AlphaOutOfRange("alpha must lie in [0, 1]")
    return a


def _s_entries(p: GaussianPair, a: np.ndarray):
    p1 = p.f1.sigma_inv
    p2 = p.f2.sigma_inv
    s11 = (1.0 - a) * p1[0, 0] + a * p2[0, 0]
    s12 = (1.0 - a) * p1[0, 1] + a * p2[0, 1]
    s22 = (1.0 - a) * p1[1, 1] + a * p2[1, 1]
    return s11, s12, s22


def s_alpha(p: GaussianPair, alpha: float) -> np.ndarray:
    """Convex combination of the precision matrices; SPD on all of [0, 1]."""
    a = float(_check_alpha(alpha))
    s11, s12, s22 = _s_entries(p, np.asarray(a))
    return np.array([[s11, s12], [s12, s22]])


def det_s_alpha(p: GaussianPair, alpha) -> np.ndarray:
    a = _check_alpha(alpha)
    s11, s12, s22 = _s_entries(p, a)
    return s11 * s22 - s12 * s12


def ridge_points(p: GaussianPair, alpha) -> np.ndarray:
    """Ridgeline points for an array of alphas, shape (..., 2)."""
    a = _check_alpha(alpha)
    s11, s12, s22 = _s_entries(p, a)
    det = s11 * s22 - s12 * s12
    r1 = p.f1.sigma_inv @ p.f1.mu
    r2 = p.f2.sigma_inv @ p.f2.mu
    b1 = (1.0 - a) * r1[0] + a * r2[0]
    b2 = (1.0 - a) * r1[1] + a * r2[1]
    x = (s22 * b1 - s12 * b2) / det
    y = (-s12 * b1 + s11 * b2) / det
    return np.stack([x, y], axis=-1)


def ridge_point(p: GaussianPair, alpha: float) -> np.ndarray:
    return ridge_points(p, float(alpha))


def p_of_alpha(p: GaussianPair, alpha) -> np.ndarray:
    """The positive quadratic form whose size controls the roots of q."""
    a = _check_alpha(alpha)
    s11, s12, s22 = _s_entries(p, a)
    det = s11 * s22 - s12 * s12
    d = p.f2.mu - p.f1.mu
    u = p.f1.sigma_inv @ d
    w1 = (s22 * u[0] - s12 * u[1]) / det
    w2 = (-s12 * u[0] + s11 * u[1]) / det
    p2 = p.f2.sigma_inv
    v1 = p2[0, 0] * w1 + p2[0, 1] * w2
    v2 = p2[0, 1] * w1 + p2[1, 1] * w2
    z1 = (s22 * v1 - s12 * v2) / det
    z2 = (-s12 * v1 + s11 * v2) / det
    return v1 * z1 + v2 * z2


def q_of_alpha(p: GaussianPair, alpha) -> np.ndarray:
    """q(alpha) = 1 - alpha (1 - alpha) p(alpha); equals 1 at both endpoints."""
    a = _check_alpha(alpha)
    return 1.0 - a * (1.0 - a) * p_of_alpha(p, a)


def ridge_samples(p: GaussianPair, n: int) -> list[RidgeSample]:
    """n ridgeline samples at interior alphas (k + 1) / (n + 1)."""
    alphas = np.arange(1, n + 1) / (n + 1.0)
    pts = ridge_points(p, alphas)
    f1 = density(p.f1, pts)
    f2 = density(p.f2, pts)
    qs = q_of_alpha(p, alphas)
    return [
        RidgeSample(float(a), pt, float(v1), float(v2), float(qv))
        for a, pt, v1, v2, qv in zip(alphas, pts, f1, f2, qs)
    ]


def q_numerator(p: GaussianPair) -> QPolynomial:
    """Interpolate det(S_alpha)^3 q(alpha) at 7 Chebyshev nodes on [0, 1].

    Node values, the Vandermonde solve (double precision plus one residual
    correction), and the stored coefficients all use extended precision; see
    QPolynomial for why.
    """
    ld = np.longdouble
    nodes = _CHEB_NODES_7.astype(ld)
    p1 = p.f1.sigma_inv.astype(ld)
    p2 = p.f2.sigma_inv.astype(ld)
    d = (p.f2.mu - p.f1.mu).astype(ld)
    a = nodes
    s11 = (1 - a) * p1[0, 0] + a * p2[0, 0]
    s12 = (1 - a) * p1[0, 1] + a * p2[0, 1]
    s22 = (1 - a) * p1[1, 1] + a * p2[1, 1]
    det = s11 * s22 - s12 * s12
    u = p1 @ d
    w1 = (s22 * u[0] - s12 * u[1]) / det
    w2 = (-s12 * u[0] + s11 * u[1]) / det
    v1 = p2[0, 0] * w1 + p2[0, 1] * w2
    v2 = p2[0, 1] * w1 + p2[1, 1] * w2
    z1 = (s22 * v1 - s12 * v2) / det
    z2 = (-s12 * v1 + s11 * v2) / det
    q_vals = 1 - a * (1 - a) * (v1 * z1 + v2 * z2)
    values = det**3 * q_vals

    vander = np.vander(nodes, 7, increasing=True)
    vander64 = vander.astype(float)
    coeffs = np.linalg.solve(vander64, values.astype(float)).astype(ld)
    # Mixed-precision iterative refinement with compensated residuals drives
    # the coefficient error to the node-value level; the last correction is
    # kept unevaluated so no accuracy is lost to coefficient rounding.
    for _ in range(2):
        residual = _residual_compensated(vander, values, coeffs)
        coeffs = coeffs + np.linalg.solve(vander64, residual.astype(float)).astype(ld)
    residual = _residual_compensated(vander, values, coeffs)
    low = np.linalg.solve(vander64, residual.astype(float)).astype(ld)
    return QPolynomial(coeffs, low)


def _det_poly_coeffs(p: GaussianPair) -> np.ndarray:
    """det S_alpha as an ascending quadratic in alpha (length always 3)."""
    p1 = p.f1.sigma_inv
    p2 = p.f2.sigma_inv
    a0, a1 = p1[0, 0], p2[0, 0] - p1[0, 0]
    b0, b1 = p1[0, 1], p2[0, 1] - p1[0, 1]
    c0, c1 = p1[1, 1], p2[1, 1] - p1[1, 1]
    return np.array(
        [a0 * c0 - b0 * b0, a0 * c1 + a1 * c0 - 2.0 * b0 * b1, a1 * c1 - b1 * b1]
    )


def _trim(coeffs: np.ndarray, rtol: float = 1e-13) -> np.ndarray:
    c = np.asarray(coeffs)
    if not np.issubdtype(c.dtype, np.floating):
        c = c.astype(float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) > rtol * scale)[0]
    return c[: keep[-1] + 1]


def _quadratic_roots(c: np.ndarray) -> list[float]:
    c0, c1, c2 = c
    disc = c1 * c1 - 4.0 * c0 * c2
    # A discriminant at the rounding floor is a double root; splitting it on
    # noise would report one touch point as two nearby crossings.
    noise = 64.0 * float(np.finfo(np.asarray(c).dtype).eps) * float(
        c1 * c1 + abs(4.0 * c0 * c2)
    )
    if disc < -noise:
        return []
    if disc <= noise:
        return [float(-c1 / (2.0 * c2))]
    sq = np.sqrt(disc)
    # Evaluate the larger-magnitude root first to avoid cancellation.
    r1 = (-c1 - sq) / (2.0 * c2) if c1 >= 0.0 else (-c1 + sq) / (2.0 * c2)
    r2 = c0 / (c2 * r1) if r1 != 0.0 else -c1 / c2
    return [float(r1), float(r2)]


def real_roots_in_unit_interval(coeffs) -> list[float]:
    """All real roots in [0, 1] of a polynomial given by ascending coefficients.

    The interval is subdivided at the polynomial's critical points, computed
    recursively, so each piece is monotone: a sign change there brackets one
    simple root, refined by bisection to a width of 1e-12, and a touch point
    shows up as a (near-)zero value at a critical point and is reported once.
    """
    c = _trim(coeffs)
    degree = len(c) - 1
    if degree <= 0:
        return []
    if degree == 1:
        root = -c[0] / c[1]
        return [float(root)] if 0.0 <= root <= 1.0 else []
    if degree == 2:
        return sorted(r for r in set(_quadratic_roots(c)) if 0.0 <= r <= 1.0)

    derivative = c[1:] * np.arange(1, degree + 1)
    crits = real_roots_in_unit_interval(derivative)
    breaks = np.unique(np.concatenate([[0.0, 1.0], crits]))
    values = npoly.polyval(breaks, c)
    scale = float(np.sum(np.abs(c)))
    # Treat a value as zero only when it is at the Horner noise floor for the
    # coefficient dtype; a looser cut would swallow genuinely positive values
    # of polynomials with a large dynamic range.
    zeroish = np.abs(values) <= 64.0 * float(np.finfo(c.dtype).eps) * scale

    roots = [float(b) for b, z in zip(breaks, zeroish) if z]
    for i in range(len(breaks) - 1):
        if zeroish[i] or zeroish[i + 1]:
            continue
        va, vb = values[i], values[i + 1]
        if va * vb > 0.0:
            continue
        a, b = float(breaks[i]), float(breaks[i + 1])
        fa = va
        while b - a > 1e-12:
            mid = 0.5 * (a + b)
            fm = npoly.polyval(mid, c)
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or r - merged[-1] > 4e-12:
            merged.append(r)
    return merged


def q_roots_in_unit(p: GaussianPair) -> list[QRoot]:
    """Roots of q in [0, 1], ascending, each with a tangency flag.

    The flag marks |q'(root)| < 1e-7: a touch point of q rather than a
    transversal crossing. Touch points are reported once.
    """
    numerator = q_numerator(p)
    det_c = _det_poly_coeffs(p)
    num_der = numerator.coeffs[1:] * np.arange(1, 7)
    det_der = det_c[1:] * np.arange(1, 3)
    out = []
    for root in real_roots_in_unit_interval(numerator.coeffs):
        det = npoly.polyval(root, det_c)
        n_val = npoly.polyval(root, numerator.coeffs)
        n_prime = npoly.polyval(root, num_der)
        d_prime = npoly.polyval(root, det_der)
        q_prime = float((n_prime * det - 3.0 * n_val * d_prime) / det**4)
        out.append(
            QRoot(
                alpha=root,
                tangent=abs(q_prime) < TANGENCY_DERIVATIVE_TOL,
                q_prime=q_prime,
            )
        )
    return out


def modality_bound(p: GaussianPair, rel_tol: float = DEFAULT_REL_TOL) -> ModalityBound:
    """Mode-count cap: floor(n/2) + 1 from the q roots, capped per pair type.

    The cap is 3 in general and 2 when the covariances are proportional or
    the pair is codirectional.
    """
    roots = q_roots_in_unit(p)
    n = len(roots)
    cap = 3 if pair_type(p, rel_tol) is PairType.TYPE1 else 2
    return ModalityBound(
        n_roots=n,
        bound=min(n // 2 + 1, cap),
        has_tangency=any(r.tangent for r in roots),
    )


def type2_cubic(cf: CanonicalForm, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Ascending cubic whose roots in [0, 1] are the q roots of an
    axis-aligned reduced pair (mean on the first canonical axis).

    With s = s1_sq and the mean at (m1, 0), q reduces to
    1 - alpha (1 - alpha) m1^2 s / D^3 for D = s + alpha (1 - s), so q = 0
    clears to D^3 - alpha (1 - alpha) m1^2 s = 0, whose expansion is returned
    (negated so the cubic coefficient is (s - 1)^3). The second canonical
    variance does not enter.
    """
    m1, m2 = cf.m
    if abs(m2) > rel_tol * np.hypot(m1, m2):
        raise NotType2Canonical("canonical mean must lie on the first axis")
    s = cf.s1_sq
    return np.array(
        [
            -(s**3),
            s * (m1 * m1 + 3.0 * s * (s - 1.0)),
            -s * (m1 * m1 + 3.0 * (s - 1.0) ** 2),
            (s - 1.0) ** 3,
        ]
    )
