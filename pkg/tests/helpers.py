"""Shared test oracles: finite differences, quadrature, random transforms.

Everything here is deliberately independent of the library's analytic paths:
gradients come from differencing density values, integrals from tensor
Gauss-Legendre rules, and transformed pairs from the textbook pushforward of
a normal distribution under an affine map.
"""

import numpy as np

from binormix import Affine2, Gaussian2D, GaussianPair, Mixture, density, rotation


def finite_diff_grad(f, pt, h=1e-5):
    e = np.eye(2)
    return np.array([(f(pt + h * e[i]) - f(pt - h * e[i])) / (2 * h) for i in range(2)])


def finite_diff_hess(f, pt, h=1e-4):
    """Hessian from value differences only (no analytic gradients)."""
    cols = []
    for i in range(2):
        cols.append(
            finite_diff_grad(lambda x, i=i: finite_diff_grad(f, x, h)[i], pt, h)
        )
    return np.column_stack(cols)


def finite_diff_jacobian_det(p: GaussianPair, pt):
    """det of the finite-difference Jacobian of x -> (f1, f2), 4th order.

    The step adapts to the local log-gradient scale; a fixed step loses the
    truncation error race wherever the densities vary quickly.
    """
    g1 = -(pt - p.f1.mu) @ p.f1.sigma_inv
    g2 = -(pt - p.f2.mu) @ p.f2.sigma_inv
    prec = max(np.linalg.norm(p.f1.sigma_inv), np.linalg.norm(p.f2.sigma_inv))
    kappa = max(np.linalg.norm(g1), np.linalg.norm(g2), np.sqrt(prec), 1.0)
    h = 7e-4 / kappa

    def deriv(f, axis):
        e = np.zeros(2)
        e[axis] = 1.0
        return (-f(pt + 2 * h * e) + 8 * f(pt + h * e) - 8 * f(pt - h * e) + f(pt - 2 * h * e)) / (
            12 * h
        )

    j = np.array(
        [
            [deriv(lambda x: density(p.f1, x), 0), deriv(lambda x: density(p.f1, x), 1)],
            [deriv(lambda x: density(p.f2, x), 0), deriv(lambda x: density(p.f2, x), 1)],
        ]
    )
    return j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]


def gauss_legendre_mass(g: Gaussian2D, n=1000, half_widths=8.0):
    """Integral of the density over a padded per-axis box."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    sx = np.sqrt(g.sigma[0, 0])
    sy = np.sqrt(g.sigma[1, 1])
    xs = g.mu[0] + half_widths * sx * nodes
    ys = g.mu[1] + half_widths * sy * nodes
    wx = half_widths * sx * weights
    wy = half_widths * sy * weights
    grid = np.stack(np.meshgrid(xs, ys, indexing="xy"), axis=-1)
    z = density(g, grid)
    return float(wy @ z @ wx)


def random_spd_eigs(rng, lo, hi):
    eigs = np.exp(rng.uniform(np.log(lo), np.log(hi), 2))
    rot = rotation(rng.uniform(0.0, np.pi))
    return rot @ np.diag(eigs) @ rot.T


def random_affine(rng, scale=(0.5, 2.0), shift=2.0) -> Affine2:
    """Random invertible affine map with controlled singular values.

    Composing two independent rotations with an anisotropic scaling produces
    shears as well as similarities, which is what distinguishes genuinely
    affine-invariant quantities from merely rotation-invariant ones.
    """
    q1 = rotation(rng.uniform(0.0, 2 * np.pi))
    q2 = rotation(rng.uniform(0.0, 2 * np.pi))
    s = np.exp(rng.uniform(np.log(scale[0]), np.log(scale[1]), 2))
    return Affine2(q1 @ np.diag(s) @ q2, rng.uniform(-shift, shift, 2))


def transform_gaussian(g: Gaussian2D, t: Affine2) -> Gaussian2D:
    return Gaussian2D(t.linear @ g.mu + t.shift, t.linear @ g.sigma @ t.linear.T)


def transform_pair(p: GaussianPair, t: Affine2) -> GaussianPair:
    return GaussianPair(transform_gaussian(p.f1, t), transform_gaussian(p.f2, t))


def transform_mixture(m: Mixture, t: Affine2) -> Mixture:
    return Mixture(transform_pair(m.pair, t), m.c)


def polyline_distance(pt, poly):
    """Distance from a point to a polyline given by its vertices."""
    a = poly[:-1]
    b = poly[1:]
    ab = b - a
    ap = pt - a
    t = np.clip(
        np.einsum("ij,ij->i", ap, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0
    )
    proj = a + t[:, None] * ab
    return float(np.min(np.linalg.norm(pt - proj, axis=1)))


FIG1_MU1 = np.array([0.0, 0.0])
FIG1_MU2 = np.array([1.0, 1.0])
FIG1_SIGMA1 = np.array([[1.0, 0.0], [0.0, 0.2]])
FIG1_SIGMA2 = np.array([[0.2, 0.0], [0.0, 1.0]])


def fig1_pair() -> GaussianPair:
    """The crossed anisotropic pair with diagonal variances (1, 0.2)/(0.2, 1)."""
    return GaussianPair(
        Gaussian2D(FIG1_MU1, FIG1_SIGMA1), Gaussian2D(FIG1_MU2, FIG1_SIGMA2)
    )


def trimodal_witness_pair() -> GaussianPair:
    """Crossed anisotropic pair with variances (1, 0.04)/(0.04, 1).

    At c = 1/2 this mixture has exactly three modes, two near the component
    means and one at the crossing of the two density ridges, an instance of a
    two-component mixture exceeding its component count.
    """
    return GaussianPair(
        Gaussian2D([0.0, 0.0], [[1.0, 0.0], [0.0, 0.04]]),
        Gaussian2D([1.0, 1.0], [[0.04, 0.0], [0.0, 1.0]]),
    )
