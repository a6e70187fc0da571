"""Bivariate normal densities, two-component mixtures, and derivatives.

The density of a component with mean mu and SPD covariance sigma is

    f(x) = (2 pi)^-1 |sigma|^-1/2 exp(-1/2 (x - mu)^T sigma^-1 (x - mu)),

and a mixture blends two components as c f1 + (1 - c) f2. Densities are
evaluated in log space and exponentiated at the boundary of each operation
so far-tail evaluations survive as long as the exponent itself is
representable.

The Jacobian determinant of the product map x -> (f1(x), f2(x)) factors as

    det J(x) = f1(x) f2(x) cross(grad log f1, grad log f2),

so the vanishing locus is decided by the cross term alone; that term is
exposed separately because it is free of density underflow.

All evaluators are vectorized: a point argument may be one vector of shape
(2,) or a stack of points of shape (..., 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EqualMeans
from .linalg2 import cross2, require_spd, spd_inverse

__all__ = [
    "Gaussian2D",
    "GaussianPair",
    "Mixture",
    "density",
    "log_density",
    "log_density_grad",
    "mixture_value",
    "mixture_grad",
    "mixture_hessian",
    "log_gradient_cross",
    "jacobian_det_F",
]

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class Gaussian2D:
    """One bivariate normal component with cached precision and log constant."""

    mu: np.ndarray
    sigma: np.ndarray
    sigma_inv: np.ndarray = field(init=False, repr=False)
    log_norm_const: float = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        if mu.shape != (2,) or not np.all(np.isfinite(mu)):
            raise ValueError("mean must be a finite length-2 vector")
        sigma = require_spd(self.sigma, "covariance")
        sigma_inv = spd_inverse(sigma)
        det = sigma[0, 0] * sigma[1, 1] - sigma[0, 1] ** 2
        for arr in (mu, sigma, sigma_inv):
            arr.flags.writeable = False
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "sigma_inv", sigma_inv)
        object.__setattr__(self, "log_norm_const", -_LOG_2PI - 0.5 * np.log(det))

    @property
    def peak_value(self) -> float:
        """Density at the mean, (2 pi)^-1 |sigma|^-1/2."""
        return float(np.exp(self.log_norm_const))


@dataclass(frozen=True, eq=False)
class GaussianPair:
    """Ordered pair (f1, f2); the means must differ."""

    f1: Gaussian2D
    f2: Gaussian2D

    def __post_init__(self):
        if np.array_equal(self.f1.mu, self.f2.mu):
            raise EqualMeans("component means must differ")

    def swapped(self) -> "GaussianPair":
        return GaussianPair(self.f2, self.f1)


@dataclass(frozen=True, eq=False)
class Mixture:
    """Convex combination c * f1 + (1 - c) * f2."""

    pair: GaussianPair
    c: float = 0.5

    def __post_init__(self):
        c = float(self.c)
        if not (np.isfinite(c) and 0.0 <= c <= 1.0):
            raise ValueError("mixing proportion must lie in [0, 1]")
        object.__setattr__(self, "c", c)


def log_density(g: Gaussian2D, pt: np.ndarray) -> np.ndarray:
    d = np.asarray(pt, dtype=float) - g.mu
    quad = np.einsum("...i,ij,...j->...", d, g.sigma_inv, d)
    return g.log_norm_const - 0.5 * quad


def density(g: Gaussian2D, pt: np.ndarray) -> np.ndarray:
    return np.exp(log_density(g, pt))


def log_density_grad(g: Gaussian2D, pt: np.ndarray) -> np.ndarray:
    """Gradient of log f, which is -sigma^-1 (pt - mu)."""
    d = np.asarray(pt, dtype=float) - g.mu
    return -d @ g.sigma_inv


def mixture_value(m: Mixture, pt: np.ndarray) -> np.ndarray:
    return m.c * density(m.pair.f1, pt) + (1.0 - m.c) * density(m.pair.f2, pt)


def mixture_grad(m: Mixture, pt: np.ndarray) -> np.ndarray:
    f1 = density(m.pair.f1, pt)
    f2 = density(m.pair.f2, pt)
    g1 = log_density_grad(m.pair.f1, pt)
    g2 = log_density_grad(m.pair.f2, pt)
    return (m.c * f1)[..., None] * g1 + ((1.0 - m.c) * f2)[..., None] * g2


def mixture_hessian(m: Mixture, pt: np.ndarray) -> np.ndarray:
    """Analytic Hessian of the mixture density at pt, shape (..., 2, 2).

    Each component contributes f * (grad log f grad log f^T - sigma^-1).
    """
    out = 0.0
    for w, g in ((m.c, m.pair.f1), (1.0 - m.c, m.pair.f2)):
        f = density(g, pt)
        s = log_density_grad(g, pt)
        outer = s[..., :, None] * s[..., None, :]
        out = out + (w * f)[..., None, None] * (outer - g.sigma_inv)
    return out


def log_gradient_cross(p: GaussianPair, pt: np.ndarray) -> np.ndarray:
    """cross(grad log f1, grad log f2): the underflow-free singularity test."""
    return cross2(log_density_grad(p.f1, pt), log_density_grad(p.f2, pt))


def jacobian_det_F(p: GaussianPair, pt: np.ndarray) -> np.ndarray:
    """Determinant of the Jacobian of x -> (f1(x), f2(x)) at pt."""
    return density(p.f1, pt) * density(p.f2, pt) * log_gradient_cross(p, pt)
