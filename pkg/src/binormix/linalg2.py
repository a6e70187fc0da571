"""Exact-size 2x2 symmetric / SPD linear-algebra kernels.

Vectors are numpy arrays of shape (2,); symmetric matrices are arrays of
shape (2, 2). Everything uses closed forms (adjugate inverse, trace and
determinant eigenvalues): at this size they are branch-light, fast, and
easy to validate against reconstruction identities.

Positive definiteness is tested with strict inequalities and no tolerance;
callers that want a fuzzier boundary must apply their own slack before
constructing values that require SPD inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite, SingularAffine

__all__ = [
    "vec2",
    "sym2",
    "cross2",
    "is_spd",
    "require_spd",
    "spd_inverse",
    "spd_inv_sqrt",
    "sym_eigen",
    "rotation",
    "Affine2",
    "identity_affine",
    "affine_apply",
    "affine_compose",
    "affine_inverse",
]

# Relative spread below which a spectrum counts as degenerate and the
# eigenvector rotation defaults to the identity (any basis would do; a
# deterministic choice keeps downstream outputs reproducible).
_DEGENERATE_SPECTRUM_RTOL = 1e-12

_SYMMETRY_RTOL = 1e-12


def vec2(x: float, y: float) -> np.ndarray:
    """Length-2 float vector."""
    return np.array([x, y], dtype=float)


def sym2(a11: float, a12: float, a22: float) -> np.ndarray:
    """Symmetric 2x2 matrix from its three independent entries."""
    return np.array([[a11, a12], [a12, a22]], dtype=float)


def cross2(u: np.ndarray, v: np.ndarray) -> float | np.ndarray:
    """Scalar cross product u_x v_y - u_y v_x (vectorized over leading axes)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _as_sym(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2) or not np.all(np.isfinite(m)):
        raise NotPositiveDefinite(f"{what} must be a finite 2x2 array")
    scale = np.max(np.abs(m))
    if abs(m[0, 1] - m[1, 0]) > _SYMMETRY_RTOL * max(scale, 1.0):
        raise NotPositiveDefinite(f"{what} is not symmetric")
    off = 0.5 * (m[0, 1] + m[1, 0])
    return np.array([[m[0, 0], off], [off, m[1, 1]]])


def is_spd(m: np.ndarray) -> bool:
    """Strict SPD test: a11 > 0 and det > 0 for a symmetric 2x2 matrix."""
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2) or not np.all(np.isfinite(m)):
        return False
    if abs(m[0, 1] - m[1, 0]) > _SYMMETRY_RTOL * max(np.max(np.abs(m)), 1.0):
        return False
    return m[0, 0] > 0.0 and m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] > 0.0


def require_spd(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Return a symmetrized copy of m, raising NotPositiveDefinite otherwise."""
    s = _as_sym(m, what)
    if not (s[0, 0] > 0.0 and s[0, 0] * s[1, 1] - s[0, 1] ** 2 > 0.0):
        raise NotPositiveDefinite(f"{what} is not positive definite")
    return s


def spd_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of an SPD 2x2 matrix via the adjugate over the determinant."""
    s = require_spd(m)
    det = s[0, 0] * s[1, 1] - s[0, 1] ** 2
    return np.array([[s[1, 1], -s[0, 1]], [-s[0, 1], s[0, 0]]]) / det


def sym_eigen(m: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Eigendecomposition of a symmetric 2x2 matrix.

    Returns (lambda1, lambda2, rot) with lambda1 >= lambda2 and rot a proper
    rotation such that rot @ diag(lambda1, lambda2) @ rot.T reconstructs m.
    The rotation angle is the smallest one compatible with the eigenvalue
    ordering; a degenerate spectrum yields the identity.
    """
    s = _as_sym(m)
    half_trace = 0.5 * (s[0, 0] + s[1, 1])
    radius = np.hypot(0.5 * (s[0, 0] - s[1, 1]), s[0, 1])
    lam1 = half_trace + radius
    lam2 = half_trace - radius
    if radius <= _DEGENERATE_SPECTRUM_RTOL * max(abs(lam1), abs(lam2), 1e-300):
        return lam1, lam2, np.eye(2)
    if s[0, 1] == 0.0:
        # exact quarter turn keeps diagonal input exactly diagonal
        if s[0, 0] >= s[1, 1]:
            return s[0, 0], s[1, 1], np.eye(2)
        return s[1, 1], s[0, 0], np.array([[0.0, -1.0], [1.0, 0.0]])
    theta = 0.5 * np.arctan2(2.0 * s[0, 1], s[0, 0] - s[1, 1])
    return lam1, lam2, rotation(theta)


def spd_inv_sqrt(m: np.ndarray) -> np.ndarray:
    """Symmetric s with s @ m @ s = identity, built from the eigen form."""
    lam1, lam2, rot = sym_eigen(m)
    if not (lam2 > 0.0):
        raise NotPositiveDefinite("matrix is not positive definite")
    inv_sqrt = np.diag([1.0 / np.sqrt(lam1), 1.0 / np.sqrt(lam2)])
    return rot @ inv_sqrt @ rot.T


def rotation(theta: float) -> np.ndarray:
    """Counterclockwise rotation matrix for angle theta."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class Affine2:
    """Invertible affine map x -> linear @ x + shift of the plane."""

    linear: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        linear = np.array(self.linear, dtype=float)
        shift = np.array(self.shift, dtype=float)
        if linear.shape != (2, 2) or not np.all(np.isfinite(linear)):
            raise SingularAffine("linear part must be a finite 2x2 array")
        if shift.shape != (2,) or not np.all(np.isfinite(shift)):
            raise SingularAffine("shift must be a finite length-2 vector")
        det = linear[0, 0] * linear[1, 1] - linear[0, 1] * linear[1, 0]
        if det == 0.0:
            raise SingularAffine("linear part is singular")
        linear.flags.writeable = False
        shift.flags.writeable = False
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "shift", shift)

    @property
    def det(self) -> float:
        a = self.linear
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def identity_affine() -> Affine2:
    return Affine2(np.eye(2), np.zeros(2))


def affine_apply(t: Affine2, v: np.ndarray) -> np.ndarray:
    """Apply t to a point (or an (..., 2) array of points)."""
    v = np.asarray(v, dtype=float)
    return v @ t.linear.T + t.shift


def affine_compose(a: Affine2, b: Affine2) -> Affine2:
    """Composition a after b: (a o b)(x) = a(b(x))."""
    return Affine2(a.linear @ b.linear, a.linear @ b.shift + a.shift)


def affine_inverse(t: Affine2) -> Affine2:
    a = t.linear
    inv = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / t.det
    return Affine2(inv, -inv @ t.shift)
