"""Pair configuration files: strict JSON parsing with field-path errors.

The schema is one JSON object per pair:

    {
      "components": [
        {"mu": [0, 0], "sigma": [[1, 0], [0, 0.2]]},
        {"mu": [1, 1], "sigma": [[0.2, 0], [0, 1]]}
      ],
      "c": 0.5
    }

Exactly two components, each with a length-2 mean and a symmetric positive
definite 2x2 covariance; "c" is optional and defaults to 0.5. Unknown keys
are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .gaussian import Gaussian2D, GaussianPair, Mixture
from .linalg2 import is_spd

__all__ = ["PairConfig", "parse_config", "load_config", "serialize_config", "config_to_mixture"]

_SIGMA_SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PairConfig:
    mu1: np.ndarray
    sigma1: np.ndarray
    mu2: np.ndarray
    sigma2: np.ndarray
    c: float = 0.5

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairConfig):
            return NotImplemented
        return (
            np.array_equal(self.mu1, other.mu1)
            and np.array_equal(self.sigma1, other.sigma1)
            and np.array_equal(self.mu2, other.mu2)
            and np.array_equal(self.sigma2, other.sigma2)
            and self.c == other.c
        )


def _require_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}: expected a number, got {value!r}")
    x = float(value)
    if not np.isfinite(x):
        raise ValidationError(f"{path}: value must be finite")
    return x


def _require_vec2(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(f"{path}: expected a list of two numbers")
    return np.array([_require_number(v, f"{path}[{i}]") for i, v in enumerate(value)])


def _require_sigma(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(f"{path}: expected a 2x2 nested list")
    rows = [_require_vec2(row, f"{path}[{i}]") for i, row in enumerate(value)]
    sigma = np.stack(rows)
    scale = max(float(np.max(np.abs(sigma))), 1.0)
    if abs(sigma[0, 1] - sigma[1, 0]) > _SIGMA_SYMMETRY_RTOL * scale:
        raise ValidationError(f"{path}: matrix is not symmetric")
    sigma = 0.5 * (sigma + sigma.T)
    if not is_spd(sigma):
        raise ValidationError(f"{path}: matrix is not positive definite")
    return sigma


def _require_component(value, path: str) -> tuple[np.ndarray, np.ndarray]:
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object with mu and sigma")
    unknown = set(value) - {"mu", "sigma"}
    if unknown:
        raise ValidationError(f"{path}: unknown keys {sorted(unknown)}")
    if "mu" not in value or "sigma" not in value:
        raise ValidationError(f"{path}: both mu and sigma are required")
    return _require_vec2(value["mu"], f"{path}.mu"), _require_sigma(
        value["sigma"], f"{path}.sigma"
    )


def parse_config(text: str) -> PairConfig:
    """Parse and validate configuration text.

    Raises ParseError for malformed JSON and ValidationError, with the
    offending field path in the message, for contract violations.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"configuration is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("top level: expected a JSON object")
    unknown = set(data) - {"components", "c"}
    if unknown:
        raise ValidationError(f"top level: unknown keys {sorted(unknown)}")
    components = data.get("components")
    if not isinstance(components, list) or len(components) != 2:
        raise ValidationError("components: expected a list of exactly 2 components")
    mu1, sigma1 = _require_component(components[0], "components[0]")
    mu2, sigma2 = _require_component(components[1], "components[1]")
    if np.array_equal(mu1, mu2):
        raise ValidationError("components: the two mean vectors must differ")
    c = 0.5
    if "c" in data:
        c = _require_number(data["c"], "c")
        if not 0.0 <= c <= 1.0:
            raise ValidationError("c: mixing proportion must lie in [0, 1]")
    return PairConfig(mu1=mu1, sigma1=sigma1, mu2=mu2, sigma2=sigma2, c=c)


def load_config(path) -> PairConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())


def serialize_config(cfg: PairConfig) -> str:
    """Canonical JSON for a PairConfig; parse_config(serialize_config(c)) == c."""
    data = {
        "components": [
            {"mu": list(cfg.mu1), "sigma": [list(row) for row in cfg.sigma1]},
            {"mu": list(cfg.mu2), "sigma": [list(row) for row in cfg.sigma2]},
        ],
        "c": cfg.c,
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def config_to_mixture(cfg: PairConfig) -> Mixture:
    pair = GaussianPair(Gaussian2D(cfg.mu1, cfg.sigma1), Gaussian2D(cfg.mu2, cfg.sigma2))
    return Mixture(pair, cfg.c)
