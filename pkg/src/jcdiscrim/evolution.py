"""Resonant atom-field evolution from |field> x |g>, with optional counter-rotating corrections.

Time is dimensionless (gt) and frequencies are in units of the coupling g.
The zero-order coefficients are the exact rotating-wave solution; the
first-order corrections come from the counter-rotating terms, which carry
phases exp(+-2i omega t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NormalizationError, SmallDenominatorError
from .fock import DEFAULT_EPS_TRUNC, FockVector, truncation_for

DEFAULT_OMEGA_OVER_G = 20.0
K2_FLOOR = 1e-6


@dataclass(frozen=True)
class JcParams:
    """Physical configuration of one discrimination run.

    ``n_max`` left as None is sized from |alpha|^2 (see ``fock.choose_truncation``).
    Sweeps should pass one shared n_max so every vector lives in the same basis.
    """

    alpha: complex
    omega_over_g: float = DEFAULT_OMEGA_OVER_G
    rwa: bool = True
    priors: tuple[float, float] = (0.5, 0.5)
    n_max: int | None = None
    eps_trunc: float = DEFAULT_EPS_TRUNC

    def __post_init__(self):
        p1, p2 = (float(p) for p in self.priors)
        if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > 1e-12:
            raise ConfigError(f"priors must be non-negative and sum to 1, got {self.priors}")
        object.__setattr__(self, "priors", (p1, p2))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not self.omega_over_g > 0:
            raise ConfigError("omega_over_g must be > 0")
        if self.n_max is None:
            object.__setattr__(self, "n_max", truncation_for(self.alpha_sq, self.eps_trunc))
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0")
        if not self.rwa:
            check_denominators(self.n_max, self.omega_over_g)

    @property
    def alpha_sq(self) -> float:
        return abs(self.alpha) ** 2

    def with_alpha(self, alpha: complex) -> "JcParams":
        return JcParams(alpha, self.omega_over_g, self.rwa, self.priors, self.n_max, self.eps_trunc)


@dataclass(frozen=True)
class JointState:
    """A_n multiplies |e,n>, B_n multiplies |g,n>."""

    a_amps: np.ndarray
    b_amps: np.ndarray
    gt: float

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.a_amps) ** 2 + np.abs(self.b_amps) ** 2))


def k1(n, omega_over_g):
    """K1(n)/g = 2 omega/g + sqrt(n)."""
    return 2.0 * omega_over_g + np.sqrt(n)


def k2(n, omega_over_g):
    """K2(n)/g = 2 omega/g - sqrt(n); rejects near-vanishing denominators."""
    val = 2.0 * omega_over_g - np.sqrt(n)
    if np.any(np.abs(val) < K2_FLOOR):
        raise SmallDenominatorError(
            f"K2/g vanishes for n={n} at omega/g={omega_over_g}")
    return val


def check_denominators(n_max: int, omega_over_g: float) -> None:
    # The corrections use K2 up to argument n_max + 2; keep them clear of the pole.
    if not n_max + 2 < (2.0 * omega_over_g) ** 2:
        raise SmallDenominatorError(
            f"n_max={n_max} too large for omega/g={omega_over_g}: "
            f"need n_max + 2 < (2 omega/g)^2 = {(2.0 * omega_over_g) ** 2:g}")


def _shifted(c: np.ndarray, k: int) -> np.ndarray:
    """out[n] = c[n + k], zero outside the basis."""
    out = np.zeros_like(c)
    size = c.size
    if k >= 0:
        if k < size:
            out[: size - k] = c[k:]
    elif -k < size:
        out[-k:] = c[: size + k]
    return out


def _coefficients(c: np.ndarray, gts: np.ndarray, omega_over_g: float, rwa: bool):
    """Zero-order and first-order coefficient arrays, shape (len(gts), n_max+1)."""
    n = np.arange(c.size)
    t = np.asarray(gts, dtype=float)[:, None]
    a0 = -1j * np.sin(np.sqrt(n + 1) * t) * _shifted(c, 1)
    b0 = np.cos(np.sqrt(n) * t) * c
    if rwa:
        return a0, b0, np.zeros_like(a0), np.zeros_like(b0)

    w = omega_over_g
    # A'_n uses K(n-1); its sqrt(n) prefactor kills n = 0, so clamp the index there.
    m = np.maximum(n - 1, 0)
    k1m, k2m = k1(m, w), k2(m, w)
    a1 = (np.sqrt(n) * _shifted(c, -1) / 2) * (
        (1 - np.exp(1j * k1m * t)) / k1m + (1 - np.exp(1j * k2m * t)) / k2m)
    k1p, k2p = k1(n + 2, w), k2(n + 2, w)
    b1 = (np.sqrt(n + 1) * _shifted(c, 2) / 2) * (
        (1 - np.exp(-1j * k2p * t)) / k2p - (1 - np.exp(-1j * k1p * t)) / k1p)
    return a0, b0, a1, b1


def _check_input(params: JcParams, initial: FockVector) -> None:
    tol = 1e-9 + 2 * params.eps_trunc
    if abs(initial.norm_sq() - 1.0) > tol:
        raise NormalizationError(
            f"initial field state has norm^2 {initial.norm_sq():.3e}, expected 1")
    if not params.rwa:
        check_denominators(initial.n_max, params.omega_over_g)


def evolve_curve(params: JcParams, initial: FockVector, gts):
    """Normalized (A, B) arrays for every time in ``gts``; rows follow ``gts``."""
    _check_input(params, initial)
    gts = np.atleast_1d(np.asarray(gts, dtype=float))
    if np.any(gts < 0):
        raise ValueError("gt must be >= 0")
    a0, b0, a1, b1 = _coefficients(initial.amps, gts, params.omega_over_g, params.rwa)
    a = a0 + a1
    b = b0 + b1
    scale = 1.0 / np.sqrt(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2, axis=1))
    return a * scale[:, None], b * scale[:, None]


def evolve(params: JcParams, initial: FockVector, gt: float) -> JointState:
    a, b = evolve_curve(params, initial, [gt])
    return JointState(a[0], b[0], float(gt))


def first_order_corrections(params: JcParams, initial: FockVector, gt: float):
    """Un-normalized counter-rotating corrections (A'_n, B'_n) at one time."""
    _check_input(params, initial)
    _, _, a1, b1 = _coefficients(initial.amps, np.array([gt]), params.omega_over_g, params.rwa)
    return a1[0], b1[0]


def correction_norm(params: JcParams, initial: FockVector, gt: float) -> float:
    a1, b1 = first_order_corrections(params, initial, gt)
    return float(np.sum(np.abs(a1) ** 2 + np.abs(b1) ** 2))
