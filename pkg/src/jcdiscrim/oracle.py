"""Brute-force check of the perturbative coefficients.

Integrates the interaction-picture amplitude equations (units of g)

    i dA_n/dt = B_{n+1} sqrt(n+1) + B_{n-1} sqrt(n) exp(+2i w t)
    i dB_n/dt = A_{n-1} sqrt(n)   + A_{n+1} sqrt(n+1) exp(-2i w t)

with a fixed-step classical Runge-Kutta scheme on the truncated basis. With
``params.rwa`` set the exp(+-2i w t) terms are dropped. Nothing here shares
code with the closed-form coefficients in ``evolution``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NormalizationError, OracleError
from .evolution import JcParams, JointState
from .fock import FockVector

log = logging.getLogger(__name__)

DT_CEILING = 1e-3
RENORM_DRIFT = 1e-8
ABORT_DRIFT = 1e-6


@dataclass(frozen=True)
class OdeConfig:
    dt: float
    n_max: int
    omega_over_g: float
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ConfigError(f"unsupported method {self.method!r}")
        limit = max_step(self.omega_over_g)
        if not 0 < self.dt <= limit:
            raise ConfigError(f"dt={self.dt:g} must lie in (0, {limit:g}] for omega/g={self.omega_over_g:g}")

    @classmethod
    def for_params(cls, params: JcParams, dt: float | None = None) -> "OdeConfig":
        return cls(dt if dt is not None else max_step(params.omega_over_g),
                   params.n_max, params.omega_over_g)


def max_step(omega_over_g: float) -> float:
    """Largest step resolving the fast phases with ~60 steps per period."""
    return min(DT_CEILING, 0.1 / (2.0 * omega_over_g))


def _make_rhs(n_max: int, omega_over_g: float, counter_rotating: bool):
    n = np.arange(n_max + 1)
    up = np.sqrt(n + 1.0)   # couples index n to n+1
    down = np.sqrt(n)       # couples index n to n-1
    two_w = 2.0 * omega_over_g

    def rhs(t, a, b):
        da = np.zeros_like(a)
        db = np.zeros_like(b)
        da[:-1] = b[1:] * up[:-1]
        db[1:] = a[:-1] * down[1:]
        if counter_rotating:
            ph = np.exp(1j * two_w * t)
            da[1:] += b[:-1] * down[1:] * ph
            db[:-1] += a[1:] * up[:-1] * np.conj(ph)
        return -1j * da, -1j * db

    return rhs


def integrate(params: JcParams, initial: FockVector, gt_end: float, cfg: OdeConfig) -> JointState:
    """State at ``gt_end`` for the atom starting in |g> and the field in ``initial``."""
    if cfg.n_max != initial.n_max:
        raise ConfigError("OdeConfig.n_max does not match the initial vector")
    if cfg.omega_over_g != params.omega_over_g:
        raise ConfigError("OdeConfig.omega_over_g does not match params")
    if gt_end < 0:
        raise ValueError("gt_end must be >= 0")
    if abs(initial.norm_sq() - 1.0) > 1e-9 + 2 * params.eps_trunc:
        raise NormalizationError("initial field state is not normalized")

    rhs = _make_rhs(cfg.n_max, cfg.omega_over_g, counter_rotating=not params.rwa)
    a = np.zeros(cfg.n_max + 1, dtype=complex)
    b = np.array(initial.amps, dtype=complex)
    norm0 = float(np.vdot(b, b).real)

    steps = max(1, math.ceil(gt_end / cfg.dt - 1e-9)) if gt_end > 0 else 0
    h = gt_end / steps if steps else 0.0
    for k in range(steps):
        t = k * h
        ka1, kb1 = rhs(t, a, b)
        ka2, kb2 = rhs(t + h / 2, a + h / 2 * ka1, b + h / 2 * kb1)
        ka3, kb3 = rhs(t + h / 2, a + h / 2 * ka2, b + h / 2 * kb2)
        ka4, kb4 = rhs(t + h, a + h * ka3, b + h * kb3)
        a = a + h / 6 * (ka1 + 2 * ka2 + 2 * ka3 + ka4)
        b = b + h / 6 * (kb1 + 2 * kb2 + 2 * kb3 + kb4)

        norm = float(np.vdot(a, a).real + np.vdot(b, b).real)
        drift = abs(norm / norm0 - 1.0)
        if drift > ABORT_DRIFT:
            raise OracleError(f"norm drift {drift:.2e} at gt={t + h:.4f}")
        if drift > RENORM_DRIFT:
            log.warning("renormalizing after norm drift %.2e at gt=%.4f", drift, t + h)
            scale = np.sqrt(norm0 / norm)
            a *= scale
            b *= scale

    scale = 1.0 / np.sqrt(norm0)
    return JointState(a * scale, b * scale, float(gt_end))


def state_distance(x: JointState, y: JointState) -> float:
    """Euclidean distance between two joint states (no phase optimisation)."""
    return float(np.sqrt(np.sum(np.abs(x.a_amps - y.a_amps) ** 2 + np.abs(x.b_amps - y.b_amps) ** 2)))
