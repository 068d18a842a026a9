"""Agreement between the closed-form coefficients and direct integration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import JcParams, evolve
from .fock import coherent_amplitudes
from .oracle import OdeConfig, integrate, max_step, state_distance


@dataclass(frozen=True)
class AgreementPoint:
    alpha_sq: float
    omega_over_g: float
    gt: float
    error: float


def _params(alpha_sq, omega_over_g, rwa, eps_trunc=1e-12):
    return JcParams(np.sqrt(alpha_sq), omega_over_g=omega_over_g, rwa=rwa, eps_trunc=eps_trunc)


def perturbative_error(alpha_sq: float, omega_over_g: float, gt: float, dt: float | None = None) -> float:
    """Distance between the first-order state and the integrated full dynamics."""
    params = _params(alpha_sq, omega_over_g, rwa=False)
    init = coherent_amplitudes(params.alpha, params.n_max)
    exact = integrate(params, init, gt, OdeConfig.for_params(params, dt))
    return state_distance(evolve(params, init, gt), exact)


def rwa_error(alpha_sq: float, gt: float, omega_over_g: float = 20.0) -> float:
    """Integrator with counter-rotating terms dropped vs the analytic RWA solution."""
    params = _params(alpha_sq, omega_over_g, rwa=True)
    init = coherent_amplitudes(params.alpha, params.n_max)
    exact = integrate(params, init, gt, OdeConfig.for_params(params))
    return state_distance(evolve(params, init, gt), exact)


def agreement_grid(alpha_sq: float, omegas, gts) -> list[AgreementPoint]:
    return [AgreementPoint(alpha_sq, w, t, perturbative_error(alpha_sq, w, t))
            for w in omegas for t in gts]


def fit_prefactor(points, power: int) -> float:
    """Smallest c with error <= c (g/omega)^power on the given points."""
    return max(p.error * p.omega_over_g ** power for p in points)


def loglog_slope(points) -> float:
    """Least-squares slope of log(error) against log(omega/g); exact zeros are skipped."""
    pts = [p for p in points if p.error > 0]
    if len({p.omega_over_g for p in pts}) < 2:
        return float("nan")
    x = np.log([p.omega_over_g for p in pts])
    y = np.log([p.error for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def convergence_ratio(alpha_sq: float, omega_over_g: float, gt: float, dt: float | None = None) -> float:
    """err(dt) / err(dt/2), errors measured against a dt/8 reference run.

    Fourth-order convergence gives ~16.
    """
    params = _params(alpha_sq, omega_over_g, rwa=False)
    init = coherent_amplitudes(params.alpha, params.n_max)
    dt = dt if dt is not None else max_step(omega_over_g)

    def run(step):
        return integrate(params, init, gt, OdeConfig(step, params.n_max, omega_over_g))

    ref = run(dt / 8)
    return state_distance(run(dt), ref) / state_distance(run(dt / 2), ref)
