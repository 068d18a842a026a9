"""Minimum-error discrimination of |alpha> and |-alpha> by measuring the ancilla atom.

Objective: D(gt) = max_Pi |Tr Pi (P1 rho(alpha) - P2 rho(-alpha))| - |P1 - P2|/2,
with error probability (1 - 2D)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atomic import hermitian_eigvals, reduce_curve
from .evolution import JcParams, evolve_curve
from .fock import coherent_amplitudes
from .gridsearch import GtGrid, maximize


@dataclass(frozen=True)
class Measurement:
    """Rank-1 projector onto (|g> + exp(i theta) r |e>) / sqrt(1 + r^2)."""

    r: float
    theta: float

    def vector(self) -> np.ndarray:
        """Components in the (|e>, |g>) basis."""
        v = np.array([np.exp(1j * self.theta) * self.r, 1.0], dtype=complex)
        return v / np.sqrt(1.0 + self.r ** 2)

    def projector(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


def _pair_elements(params: JcParams, gts):
    """rho elements for +alpha and -alpha along gts."""
    out = []
    for sign in (1, -1):
        init = coherent_amplitudes(sign * params.alpha, params.n_max)
        out.append(reduce_curve(*evolve_curve(params, init, gts)))
    return out


def _bias_elements(params: JcParams, gts):
    """Elements of M = P1 rho(alpha) - P2 rho(-alpha)."""
    (ee1, gg1, eg1), (ee2, gg2, eg2) = _pair_elements(params, gts)
    p1, p2 = params.priors
    return p1 * ee1 - p2 * ee2, p1 * gg1 - p2 * gg2, p1 * eg1 - p2 * eg2


def trace_distance(params: JcParams, gt: float, m: Measurement) -> float:
    ee, gg, eg = (x[0] for x in _bias_elements(params, [gt]))
    bias = np.array([[ee, eg], [np.conj(eg), gg]])
    v = m.vector()
    p1, p2 = params.priors
    return float(abs(np.vdot(v, bias @ v))) - 0.5 * abs(p1 - p2)


def trace_distance_curve(params: JcParams, gts) -> np.ndarray:
    """Objective D maximised over all rank-1 projectors, for each gt."""
    lo, hi = hermitian_eigvals(*_bias_elements(params, gts))
    p1, p2 = params.priors
    return np.maximum(np.abs(lo), np.abs(hi)) - 0.5 * abs(p1 - p2)


def trace_distance_optimal(params: JcParams, gt: float) -> float:
    return float(trace_distance_curve(params, [gt])[0])


def state_trace_distance_curve(params: JcParams, gts) -> np.ndarray:
    """Unweighted trace distance (1/2)||rho(alpha) - rho(-alpha)||_1 along gts.

    This is the quantity plotted against gt for the alpha = 2 comparison; for
    equal priors it is exactly 2D, so its peak equals 1 - 2 P_err.
    """
    (ee1, gg1, eg1), (ee2, gg2, eg2) = _pair_elements(params, gts)
    lo, hi = hermitian_eigvals(ee1 - ee2, gg1 - gg2, eg1 - eg2)
    return 0.5 * (np.abs(lo) + np.abs(hi))


def state_trace_distance(params: JcParams, gt: float) -> float:
    return float(state_trace_distance_curve(params, [gt])[0])


def max_state_trace_distance(params: JcParams, grid: GtGrid | None = None):
    """(peak value, gt) of the unweighted trace distance."""
    grid = grid or GtGrid()
    return maximize(lambda ts: state_trace_distance_curve(params, ts),
                    lambda t: state_trace_distance(params, t), grid)


def success_probability(d: float) -> float:
    return 0.5 * (1.0 + 2.0 * d)


def min_error_probability(params: JcParams, gt_grid: GtGrid | None = None):
    """(P_err_min, gt_star): minimum over gt of (1 - 2D)/2."""
    grid = gt_grid or GtGrid()
    d_max, gt_star = maximize(lambda ts: trace_distance_curve(params, ts),
                              lambda t: trace_distance_optimal(params, t), grid)
    return 0.5 * (1.0 - 2.0 * d_max), gt_star


def helstrom_bound(priors, s: float) -> float:
    """(1 - sqrt(1 - 4 P1 P2 s^2)) / 2 for overlap modulus s."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("overlap modulus must lie in [0, 1]")
    p1, p2 = priors
    return 0.5 * (1.0 - np.sqrt(max(0.0, 1.0 - 4.0 * p1 * p2 * s * s)))


def coherent_overlap(alpha_sq: float) -> float:
    """|<alpha|-alpha>| = exp(-2 |alpha|^2)."""
    return float(np.exp(-2.0 * alpha_sq))


def measurement_landscape(params: JcParams, gt: float, rs, thetas) -> np.ndarray:
    """D over a (r, theta) grid for fixed gt; shape (len(rs), len(thetas))."""
    ee, gg, eg = (x[0] for x in _bias_elements(params, [gt]))
    rs = np.asarray(rs, dtype=float)[:, None]
    th = np.asarray(thetas, dtype=float)[None, :]
    # <phi|M|phi> with phi = (exp(i th) r, 1)/sqrt(1 + r^2) in the (e, g) basis
    val = (rs ** 2 * ee + gg + 2 * rs * np.real(np.exp(-1j * th) * eg)) / (1 + rs ** 2)
    p1, p2 = params.priors
    return np.abs(val) - 0.5 * abs(p1 - p2)
