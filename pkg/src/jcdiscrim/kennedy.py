"""Kennedy-receiver unambiguous discrimination with a second, sequential atom.

After the displacement the two hypotheses are |2 alpha> and |0>. Only the
first can excite a ground-state atom (at the order kept here the vacuum
branch is treated as inert), so a click identifies it. When the first atom
is found in |g>, the surviving field B_n(t0) is handed to a fresh atom.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguous import coherent_overlap
from .atomic import reduce_curve
from .evolution import JcParams, evolve_curve
from .fock import FockVector, coherent_amplitudes, vacuum
from .gridsearch import GtGrid, maximize


@dataclass(frozen=True)
class KennedyOutcome:
    p_a: float
    gt0: float
    post_state: FockVector
    p_b: float
    gt1: float
    q_one: float
    q_sm: float


def excitation_curve(params: JcParams, field: FockVector, gts) -> np.ndarray:
    """sum_n |A_n(gt)|^2 for an atom starting in |g>."""
    a, b = evolve_curve(params, field, gts)
    return reduce_curve(a, b)[0]


def _best_excitation(params: JcParams, field: FockVector, grid: GtGrid):
    return maximize(lambda ts: excitation_curve(params, field, ts),
                    lambda t: float(excitation_curve(params, field, [t])[0]), grid)


def first_measurement(params: JcParams, gt_grid: GtGrid | None = None):
    """(p_a, gt0, post_state) for the displaced input |2 alpha>."""
    grid = gt_grid or GtGrid()
    field = coherent_amplitudes(2 * params.alpha, params.n_max)
    p_a, gt0 = _best_excitation(params, field, grid)
    _, b = evolve_curve(params, field, [gt0])
    b = b[0]
    if np.vdot(b, b).real == 0.0:
        post = vacuum(params.n_max)
    else:
        post = FockVector(b).normalized()
    return p_a, gt0, post


def second_measurement(params: JcParams, post_state: FockVector, gt_grid: GtGrid | None = None):
    """(p_b, gt1): a fresh ground-state atom probes the post-measurement field."""
    grid = gt_grid or GtGrid()
    return _best_excitation(params, post_state, grid)


def sequential_failure(params: JcParams, gt_grid: GtGrid | None = None) -> KennedyOutcome:
    grid = gt_grid or GtGrid()
    p_a, gt0, post = first_measurement(params, grid)
    p_b, gt1 = second_measurement(params, post, grid)
    p1 = params.priors[0]
    return KennedyOutcome(
        p_a=p_a, gt0=gt0, post_state=post, p_b=p_b, gt1=gt1,
        q_one=1.0 - p1 * p_a,
        q_sm=1.0 - p1 * (p_a + (1.0 - p_a) * p_b),
    )


def kennedy_ideal_bound(priors, alpha_sq: float) -> float:
    """P1 + P2 exp(-4 |alpha|^2)."""
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    p1, p2 = priors
    s = coherent_overlap(alpha_sq)
    return float(p1 + p2 * s * s)
