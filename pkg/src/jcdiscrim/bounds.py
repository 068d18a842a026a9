"""Closed-form failure bounds for unambiguous discrimination of two pure states.

``s`` is the input overlap |<psi1|psi2>|. ``t_overlap`` is the overlap of the
states left behind in the inconclusive branch; the unitarity of the
ancilla coupling forces q1b * q2b >= s^2 / t_overlap^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguous import helstrom_bound
from .errors import ConfigError

_SLACK = 1e-12


def _check_s(s: float) -> None:
    if not 0.0 < s < 1.0:
        raise ValueError(f"overlap s must lie in (0, 1), got {s}")


def unambiguous_bound_qutrit(priors, s: float) -> float:
    """Optimal single-shot failure with a three-level ancilla."""
    _check_s(s)
    p1, p2 = priors
    if p2 == 0.0 or s < np.sqrt(p1 / p2):
        return float(2.0 * np.sqrt(p1 * p2) * s)
    return float(p1 + p2 * s * s)


def unambiguous_bound_two_level(priors, s: float) -> float:
    """Two-level ancilla: one hypothesis is never identified, P1 + P2 s^2."""
    _check_s(s)
    p1, p2 = priors
    return float(p1 + p2 * s * s)


def theorem1_gap(priors, s: float) -> float:
    """Unambiguous (qutrit) bound minus the Helstrom bound; never negative.

    Raises AssertionError if the ordering two-level >= qutrit >= Helstrom fails.
    """
    q2 = unambiguous_bound_two_level(priors, s)
    q1 = unambiguous_bound_qutrit(priors, s)
    pe = helstrom_bound(priors, s)
    if not (q2 >= q1 - _SLACK and q1 >= pe - _SLACK):
        raise AssertionError(f"bound ordering violated: Q2={q2}, Q1={q1}, Perr={pe}")
    return q1 - pe


@dataclass(frozen=True)
class DiscriminationInstance:
    priors: tuple[float, float]
    s: float
    t_overlap: float
    q1b: float
    q2b: float
    q1c: float
    q2c: float

    def __post_init__(self):
        p1, p2 = self.priors
        if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > 1e-12:
            raise ConfigError("priors must be non-negative and sum to 1")
        _check_s(self.s)
        if not 0.0 < self.t_overlap <= 1.0:
            raise ConfigError("t_overlap must lie in (0, 1]")
        for name in ("q1b", "q2b", "q1c", "q2c"):
            q = getattr(self, name)
            if not 0.0 <= q <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {q}")
        floor = (self.s / self.t_overlap) ** 2
        if self.q1b * self.q2b < floor * (1 - 1e-9):
            raise ConfigError(
                f"q1b*q2b = {self.q1b * self.q2b:.6g} below unitarity floor s^2/t^2 = {floor:.6g}")

    @property
    def single_shot_failure(self) -> float:
        p1, p2 = self.priors
        return p1 * self.q1b + p2 * self.q2b


def stage_success(instance: DiscriminationInstance):
    """(P_A, P_B): success of the first stage and, given its failure, of the second."""
    p1, p2 = instance.priors
    q_first = instance.single_shot_failure
    p_a = 1.0 - q_first
    if q_first == 0.0:
        return p_a, 0.0
    c1 = p1 * instance.q1b / q_first
    c2 = p2 * instance.q2b / q_first
    p_b = c1 * (1.0 - instance.q1c) + c2 * (1.0 - instance.q2c)
    return p_a, p_b


def sequential_failure_abstract(instance: DiscriminationInstance) -> float:
    """Failure of two sequential stages, P1 q1b q1c + P2 q2b q2c.

    Cross-checked against 1 - [P_A + (1 - P_A) P_B] built from the stage
    success probabilities, which already carry the priors.
    """
    p1, p2 = instance.priors
    q = p1 * instance.q1b * instance.q1c + p2 * instance.q2b * instance.q2c
    p_a, p_b = stage_success(instance)
    alt = 1.0 - (p_a + (1.0 - p_a) * p_b)
    if abs(q - alt) > 1e-12:
        raise AssertionError(f"sequential failure mismatch: {q} vs {alt}")
    return float(q)


def optimal_second_stage(priors, q1b: float, q2b: float, t_overlap: float):
    """(q1c, q2c) minimising the sequential failure subject to q1c * q2c = t^2."""
    p1, p2 = priors
    a, b = p1 * q1b, p2 * q2b
    t2 = t_overlap ** 2
    if a == 0.0:
        x = 1.0
    elif b == 0.0:
        x = t2
    else:
        x = float(np.clip(t_overlap * np.sqrt(b / a), t2, 1.0))
    return x, t2 / x
