"""Coherent states on a truncated photon-number basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .errors import TruncationError

DEFAULT_EPS_TRUNC = 1e-12
HARD_CAP = 512


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes c_n of sum_n c_n |n>, n = 0..n_max."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("FockVector needs a non-empty 1-d amplitude array")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def n_max(self) -> int:
        return self.amps.size - 1

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalized(self) -> "FockVector":
        nrm = np.sqrt(self.norm_sq())
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / nrm)

    def overlap(self, other: "FockVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))


def vacuum(n_max: int) -> FockVector:
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[0] = 1.0
    return FockVector(amps)


def coherent_amplitudes(alpha: complex, n_max: int) -> FockVector:
    """Amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n = 0..n_max.

    Built by the recurrence c_n = c_{n-1} * alpha / sqrt(n), so no factorial
    is ever formed.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    alpha = complex(alpha)
    ratios = np.empty(n_max + 1, dtype=complex)
    ratios[0] = np.exp(-abs(alpha) ** 2 / 2)
    ratios[1:] = alpha / np.sqrt(np.arange(1, n_max + 1))
    return FockVector(np.cumprod(ratios))


def choose_truncation(alpha_sq_max: float, eps_trunc: float = DEFAULT_EPS_TRUNC,
                      cap: int = HARD_CAP) -> int:
    """Smallest N whose Poisson tail beyond N, at mean 4*alpha_sq_max, is below eps_trunc.

    The factor 4 covers the displaced field |2 alpha> of the Kennedy receiver,
    so one basis serves every vector in a run.
    """
    if not alpha_sq_max > 0:
        raise ValueError("alpha_sq_max must be > 0")
    if not 0 < eps_trunc < 1:
        raise ValueError("eps_trunc must lie in (0, 1)")
    lam = 4.0 * alpha_sq_max
    ns = np.arange(cap + 1)
    tails = poisson.sf(ns, lam)
    ok = np.flatnonzero(tails < eps_trunc)
    if ok.size == 0:
        raise TruncationError(
            f"truncation for mean photon number {lam:g} exceeds the cap N={cap}")
    return int(ok[0])


def truncation_for(alpha_sq_max: float, eps_trunc: float = DEFAULT_EPS_TRUNC) -> int:
    """Like choose_truncation, but tolerant of a vacuum-only run (alpha = 0)."""
    if alpha_sq_max <= 0:
        return 2
    return choose_truncation(alpha_sq_max, eps_trunc)
