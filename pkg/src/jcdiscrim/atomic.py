"""Reduced state of the two-level ancilla, basis order (|e>, |g>)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import JointState


@dataclass(frozen=True)
class AtomState:
    rho: np.ndarray

    def __post_init__(self):
        r = np.array(self.rho, dtype=complex)
        if r.shape != (2, 2):
            raise ValueError("atomic density matrix must be 2x2")
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @property
    def excited_population(self) -> float:
        return float(self.rho[0, 0].real)


def reduce(joint: JointState) -> AtomState:
    """Partial trace over the field."""
    a, b = joint.a_amps, joint.b_amps
    ee = np.vdot(a, a).real
    gg = np.vdot(b, b).real
    eg = np.sum(a * b.conj())
    return AtomState(np.array([[ee, eg], [np.conj(eg), gg]]))


def reduce_curve(a: np.ndarray, b: np.ndarray):
    """Vectorised partial trace for stacked (time, n) coefficient arrays.

    Returns the three independent elements (rho_ee, rho_gg, rho_eg) as arrays.
    """
    ee = np.sum(np.abs(a) ** 2, axis=-1)
    gg = np.sum(np.abs(b) ** 2, axis=-1)
    eg = np.sum(a * b.conj(), axis=-1)
    return ee, gg, eg


def hermitian_eigvals(ee, gg, eg):
    """Eigenvalues (low, high) of [[ee, eg], [conj(eg), gg]] with ee, gg real."""
    half_tr = (np.asarray(ee) + np.asarray(gg)) / 2
    radius = np.sqrt(((np.asarray(ee) - np.asarray(gg)) / 2) ** 2 + np.abs(eg) ** 2)
    return half_tr - radius, half_tr + radius


def eigvals(state: AtomState):
    r = state.rho
    return hermitian_eigvals(r[0, 0].real, r[1, 1].real, r[0, 1])


def purity(state: AtomState) -> float:
    """Tr(rho^2)."""
    r = state.rho
    return float(r[0, 0].real ** 2 + r[1, 1].real ** 2 + 2 * abs(r[0, 1]) ** 2)


def purity_curve(ee, gg, eg):
    return ee ** 2 + gg ** 2 + 2 * np.abs(eg) ** 2
