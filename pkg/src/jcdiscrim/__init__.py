"""Discrimination of |alpha> and |-alpha> via atom-field coupling, with and without the RWA."""

from .ambiguous import (Measurement, helstrom_bound, min_error_probability, state_trace_distance,
                        trace_distance, trace_distance_optimal)
from .atomic import AtomState, purity, reduce
from .bounds import (DiscriminationInstance, sequential_failure_abstract, theorem1_gap,
                     unambiguous_bound_qutrit, unambiguous_bound_two_level)
from .evolution import JcParams, JointState, evolve, k1, k2
from .fock import FockVector, choose_truncation, coherent_amplitudes
from .gridsearch import GtGrid
from .kennedy import (KennedyOutcome, first_measurement, kennedy_ideal_bound, second_measurement,
                      sequential_failure)

__version__ = "0.1.0"

__all__ = [
    "AtomState", "DiscriminationInstance", "FockVector", "GtGrid", "JcParams", "JointState",
    "KennedyOutcome", "Measurement", "choose_truncation", "coherent_amplitudes", "evolve",
    "first_measurement", "helstrom_bound", "k1", "k2", "kennedy_ideal_bound",
    "min_error_probability", "purity", "reduce", "second_measurement", "sequential_failure",
    "sequential_failure_abstract", "state_trace_distance", "theorem1_gap", "trace_distance",
    "trace_distance_optimal", "unambiguous_bound_qutrit", "unambiguous_bound_two_level",
]
