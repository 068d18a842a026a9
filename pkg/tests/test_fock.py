import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcdiscrim.errors import TruncationError
from jcdiscrim.fock import (FockVector, choose_truncation, coherent_amplitudes, truncation_for,
                            vacuum)

# Smallest N with Poisson tail < 1e-12, from a 50-digit direct summation of the pmf.
TAIL_N_LAMBDA_4 = 25
TAIL_N_LAMBDA_20 = 59
EXP_MINUS_8 = 3.3546262790251184e-4


def _direct_tail_n(lam, eps):
    """Independent oracle: sum the Poisson pmf beyond each cut directly, in log space."""
    for n_cut in range(0, 400):
        tail = math.fsum(math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))
                         for k in range(n_cut + 1, n_cut + 300))
        if tail < eps:
            return n_cut
    raise AssertionError("oracle did not converge")


def test_vacuum_amplitudes():
    np.testing.assert_array_equal(coherent_amplitudes(0, 4).amps, [1, 0, 0, 0, 0])
    np.testing.assert_array_equal(vacuum(3).amps, [1, 0, 0, 0])


def test_coherent_state_normalized():
    assert abs(coherent_amplitudes(1.0, 40).norm_sq() - 1.0) < 1e-12


def test_overlap_of_opposite_amplitudes():
    a = coherent_amplitudes(2.0, 60).amps
    b = coherent_amplitudes(-2.0, 60).amps
    assert abs(np.sum(a * b) - EXP_MINUS_8) < 1e-15


def test_amplitudes_match_log_factorial_form():
    alpha = 1.7 - 0.6j
    amps = coherent_amplitudes(alpha, 100).amps
    n = np.arange(101)
    from scipy.special import gammaln
    log_mag = -abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    direct = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    mask = np.abs(direct) > 1e-300
    rel = np.abs(amps[mask] - direct[mask]) / np.abs(direct[mask])
    assert rel.max() < 1e-12


def test_truncation_small_lambda():
    assert choose_truncation(0.25, 0.5) <= 6


@pytest.mark.parametrize("alpha_sq, expected", [(1.0, TAIL_N_LAMBDA_4), (5.0, TAIL_N_LAMBDA_20)])
def test_truncation_against_tail_oracle(alpha_sq, expected):
    assert choose_truncation(alpha_sq, 1e-12) == expected
    assert _direct_tail_n(4 * alpha_sq, 1e-12) == expected


def test_truncation_cap_and_domain():
    with pytest.raises(TruncationError):
        choose_truncation(200.0, 1e-12)
    with pytest.raises(ValueError):
        choose_truncation(0.0)
    with pytest.raises(ValueError):
        choose_truncation(1.0, 1.5)
    assert truncation_for(0.0) == 2


def test_fock_vector_is_immutable():
    v = coherent_amplitudes(0.5, 5)
    with pytest.raises(ValueError):
        v.amps[0] = 0
    with pytest.raises(ValueError):
        FockVector(np.zeros(3)).normalized()


@settings(max_examples=60, deadline=None)
@given(re=st.floats(-2.2, 2.2), im=st.floats(-2.2, 2.2))
def test_overlap_identity(re, im):
    alpha = complex(re, im)
    a2 = abs(alpha) ** 2
    n_max = truncation_for(a2, 1e-12)
    plus = coherent_amplitudes(alpha, n_max)
    minus = coherent_amplitudes(-alpha, n_max)
    assert abs(minus.overlap(plus) - math.exp(-2 * a2)) < 1e-10
    assert 1 - 1e-12 < plus.norm_sq() <= 1 + 1e-14
