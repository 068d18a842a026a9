import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcdiscrim.ambiguous import (Measurement, coherent_overlap, helstrom_bound,
                                 max_state_trace_distance, measurement_landscape,
                                 min_error_probability, state_trace_distance,
                                 state_trace_distance_curve, success_probability,
                                 trace_distance, trace_distance_curve, trace_distance_optimal)
from jcdiscrim.evolution import JcParams
from jcdiscrim.gridsearch import GtGrid

# (1 - sqrt(1 - e^-4)) / 2, evaluated with 50-digit arithmetic
HELSTROM_ALPHA_SQ_1 = 0.0046000703695887131


def test_measurement_vector():
    m = Measurement(1.0, math.pi / 2)
    np.testing.assert_allclose(m.vector(), np.array([1j, 1]) / math.sqrt(2), atol=1e-15)
    assert abs(np.trace(Measurement(0.3, 1.0).projector()) - 1) < 1e-15


@pytest.mark.parametrize("rwa", [True, False])
def test_zero_time_gives_zero(rwa):
    p = JcParams(2.0, rwa=rwa)
    for m in (Measurement(1, math.pi / 2), Measurement(0.2, 0.4), Measurement(3, -2)):
        assert abs(trace_distance(p, 0.0, m)) < 1e-15
    assert abs(trace_distance_optimal(p, 0.0)) < 1e-15


def test_helstrom_examples():
    assert helstrom_bound((0.5, 0.5), 0.0) == 0.0
    assert helstrom_bound((0.5, 0.5), 1.0) == 0.5
    assert abs(helstrom_bound((0.5, 0.5), coherent_overlap(1.0)) - HELSTROM_ALPHA_SQ_1) < 1e-15
    with pytest.raises(ValueError):
        helstrom_bound((0.5, 0.5), 1.2)


def test_rwa_peak_at_reported_time():
    p = JcParams(2.0)
    # the reported 0.9896 is the unweighted trace distance, i.e. 2D for equal priors
    t = state_trace_distance(p, 0.3960)
    assert abs(t - 0.9896) < 1e-3
    d = trace_distance(p, 0.3960, Measurement(1.0, math.pi / 2))
    assert abs(2 * d - t) < 1e-12
    assert abs(trace_distance_optimal(p, 0.3960) - d) < 1e-12


def test_trace_distance_is_twice_objective_for_equal_priors():
    for rwa in (True, False):
        p = JcParams(1.3, rwa=rwa)
        ts = np.linspace(0, 10, 101)
        np.testing.assert_allclose(state_trace_distance_curve(p, ts), 2 * trace_distance_curve(p, ts),
                                   atol=1e-13)


def test_rwa_optimum_over_time():
    value, gt = max_state_trace_distance(JcParams(2.0), GtGrid())
    assert abs(value - 0.9896) < 1e-3 and abs(gt - 0.3960) < 1e-2
    p_err, gt_star = min_error_probability(JcParams(2.0))
    assert abs(gt_star - gt) < 1e-3
    assert abs(success_probability(0.5 * (1 - 2 * p_err)) - (1 - p_err)) < 1e-15


def test_refinement_beats_grid():
    p = JcParams(2.0)
    grid = GtGrid(0, 10, 201)
    p_err, gt = min_error_probability(p, grid)
    coarse = 0.5 * (1 - 2 * trace_distance_curve(p, grid.points()).max())
    assert p_err <= coarse
    # the polished optimum agrees with a fine grid to the refinement tolerance
    fine, _ = min_error_probability(p, GtGrid(gt - 0.05, gt + 0.05, 20001))
    assert abs(fine - p_err) < 1e-8


def test_unequal_priors_offset():
    p = JcParams(1.0, priors=(0.8, 0.2))
    assert abs(trace_distance_optimal(p, 0.0) - (0.6 - 0.3)) < 1e-15


@pytest.mark.parametrize("rwa", [True, False])
def test_closed_form_dominates_measurement_grid(rwa):
    rs = np.linspace(0.02, 2.0, 100)
    thetas = np.linspace(-math.pi, math.pi, 100, endpoint=False)
    for a2, gt in ((1.0, 1.3), (4.0, 0.396), (2.35, 0.58), (1.65, 8.43)):
        p = JcParams(math.sqrt(a2), rwa=rwa)
        grid = measurement_landscape(p, gt, rs, thetas)
        assert trace_distance_optimal(p, gt) >= grid.max() - 1e-10


def test_landscape_matches_projector_evaluation():
    p = JcParams(1.1, rwa=False, priors=(0.6, 0.4))
    rs, ths = [0.3, 1.0, 1.7], [-2.0, 0.1, 1.5]
    grid = measurement_landscape(p, 2.2, rs, ths)
    for i, r in enumerate(rs):
        for j, th in enumerate(ths):
            assert abs(grid[i, j] - trace_distance(p, 2.2, Measurement(r, th))) < 1e-13


def test_theta_reflection_symmetry_with_rwa():
    rs = np.linspace(0.02, 2.0, 50)
    th = np.linspace(0.05, 3.1, 40)
    for a2, gt in ((1.0, 1.3), (4.0, 0.396), (1.65, 8.43)):
        p = JcParams(math.sqrt(a2))
        np.testing.assert_allclose(measurement_landscape(p, gt, rs, th),
                                   measurement_landscape(p, gt, rs, -th), atol=1e-13)


def test_complementary_projector_symmetry():
    # for equal priors Tr M = 0, so Pi and 1 - Pi give the same |bias|
    p = JcParams(1.4, rwa=False)
    rs = np.array([0.3, 0.8, 1.9])
    th = np.array([-1.0, 0.4, 2.5])
    a = measurement_landscape(p, 3.3, rs, th)
    for i, r in enumerate(rs):
        b = measurement_landscape(p, 3.3, [1 / r], th + math.pi)
        np.testing.assert_allclose(a[i], b[0], atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(a2=st.floats(0.05, 5.0), p1=st.floats(0.05, 0.95), rwa=st.booleans())
def test_never_beats_helstrom(a2, p1, rwa):
    p = JcParams(math.sqrt(a2), rwa=rwa, priors=(p1, 1 - p1))
    p_err, _ = min_error_probability(p, GtGrid(0, 10, 401))
    assert p_err >= helstrom_bound(p.priors, coherent_overlap(a2)) - 1e-8
