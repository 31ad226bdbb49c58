import cmath

import numpy as np
import pytest

from errors import InvalidParameter, InvalidPath, PoleApproach, PoleHit, StepUnderflow
from integrator import IntegratorConfig, PathSpec, integrate_path


def _exponential(base, x):
    return x


def test_exponential_along_real_segment():
    result = integrate_path(_exponential, [1.0], PathSpec.segment(0, 1))
    assert result.states[-1][0] == pytest.approx(cmath.e, rel=1e-10)
    assert result.bases[0] == 0
    assert result.bases[-1] == 1


def test_exponential_along_polyline():
    path = PathSpec((0, 1, 1 + 1j))
    result = integrate_path(_exponential, [1.0], path, IntegratorConfig(sample_step=0.1))
    assert result.states[-1][0] == pytest.approx(cmath.exp(1 + 1j), rel=1e-10)
    assert len(result.bases) == 21
    assert 1 in list(result.bases)


def test_samples_land_on_requested_spacing():
    result = integrate_path(_exponential, [1.0], PathSpec.segment(0, 0.5j), IntegratorConfig(sample_step=0.05))
    assert np.diff(result.bases) == pytest.approx(np.full(10, 0.05j))
    for base, state in zip(result.bases, result.states):
        assert state[0] == pytest.approx(cmath.exp(base), rel=1e-10)


def test_errors_are_recorded_per_sample():
    result = integrate_path(_exponential, [1.0], PathSpec.segment(0, 1))
    assert result.errors[0] == 0
    assert np.all(result.errors >= 0)
    assert result.stats["accepted"] == result.accepted > 0


def test_projection_is_applied():
    result = integrate_path(_exponential, [1.0, 1.0], PathSpec.segment(0, 1),
                            project=lambda base, x: np.array([x[0], 1.0]))
    assert result.states[-1][1] == 1.0


def test_guard_aborts_with_partial_result():
    def guard(base, x):
        return "too far" if base.real > 0.5 else None

    with pytest.raises(PoleApproach) as excinfo:
        integrate_path(_exponential, [1.0], PathSpec.segment(0, 1), IntegratorConfig(sample_step=0.1), guard)
    partial = excinfo.value.partial
    assert 0 < len(partial.bases) < 11
    assert max(b.real for b in partial.bases) <= 0.5 + 1e-12


def test_guard_checks_initial_state():
    with pytest.raises(PoleApproach):
        integrate_path(_exponential, [1.0], PathSpec.segment(0, 1), guard=lambda base, x: "start")


def test_singular_right_hand_side_becomes_pole_approach():
    def f(base, x):
        if base.real > 0.3:
            raise PoleHit("singular")
        return x

    with pytest.raises(PoleApproach):
        integrate_path(f, [1.0], PathSpec.segment(0, 1))


def test_max_steps_exhausted():
    with pytest.raises(StepUnderflow):
        integrate_path(_exponential, [1.0], PathSpec.segment(0, 1), IntegratorConfig(max_steps=3))


def test_stiff_blow_up_underflows():
    config = IntegratorConfig(min_step=1e-4, max_step=0.1)
    with pytest.raises(StepUnderflow):
        integrate_path(lambda base, x: x * x, [1.0], PathSpec.segment(0, 2), config)


@pytest.mark.parametrize("kwargs", [
    {"rtol": 0},
    {"atol": -1.0},
    {"min_step": 0.1, "max_step": 0.01},
    {"sample_step": 0},
    {"max_steps": 0},
])
def test_config_validation(kwargs):
    with pytest.raises(InvalidParameter):
        IntegratorConfig(**kwargs)


def test_path_validation():
    with pytest.raises(InvalidPath):
        PathSpec((1j,))
    with pytest.raises(InvalidPath):
        PathSpec((0, 1, 1))


def test_path_geometry():
    path = PathSpec((0, 1, 1 + 1j))
    assert path.length == pytest.approx(2)
    assert path.start == 0 and path.end == 1 + 1j
    assert path.reversed().points == (1 + 1j, 1, 0)
    assert path.distance_to(0.5 + 0.2j) == pytest.approx(0.2)
    assert path.distance_to(2 + 0.5j) == pytest.approx(1)
    assert path.min_imag() == 0
