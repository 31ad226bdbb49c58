import numpy as np
import pytest

from cli.suites import TAU_START
from errors import InsufficientSamples, InvalidParameter
from picard_fuchs import (
    SampledFunction,
    abelian_track,
    apply_lt,
    apply_lt_extrapolated,
    derivatives_at,
    fornberg_weights,
    mu_identity_residual,
    mu_invariant,
    mu_residual,
    periods_residual,
)
from pvi_dynamics import P2, Trajectory, convert_trajectory


def _midpoint(trajectory):
    return trajectory.bases[len(trajectory) // 2]


def test_fornberg_weights_are_exact_on_quadratics():
    nodes = [0.1, 0.2 + 0.05j, 0.35, 0.4 - 0.1j, 0.6]
    values = [3 * x * x - 2 * x + 1 for x in nodes]
    value, first, second = derivatives_at(0.3, nodes, values)
    assert value == pytest.approx(3 * 0.09 - 0.6 + 1)
    assert first == pytest.approx(3 * 0.6 - 2)
    assert second == pytest.approx(6)


def test_fornberg_weights_sum_to_zero_for_derivatives():
    weights = fornberg_weights(0.0, [-2, -1, 0, 1, 2], 2)
    assert np.sum(weights[0]) == pytest.approx(1)
    assert abs(np.sum(weights[1])) <= 1e-14
    assert abs(np.sum(weights[2])) <= 1e-14
    assert weights[1] == pytest.approx(np.array([1, -8, 0, 8, -1]) / 12)


def test_apply_lt_on_polynomial():
    ts = np.linspace(0.3, 0.5, 9)
    f = SampledFunction.from_callable(lambda t: t * t, ts)
    at = ts[4]
    assert apply_lt(f, at) == pytest.approx(4 * at - 6.25 * at * at, rel=1e-10)


def test_apply_lt_needs_interior_point():
    f = SampledFunction.from_callable(lambda t: t, np.linspace(0.3, 0.5, 6))
    with pytest.raises(InsufficientSamples):
        apply_lt(f, 0.3)


def test_sampled_function_validation():
    with pytest.raises(InsufficientSamples):
        SampledFunction((0.1, 0.2, 0.3), (1, 2, 3))
    with pytest.raises(InvalidParameter):
        SampledFunction((0.1, 0.2, 0.3, 0.4, 0.4), (1, 2, 3, 4, 5))
    with pytest.raises(InvalidParameter):
        SampledFunction((0.1, 0.2, 0.3, 0.4, 0.5), (1, 2, 3, 4))


def test_apply_lt_extrapolated_on_polynomial():
    assert apply_lt_extrapolated(lambda t: t ** 3, 0.4) == pytest.approx(
        0.4 * 0.6 * 6 * 0.4 + (1 - 0.8) * 3 * 0.16 - 0.064 / 4, rel=1e-9
    )


@pytest.mark.parametrize("t", [0.3 + 0.1j, 0.5 + 0.1j, 0.7 - 0.2j])
def test_periods_are_annihilated(t):
    pi1, pi2 = periods_residual(t)
    assert abs(pi1) <= 1e-6
    assert abs(pi2) <= 1e-6


def test_abelian_track_is_continuous(p2_trajectory):
    track = abelian_track(p2_trajectory)
    assert len(track.integrals) == len(p2_trajectory)
    assert np.max(np.abs(np.diff(track.zs))) < 0.1
    assert track.integrals == pytest.approx(track.pi1 * track.zs)


def test_mu_equation(p2_trajectory, hitchin_trajectory, generic_trajectory):
    for trajectory in (p2_trajectory, hitchin_trajectory, generic_trajectory):
        assert abs(mu_residual(trajectory, trajectory.params, _midpoint(trajectory))) <= 1e-5


def test_mu_equation_in_classical_chart(p2_trajectory, generic_trajectory):
    for trajectory in (p2_trajectory, generic_trajectory):
        classical = convert_trajectory(trajectory, "classical", tau_seed=TAU_START)
        at = _midpoint(classical)
        assert abs(mu_residual(classical, classical.params, at, tau_seed=TAU_START)) <= 1e-5


def test_mu_equation_rejects_perturbed_solution(p2_trajectory):
    classical = convert_trajectory(p2_trajectory, "classical", tau_seed=TAU_START)
    X, Xdot = classical.component("X"), classical.component("Xdot")
    factor = 1 + 0.05 * classical.bases
    states = np.column_stack([X * factor, Xdot * factor + 0.05 * X])
    perturbed = Trajectory("classical", classical.bases, states, classical.errors, P2)
    assert abs(mu_residual(perturbed, P2, _midpoint(perturbed), tau_seed=TAU_START)) >= 1e-3


def test_mu_identity(p2_trajectory, generic_trajectory):
    for trajectory in (p2_trajectory, generic_trajectory):
        assert abs(mu_identity_residual(trajectory, _midpoint(trajectory))) <= 1e-5


def test_mu_identity_needs_elliptic_chart():
    trajectory = Trajectory("classical", [0.3, 0.4], [[0.5, 0.1], [0.5, 0.1]], [0, 0], P2)
    with pytest.raises(InvalidParameter):
        mu_identity_residual(trajectory, 0.3)


def test_mu_expression_is_bilinear(p2_trajectory):
    residual = mu_invariant(p2_trajectory, _midpoint(p2_trajectory), omega_scale=lambda t: 1 + t * t,
                            sigma_scale=lambda t: 2 - t)
    assert abs(residual) <= 1e-5


def test_mu_residual_at_trajectory_end(p2_trajectory):
    with pytest.raises(InsufficientSamples):
        mu_residual(p2_trajectory, P2, p2_trajectory.bases[0])
