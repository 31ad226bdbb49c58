import math
from fractions import Fraction

import numpy as np
import pytest

from cli.suites import TAU_END, TAU_START, chart_equivalence_residual
from elliptic_core import lattice_distance, wp_z
from errors import InconsistentContext, InvalidParameter, InvalidPath, PoleHit
from integrator import IntegratorConfig, PathSpec
from picard_fuchs import derivatives_at
from pvi_dynamics import (
    HITCHIN,
    P2,
    PICARD,
    AlgebraicState,
    ClassicalState,
    EllipticState,
    GeneralizedParams,
    PainleveParams,
    Trajectory,
    canonical_lift,
    convert_state,
    convert_trajectory,
    flow_residual,
    hamiltonian,
    hamiltonian_dtau,
    integrate,
    params_convert,
    params_from_dict,
    rhs_algebraic,
    rhs_classical,
    rhs_elliptic,
    state_from_vector,
)

CONFIG = IntegratorConfig(sample_step=0.002)


def test_named_points():
    assert P2.alphas == pytest.approx((0.125, 0.125, 0, 0))
    assert HITCHIN.alphas == pytest.approx((0.125,) * 4)
    assert PICARD.alphas == pytest.approx((0, 0, 0, 0))
    assert P2.avec == pytest.approx((0.5, 0.5, 0, 0))


def test_params_fill_in_every_representation():
    p = PainleveParams.from_avec(1, -0.5, 0.2j, 0)
    assert p.alphas == pytest.approx((0.5, 0.125, -0.02, 0))
    assert p.classical == pytest.approx((0.5, -0.125, -0.02, 0.5))
    assert p.avec_signs[:2] == (1, -1)
    assert params_convert(p, "avec").avec == p.avec
    assert params_convert(p, "alphas").avec_signs == (1, 1, 1, 1)


@pytest.mark.parametrize("classical, alphas", [
    ((0.125, -0.125, 0, 0.5), (0.125, 0.125, 0, 0)),
    ((0.125, -0.125, 0.125, 0.375), (0.125, 0.125, 0.125, 0.125)),
    ((0, 0, 0, 0.5), (0, 0, 0, 0)),
])
def test_params_convert_returns_a_full_point(classical, alphas):
    converted = params_convert(PainleveParams.from_classical(*classical), "classical")
    assert isinstance(converted, PainleveParams)
    assert converted.alphas == pytest.approx(alphas)
    assert params_convert(converted, "alphas").classical == pytest.approx(classical)


def test_params_reject_inconsistent_representations():
    with pytest.raises(InvalidParameter):
        PainleveParams(classical=(0, 0, 0, 0), alphas=(0, 0, 0, 0))
    with pytest.raises(InvalidParameter):
        PainleveParams(alphas=(0.5, 0, 0, 0), avec=(2, 0, 0, 0))
    with pytest.raises(InvalidParameter):
        PainleveParams()
    with pytest.raises(InvalidParameter):
        PainleveParams.from_alphas(1, 2, 3)
    with pytest.raises(InvalidParameter):
        params_convert(P2, "sigma")


def test_params_dict_round_trip():
    assert params_from_dict(HITCHIN.to_dict()).alphas == pytest.approx(HITCHIN.alphas)
    generalized = GeneralizedParams((((Fraction(1, 3), 0), 0.2), ((0, Fraction(1, 3)), 0.1j)))
    assert params_from_dict(generalized.to_dict()).terms == generalized.terms


def test_generalized_params_reproduce_half_period_shifts():
    tau = 0.1 + 1.2j
    generalized = GeneralizedParams.from_params(HITCHIN)
    for (a, _, alpha), (b, _, beta) in zip(HITCHIN.shifts(tau), generalized.shifts(tau)):
        assert a == pytest.approx(b)
        assert alpha == beta


def test_generalized_params_need_distinct_shift_points():
    with pytest.raises(InvalidParameter):
        GeneralizedParams((((0.5, 0), 1.0), ((1.5, 1), 2.0)))


def test_states_validate_their_chart():
    with pytest.raises(PoleHit):
        ClassicalState(0.3, 0.1, 1.0)
    with pytest.raises(PoleHit):
        ClassicalState(0.4, 0.1, 0.4)
    with pytest.raises(InvalidParameter):
        AlgebraicState(0.1, 0.3, 0.3, 0.5)


def test_state_from_vector_uses_component_order():
    X, t = 0.3 + 0.2j, 0.4
    Y = np.sqrt(X * (X - 1) * (X - t))
    s = state_from_vector("algebraic", t, [X, 0.7, Y])
    assert (s.X, s.U, s.Y) == (X, 0.7, Y)
    assert list(s.vector()) == [X, 0.7, Y]


@pytest.mark.parametrize("alpha,coefficient", [(0.5, -1 / (8 * math.pi ** 2)), (2.0, -1 / (2 * math.pi ** 2))])
def test_reduced_coefficients(alpha, coefficient):
    s = EllipticState(0.21 + 0.37j, 0.3, 0.1 + 1.1j)
    value = rhs_elliptic(s, PainleveParams.from_alphas(alpha, 0, 0, 0))
    assert value == pytest.approx(coefficient * wp_z(s.z, s.tau), rel=1e-14)


def test_zero_parameters_give_free_motion():
    s = EllipticState(0.21 + 0.37j, 0.3, 0.1 + 1.1j)
    assert rhs_elliptic(s, PICARD) == 0
    assert hamiltonian(s, PICARD) == pytest.approx(0.045)


def test_rhs_elliptic_at_pole():
    s = EllipticState(0.5, 0.3, 1j)
    with pytest.raises(PoleHit):
        rhs_elliptic(s, P2)


def test_classical_and_algebraic_right_hand_sides_agree():
    X, t = 0.3 + 0.2j, 0.4 + 0.1j
    Y = np.sqrt(X * (X - 1) * (X - t))
    algebraic = AlgebraicState(0.2 - 0.1j, X, Y, t)
    classical = convert_state(algebraic, "classical")
    dX, _, dY = rhs_algebraic(algebraic, HITCHIN)
    assert dX == pytest.approx(classical.Xdot)
    assert 2 * Y * dY == pytest.approx((3 * X * X - 2 * (1 + t) * X + t) * dX - X * (X - 1))
    assert np.isfinite(rhs_classical(classical, HITCHIN))


def test_picard_solutions_are_lines(picard_line):
    z, y = picard_line.component("z"), picard_line.component("y")
    assert np.max(np.abs(z - (0.25 * picard_line.bases + 0.1))) <= 1e-9
    assert np.max(np.abs(y - 0.25)) <= 1e-9


def test_u_zero_is_invariant_at_zero_classical_parameters():
    params = PainleveParams.from_classical(0, 0, 0, 0)
    X0, t0 = 0.3 + 0.2j, 0.4 + 0.1j
    state = AlgebraicState(0, X0, np.sqrt(X0 * (X0 - 1) * (X0 - t0)), t0)
    trajectory = integrate("algebraic", state, PathSpec.segment(t0, t0 + 0.1), params, CONFIG)
    assert np.max(np.abs(trajectory.component("U"))) <= 1e-9
    assert np.max(np.abs(trajectory.component("X") - X0)) <= 1e-9


def test_algebraic_integration_stays_on_curve():
    X0, t0 = 0.3 + 0.2j, 0.4 + 0.1j
    state = AlgebraicState(0.3, X0, np.sqrt(X0 * (X0 - 1) * (X0 - t0)), t0)
    trajectory = integrate("algebraic", state, PathSpec.segment(t0, t0 + 0.05), HITCHIN, CONFIG)
    X, Y = trajectory.component("X"), trajectory.component("Y")
    residual = Y * Y - X * (X - 1) * (X - trajectory.bases)
    assert np.max(np.abs(residual)) <= 1e-10


def test_flow_consistency(p2_trajectory, hitchin_trajectory, generic_trajectory):
    for trajectory in (p2_trajectory, hitchin_trajectory, generic_trajectory):
        assert flow_residual(trajectory, trajectory.params) <= 1e-6


def test_energy_balance(p2_trajectory):
    energies = np.array([hamiltonian(p2_trajectory.state(k), P2) for k in range(len(p2_trajectory))])
    for k in (2, len(p2_trajectory) // 2, len(p2_trajectory) - 3):
        nodes = p2_trajectory.bases[k - 2:k + 3]
        slope = derivatives_at(nodes[2], nodes, energies[k - 2:k + 3], order=1)[1]
        expected = hamiltonian_dtau(p2_trajectory.state(k), P2)
        assert abs(slope - expected) <= 1e-6 * (1 + abs(expected))


def test_reversibility(hitchin_trajectory):
    back = integrate("elliptic", hitchin_trajectory.end_state, PathSpec.segment(TAU_END, TAU_START),
                     HITCHIN, CONFIG).end_state
    start = hitchin_trajectory.state(0)
    assert back.z == pytest.approx(start.z, abs=1e-8)
    assert back.y == pytest.approx(start.y, abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("params", [P2, HITCHIN])
def test_chart_equivalence(params):
    assert chart_equivalence_residual(params, 0.2 + 0.3 * TAU_START, 0.1 + 0.05j) <= 1e-6


def test_integrate_validates_its_inputs():
    state = EllipticState(0.2 + 0.3j, 0.1, 1j)
    with pytest.raises(InvalidPath):
        integrate("elliptic", state, PathSpec.segment(1.1j, 1.2j), P2)
    with pytest.raises(InvalidPath):
        integrate("elliptic", state, PathSpec((1j, 0.01j)), P2)
    with pytest.raises(InvalidParameter):
        integrate("classical", state, PathSpec.segment(1j, 1.2j), P2)
    classical = ClassicalState(0.3, 0.1, 0.5)
    with pytest.raises(InvalidPath):
        integrate("classical", classical, PathSpec((0.5, 1.0, 1.5j)), P2)
    with pytest.raises(InvalidParameter):
        integrate("classical", classical, PathSpec.segment(0.5, 0.6), GeneralizedParams.from_params(P2))


def test_elliptic_round_trip_through_algebraic_chart():
    s = EllipticState(0.2 + 0.3 * TAU_START, 0.1 + 0.05j, TAU_START)
    algebraic = convert_state(s, "algebraic")
    back = convert_state(algebraic, "elliptic", context=TAU_START, z_seed=s.z)
    assert back.z == pytest.approx(s.z, abs=1e-9)
    assert back.y == pytest.approx(s.y, abs=1e-9)


def test_classical_chart_matches_algebraic():
    s = EllipticState(0.2 + 0.3 * TAU_START, 0.1 + 0.05j, TAU_START)
    algebraic = convert_state(s, "algebraic")
    classical = convert_state(s, "classical")
    assert classical.X == pytest.approx(algebraic.X)
    assert classical.Xdot == pytest.approx(2 * algebraic.U * algebraic.Y / (algebraic.t * (algebraic.t - 1)))
    again = convert_state(classical, "algebraic", y_hint=algebraic.Y)
    assert again.U == pytest.approx(algebraic.U)


def test_conversion_checks_context():
    s = EllipticState(0.2 + 0.3j, 0.1, 1j)
    with pytest.raises(InconsistentContext):
        convert_state(s, "algebraic", context=0.3)
    algebraic = convert_state(s, "algebraic")
    with pytest.raises(InconsistentContext):
        convert_state(algebraic, "elliptic", context=0.4 + 1.3j)


def test_conversion_refuses_lattice_points():
    with pytest.raises(PoleHit):
        convert_state(EllipticState(0, 0.1, 1j), "algebraic")


def test_trajectory_round_trip_through_algebraic_chart(p2_trajectory):
    algebraic = convert_trajectory(p2_trajectory, "algebraic")
    back = convert_trajectory(algebraic, "elliptic", tau_seed=TAU_START)
    assert back.chart == "elliptic"
    assert back.bases == pytest.approx(p2_trajectory.bases, abs=1e-9)
    assert back.component("z") == pytest.approx(p2_trajectory.component("z"), abs=1e-8)
    assert back.component("y") == pytest.approx(p2_trajectory.component("y"), abs=1e-8)


def test_canonical_lift():
    tau = 0.1 + 1.2j
    elliptic, algebraic = canonical_lift(Fraction(1, 3), Fraction(1, 4), tau)
    assert elliptic.z == pytest.approx(tau / 3 + 0.25)
    assert elliptic.y == pytest.approx(1 / 3)
    assert algebraic.X == pytest.approx(convert_state(elliptic, "algebraic").X)


def test_canonical_lift_through_half_period():
    with pytest.raises(PoleHit):
        canonical_lift(0.5, 0, 1j)
    assert lattice_distance(2 * canonical_lift(0.25, 0.5, 1j)[0].z, 1j) > 0.1


def test_trajectory_serialization(p2_trajectory):
    restored = Trajectory.from_json(p2_trajectory.to_json())
    assert restored.states == pytest.approx(p2_trajectory.states)
    assert restored.params.alphas == pytest.approx(P2.alphas)
    from_csv = Trajectory.from_csv(p2_trajectory.to_csv(), P2)
    assert from_csv.chart == "elliptic"
    assert from_csv.bases == pytest.approx(p2_trajectory.bases)
    assert from_csv.errors == pytest.approx(p2_trajectory.errors)


def test_trajectory_rejects_unknown_chart():
    with pytest.raises(InvalidParameter):
        Trajectory("hyperbolic", [0.3], [[0.1, 0.2]], [0], P2)
