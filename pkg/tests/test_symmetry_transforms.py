from fractions import Fraction

import numpy as np
import pytest

from cli.suites import CLASSIFICATION_TABLE
from elliptic_core import wp_z
from errors import InvalidParameter, PatternMismatch, PoleHit
from integrator import IntegratorConfig, PathSpec
from picard_fuchs import derivatives_at
from pvi_dynamics import HITCHIN, P2, AlgebraicState, EllipticState, PainleveParams, flow_residual, integrate, \
    rhs_algebraic, rhs_elliptic
from symmetry_transforms import (
    OBSERVABLE_H,
    OBSERVABLE_U,
    OBSERVABLE_X,
    ModularElement,
    WElement,
    canonicalize,
    classify,
    gamma2_act,
    inversion,
    landin,
    landin_avec,
    landin_identity_residual,
    landin_map,
    okamoto_D,
    okamoto_p,
    okamoto_shift_h,
    replay_witness,
    shift_zero_section,
    transform_trajectory,
    w_act,
)

GENERIC = PainleveParams.from_alphas(0.1, 0.05, 0.2, 0.3)
STATE = EllipticState(0.23 + 0.33j, 0.15 - 0.1j, 0.1 + 1.1j)
X0, T0 = 0.3 + 0.2j, 0.4 + 0.1j
ALGEBRAIC = AlgebraicState(0.2 - 0.1j, X0, np.sqrt(X0 * (X0 - 1) * (X0 - T0)), T0)


def _close(a, b, tol=1e-12):
    return abs(a - b) <= tol * (1 + abs(b))


@pytest.mark.parametrize("entries", [(1, 1, 0, 1), (1, 0, 2, 3), (3, 2, 4, 3.5), (2, 1, 1, 1)])
def test_modular_element_must_lie_in_gamma2(entries):
    with pytest.raises(InvalidParameter):
        ModularElement(*entries)


def test_modular_action_is_a_group_action():
    g1, g2 = ModularElement(1, 2, 0, 1, 1, 0), ModularElement(1, 0, 2, 1, 0, -1)
    direct = gamma2_act(g1 * g2, STATE)
    nested = gamma2_act(g1, gamma2_act(g2, STATE))
    assert _close(direct.z, nested.z) and _close(direct.y, nested.y)
    assert _close(direct.base, nested.base)
    back = gamma2_act(g2.inverse(), gamma2_act(g2, STATE))
    assert _close(back.z, STATE.z) and _close(back.y, STATE.y) and _close(back.base, STATE.base)
    assert gamma2_act(ModularElement.identity(), STATE) == STATE


def test_lattice_shift_moves_z_and_y():
    image = gamma2_act(ModularElement.shift(1, -2), STATE)
    assert image.z == pytest.approx(STATE.z + STATE.base - 2)
    assert image.y == pytest.approx(STATE.y + 1)


def test_modular_transport(generic_trajectory):
    g = ModularElement(1, 0, 2, 1, 1, 0)
    image = transform_trajectory(generic_trajectory, lambda s: gamma2_act(g, s))
    assert flow_residual(image, GENERIC) <= 1e-6


@pytest.mark.parametrize("i,expected", [(1, (0.05, 0.1, 0.3, 0.2)), (2, (0.2, 0.3, 0.1, 0.05)),
                                        (3, (0.3, 0.2, 0.05, 0.1))])
def test_shift_zero_section_relabels_alphas(i, expected):
    state, params = shift_zero_section(i, STATE, GENERIC)
    assert params.alphas == pytest.approx(expected)
    assert state.z == pytest.approx(STATE.z + (0.5 if i in (1, 3) else 0) + (0.5 * STATE.base if i >= 2 else 0))


def test_shift_transport(generic_trajectory):
    _, params = shift_zero_section(2, generic_trajectory.state(0), GENERIC)
    image = transform_trajectory(generic_trajectory, lambda s: shift_zero_section(2, s, GENERIC)[0], params)
    assert flow_residual(image, params) <= 1e-6


def test_flows_are_odd_under_inversion():
    for p in (P2, HITCHIN, GENERIC):
        assert _close(rhs_elliptic(inversion(STATE), p), -rhs_elliptic(STATE, p))
    dX, dU, dY = rhs_algebraic(ALGEBRAIC, GENERIC)
    iX, iU, iY = rhs_algebraic(inversion(ALGEBRAIC), GENERIC)
    assert _close(iX, dX) and _close(iU, -dU) and _close(iY, -dY)


@pytest.mark.parametrize("p,direction,expected", [
    (PainleveParams.from_alphas(0.125, 0, 0.125, 0), "forward", (0.5, 0, 0, 0)),
    (HITCHIN, "forward", (0.5, 0.5, 0, 0)),
    (PainleveParams.from_alphas(2, 0, 0, 0), "inverse", (0.5, 0, 0.5, 0)),
    (P2, "inverse", (1 / 32,) * 4),
])
def test_landin_parameters(p, direction, expected):
    assert landin(p, direction).alphas == pytest.approx(expected, abs=1e-15)


def test_landin_pattern_mismatch():
    with pytest.raises(PatternMismatch):
        landin(GENERIC, "forward")
    with pytest.raises(PatternMismatch):
        landin(HITCHIN, "inverse")
    with pytest.raises(InvalidParameter):
        landin(P2, "sideways")


def test_landin_avec():
    assert landin_avec((1, 2, 1, 2)) == (2, 4, 0, 0)
    assert landin_avec((2, 4, 0, 0), "inverse") == (1, 2, 1, 2)
    with pytest.raises(PatternMismatch):
        landin_avec((1, 2, 3, 4))


def test_landin_identity():
    tau, z = 1.6j, 0.21 + 0.37j
    assert abs(landin_identity_residual(z, tau)) <= 1e-9 * (1 + abs(wp_z(z, tau / 2)))


def test_landin_map_picks_applicable_direction(hitchin_trajectory, p2_trajectory):
    image, direction = landin_map(hitchin_trajectory)
    assert direction == "forward"
    assert image.bases == pytest.approx(hitchin_trajectory.bases / 2)
    assert flow_residual(image, image.params) <= 1e-6
    image, direction = landin_map(p2_trajectory)
    assert direction == "inverse"
    assert flow_residual(image, image.params) <= 1e-6


def test_landin_map_needs_a_pattern(generic_trajectory):
    with pytest.raises(PatternMismatch):
        landin_map(generic_trajectory)


def test_w_element_validation():
    with pytest.raises(InvalidParameter):
        WElement(shift=(1, 0, 0, 0))
    with pytest.raises(InvalidParameter):
        WElement(perm=(0, 0, 1, 2))
    with pytest.raises(InvalidParameter):
        WElement(signs=(1, 2, 1, 1))


def test_w_group_laws():
    a = (Fraction(1, 4), Fraction(-3, 4), Fraction(5, 4), Fraction(1, 2))
    w1 = WElement((-1, 1, 1, -1), (2, 0, 3, 1), (1, 1, 0, 0))
    w2 = WElement((1, -1, 1, 1), (1, 3, 0, 2), (0, -2, 0, 2))
    assert w_act(w1.compose(w2), a) == w_act(w1, w_act(w2, a))
    assert w_act(w2.inverse(), w_act(w2, a)) == a


def test_canonicalize_returns_witness():
    a = (Fraction(13, 10), Fraction(3, 10), Fraction(0), Fraction(-1, 4))
    canonical, w = canonicalize(a)
    assert w_act(w, a) == canonical
    assert list(canonical) == sorted(canonical)


@pytest.mark.parametrize("a,tag", CLASSIFICATION_TABLE)
def test_classification(a, tag):
    result = classify(a)
    assert result.tag == tag
    if tag != "unknown":
        assert replay_witness(a, result.witness) == result.base_point


@pytest.mark.parametrize("a,tag", CLASSIFICATION_TABLE)
def test_classification_is_w_invariant(a, tag):
    w = WElement((-1, 1, 1, 1), (1, 0, 3, 2), (2, 0, 0, 0))
    image = w_act(w, [Fraction(x).limit_denominator(1000) for x in a])
    assert classify(image).tag == tag


def test_non_real_a_vector_is_unknown():
    result = classify((0.5j, 0, 0, 0))
    assert result.tag == "unknown"
    assert result.to_dict()["witness"] == []


def test_okamoto_derivation_reproduces_flow():
    dX, dU, _ = rhs_algebraic(ALGEBRAIC, GENERIC)
    assert _close(okamoto_D(OBSERVABLE_X, ALGEBRAIC, GENERIC), dX)
    assert _close(okamoto_D(OBSERVABLE_U, ALGEBRAIC, GENERIC), dU)
    assert okamoto_D(lambda s, a: s.X, ALGEBRAIC, GENERIC) == pytest.approx(dX, rel=1e-8)


def test_okamoto_h_along_solution():
    params = PainleveParams.from_avec(0.3, 0.2, 0.4, 0.6)
    state = AlgebraicState(0.1, X0, np.sqrt(X0 * (X0 - 1) * (X0 - T0)), T0)
    trajectory = integrate("algebraic", state, PathSpec.segment(T0, T0 + 0.05), params,
                           IntegratorConfig(sample_step=0.001))
    values = np.array([OBSERVABLE_H(trajectory.state(k), params) for k in range(len(trajectory))])
    for k in range(2, len(trajectory) - 2, 10):
        nodes = trajectory.bases[k - 2:k + 3]
        slope = derivatives_at(nodes[2], nodes, values[k - 2:k + 3], order=1)[1]
        assert _close(slope, okamoto_D(OBSERVABLE_H, trajectory.state(k), params), 1e-6)


def test_okamoto_shift_moves_a_vector():
    _, shifted = okamoto_shift_h(0.0, ALGEBRAIC, (0.3, 0.2, 0.4, 0.6))
    assert shifted == pytest.approx((1.3, 0.2, 0.4, 1.6))


@pytest.mark.parametrize("X, t", [(X0, T0), (2.5 + 0.1j, 0.3 - 0.2j), (-0.4, 3.0)])
def test_okamoto_shift_at_zero_parameters(X, t):
    state = AlgebraicState(0, X, np.sqrt(complex(X * (X - 1) * (X - t))), t)
    h, shifted = okamoto_shift_h(0.7, state, (0, 0, 0, 0))
    assert h == pytest.approx(0.7 - X * (X - 1) * (-1 / (2 * (X - t))) - X / 2 + 0.25, rel=1e-12)
    assert shifted == pytest.approx((1, 0, 0, 1))


def test_okamoto_shift_by_hand():
    # X = 2, t = 3, U = Y = i sqrt(2), a = (1, 1, 1, 1): U/Y = 1, the bracket is 1 + 1/4 + 1/2 + 0
    Y = 1j * np.sqrt(2)
    state = AlgebraicState(Y, 2, Y, 3)
    h, shifted = okamoto_shift_h(0.5, state, (1, 1, 1, 1))
    assert h == pytest.approx(0.5 - 2 * 1.75 + 1 - 0.25, rel=1e-12)
    assert shifted == pytest.approx((2, 1, 1, 2))


def test_okamoto_shift_subtracts_p():
    a = (0.3, -0.2, 0.5, 0.1)
    h, _ = okamoto_shift_h(0.0, ALGEBRAIC, a)
    X = ALGEBRAIC.X
    expected = (-X * (X - 1) * okamoto_p(ALGEBRAIC, a)
                + 0.5 * (-0.3 - 0.2 + 0.5 + 0.1 - 1) * X + 0.25 * (0.3 + 0.4 - 0.1 + 1))
    assert h == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("a,tag", CLASSIFICATION_TABLE)
def test_repeated_okamoto_shift_keeps_class(a, tag, k):
    h, current = OBSERVABLE_H(ALGEBRAIC, a), a
    for _ in range(2 * k):
        h, current = okamoto_shift_h(h, ALGEBRAIC, current)
    assert current == pytest.approx(tuple(x + d for x, d in zip(a, (2 * k, 0, 0, 2 * k))))
    assert np.isfinite(h)
    assert classify(current).tag == tag


def test_okamoto_observables_refuse_singular_states():
    with pytest.raises(PoleHit):
        okamoto_p(AlgebraicState(0.1, 0, 0, 0.4), GENERIC)
