"""
Painleve 2-forms and 1-forms in the elliptic (y, z, tau) and algebraic
(U, X, t) charts, with finite-difference checks of their structure.

2-forms are antisymmetric 3x3 coefficient matrices W with
omega(v, w) = v^T W w; 1-forms are coefficient vectors.
"""
import cmath
import logging
from dataclasses import dataclass

import numpy as np

from elliptic_core import (
    DEFAULT_OPTIONS,
    MIN_IM_TAU,
    PI,
    TWO_PI_I,
    HalfPeriodIndex,
    as_tau,
    eisenstein_g2,
    half_period_values,
    theta_log_jet,
    wp,
    wp_z,
)
from errors import InvalidParameter, PoleAtLatticePoint, PoleAtThetaZero, PoleHit, StepUnderflow
from picard_fuchs import derivatives_at
from pvi_dynamics import AlgebraicState, EllipticState, PainleveParams, convert_state, potential_bracket
from uniformization import BranchChoice

logger = logging.getLogger(__name__)

COORDINATES = {"elliptic": ("y", "z", "tau"), "algebraic": ("U", "X", "t")}
DEFAULT_STEP = 1e-5

# dtau -> 4 pi i (dz)^2 near the divisor over a half-period
KODAIRA_SPENCER = 4j * PI

ZERO_PARAMS = PainleveParams.from_alphas(0, 0, 0, 0)
DIVISOR_PARAMS = PainleveParams.from_alphas(0, 0, 0, 0.5)


@dataclass(frozen=True)
class TangentVector:
    """Components of a tangent vector in a chart's coordinates."""

    components: tuple
    chart: str = "elliptic"

    def __post_init__(self):
        if self.chart not in COORDINATES:
            raise InvalidParameter(f"no tangent vectors in the {self.chart!r} chart")
        components = tuple(complex(c) for c in self.components)
        if len(components) != 3 or not all(cmath.isfinite(c) for c in components):
            raise InvalidParameter(f"a tangent vector needs three finite components, got {self.components}")
        object.__setattr__(self, "components", components)

    @classmethod
    def basis(cls, chart, name):
        components = [0, 0, 0]
        components[COORDINATES[chart].index(name)] = 1
        return cls(tuple(components), chart)

    def array(self):
        return np.array(self.components, dtype=complex)


def _coords(state):
    if state.chart == "elliptic":
        return np.array([state.y, state.z, state.tau.tau], dtype=complex)
    if state.chart == "algebraic":
        return np.array([state.U, state.X, state.t], dtype=complex)
    raise InvalidParameter(f"forms are not defined in the {state.chart} chart")


def _state_at(chart, coords, reference):
    """State at chart coordinates; Y follows the root nearest the reference."""
    if chart == "elliptic":
        return EllipticState(coords[1], coords[0], coords[2])
    U, X, t = coords
    Y = cmath.sqrt(X * (X - 1) * (X - t))
    if abs(Y + reference.Y) < abs(Y - reference.Y):
        Y = -Y
    return AlgebraicState(U, X, Y, t)


def _check_chart(state, v):
    if v.chart != state.chart:
        raise InvalidParameter(f"tangent vector lives in the {v.chart} chart, state in {state.chart}")


def _potential_sums(state, params, opts):
    """(sum alpha_j wp, sum alpha_j wp_z) at z + T_j/2."""
    values, slopes = 0j, 0j
    for shift, _, alpha in params.shifts(state.tau):
        if alpha == 0:
            continue
        try:
            values += alpha * wp(state.z + shift, state.tau, opts)
            slopes += alpha * wp_z(state.z + shift, state.tau, opts)
        except PoleAtLatticePoint as e:
            raise PoleHit(f"z={state.z} meets a pole of the potential: {str(e)}") from e
    return values, slopes


def _jet(state, opts):
    try:
        return theta_log_jet(state.z, state.tau, opts)
    except PoleAtThetaZero as e:
        raise PoleHit(f"z={state.z} is on the theta divisor: {str(e)}") from e


# 2-forms ---------------------------------------------------------------------

def omega_matrix(state, p, opts=DEFAULT_OPTIONS):
    """
    Coefficient matrix of the Painleve 2-form at a state.

    Elliptic chart (y, z, tau):
        2 pi i (dy^dz - y dy^dtau) + (1/(2 pi i)) sum alpha_j wp_z(z + T_j/2) dz^dtau
    Algebraic chart (U, X, t), s = t(t-1):
        dU^dX/Y - (2U/s) dU^dt + (-U/(2(X-t)Y) + B/(2s)) dX^dt
    with B the potential bracket of the classical equation.
    """
    W = np.zeros((3, 3), dtype=complex)
    if state.chart == "elliptic":
        _, slopes = _potential_sums(state, p, opts)
        W[0, 1] = TWO_PI_I
        W[0, 2] = -TWO_PI_I * state.y
        W[1, 2] = slopes / TWO_PI_I
    elif state.chart == "algebraic":
        U, X, Y, t = state.U, state.X, state.Y, state.t
        if min(abs(X), abs(X - 1), abs(X - t), abs(Y)) == 0:
            raise PoleHit(f"X={X} is a chart singularity over t={t}")
        s = t * (t - 1)
        W[0, 1] = 1 / Y
        W[0, 2] = -2 * U / s
        W[1, 2] = -U / (2 * (X - t) * Y) + potential_bracket(X, t, p) / (2 * s)
    else:
        raise InvalidParameter(f"forms are not defined in the {state.chart} chart")
    return W - W.T


def omega_eval(state, v1, v2, p, opts=DEFAULT_OPTIONS):
    """omega(v1, v2) at a state."""
    _check_chart(state, v1)
    _check_chart(state, v2)
    return complex(v1.array() @ omega_matrix(state, p, opts) @ v2.array())


# 1-forms ---------------------------------------------------------------------

def omega_big(state, p, include_g2=True, opts=DEFAULT_OPTIONS):
    """
    Coefficients of the primitive 1-form Omega with d(Omega) = omega.

    Elliptic chart:
        (2 pi i y + theta_z/theta) dz
        + (-pi i y^2 + theta_tau/theta + 2 pi i G2 + (1/(2 pi i)) sum alpha_j wp) dtau
    Algebraic chart:
        (U/Y) dX + (-U^2/s + A/(2s)) dt,
        A = alpha X - beta t/X - gamma (t-1)/(X-1) - delta s/(X-t)
    """
    if state.chart == "elliptic":
        jet = _jet(state, opts)
        values, _ = _potential_sums(state, p, opts)
        dtau = -1j * PI * state.y ** 2 + jet.dtau + values / TWO_PI_I
        if include_g2:
            dtau += TWO_PI_I * eisenstein_g2(state.tau, opts)
        return np.array([0, TWO_PI_I * state.y + jet.dz, dtau], dtype=complex)
    U, X, Y, t = state.U, state.X, state.Y, state.t
    s = t * (t - 1)
    alpha, beta, gamma, delta = p.classical
    A = alpha * X - beta * t / X - gamma * (t - 1) / (X - 1) - delta * s / (X - t)
    return np.array([0, U / Y, -U * U / s + A / (2 * s)], dtype=complex)


def omega0(state, opts=DEFAULT_OPTIONS):
    """
    Coefficients of Omega_0, the primitive that vanishes on the divisor U = 0.

    With L = theta_z/theta the heat equation reduces the dtau coefficient to
    -pi i y^2 - (i/4pi) L^2, so Omega_0 = (2 pi i y + L)(dz - (i/4pi)(L - 2 pi i y) dtau).
    """
    if state.chart == "elliptic":
        L = _jet(state, opts).dz
        return np.array([0, TWO_PI_I * state.y + L, -1j * PI * state.y ** 2 - 1j / (4 * PI) * L * L], dtype=complex)
    s = state.t * (state.t - 1)
    return np.array([0, state.U / state.Y, -state.U ** 2 / s], dtype=complex)


def omega_big_eval(state, v, p, include_g2=True, opts=DEFAULT_OPTIONS):
    _check_chart(state, v)
    return complex(omega_big(state, p, include_g2, opts) @ v.array())


def omega0_eval(state, v, opts=DEFAULT_OPTIONS):
    _check_chart(state, v)
    return complex(omega0(state, opts) @ v.array())


def omega_big_chart_offset(tau, p, opts=DEFAULT_OPTIONS):
    """
    dtau-coefficient of Omega_elliptic - Omega_algebraic:
    (1/(2 pi i)) [(alpha_0 + alpha_1) e1 + alpha_2 e2 + (alpha_3 - 1/2) e3].
    The difference depends on tau only, so it is closed.
    """
    e1, e2, e3 = half_period_values(tau, opts)
    a0, a1, a2, a3 = p.alphas
    return ((a0 + a1) * e1 + a2 * e2 + (a3 - 0.5) * e3) / TWO_PI_I


# Finite differences ----------------------------------------------------------

def _check_step(state, step):
    if state.chart == "elliptic" and state.tau.tau.imag - step <= MIN_IM_TAU:
        raise StepUnderflow(f"step {step} leaves the series domain at tau={state.tau.tau}")


def _partial(func, coords, index, step):
    """Richardson-extrapolated central difference of an array-valued func."""
    def central(h):
        plus, minus = coords.copy(), coords.copy()
        plus[index] += h
        minus[index] -= h
        return (func(plus) - func(minus)) / (2 * h)

    return (4 * central(step / 2) - central(step)) / 3


def _plane(chart, plane):
    names = COORDINATES[chart]
    i, j = (names.index(k) if isinstance(k, str) else int(k) for k in plane)
    if i == j or not (0 <= i < 3 and 0 <= j < 3):
        raise InvalidParameter(f"{plane} is not a coordinate plane of the {chart} chart")
    return i, j


def exterior_derivative(state, p, plane, step=DEFAULT_STEP, include_g2=True, opts=DEFAULT_OPTIONS):
    """d(Omega) on a coordinate plane, by central-difference circulation."""
    _check_step(state, step)
    i, j = _plane(state.chart, plane)
    coords = _coords(state)

    def form(c):
        return omega_big(_state_at(state.chart, c, state), p, include_g2, opts)

    return complex(_partial(form, coords, i, step)[j] - _partial(form, coords, j, step)[i])


def exactness_residual(state, p, plane, step=DEFAULT_STEP, include_g2=True, opts=DEFAULT_OPTIONS):
    """d(Omega) - omega on a coordinate plane, e.g. ("y", "tau")."""
    i, j = _plane(state.chart, plane)
    return exterior_derivative(state, p, plane, step, include_g2, opts) - omega_matrix(state, p, opts)[i, j]


def closedness_residual(state, p, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """d(omega) on the coordinate 3-plane."""
    _check_step(state, step)
    coords = _coords(state)

    def matrix(c):
        return omega_matrix(_state_at(state.chart, c, state), p, opts)

    return complex(
        _partial(matrix, coords, 0, step)[1, 2]
        - _partial(matrix, coords, 1, step)[0, 2]
        + _partial(matrix, coords, 2, step)[0, 1]
    )


def pushforward(g, state, v, step=DEFAULT_STEP):
    """
    Image of a tangent vector under a map of states.

    Args:
        g: callable taking a state to a state (any chart with forms)
        state: base point
        v: TangentVector at state

    Returns:
        (g(state), TangentVector at g(state)) using a finite-difference Jacobian
    """
    _check_chart(state, v)
    _check_step(state, step)
    image = g(state)
    coords = _coords(state)
    def mapped(c):
        return _coords(g(_state_at(state.chart, c, state)))

    jacobian = np.column_stack([_partial(mapped, coords, k, step) for k in range(3)])
    return image, TangentVector(tuple(jacobian @ v.array()), image.chart)


def _image_tau(image):
    if image.chart == "elliptic" and image.tau.tau.imag <= MIN_IM_TAU:
        raise InvalidParameter(f"transformed tau={image.tau.tau} is below Im(tau)={MIN_IM_TAU}")


def invariance_residual(state, p, g, v1, v2, target_params=None, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """
    omega at g(state) on pushed-forward vectors minus omega at state.

    target_params defaults to p (Gamma(2) and lattice shifts keep the labels).
    """
    image, w1 = pushforward(g, state, v1, step)
    _image_tau(image)
    _, w2 = pushforward(g, state, v2, step)
    target_params = p if target_params is None else target_params
    return omega_eval(image, w1, w2, target_params, opts) - omega_eval(state, v1, v2, p, opts)


def invariance_scale(state, p, g, v1, v2, target_params=None, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """
    1 + sum |omega_ab| |w1_a| |w2_b| at g(state) on the pushed-forward vectors.

    The size of the terms summed by omega_eval at the image, against which
    invariance_residual is relative.
    """
    image, w1 = pushforward(g, state, v1, step)
    _, w2 = pushforward(g, state, v2, step)
    target_params = p if target_params is None else target_params
    matrix = np.abs(omega_matrix(image, target_params, opts))
    return 1.0 + float(np.abs(w1.array()) @ matrix @ np.abs(w2.array()))


def omega_big_invariance_residual(state, p, g, v, include_g2=True, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """
    Omega at g(state) on the pushed-forward vector minus Omega at state.

    With include_g2=False the Gamma(2) part leaves c/(2(c tau + d)) on the
    dtau component.
    """
    image, w = pushforward(g, state, v, step)
    _image_tau(image)
    return omega_big_eval(image, w, p, include_g2, opts) - omega_big_eval(state, v, p, include_g2, opts)


def omega_big_chart_residual(state, v, p, branch=None, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """
    Omega in the elliptic chart minus its algebraic-chart counterpart on the
    pushed-forward vector, less the closed tau-only offset.
    """
    branch = branch or BranchChoice.principal(state.tau, opts)

    def to_algebraic(s):
        return convert_state(s, "algebraic", branch=branch, opts=opts)

    image, w = pushforward(to_algebraic, state, v, step)
    offset = omega_big_chart_offset(state.tau, p, opts) * v.components[2]
    return omega_big_eval(state, v, p, opts=opts) - omega_big_eval(image, w, p, opts=opts) - offset


# Foliation, residues, divisor ------------------------------------------------

def null_foliation_residual(trajectory, p, indices=None, opts=DEFAULT_OPTIONS):
    """
    Largest |omega(tangent, e_k)| over samples and coordinate vectors e_k.

    The tangent (dy/dtau, dz/dtau, 1), or (dU/dt, dX/dt, 1), is differenced
    from five neighbouring samples.
    """
    n = len(trajectory)
    indices = range(2, n - 2) if indices is None else indices
    names = COORDINATES[trajectory.chart]
    columns = np.column_stack([trajectory.component(name) for name in names[:2]])
    worst = 0.0
    for k in indices:
        if k < 2 or k > n - 3:
            raise InvalidParameter(f"sample {k} has no two-sided stencil")
        nodes = trajectory.bases[k - 2:k + 3]
        slopes = derivatives_at(nodes[2], nodes, columns[k - 2:k + 3], order=1)[1]
        tangent = np.array([slopes[0], slopes[1], 1], dtype=complex)
        W = omega_matrix(trajectory.state(k), p, opts)
        worst = max(worst, float(np.max(np.abs(W @ tangent))))
    logger.debug("null_foliation_residual over %d samples: %.3g", len(indices), worst)
    return worst


@dataclass(frozen=True)
class LaurentFit:
    """Coefficients of w^-3, w^-2 and w^-1 fitted on a circle."""

    c_minus3: complex
    c_minus2: complex
    c_minus1: complex


def omega_j_laurent(j, tau, radius=1e-2, points=16, opts=DEFAULT_OPTIONS):
    """
    Laurent coefficients at z = -T_j/2 of the dz^3 coefficient of omega_j
    after the substitution dtau -> 4 pi i dz^2, i.e. of 2 wp_z(z + T_j/2).
    """
    j = HalfPeriodIndex(j)
    tau = as_tau(tau)
    centre = -j.value(tau)
    w = radius * np.exp(2j * PI * np.arange(points) / points)
    values = np.array([KODAIRA_SPENCER / TWO_PI_I * wp_z(centre + wk + j.value(tau), tau, opts) for wk in w])
    return LaurentFit(*(complex(np.mean(values * w ** k)) for k in (3, 2, 1)))


def omega_j_residue(j, tau, radius=1e-2, points=16, opts=DEFAULT_OPTIONS):
    """Leading Laurent coefficient of omega_j at its divisor; equals -4."""
    return omega_j_laurent(j, tau, radius, points, opts).c_minus3


def divisor_point(z, tau, opts=DEFAULT_OPTIONS):
    """The point of {2 pi i y + theta_z/theta = 0} over (z, tau)."""
    state = EllipticState(z, 0, tau)
    return EllipticState(z, -_jet(state, opts).dz / TWO_PI_I, tau)


def divisor_tangents(state, opts=DEFAULT_OPTIONS):
    """
    Two tangent vectors spanning the tangent plane of the divisor U = 0.

    Elliptic chart: graph of y = -L(z, tau)/(2 pi i), L = theta_z/theta.
    Algebraic chart: d/dX and d/dt.
    """
    if state.chart == "algebraic":
        return TangentVector((0, 1, 0), "algebraic"), TangentVector((0, 0, 1), "algebraic")
    jet = _jet(state, opts)
    dL_dz = jet.dzz - jet.dz ** 2
    dL_dtau = jet.dzdtau - jet.dz * jet.dtau
    return (
        TangentVector((-dL_dz / TWO_PI_I, 1, 0)),
        TangentVector((-dL_dtau / TWO_PI_I, 0, 1)),
    )


def nu_eval(state, v, opts=DEFAULT_OPTIONS):
    """The vertical 1-form nu = (2 pi i y + theta_z/theta) dz on a vector."""
    _check_chart(state, v)
    return (TWO_PI_I * state.y + _jet(state, opts).dz) * v.components[1]


def vertical_part_residual(state, v1, v2, step=DEFAULT_STEP, opts=DEFAULT_OPTIONS):
    """
    omega at alphas = 0 on two vertical vectors minus the fibrewise exterior
    derivative of nu, differenced in y and z at fixed tau.
    """
    for v in (v1, v2):
        _check_chart(state, v)
        if v.components[2] != 0:
            raise InvalidParameter(f"{v.components} is not vertical")
    coords = _coords(state)

    def coefficient(c):
        s = _state_at("elliptic", c, state)
        return np.array([TWO_PI_I * s.y + _jet(s, opts).dz])

    d_nu = complex(_partial(coefficient, coords, 0, step)[0])
    a, b = v1.components, v2.components
    vertical = d_nu * (a[0] * b[1] - a[1] * b[0])
    return omega_eval(state, v1, v2, ZERO_PARAMS, opts) - vertical
