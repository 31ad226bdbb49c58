"""
Verification suites.

Each check draws its samples from the generator it is handed, returns one
non-negative residual and carries the statement it reproduces as its anchor.
Checks register themselves per suite with the @check decorator.
"""
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from elliptic_core import (
    MODULAR_CONSTANT,
    TWO_PI_I,
    HalfPeriodIndex,
    addition_residual,
    apply_modular,
    constant_c,
    eisenstein_g2,
    g2_coefficients,
    half_period_values,
    heat_residual,
    lattice_distance,
    theta_modular_ratio,
    theta_v,
    theta_zero_distance,
    wp,
    wp_lattice_sum,
    wp_z,
)
from hamiltonian_forms import (
    DIVISOR_PARAMS,
    ZERO_PARAMS,
    TangentVector,
    closedness_residual,
    divisor_point,
    divisor_tangents,
    exactness_residual,
    invariance_residual,
    invariance_scale,
    null_foliation_residual,
    omega0,
    omega0_eval,
    omega_big,
    omega_big_chart_residual,
    omega_big_invariance_residual,
    omega_eval,
    omega_j_laurent,
    omega_matrix,
    vertical_part_residual,
)
from integrator import IntegratorConfig, PathSpec
from picard_fuchs import derivatives_at, mu_identity_residual, mu_invariant, mu_residual, periods_residual
from pvi_dynamics import (
    HITCHIN,
    P2,
    PICARD,
    AlgebraicState,
    EllipticState,
    PainleveParams,
    Trajectory,
    convert_state,
    convert_trajectory,
    flow_residual,
    hamiltonian,
    hamiltonian_dtau,
    integrate,
    rhs_algebraic,
    rhs_elliptic,
)
from symmetry_transforms import (
    OBSERVABLE_H,
    OBSERVABLE_U,
    OBSERVABLE_X,
    ModularElement,
    WElement,
    classify,
    gamma2_act,
    inversion,
    landin,
    landin_identity_residual,
    landin_map,
    okamoto_D,
    replay_witness,
    shift_zero_section,
    transform_trajectory,
    w_act,
)
from uniformization import (
    BranchChoice,
    abelian_quadrature,
    curve_residual,
    dx_over_y_residual,
    invert_lambda,
    lambda_derivative_residual,
    modular_lambda,
    periods,
    phi,
    pullback_residual,
    reduce_modulo_periods,
    z_from_point,
)

logger = logging.getLogger(__name__)

SUITES = {}
SUITE_NAMES = ("elliptic", "uniformization", "picard_fuchs", "dynamics", "forms", "symmetries", "all")

GENERIC = PainleveParams.from_alphas(0.1, 0.05, 0.2, 0.3)
REFERENCE_POINTS = {"p2": P2, "hitchin": HITCHIN, "generic": GENERIC}
TAU_START = 0.1 + 1.0j
TAU_END = 0.1 + 1.1j
SAMPLE_CONFIG = IntegratorConfig(sample_step=0.002)


@dataclass(frozen=True)
class Check:
    """One residual check; passes when residual <= threshold (or >= for negative controls)."""

    name: str
    anchor: str
    threshold: float
    func: object
    comparison: str = "<="


def check(suite, name, anchor, threshold, comparison="<="):
    def register(func):
        SUITES.setdefault(suite, []).append(Check(f"{suite}.{name}", anchor, threshold, func, comparison))
        return func
    return register


def suite_checks(name):
    """Checks of one suite, or of every suite for "all"."""
    if name == "all":
        return [c for suite in SUITE_NAMES[:-1] for c in SUITES.get(suite, [])]
    return list(SUITES[name])


# Sampling helpers ------------------------------------------------------------

def _taus(rng, count, im_range=(0.5, 2.0)):
    return [complex(rng.uniform(-0.5, 0.5), rng.uniform(*im_range)) for _ in range(count)]


def _clear(z, tau, clearance):
    """z keeps its distance from every half-period translate of the lattice and from the theta zero."""
    near_pole = min(lattice_distance(z + HalfPeriodIndex(j).value(tau), tau) for j in range(4))
    return near_pole > clearance and theta_zero_distance(z, tau) > clearance


def _points(rng, tau, count, clearance=0.1):
    points = []
    while len(points) < count:
        z = rng.uniform(-0.45, 0.45) + rng.uniform(-0.45, 0.45) * tau
        if _clear(z, tau, clearance):
            points.append(complex(z))
    return points


def _elliptic_state(rng):
    tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.5))
    z = _points(rng, tau, 1)[0]
    return EllipticState(z, complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), tau)


def _vector(rng, chart="elliptic", vertical=False):
    components = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    if vertical:
        components[2] = 0
    return TangentVector(tuple(components), chart)


def _algebraic_state(rng):
    while True:
        t = complex(rng.uniform(0.2, 0.8), rng.uniform(-0.3, 0.3))
        X = complex(rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 0.5))
        if min(abs(X), abs(X - 1), abs(X - t)) > 0.15:
            Y = np.sqrt(complex(X * (X - 1) * (X - t)))
            return AlgebraicState(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), X, Y, t)


_GENERATORS = (ModularElement(1, 2, 0, 1), ModularElement(1, 0, 2, 1), ModularElement(-1, 0, 0, -1))


def _modular_element(rng, tau, min_im=0.1, length=3):
    """A random element of Gamma(2) x Z^2 whose image of tau stays above min_im."""
    for _ in range(100):
        g = ModularElement.identity()
        for _ in range(length):
            h = _GENERATORS[rng.integers(len(_GENERATORS))]
            g = g * (h.inverse() if rng.integers(2) else h)
        if max(abs(x) for x in g.matrix) > 5:
            continue
        if apply_modular(g.matrix, 0, tau)[1].tau.imag >= min_im:
            m, n = (int(k) for k in rng.integers(-2, 3, size=2))
            return g * ModularElement.shift(m, n)
    return ModularElement.shift(1, 0)


def _gamma2_element(rng, tau, min_im=0.05, bound=5):
    """A random non-trivial element of Gamma(2) with |c|, |d| <= bound and Im(gamma tau) >= min_im."""
    for _ in range(200):
        g = ModularElement.identity()
        for _ in range(int(rng.integers(1, 5))):
            h = _GENERATORS[rng.integers(len(_GENERATORS))]
            g = g * (h.inverse() if rng.integers(2) else h)
        if abs(g.c) > bound or abs(g.d) > bound or g.matrix in ((1, 0, 0, 1), (-1, 0, 0, -1)):
            continue
        if apply_modular(g.matrix, 0, tau)[1].tau.imag >= min_im:
            return g
    return ModularElement(1, 2, 0, 1)


def _w_element(rng):
    shift = [int(k) for k in rng.integers(-2, 3, size=4)]
    shift[3] += sum(shift) % 2
    return WElement(tuple(int(s) for s in rng.choice((1, -1), 4)), tuple(int(k) for k in rng.permutation(4)),
                    tuple(shift))


@functools.lru_cache(maxsize=None)
def reference_trajectory(name):
    """Elliptic-chart solution from (z, y) = (0.2 + 0.3 tau, 0.1 + 0.05i) along a short tau-segment."""
    state = EllipticState(0.2 + 0.3 * TAU_START, 0.1 + 0.05j, TAU_START)
    return integrate("elliptic", state, PathSpec.segment(TAU_START, TAU_END), REFERENCE_POINTS[name], SAMPLE_CONFIG)


@functools.lru_cache(maxsize=None)
def picard_trajectory(e=0.25, f=0.1):
    """Solution of the alpha = 0 equation on the section z = e tau + f."""
    state = EllipticState(e * TAU_START + f, e, TAU_START)
    return integrate("elliptic", state, PathSpec.segment(TAU_START, TAU_START + 0.3j), PICARD, SAMPLE_CONFIG)


def _relative(a, b):
    return abs(a - b) / (1 + abs(b))


# Elliptic functions --------------------------------------------------------------

@check("elliptic", "modular_constant", "the Wronskian ratio C(tau) is the constant -9 pi^2", 1e-8)
def _modular_constant(rng, quick):
    return max(_relative(constant_c(tau), MODULAR_CONSTANT) for tau in _taus(rng, 4 if quick else 20))


@check("elliptic", "weierstrass_cubic", "wp_z^2 = 4 (wp - e1)(wp - e2)(wp - e3)", 1e-9)
def _weierstrass_cubic(rng, quick):
    grid = np.linspace(-0.4, 0.4, 4 if quick else 10)
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        e1, e2, e3 = half_period_values(tau)
        for s in grid:
            for u in grid:
                z = s + u * tau
                value, slope = wp(z, tau), wp_z(z, tau)
                cubic = 4 * (value - e1) * (value - e2) * (value - e3)
                worst = max(worst, abs(slope ** 2 - cubic) / (1 + abs(slope) ** 2))
    return worst


@check("elliptic", "half_period_sum", "e1 + e2 + e3 = 0", 1e-12)
def _half_period_sum(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 4 if quick else 20):
        e = half_period_values(tau)
        worst = max(worst, abs(sum(e)) / (1 + max(abs(x) for x in e)))
    return worst


@check("elliptic", "heat_equation", "theta solves the heat equation theta_tau = theta_zz/(4 pi i)", 1e-9)
def _heat_equation(rng, quick):
    return max(abs(heat_residual(z, tau))
               for tau in _taus(rng, 2 if quick else 5)
               for z in _points(rng, tau, 4 if quick else 20))


@check("elliptic", "lattice_sum", "wp agrees with its defining lattice sum", 1e-4)
def _lattice_sum(rng, quick):
    tau = _taus(rng, 1)[0]
    return max(_relative(wp_lattice_sum(z, tau), wp(z, tau)) for z in _points(rng, tau, 1 if quick else 3))


@check("elliptic", "addition_formula", "half-period addition formula for wp_z", 1e-8)
def _addition_formula(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        for z in _points(rng, tau, 2 if quick else 5):
            scale = 1 + abs(wp_z(z, tau)) + max(abs(wp_z(z + HalfPeriodIndex(i).value(tau), tau)) for i in (1, 2, 3))
            worst = max(worst, max(abs(addition_residual(z, tau, i)) for i in (1, 2, 3)) / scale)
    return worst


@check("elliptic", "theta_residue", "v has simple poles with residue -1/(2 pi i) at (1 + tau)/2", 1e-8)
def _theta_residue(rng, quick):
    worst = 0.0
    w = 1e-2 * np.exp(TWO_PI_I * np.arange(32) / 32)
    for tau in _taus(rng, 2 if quick else 5):
        centre = (1 + tau) / 2
        residue = np.mean([theta_v(centre + wk, tau) * wk for wk in w])
        worst = max(worst, abs(residue + 1 / TWO_PI_I))
    return worst


@check("elliptic", "g2_q_coefficients", "G2 = -1/24 + sum sigma_1(n) q^n", 1e-8)
def _g2_q_coefficients(rng, quick):
    count, points, radius = 10, 64, 0.5
    k = np.arange(points)
    q = radius * np.exp(TWO_PI_I * k / points)
    values = np.array([eisenstein_g2(kk / points + 1j * math.log(1 / radius) / (2 * math.pi)) for kk in k])
    expected = g2_coefficients(count)
    worst = abs(np.mean(values) + 1 / 24)
    for n in range(1, count + 1):
        worst = max(worst, abs(np.mean(values * q ** -n) - expected[n - 1]))
    return float(worst)


_PSEUDO_MODULAR = ((1, 2, 0, 1), (1, 0, 2, 1), (1, -2, 0, 1), (1, 0, -2, 1), (3, 2, 4, 3), (3, -2, -4, 3))


@check("elliptic", "g2_pseudo_modular", "G2(gamma tau) = j^2 G2(tau) - c j/(4 pi i), j = c tau + d", 1e-9)
def _g2_pseudo_modular(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        g2 = eisenstein_g2(tau)
        for matrix in _PSEUDO_MODULAR:
            image = apply_modular(matrix, 0, tau)[1]
            if image.tau.imag < 0.15:
                continue
            c, d = matrix[2], matrix[3]
            j = c * tau + d
            residual = eisenstein_g2(image) - j * j * g2 + c * j / (2 * TWO_PI_I)
            worst = max(worst, abs(residual) / (1 + abs(j) ** 2 * abs(g2)))
    return worst


@check("elliptic", "modular_covariance", "e_i and wp have weight 2, wp_z weight 3 under Gamma(2)", 1e-8)
def _modular_covariance(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        e = half_period_values(tau)
        points = _points(rng, tau, 2 if quick else 4)
        for _ in range(5):
            g = _gamma2_element(rng, tau)
            j = g.c * tau + g.d
            image = apply_modular(g.matrix, 0, tau)[1]
            for moved, value in zip(half_period_values(image), e):
                worst = max(worst, _relative(moved, j ** 2 * value))
            for z in points:
                z_image = z / j
                worst = max(worst, _relative(wp(z_image, image), j ** 2 * wp(z, tau)),
                            _relative(wp_z(z_image, image), j ** 3 * wp_z(z, tau)))
    return worst


@check("elliptic", "theta_modular_law", "theta transforms under Gamma(2) up to an eighth root of unity", 1e-9)
def _theta_modular_law(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        points = _points(rng, tau, 2 if quick else 4)
        for _ in range(5):
            g = _gamma2_element(rng, tau)
            for z in points:
                r = theta_modular_ratio(g.matrix, z, tau)
                worst = max(worst, abs(abs(r) - 1), abs(r ** 8 - 1))
    return worst


@check("elliptic", "v_covariance", "v(z/j, gamma tau) = j v(z, tau) - c z and v(z + m tau + n) = v + m", 1e-9)
def _v_covariance(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        points = _points(rng, tau, 2 if quick else 4)
        for _ in range(5):
            g = _gamma2_element(rng, tau)
            j = g.c * tau + g.d
            for z in points:
                z_image, image = apply_modular(g.matrix, z, tau)
                worst = max(worst, _relative(theta_v(z_image, image), j * theta_v(z, tau) - g.c * z))
        for z in points:
            m, n = (int(k) for k in rng.integers(-3, 4, size=2))
            worst = max(worst, _relative(theta_v(z + m * tau + n, tau), theta_v(z, tau) + m))
    return worst


# Uniformization ---------------------------------------------------------------

@check("uniformization", "lambda_at_i", "lambda(i) = 1/2", 1e-10)
def _lambda_at_i(rng, quick):
    return abs(modular_lambda(1j) - 0.5)


@check("uniformization", "invert_lambda", "lambda(invert_lambda(t)) = t", 1e-8)
def _invert_lambda(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        t = complex(rng.uniform(0.15, 0.85), rng.uniform(-0.4, 0.4))
        worst = max(worst, abs(modular_lambda(invert_lambda(t)) - t))
    return worst


@check("uniformization", "curve_membership", "phi(z) lies on Y^2 = X(X-1)(X-t)", 1e-10)
def _curve_membership(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        for z in _points(rng, tau, 4 if quick else 20):
            p = phi(z, tau)
            worst = max(worst, abs(curve_residual(p.X, p.Y, p.t)) / (1 + abs(p.X) ** 3))
    return worst


@check("uniformization", "round_trip", "z_from_point inverts phi modulo the lattice", 1e-8)
def _round_trip(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        for z in _points(rng, tau, 3 if quick else 10):
            worst = max(worst, lattice_distance(z_from_point(phi(z, tau), tau) - z, tau))
    return worst


@check("uniformization", "pullback", "dX/Y = 2 (e2 - e1)^(1/2) dz on each fibre", 1e-8)
def _pullback(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        root = BranchChoice.principal(tau).sqrt_e21
        for z in _points(rng, tau, 3 if quick else 10):
            worst = max(worst, abs(pullback_residual(z, tau)) / abs(2 * root))
    return worst


@check("uniformization", "lambda_derivative", "(i/pi)(e2 - e1) dtau = -dt/(t(t-1))", 1e-7)
def _lambda_derivative(rng, quick):
    return max(abs(lambda_derivative_residual(tau)) for tau in _taus(rng, 3 if quick else 10))


@check("uniformization", "dx_over_y", "dX/Y = 2 (e2 - e1)^(1/2) [dz + (1/(2 pi i)) theta_z/theta dtau]", 1e-6)
def _dx_over_y(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5, im_range=(0.8, 2.0)):
        root = BranchChoice.principal(tau).sqrt_e21
        for z in _points(rng, tau, 2 if quick else 5):
            dz, dtau = complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2))
            worst = max(worst, abs(dx_over_y_residual(z, tau, dz, dtau)) / (1 + abs(root)))
    return worst


@check("uniformization", "abelian_quadrature", "the Abelian integral equals 2 (e2 - e1)^(1/2) z modulo periods", 1e-6)
def _abelian_quadrature(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5, im_range=(0.8, 2.0)):
        pi1, pi2 = periods(tau)
        for z in _points(rng, tau, 2 if quick else 4, clearance=0.15):
            end = z + 0.05
            start_point, end_point = phi(z, tau), phi(end, tau)
            integral, Y = abelian_quadrature(start_point, end_point)
            if abs(Y + end_point.Y) < abs(Y - end_point.Y):
                end = -end
            difference = integral - pi1 * (end - z)
            worst = max(worst, abs(reduce_modulo_periods(difference, pi1, pi2)))
    return worst


# Picard-Fuchs ----------------------------------------------------------------

@check("picard_fuchs", "periods_annihilated", "L_t annihilates both periods of dx/y", 1e-6)
def _periods_annihilated(rng, quick):
    worst = 0.0
    for s in np.linspace(0.2, 0.8, 3 if quick else 10):
        worst = max(worst, *(abs(r) for r in periods_residual(complex(s, 0.1))))
    return worst


def _midpoint(trajectory):
    return trajectory.bases[len(trajectory) // 2]


@check("picard_fuchs", "mu_equation", "t(1-t) L_t of the Abelian integral is the PVI potential term", 1e-5)
def _mu_equation(rng, quick):
    names = ("p2",) if quick else ("p2", "hitchin", "generic")
    return max(abs(mu_residual(reference_trajectory(n), REFERENCE_POINTS[n], _midpoint(reference_trajectory(n))))
               for n in names)


@check("picard_fuchs", "mu_equation_classical", "the mu-equation holds for solutions carried to the classical chart",
       1e-5)
def _mu_equation_classical(rng, quick):
    worst = 0.0
    for n in ("p2",) if quick else ("p2", "generic"):
        classical = convert_trajectory(reference_trajectory(n), "classical", tau_seed=TAU_START)
        worst = max(worst, abs(mu_residual(classical, REFERENCE_POINTS[n], _midpoint(classical), tau_seed=TAU_START)))
    return worst


@check("picard_fuchs", "mu_equation_control", "a deformed non-solution violates the mu-equation", 1e-3, ">=")
def _mu_equation_control(rng, quick):
    classical = convert_trajectory(reference_trajectory("p2"), "classical", tau_seed=TAU_START)
    X, Xdot = classical.component("X"), classical.component("Xdot")
    factor = 1 + 0.05 * classical.bases
    deformed = Trajectory("classical", classical.bases, np.column_stack([X * factor, Xdot * factor + 0.05 * X]),
                          classical.errors, P2)
    return abs(mu_residual(deformed, P2, _midpoint(deformed), tau_seed=TAU_START))


@check("picard_fuchs", "mu_identity", "t(1-t) L_t of the Abelian integral = -2 pi^2 (e2 - e1)^(-3/2) d^2z/dtau^2",
       1e-5)
def _mu_identity(rng, quick):
    names = ("p2",) if quick else ("p2", "hitchin", "generic")
    return max(abs(mu_identity_residual(reference_trajectory(n), _midpoint(reference_trajectory(n)))) for n in names)


@check("picard_fuchs", "mu_bilinear", "the mu-expression is bilinear in the rescalings of sigma and omega", 1e-5)
def _mu_bilinear(rng, quick):
    trajectory = reference_trajectory("p2")
    residual = mu_invariant(trajectory, _midpoint(trajectory), omega_scale=lambda t: 1 + t * t,
                            sigma_scale=lambda t: 2 - t)
    return abs(residual)


# Dynamics --------------------------------------------------------------------

@check("dynamics", "picard_lines", "alpha = 0 solutions are the sections z = e tau + f, y = e", 1e-9)
def _picard_lines(rng, quick):
    trajectory = picard_trajectory()
    z, y = trajectory.component("z"), trajectory.component("y")
    return float(max(np.max(np.abs(z - (0.25 * trajectory.bases + 0.1))), np.max(np.abs(y - 0.25))))


@check("dynamics", "p2_family", "U = 0 is invariant at classical parameters (0, 0, 0, 0)", 1e-9)
def _p2_family(rng, quick):
    params = PainleveParams.from_classical(0, 0, 0, 0)
    X0, t0 = 0.3 + 0.2j, 0.4 + 0.1j
    state = AlgebraicState(0, X0, np.sqrt(X0 * (X0 - 1) * (X0 - t0)), t0)
    trajectory = integrate("algebraic", state, PathSpec.segment(t0, t0 + 0.1), params, SAMPLE_CONFIG)
    U, X = trajectory.component("U"), trajectory.component("X")
    return float(max(np.max(np.abs(U)), np.max(np.abs(X - X0))))


@check("dynamics", "reduced_coefficients",
       "alphas (1/2,0,0,0) and (2,0,0,0) give d^2z/dtau^2 = -wp_z/(8 pi^2) and -wp_z/(2 pi^2)", 1e-14)
def _reduced_coefficients(rng, quick):
    worst = 0.0
    for _ in range(3):
        s = _elliptic_state(rng)
        slope = wp_z(s.z, s.tau)
        for alpha, coefficient in ((0.5, -1 / (8 * math.pi ** 2)), (2.0, -1 / (2 * math.pi ** 2))):
            value = rhs_elliptic(s, PainleveParams.from_alphas(alpha, 0, 0, 0))
            worst = max(worst, abs(value - coefficient * slope) / abs(coefficient * slope))
    return worst


_EQUIVALENCE_POINTS = (P2, HITCHIN, GENERIC, PainleveParams.from_alphas(0.5, 0, 0, 0),
                       PainleveParams.from_alphas(0.3, 0.1, 0.05, 0.4))
_EQUIVALENCE_STARTS = ((0.2 + 0.3 * TAU_START, 0.1 + 0.05j), (-0.15 + 0.2 * TAU_START, -0.2),
                       (0.3 - 0.25 * TAU_START, 0.05j))


def chart_equivalence_residual(params, z0, y0, tau0=TAU_START, length=0.1):
    """
    Integrate one solution in all three charts and compare end states.

    The elliptic solution runs over [tau0, tau0 + length]; its converted start
    seeds the algebraic and classical integrations over the straight t-segment
    between the converted endpoints.
    """
    elliptic = integrate("elliptic", EllipticState(z0, y0, tau0), PathSpec.segment(tau0, tau0 + length),
                         params, SAMPLE_CONFIG)
    branch = BranchChoice.principal(tau0)
    start = convert_state(elliptic.state(0), "algebraic", branch=branch)
    for tau in elliptic.bases[1:]:
        branch = branch.continue_to(tau)
    end = convert_state(elliptic.end_state, "algebraic", branch=branch)
    t_path = PathSpec.segment(start.t, end.t)

    algebraic = integrate("algebraic", start, t_path, params, SAMPLE_CONFIG).end_state
    classical = integrate("classical", convert_state(start, "classical"), t_path, params, SAMPLE_CONFIG).end_state
    expected_classical = convert_state(end, "classical")
    return max(
        _relative(algebraic.X, end.X),
        _relative(algebraic.U, end.U),
        _relative(algebraic.Y, end.Y),
        _relative(classical.X, expected_classical.X),
        _relative(classical.Xdot, expected_classical.Xdot),
    )


@check("dynamics", "chart_equivalence", "the elliptic, classical and algebraic flows are one equation", 1e-6)
def _chart_equivalence(rng, quick):
    points = _EQUIVALENCE_POINTS[:2] if quick else _EQUIVALENCE_POINTS
    starts = _EQUIVALENCE_STARTS[:1] if quick else _EQUIVALENCE_STARTS
    return max(chart_equivalence_residual(p, z0, y0) for p in points for z0, y0 in starts)


@check("dynamics", "energy_balance", "dH/dtau along a solution equals the partial tau-derivative of H", 1e-6)
def _energy_balance(rng, quick):
    worst = 0.0
    for name in (("p2",) if quick else ("p2", "hitchin", "generic")):
        trajectory, params = reference_trajectory(name), REFERENCE_POINTS[name]
        energies = np.array([hamiltonian(trajectory.state(k), params) for k in range(len(trajectory))])
        for k in range(2, len(trajectory) - 2, 6):
            nodes = trajectory.bases[k - 2:k + 3]
            slope = derivatives_at(nodes[2], nodes, energies[k - 2:k + 3], order=1)[1]
            expected = hamiltonian_dtau(trajectory.state(k), params)
            worst = max(worst, _relative(slope, expected))
    return worst


@check("dynamics", "reversibility", "integrating forward then back returns the initial state", 1e-8)
def _reversibility(rng, quick):
    trajectory = reference_trajectory("hitchin")
    path = PathSpec.segment(TAU_END, TAU_START)
    back = integrate("elliptic", trajectory.end_state, path, HITCHIN, SAMPLE_CONFIG).end_state
    start = trajectory.state(0)
    return max(_relative(back.z, start.z), _relative(back.y, start.y))


@check("dynamics", "flow_consistency", "recorded samples satisfy the elliptic equation", 1e-6)
def _flow_consistency(rng, quick):
    names = ("p2",) if quick else tuple(REFERENCE_POINTS)
    return max(flow_residual(reference_trajectory(n), REFERENCE_POINTS[n]) for n in names)


# 2-forms ---------------------------------------------------------------------

_FORM_POINTS = (P2, HITCHIN, GENERIC)
_PLANES = (("y", "z"), ("y", "tau"), ("z", "tau"))


@check("forms", "exactness", "d Omega = omega in the elliptic chart", 1e-6)
def _exactness(rng, quick):
    worst = 0.0
    for _ in range(2 if quick else 10):
        s = _elliptic_state(rng)
        for p in _FORM_POINTS:
            scale = 1 + float(np.max(np.abs(omega_matrix(s, p))))
            worst = max(worst, max(abs(exactness_residual(s, p, plane)) for plane in _PLANES) / scale)
    return worst


@check("forms", "closedness", "d omega = 0", 1e-6)
def _closedness(rng, quick):
    worst = 0.0
    for _ in range(2 if quick else 10):
        s = _elliptic_state(rng)
        for p in _FORM_POINTS:
            worst = max(worst, abs(closedness_residual(s, p)) / (1 + float(np.max(np.abs(omega_matrix(s, p))))))
    return worst


@check("forms", "omega_invariance", "omega is invariant under Gamma(2) x Z^2", 1e-8)
def _omega_invariance(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _elliptic_state(rng)
        g = _modular_element(rng, s.base)
        v1, v2 = _vector(rng), _vector(rng)
        act = functools.partial(gamma2_act, g)
        scale = invariance_scale(s, P2, act, v1, v2)
        worst = max(worst, abs(invariance_residual(s, P2, act, v1, v2)) / scale)
    return worst


@check("forms", "omega_big_invariance", "Omega (with the 2 pi i G2 dtau term) is invariant under Gamma(2) x Z^2",
       1e-7)
def _omega_big_invariance(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _elliptic_state(rng)
        g = _modular_element(rng, s.base)
        v = _vector(rng)
        image = gamma2_act(g, s)
        scale = 1 + float(np.max(np.abs(omega_big(image, P2)))) * (1 + abs(g.c * s.base + g.d)) ** 2
        worst = max(worst, abs(omega_big_invariance_residual(s, P2, lambda x: gamma2_act(g, x), v)) / scale)
    return worst


@check("forms", "g2_term_required", "dropping G2 breaks the invariance of Omega", 1e-3, ">=")
def _g2_term_required(rng, quick):
    s = EllipticState(0.2 + 0.3 * TAU_START, 0.1, TAU_START)
    g = ModularElement(1, 0, 2, 1)
    v = TangentVector((0, 0, 1))
    return abs(omega_big_invariance_residual(s, P2, lambda x: gamma2_act(g, x), v, include_g2=False))


@check("forms", "chart_offset", "elliptic and algebraic Omega differ by a closed dtau term", 1e-6)
def _chart_offset(rng, quick):
    worst = 0.0
    for _ in range(2 if quick else 6):
        s = _elliptic_state(rng)
        v = _vector(rng)
        scale = 1 + float(np.max(np.abs(omega_big(s, P2)))) * float(np.max(np.abs(v.array())))
        worst = max(worst, abs(omega_big_chart_residual(s, v, P2)) / scale)
    return worst


@check("forms", "null_foliation", "solutions are leaves of the null foliation of omega", 1e-6)
def _null_foliation(rng, quick):
    worst = null_foliation_residual(picard_trajectory(), ZERO_PARAMS)
    for name in (("p2",) if quick else tuple(REFERENCE_POINTS)):
        worst = max(worst, null_foliation_residual(reference_trajectory(name), REFERENCE_POINTS[name]))
    return worst


@check("forms", "null_foliation_mismatch", "a solution is not a leaf for other parameters", 1e-3, ">=")
def _null_foliation_mismatch(rng, quick):
    return null_foliation_residual(picard_trajectory(), HITCHIN)


@check("forms", "omega_j_residue", "omega_j restricted by dtau = 4 pi i dz^2 has leading coefficient -4", 1e-6)
def _omega_j_residue(rng, quick):
    worst = 0.0
    for tau in _taus(rng, 2 if quick else 5):
        for j in range(4):
            fit = omega_j_laurent(j, tau)
            worst = max(worst, abs(fit.c_minus3 + 4), abs(fit.c_minus2), abs(fit.c_minus1))
    return worst


@check("forms", "vertical_part", "omega at alphas = 0 restricts to d nu on each fibre", 1e-8)
def _vertical_part(rng, quick):
    worst = 0.0
    for _ in range(2 if quick else 8):
        s = _elliptic_state(rng)
        v1, v2 = _vector(rng, vertical=True), _vector(rng, vertical=True)
        worst = max(worst, abs(vertical_part_residual(s, v1, v2)) / (1 + abs(omega_eval(s, v1, v2, ZERO_PARAMS))))
    return worst


def _divisor_states(rng, count):
    states = []
    while len(states) < count:
        tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.5))
        z = _points(rng, tau, 1, clearance=0.15)[0]
        states.append(divisor_point(z, tau))
    return states


def _divisor_value(s, p):
    v1, v2 = divisor_tangents(s)
    scale = 1 + float(np.max(np.abs(omega_matrix(s, p)))) * float(np.max(np.abs(v1.array()))) \
        * float(np.max(np.abs(v2.array())))
    return abs(omega_eval(s, v1, v2, p)) / scale


@check("forms", "divisor_vanishing", "omega(0, 0, 0, 1/2) vanishes on the divisor U = 0", 1e-9)
def _divisor_vanishing(rng, quick):
    return max(_divisor_value(s, DIVISOR_PARAMS) for s in _divisor_states(rng, 3 if quick else 10))


@check("forms", "divisor_transversal", "other omegas do not vanish identically on the divisor U = 0", 1e-3, ">=")
def _divisor_transversal(rng, quick):
    states = _divisor_states(rng, 3 if quick else 10)
    return min(max(abs(omega_eval(s, *divisor_tangents(s), p)) for s in states) for p in (ZERO_PARAMS, P2, HITCHIN))


@check("forms", "omega0_on_divisor", "Omega_0 vanishes on the divisor and equals Omega at (0, 0, 0, 1/2)", 1e-9)
def _omega0_on_divisor(rng, quick):
    worst = 0.0
    for s in _divisor_states(rng, 2 if quick else 6):
        v = _vector(rng)
        worst = max(worst, abs(omega0_eval(s, v)) / (1 + abs(TWO_PI_I * s.y) ** 2))
    for _ in range(2 if quick else 6):
        s = _elliptic_state(rng)
        big, small = omega_big(s, DIVISOR_PARAMS), omega0(s)
        worst = max(worst, float(np.max(np.abs(big - small))) / (1 + float(np.max(np.abs(small)))))
    return worst


@check("forms", "algebraic_divisor", "in the algebraic chart omega(0, 0, 0, 1/2) vanishes on U = 0", 1e-12)
def _algebraic_divisor(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _algebraic_state(rng)
        s = AlgebraicState(0, s.X, s.Y, s.t)
        v1, v2 = divisor_tangents(s)
        worst = max(worst, abs(omega_eval(s, v1, v2, DIVISOR_PARAMS)) + abs(omega0_eval(s, v1)))
    return worst


# Symmetries ------------------------------------------------------------------

@check("symmetries", "landin_identity", "wp_z(z, tau/2) = wp_z(z, tau) + wp_z(z + tau/2, tau)", 1e-9)
def _landin_identity(rng, quick):
    worst = 0.0
    grid = np.linspace(-0.4, 0.4, 4 if quick else 8)
    for tau in (1.6j, 0.3 + 1.2j):
        for s in grid:
            for u in grid:
                z = s + u * tau
                if min(lattice_distance(z, tau / 2), lattice_distance(z, tau), lattice_distance(z + tau / 2, tau)) < 0.1:
                    continue
                worst = max(worst, abs(landin_identity_residual(z, tau)) / (1 + abs(wp_z(z, tau / 2))))
    return worst


@check("symmetries", "landin_parameters", "(a0, a1, a0, a1) <-> (4 a0, 4 a1, 0, 0) on the alphas", 1e-14)
def _landin_parameters(rng, quick):
    cases = (
        (PainleveParams.from_alphas(0.125, 0, 0.125, 0), "forward", (0.5, 0, 0, 0)),
        (HITCHIN, "forward", (0.5, 0.5, 0, 0)),
        (PainleveParams.from_alphas(2, 0, 0, 0), "inverse", (0.5, 0, 0.5, 0)),
        (P2, "inverse", (1 / 32, 1 / 32, 1 / 32, 1 / 32)),
    )
    return max(max(abs(a - b) for a, b in zip(landin(p, d).alphas, expected)) for p, d, expected in cases)


@check("symmetries", "landin_transport", "the Landin map carries solutions to solutions", 1e-6)
def _landin_transport(rng, quick):
    worst = 0.0
    for name, direction in (("hitchin", "forward"), ("p2", "inverse")):
        image, _ = landin_map(reference_trajectory(name), direction)
        worst = max(worst, flow_residual(image, image.params))
    return worst


@check("symmetries", "gamma2_transport", "Gamma(2) x Z^2 carries solutions to solutions", 1e-6)
def _gamma2_transport(rng, quick):
    worst = 0.0
    elements = (ModularElement(1, 0, 2, 1, 1, 0), ModularElement(1, 2, 0, 1, 0, 1), ModularElement(-1, 0, 0, -1, 1, 1))
    for g in elements[:1] if quick else elements:
        image = transform_trajectory(reference_trajectory("generic"), lambda s: gamma2_act(g, s))
        worst = max(worst, flow_residual(image, GENERIC))
    return worst


@check("symmetries", "shift_transport", "moving the zero section relabels the alphas by half-period addition", 1e-6)
def _shift_transport(rng, quick):
    worst = 0.0
    trajectory = reference_trajectory("generic")
    for i in ((2,) if quick else (1, 2, 3)):
        _, params = shift_zero_section(i, trajectory.state(0), GENERIC)
        image = transform_trajectory(trajectory, lambda s: shift_zero_section(i, s, GENERIC)[0], params)
        worst = max(worst, flow_residual(image, params))
    return worst


@check("symmetries", "inversion", "the flows are odd under (y, z) -> (-y, -z) and (U, Y) -> (-U, -Y)", 1e-12)
def _inversion(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _elliptic_state(rng)
        for p in _FORM_POINTS:
            worst = max(worst, _relative(rhs_elliptic(inversion(s), p), -rhs_elliptic(s, p)))
        a = _algebraic_state(rng)
        dX, dU, dY = rhs_algebraic(a, GENERIC)
        iX, iU, iY = rhs_algebraic(inversion(a), GENERIC)
        worst = max(worst, _relative(iX, dX), _relative(iU, -dU), _relative(iY, -dY))
    return worst


@check("symmetries", "group_laws", "Gamma(2) x Z^2 and W compose as groups", 1e-12)
def _group_laws(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _elliptic_state(rng)
        g2 = _modular_element(rng, s.base, min_im=0.3, length=2)
        g1 = _modular_element(rng, gamma2_act(g2, s).base, min_im=0.3, length=2)
        direct = gamma2_act(g1 * g2, s)
        nested = gamma2_act(g1, gamma2_act(g2, s))
        back = gamma2_act(g2.inverse(), gamma2_act(g2, s))
        worst = max(worst, _relative(direct.z, nested.z), _relative(direct.y, nested.y),
                    _relative(direct.base, nested.base), _relative(back.z, s.z), _relative(back.y, s.y))
        a = tuple(Fraction(int(k), 4) for k in rng.integers(-8, 9, size=4))
        w1, w2 = _w_element(rng), _w_element(rng)
        mismatches = (w_act(w1.compose(w2), a) != w_act(w1, w_act(w2, a))) + (w_act(w2.inverse(), w_act(w2, a)) != a)
        worst = max(worst, float(mismatches))
    return worst


CLASSIFICATION_TABLE = (
    ((0, 0, 0, 0), "classical_general"),
    ((0.5, 0.5, 0.5, 0.5), "classical_general"),
    ((0, 0, 0, 1), "one_dim_family"),
    ((1, 0, 0, 0), "one_dim_family"),
    ((0, 0, 0.5, 0.5), "one_dim_family"),
    ((0.25, 0.25, 0.25, 0.25), "one_dim_family"),
    ((0.3, 0.7, 0, 0), "hypergeometric_hyperplane"),
    ((0.123, 0.456, 0.789, 0.1), "unknown"),
)


@check("symmetries", "classification", "solvable a-vectors are recognised up to W and Landin moves", 0)
def _classification(rng, quick):
    mismatches = 0
    for a, tag in CLASSIFICATION_TABLE:
        result = classify(a)
        if result.tag != tag:
            logger.warning("classify(%s) gave %s, expected %s", a, result.tag, tag)
            mismatches += 1
        elif tag != "unknown" and replay_witness(a, result.witness) != result.base_point:
            mismatches += 1
        w = _w_element(rng)
        if classify(w_act(w, [Fraction(x).limit_denominator(1000) for x in a])).tag != tag:
            mismatches += 1
    return mismatches


@check("symmetries", "okamoto_D", "D applied to X and U reproduces the algebraic flow", 1e-12)
def _okamoto_d(rng, quick):
    worst = 0.0
    for _ in range(3 if quick else 10):
        s = _algebraic_state(rng)
        dX, dU, _ = rhs_algebraic(s, GENERIC)
        worst = max(worst, _relative(okamoto_D(OBSERVABLE_X, s, GENERIC), dX),
                    _relative(okamoto_D(OBSERVABLE_U, s, GENERIC), dU))
    return worst


@check("symmetries", "okamoto_h", "D h equals dh/dt along an algebraic-chart solution", 1e-6)
def _okamoto_h(rng, quick):
    params = PainleveParams.from_avec(0.3, 0.2, 0.4, 0.6)
    X0, t0 = 0.3 + 0.2j, 0.4 + 0.1j
    state = AlgebraicState(0.1, X0, np.sqrt(X0 * (X0 - 1) * (X0 - t0)), t0)
    trajectory = integrate("algebraic", state, PathSpec.segment(t0, t0 + 0.05), params,
                           IntegratorConfig(sample_step=0.001))
    values = np.array([OBSERVABLE_H(trajectory.state(k), params) for k in range(len(trajectory))])
    worst = 0.0
    for k in range(2, len(trajectory) - 2, 8 if quick else 3):
        nodes = trajectory.bases[k - 2:k + 3]
        slope = derivatives_at(nodes[2], nodes, values[k - 2:k + 3], order=1)[1]
        worst = max(worst, _relative(slope, okamoto_D(OBSERVABLE_H, trajectory.state(k), params)))
    return worst
