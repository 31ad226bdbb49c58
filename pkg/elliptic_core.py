"""
Weierstrass, theta and Eisenstein functions on the lattice Z + Z*tau.

Every evaluator works in double precision with an explicit truncation
tolerance carried by EvalOptions. Arguments are lattice-reduced into the
fundamental cell before any series is summed, and quasi-periodicity factors
are reapplied afterwards.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from errors import (
    InvalidParameter,
    NonConvergent,
    PoleAtLatticePoint,
    PoleAtThetaZero,
    StepUnderflow,
)

logger = logging.getLogger(__name__)

PI = math.pi
TWO_PI_I = 2j * math.pi
MIN_IM_TAU = 0.05

# -9*pi^2, the value of the modular constant C.
MODULAR_CONSTANT = -9.0 * PI ** 2


@dataclass(frozen=True)
class ModularParameter:
    """A point tau of the upper half-plane."""

    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.imag > 0:
            raise InvalidParameter(f"tau={self.tau} is not in the upper half-plane")

    @property
    def nome(self):
        """exp(pi*i*tau), the nome of the theta series."""
        return cmath.exp(1j * PI * self.tau)

    @property
    def nome_squared(self):
        """exp(2*pi*i*tau), the expansion variable of G2."""
        return cmath.exp(TWO_PI_I * self.tau)


@dataclass(frozen=True)
class EvalOptions:
    """Truncation control for every special-function evaluation.

    Args:
        tolerance: target absolute error of each truncated series
        max_terms: hard cap on the number of series terms
        pole_guard: radius (in lattice-reduced coordinates) inside which
            evaluation at a pole is refused
    """

    tolerance: float = 1e-14
    max_terms: int = 4000
    pole_guard: float = 1e-8

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidParameter(f"tolerance must be positive, got {self.tolerance}")
        if self.max_terms < 1:
            raise InvalidParameter(f"max_terms must be at least 1, got {self.max_terms}")
        if not self.pole_guard > 0:
            raise InvalidParameter(f"pole_guard must be positive, got {self.pole_guard}")


DEFAULT_OPTIONS = EvalOptions()


class HalfPeriodIndex(IntEnum):
    """Index j of the half-period T_j/2 with (T_0..T_3) = (0, 1, tau, 1+tau)."""

    T0 = 0
    T1 = 1
    T2 = 2
    T3 = 3

    @property
    def real_part(self):
        return 0.5 if self in (HalfPeriodIndex.T1, HalfPeriodIndex.T3) else 0.0

    @property
    def tau_part(self):
        """Coefficient of tau in T_j/2, which is also d(T_j/2)/d(tau)."""
        return 0.5 if self in (HalfPeriodIndex.T2, HalfPeriodIndex.T3) else 0.0

    def value(self, tau):
        return self.real_part + self.tau_part * as_tau(tau).tau


@dataclass(frozen=True)
class LatticeReducedPoint:
    """z = z_reduced + shift_m*tau + shift_n with z_reduced in the fundamental cell."""

    z_reduced: complex
    shift_m: int
    shift_n: int


@dataclass(frozen=True)
class ThetaJet:
    """Ratios of theta derivatives to theta at one point."""

    dz: complex
    dzz: complex
    dtau: complex
    dzdtau: complex


def as_tau(tau):
    """Accept either a ModularParameter or a bare complex number."""
    if isinstance(tau, ModularParameter):
        return tau
    return ModularParameter(complex(tau))


def _checked_tau(tau):
    tau = as_tau(tau)
    if tau.tau.imag < MIN_IM_TAU:
        raise NonConvergent(
            f"Im(tau)={tau.tau.imag:.3g} is below {MIN_IM_TAU}; series evaluation refused"
        )
    return tau


def apply_modular(matrix, z, tau):
    """(z/(c*tau+d), (a*tau+b)/(c*tau+d)) for matrix = (a, b, c, d)."""
    a, b, c, d = matrix
    tau = as_tau(tau).tau
    j = c * tau + d
    return z / j, ModularParameter((a * tau + b) / j)


# Lattice reduction -----------------------------------------------------------

def reduce_to_cell(z, tau):
    """
    Reduce z modulo Z + Z*tau into {s + u*tau : s, u in [-1/2, 1/2)}.

    Returns:
        LatticeReducedPoint with z = z_reduced + shift_m*tau + shift_n
    """
    tau = as_tau(tau).tau
    z = complex(z)
    m = math.floor(z.imag / tau.imag + 0.5)
    z1 = z - m * tau
    s = z1.real - (z1.imag / tau.imag) * tau.real
    n = math.floor(s + 0.5)
    return LatticeReducedPoint(z1 - n, m, n)


def _distance_to(points, zr, tau):
    return min(abs(zr - p - a * tau - b) for p in points for a in (-1, 0, 1) for b in (-1, 0, 1))


def lattice_distance(z, tau):
    """Distance from z to the nearest lattice point."""
    tau = as_tau(tau)
    zr = reduce_to_cell(z, tau).z_reduced
    return _distance_to((0.0,), zr, tau.tau)


def theta_zero_distance(z, tau):
    """Distance from z to the nearest zero (1+tau)/2 mod lattice of theta."""
    tau = as_tau(tau)
    zr = reduce_to_cell(z, tau).z_reduced
    return _distance_to(((1 + tau.tau) / 2,), zr, tau.tau)


def _series_length(rate, tolerance, degree=0, scale=1.0):
    """Smallest N with scale * N**degree * exp(-rate*N) below tolerance."""
    target = -math.log(tolerance) + math.log(max(scale, 1.0))
    n = max(1, math.ceil(target / rate))
    for _ in range(4):
        n = max(1, math.ceil((target + degree * math.log(n + 1)) / rate))
    return n + 2


# Weierstrass functions -------------------------------------------------------

def _wp_series(zr, tau, opts, derivative):
    """q-expansion of wp (or wp_z) at a lattice-reduced point."""
    t = tau.tau
    rate = 2 * PI * (t.imag - abs(zr.imag))
    n_terms = _series_length(rate, opts.tolerance, degree=2 + derivative, scale=16 * PI ** 3)
    if n_terms > opts.max_terms:
        raise NonConvergent(f"wp series needs {n_terms} terms (max_terms={opts.max_terms})")
    k = np.arange(1, n_terms + 1)
    qk = np.exp(TWO_PI_I * k * t)
    plus = np.exp(TWO_PI_I * k * (t + zr))
    minus = np.exp(TWO_PI_I * k * (t - zr))
    weight = k / (1.0 - qk)
    sin_pz = cmath.sin(PI * zr)
    if derivative:
        tail = np.sum(weight * k * (plus - minus) / 2j)
        return -2 * PI ** 3 * cmath.cos(PI * zr) / sin_pz ** 3 + 16 * PI ** 3 * tail
    tail = np.sum(weight * (plus + minus) / 2)
    return 8 * PI ** 2 * eisenstein_g2(tau, opts) + PI ** 2 / sin_pz ** 2 - 8 * PI ** 2 * tail


def _reduced_off_lattice(z, tau, opts):
    zr = reduce_to_cell(z, tau).z_reduced
    if _distance_to((0.0,), zr, tau.tau) < opts.pole_guard:
        raise PoleAtLatticePoint(f"z={z} lies on the lattice of tau={tau.tau}")
    return zr


def wp(z, tau, opts=DEFAULT_OPTIONS):
    """Weierstrass wp(z, tau) for the lattice Z + Z*tau."""
    tau = _checked_tau(tau)
    zr = _reduced_off_lattice(z, tau, opts)
    return complex(_wp_series(zr, tau, opts, derivative=0))


def wp_z(z, tau, opts=DEFAULT_OPTIONS):
    """z-derivative of the Weierstrass function."""
    tau = _checked_tau(tau)
    zr = _reduced_off_lattice(z, tau, opts)
    return complex(_wp_series(zr, tau, opts, derivative=1))


def wp_lattice_sum(z, tau, n_max=200):
    """Brute-force symmetric-box lattice sum of the defining series of wp."""
    t = as_tau(tau).tau
    m, n = np.meshgrid(np.arange(-n_max, n_max + 1), np.arange(-n_max, n_max + 1))
    w = (m * t + n).ravel()
    w = w[(m.ravel() != 0) | (n.ravel() != 0)]
    return complex(1 / z ** 2 + np.sum(1 / (z + w) ** 2 - 1 / w ** 2))


def wp_z_lattice_sum(z, tau, n_max=500):
    """Brute-force symmetric-box lattice sum of -2 * sum 1/(z+w)^3."""
    t = as_tau(tau).tau
    m, n = np.meshgrid(np.arange(-n_max, n_max + 1), np.arange(-n_max, n_max + 1))
    w = (m * t + n).ravel()
    return complex(-2 * np.sum(1 / (z + w) ** 3))


def half_period_values(tau, opts=DEFAULT_OPTIONS):
    """(e1, e2, e3) = wp(T_i/2, tau) for T = (1, tau, 1+tau)."""
    tau = _checked_tau(tau)
    return tuple(wp(HalfPeriodIndex(i).value(tau), tau, opts) for i in (1, 2, 3))


def addition_residual(z, tau, i, opts=DEFAULT_OPTIONS):
    """
    Residual of the half-period addition formula

        wp_z(z + T_i/2) = -(e_i - e_j)(e_i - e_k) / (wp(z) - e_i)^2 * wp_z(z).
    """
    i = HalfPeriodIndex(i)
    if i == HalfPeriodIndex.T0:
        raise InvalidParameter("the addition formula needs i in {1, 2, 3}")
    tau = _checked_tau(tau)
    e = half_period_values(tau, opts)
    e_i = e[i - 1]
    e_j, e_k = (e[k - 1] for k in (1, 2, 3) if k != i)
    shifted = wp_z(z + i.value(tau), tau, opts)
    return shifted + (e_i - e_j) * (e_i - e_k) / (wp(z, tau, opts) - e_i) ** 2 * wp_z(z, tau, opts)


# Theta function --------------------------------------------------------------

_THETA_ORDERS = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1))


def _theta_sums(zr, tau, opts, orders=_THETA_ORDERS):
    """Term-wise derivatives of sum exp(pi*i*n^2*tau + 2*pi*i*n*z)."""
    t = tau.tau
    y = abs(zr.imag)
    max_degree = max(dz + 2 * dt for dz, dt in orders)
    target = -math.log(opts.tolerance) + 2.0
    n_terms = 1
    for _ in range(4):
        slack = target + max_degree * math.log(2 * PI * (n_terms + 1))
        n_terms = math.ceil((y + math.sqrt(y * y + t.imag * slack / PI)) / t.imag)
    if n_terms > opts.max_terms:
        raise NonConvergent(f"theta series needs {n_terms} terms (max_terms={opts.max_terms})")
    n = np.arange(-n_terms, n_terms + 1)
    terms = np.exp(1j * PI * n * n * t + TWO_PI_I * n * zr)
    return {
        (dz, dt): complex(np.sum(terms * (TWO_PI_I * n) ** dz * (1j * PI * n * n) ** dt))
        for dz, dt in orders
    }


def _quasi_factor(reduced, tau):
    m = reduced.shift_m
    return cmath.exp(-1j * PI * m * m * tau.tau - TWO_PI_I * m * reduced.z_reduced)


def theta(z, tau, opts=DEFAULT_OPTIONS):
    """theta(z, tau) = sum over n of exp(pi*i*n^2*tau + 2*pi*i*n*z)."""
    tau = _checked_tau(tau)
    reduced = reduce_to_cell(z, tau)
    value = _theta_sums(reduced.z_reduced, tau, opts, orders=((0, 0),))[(0, 0)]
    return _quasi_factor(reduced, tau) * value


def theta_log_jet(z, tau, opts=DEFAULT_OPTIONS):
    """
    theta_z/theta, theta_zz/theta, theta_tau/theta and theta_ztau/theta at z.

    The ratios are computed at the reduced point and carried back with the
    quasi-periodicity law theta(z + m*tau + n) = exp(-pi*i*m^2*tau - 2*pi*i*m*z) theta(z).
    """
    tau = _checked_tau(tau)
    reduced = reduce_to_cell(z, tau)
    zr, m = reduced.z_reduced, reduced.shift_m
    if _distance_to(((1 + tau.tau) / 2,), zr, tau.tau) < opts.pole_guard:
        raise PoleAtThetaZero(f"z={z} is a zero of theta(., {tau.tau})")
    s = _theta_sums(zr, tau, opts)
    base = s[(0, 0)]
    lz = s[(1, 0)] / base
    lzz = s[(2, 0)] / base - lz * lz
    lt = s[(0, 1)] / base
    lzt = s[(1, 1)] / base - lz * lt
    # transport the logarithmic derivatives from zr to z
    lz, lt, lzt = lz - TWO_PI_I * m, lt - m * lz + 1j * PI * m * m, lzt - m * lzz
    return ThetaJet(dz=lz, dzz=lzz + lz * lz, dtau=lt, dzdtau=lzt + lz * lt)


def theta_derivatives(z, tau, opts=DEFAULT_OPTIONS):
    """(theta, theta_z, theta_zz, theta_tau) at z, term-wise differentiated."""
    value = theta(z, tau, opts)
    jet = theta_log_jet(z, tau, opts)
    return value, value * jet.dz, value * jet.dzz, value * jet.dtau


def theta_logderiv(z, tau, opts=DEFAULT_OPTIONS):
    """theta_z/theta at z."""
    return theta_log_jet(z, tau, opts).dz


def theta_v(z, tau, opts=DEFAULT_OPTIONS):
    """v(z, tau) = -(1/(2*pi*i)) * theta_z/theta."""
    return -theta_logderiv(z, tau, opts) / TWO_PI_I


def heat_residual(z, tau, opts=DEFAULT_OPTIONS):
    """theta_tau - theta_zz/(4*pi*i), both differentiated term by term."""
    tau = _checked_tau(tau)
    reduced = reduce_to_cell(z, tau)
    s = _theta_sums(reduced.z_reduced, tau, opts, orders=((2, 0), (0, 1)))
    return _quasi_factor(reduced, tau) * (s[(0, 1)] - s[(2, 0)] / (4j * PI))


def theta_modular_ratio(matrix, z, tau, opts=DEFAULT_OPTIONS):
    """
    theta(z/j, gamma*tau) / (j^(1/2) * exp(pi*i*c*z^2/j) * theta(z, tau)), j = c*tau + d.

    An eighth root of unity for gamma in Gamma(2); which one depends on
    gamma and on the branch of j^(1/2).
    """
    c, d = matrix[2], matrix[3]
    t = as_tau(tau).tau
    j = c * t + d
    z_image, image = apply_modular(matrix, z, t)
    return theta(z_image, image, opts) / (cmath.sqrt(j) * cmath.exp(1j * PI * c * z * z / j) * theta(z, t, opts))


# Eisenstein series -----------------------------------------------------------

def eisenstein_g2(tau, opts=DEFAULT_OPTIONS):
    """G2(tau) = -1/24 + sum_n sigma_1(n) exp(2*pi*i*n*tau), summed as a Lambert series."""
    tau = _checked_tau(tau)
    t = tau.tau
    n_terms = _series_length(2 * PI * t.imag, opts.tolerance, degree=1)
    if n_terms > opts.max_terms:
        raise NonConvergent(f"G2 series needs {n_terms} terms (max_terms={opts.max_terms})")
    k = np.arange(1, n_terms + 1)
    qk = np.exp(TWO_PI_I * k * t)
    return complex(-1.0 / 24.0 + np.sum(k * qk / (1.0 - qk)))


def g2_coefficients(n_max):
    """sigma_1(n) for n = 1..n_max, the q-coefficients of G2."""
    sigma = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        for multiple in range(d, n_max + 1, d):
            sigma[multiple] += d
    return sigma[1:]


# Derivatives in tau ----------------------------------------------------------

def _central(f, x, h):
    return [(a - b) / (2 * h) for a, b in zip(f(x + h), f(x - h))]


def _richardson(f, x, h):
    coarse, fine = _central(f, x, h), _central(f, x, h / 2)
    return [(4 * b - a) / 3 for a, b in zip(coarse, fine)]


def half_period_derivatives(tau, opts=DEFAULT_OPTIONS):
    """
    d e_i / d tau for i = 1, 2, 3 (total derivatives, the half-period moving with tau).

    Two-level Richardson extrapolation of central differences, with the step
    scaled to the fifth root of the tolerance. A third level is used only to
    estimate the error.
    """
    tau = _checked_tau(tau)
    t = tau.tau
    h = max(opts.tolerance, 1e-13) ** 0.2
    if t.imag - h < MIN_IM_TAU:
        h = (t.imag - MIN_IM_TAU) / 2
    if h < 1e-7:
        raise StepUnderflow(f"no usable tau step at Im(tau)={t.imag:.3g}")

    def values(x):
        return half_period_values(ModularParameter(x), opts)

    first = _richardson(values, t, h)
    second = _richardson(values, t, h / 2)
    scale = 1.0 + max(abs(v) for v in second)
    error = max(abs(a - b) for a, b in zip(first, second))
    logger.debug("half_period_derivatives at tau=%s: step %.3g, error estimate %.3g", t, h, error)
    if error > 1e-7 * scale:
        raise StepUnderflow(
            f"finite differences of e_i at tau={t} did not settle (error estimate {error:.3g})"
        )
    return tuple(second)


def constant_c(tau, opts=DEFAULT_OPTIONS):
    """
    C(tau) = prod_{i>j} (e_i - e_j)^2 / (e1*e2' - e2*e1')^2.

    A modular function without zeros and poles, hence the constant -9*pi^2.
    """
    e1, e2, e3 = half_period_values(tau, opts)
    d1, d2, _ = half_period_derivatives(tau, opts)
    discriminant = ((e2 - e1) * (e3 - e1) * (e3 - e2)) ** 2
    return discriminant / (e1 * d2 - e2 * d1) ** 2
