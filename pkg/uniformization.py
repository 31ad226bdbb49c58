"""
The covering map from the torus C/(Z + Z*tau) onto the Legendre pencil
Y^2 = X(X-1)(X-t), its numerical inverses, and square-root branch tracking.
"""
import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from elliptic_core import (
    DEFAULT_OPTIONS,
    MIN_IM_TAU,
    TWO_PI_I,
    HalfPeriodIndex,
    ModularParameter,
    as_tau,
    half_period_values,
    lattice_distance,
    reduce_to_cell,
    theta_logderiv,
    wp,
    wp_z,
)
from errors import (
    InconsistentTau,
    InvalidParameter,
    NoConvergence,
    PointAtInfinity,
)

logger = logging.getLogger(__name__)

CURVE_TOLERANCE = 1e-8
MAX_NEWTON_ITERATIONS = 100


def curve_residual(X, Y, t):
    return Y * Y - X * (X - 1) * (X - t)


@dataclass(frozen=True)
class CurvePoint:
    """An affine point of Y^2 = X(X-1)(X-t)."""

    X: complex
    Y: complex
    t: complex

    def __post_init__(self):
        for name in ("X", "Y", "t"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        scale = 1.0 + abs(self.X) ** 3 + abs(self.t) * abs(self.X) ** 2
        if abs(curve_residual(self.X, self.Y, self.t)) > CURVE_TOLERANCE * scale:
            raise InvalidParameter(f"({self.X}, {self.Y}) is not on the curve with t={self.t}")

    def negate(self):
        return CurvePoint(self.X, -self.Y, self.t)


@dataclass(frozen=True)
class BranchChoice:
    """A value of (e2 - e1)^(1/2) at a declared tau, continued by nearest value."""

    sqrt_e21: complex
    tau: ModularParameter

    def __post_init__(self):
        tau = as_tau(self.tau)
        object.__setattr__(self, "tau", tau)
        e1, e2, _ = half_period_values(tau)
        if abs(self.sqrt_e21 ** 2 - (e2 - e1)) > 1e-8 * (1 + abs(e2 - e1)):
            raise InvalidParameter(f"{self.sqrt_e21} is not a square root of e2-e1 at tau={tau.tau}")

    @classmethod
    def principal(cls, tau, opts=DEFAULT_OPTIONS):
        e1, e2, _ = half_period_values(tau, opts)
        return cls(cmath.sqrt(e2 - e1), as_tau(tau))

    def continue_to(self, tau, opts=DEFAULT_OPTIONS):
        """The root of e2 - e1 at tau closest to this branch's value."""
        e1, e2, _ = half_period_values(tau, opts)
        root = cmath.sqrt(e2 - e1)
        if abs(-root - self.sqrt_e21) < abs(root - self.sqrt_e21):
            root = -root
        return BranchChoice(root, as_tau(tau))

    def continue_along(self, taus, opts=DEFAULT_OPTIONS):
        """Continue through a sequence of tau values; returns one branch per value."""
        branches = []
        current = self
        for tau in taus:
            current = current.continue_to(tau, opts)
            branches.append(current)
        return branches

    def flipped(self):
        return BranchChoice(-self.sqrt_e21, self.tau)


def _branch_at(tau, branch, opts):
    tau = as_tau(tau)
    if branch is None:
        return BranchChoice.principal(tau, opts)
    if branch.tau.tau != tau.tau:
        return branch.continue_to(tau, opts)
    return branch


def modular_lambda(tau, opts=DEFAULT_OPTIONS):
    """t(tau) = (e3 - e1)/(e2 - e1)."""
    e1, e2, e3 = half_period_values(tau, opts)
    return (e3 - e1) / (e2 - e1)


def lambda_derivative(tau, opts=DEFAULT_OPTIONS):
    """dt/dtau = -(i/pi)(e2 - e1) t (t - 1)."""
    e1, e2, e3 = half_period_values(tau, opts)
    t = (e3 - e1) / (e2 - e1)
    return -1j / math.pi * (e2 - e1) * t * (t - 1)


def lambda_derivative_residual(tau, step=1e-5, opts=DEFAULT_OPTIONS):
    """Central difference of modular_lambda minus lambda_derivative."""
    t = as_tau(tau).tau
    numeric = (modular_lambda(t + step, opts) - modular_lambda(t - step, opts)) / (2 * step)
    return numeric - lambda_derivative(t, opts)


def phi(z, tau, branch=None, opts=DEFAULT_OPTIONS):
    """
    Map a torus point to the Legendre curve.

    Args:
        z: point of C/(Z + Z*tau), not on the lattice
        tau: modular parameter
        branch: BranchChoice at tau (principal if omitted)

    Returns:
        CurvePoint with X = (wp - e1)/(e2 - e1), Y = wp_z/(2 (e2 - e1)^(3/2))
    """
    tau = as_tau(tau)
    if lattice_distance(z, tau) < opts.pole_guard:
        raise PointAtInfinity(f"z={z} maps to the section at infinity")
    branch = _branch_at(tau, branch, opts)
    e1, e2, e3 = half_period_values(tau, opts)
    s = branch.sqrt_e21
    X = (wp(z, tau, opts) - e1) / (e2 - e1)
    Y = wp_z(z, tau, opts) / (2 * s ** 3)
    return CurvePoint(X, Y, (e3 - e1) / (e2 - e1))


def seed_tau(t, opts=DEFAULT_OPTIONS):
    """Coarse grid search for a tau with modular_lambda(tau) near t."""
    best, best_tau = math.inf, None
    for re in np.linspace(-1.0, 1.0, 9):
        for im in (0.35, 0.5, 0.7, 1.0, 1.4, 2.0, 3.0):
            tau = complex(re, im)
            residual = abs(modular_lambda(tau, opts) - t)
            if residual < best:
                best, best_tau = residual, tau
    logger.debug("seed_tau(%s) -> %s (residual %.3g)", t, best_tau, best)
    return ModularParameter(best_tau)


def invert_lambda(t, tau_seed=None, tolerance=1e-13, opts=DEFAULT_OPTIONS):
    """
    Solve modular_lambda(tau) = t by damped Newton iteration from a seed.

    Returns:
        ModularParameter
    """
    t = complex(t)
    if abs(t) < 1e-12 or abs(t - 1) < 1e-12:
        raise InvalidParameter(f"t={t} is an excluded base point")
    tau = as_tau(tau_seed).tau if tau_seed is not None else seed_tau(t, opts).tau
    if tau.imag < MIN_IM_TAU:
        raise InvalidParameter(f"seed tau={tau} is below Im(tau)={MIN_IM_TAU}")
    target = tolerance * max(1.0, abs(t))
    residual = modular_lambda(tau, opts) - t
    for iteration in range(MAX_NEWTON_ITERATIONS):
        if abs(residual) <= target:
            # one undamped polishing step, kept only if it does not worsen the residual
            polished = tau - residual / lambda_derivative(tau, opts)
            if polished.imag >= MIN_IM_TAU and abs(modular_lambda(polished, opts) - t) <= abs(residual):
                tau = polished
            logger.debug("invert_lambda(%s): %d iterations", t, iteration)
            return ModularParameter(tau)
        step = residual / lambda_derivative(tau, opts)
        damping = 1.0
        while True:
            candidate = tau - damping * step
            if candidate.imag >= MIN_IM_TAU:
                candidate_residual = modular_lambda(candidate, opts) - t
                if abs(candidate_residual) < abs(residual) or damping < 1e-3:
                    break
            damping /= 2
            if damping < 1e-6:
                raise NoConvergence(f"invert_lambda({t}) stalled at tau={tau}")
        tau, residual = candidate, candidate_residual
    raise NoConvergence(
        f"invert_lambda({t}) did not converge in {MAX_NEWTON_ITERATIONS} iterations; supply a better seed"
    )


def _nearest_representative(z, reference, tau):
    """The lattice translate of z closest to reference."""
    reduced = reduce_to_cell(z - reference, tau)
    return reference + reduced.z_reduced


def _grid_seed(target_wp, tau, opts):
    t = as_tau(tau).tau
    best, best_z = math.inf, None
    for s in np.linspace(-0.45, 0.45, 10):
        for u in np.linspace(-0.45, 0.45, 10):
            z = s + u * t
            if lattice_distance(z, t) < 0.05:
                continue
            residual = abs(wp(z, t, opts) - target_wp)
            if residual < best:
                best, best_z = residual, z
    return best_z


def z_from_point(p, tau, branch=None, z_seed=None, opts=DEFAULT_OPTIONS):
    """
    Invert phi: find z with phi(z, tau) = p.

    The preimages are +-z mod lattice; the sign is fixed by Y. When a seed is
    given, the lattice translate nearest the seed is returned.
    """
    tau = as_tau(tau)
    branch = _branch_at(tau, branch, opts)
    e1, e2, e3 = half_period_values(tau, opts)
    t = (e3 - e1) / (e2 - e1)
    if abs(t - p.t) > CURVE_TOLERANCE * (1 + abs(t)):
        raise InconsistentTau(f"modular_lambda({tau.tau})={t} does not match t={p.t}")
    s = branch.sqrt_e21
    target = e1 + p.X * (e2 - e1)
    scale = 1.0 + abs(target)

    if abs(p.Y) <= 1e-10 * (1 + abs(p.X) ** 1.5):
        # branch point: canonical half-period representative
        roots = {HalfPeriodIndex.T1: e1, HalfPeriodIndex.T2: e2, HalfPeriodIndex.T3: e3}
        index = min(roots, key=lambda i: abs(roots[i] - target))
        z = index.value(tau)
        return _nearest_representative(z, z_seed, tau.tau) if z_seed is not None else z

    z = complex(z_seed) if z_seed is not None else _grid_seed(target, tau, opts)
    for iteration in range(MAX_NEWTON_ITERATIONS):
        residual = wp(z, tau, opts) - target
        if abs(residual) <= 1e-13 * scale:
            break
        z = z - residual / wp_z(z, tau, opts)
    else:
        raise NoConvergence(f"z_from_point did not converge for X={p.X} at tau={tau.tau}")

    if abs(wp_z(z, tau, opts) / (2 * s ** 3) + p.Y) < abs(wp_z(z, tau, opts) / (2 * s ** 3) - p.Y):
        z = -z
    if z_seed is not None:
        return _nearest_representative(z, complex(z_seed), tau.tau)
    return reduce_to_cell(z, tau).z_reduced


def pullback_residual(z, tau, branch=None, opts=DEFAULT_OPTIONS):
    """(dX/dz)/Y - 2 (e2 - e1)^(1/2), with dX/dz = wp_z/(e2 - e1)."""
    tau = as_tau(tau)
    branch = _branch_at(tau, branch, opts)
    point = phi(z, tau, branch, opts)
    e1, e2, _ = half_period_values(tau, opts)
    return wp_z(z, tau, opts) / (e2 - e1) / point.Y - 2 * branch.sqrt_e21


def abelian_integral(p, tau, branch=None, z_seed=None, opts=DEFAULT_OPTIONS):
    """
    Integral of dx/y from the point at infinity to p, modulo the periods
    2 (e2 - e1)^(1/2) and 2 tau (e2 - e1)^(1/2).
    """
    tau = as_tau(tau)
    branch = _branch_at(tau, branch, opts)
    z = z_from_point(p, tau, branch, z_seed, opts)
    if z_seed is None:
        z = reduce_to_cell(z, tau).z_reduced
    return 2 * branch.sqrt_e21 * z


def abelian_quadrature(start, end, rtol=1e-10, atol=1e-12):
    """
    Integral of dx/y along the straight X-segment between two curve points,
    with y continued along the segment by its own differential equation.

    Independent of the theta and Weierstrass machinery; used as an oracle.

    Args:
        start, end: CurvePoint over the same t

    Returns:
        (integral, Y reached at the end of the segment)
    """
    if abs(start.t - end.t) > CURVE_TOLERANCE * (1 + abs(start.t)):
        raise InconsistentTau(f"endpoints lie over different t ({start.t}, {end.t})")
    t, dX = start.t, end.X - start.X

    def rhs(s, w):
        X = start.X + s * dX
        Y = w[1]
        return [dX / Y, (3 * X * X - 2 * (1 + t) * X + t) * dX / (2 * Y)]

    solution = solve_ivp(rhs, (0.0, 1.0), np.array([0j, start.Y]), method="DOP853", rtol=rtol, atol=atol)
    if not solution.success:
        raise NoConvergence(f"Failed to integrate dx/y from X={start.X} to X={end.X}: {solution.message}")
    return complex(solution.y[0, -1]), complex(solution.y[1, -1])


def periods(tau, branch=None, opts=DEFAULT_OPTIONS):
    """(Pi1, Pi2) = (2 (e2 - e1)^(1/2), 2 tau (e2 - e1)^(1/2))."""
    tau = as_tau(tau)
    branch = _branch_at(tau, branch, opts)
    return 2 * branch.sqrt_e21, 2 * tau.tau * branch.sqrt_e21


def reduce_modulo_periods(value, pi1, pi2):
    """Representative of value modulo Z*pi1 + Z*pi2 in the centered cell."""
    ratio = pi2 / pi1
    return pi1 * reduce_to_cell(value / pi1, ratio if ratio.imag > 0 else -ratio).z_reduced


def x_coordinate(z, tau, opts=DEFAULT_OPTIONS):
    e1, e2, _ = half_period_values(tau, opts)
    return (wp(z, tau, opts) - e1) / (e2 - e1)


def dx_over_y_residual(z, tau, dz, dtau, branch=None, step=1e-5, opts=DEFAULT_OPTIONS):
    """
    Evaluate dX/Y - 2 (e2 - e1)^(1/2) [dz + theta_z/theta dtau / (2 pi i)] on
    the tangent vector (dz, dtau), with dX from a Richardson-extrapolated
    central difference of X(z, tau).
    """
    tau = as_tau(tau)
    branch = _branch_at(tau, branch, opts)
    t0 = tau.tau

    def central(h):
        plus = x_coordinate(z + h * dz, ModularParameter(t0 + h * dtau), opts)
        minus = x_coordinate(z - h * dz, ModularParameter(t0 - h * dtau), opts)
        return (plus - minus) / (2 * h)

    dX = (4 * central(step / 2) - central(step)) / 3
    Y = phi(z, tau, branch, opts).Y
    expected = 2 * branch.sqrt_e21 * (dz + theta_logderiv(z, tau, opts) * dtau / TWO_PI_I)
    return dX / Y - expected
