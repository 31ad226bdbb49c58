"""
The Picard-Fuchs operator L_t = t(1-t) d^2/dt^2 + (1-2t) d/dt - 1/4, the
periods it annihilates, and the residual of the mu-equation form of PVI along
sampled solutions.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from elliptic_core import DEFAULT_OPTIONS, as_tau
from errors import BranchJump, InsufficientSamples, InvalidParameter
from uniformization import (
    BranchChoice,
    CurvePoint,
    invert_lambda,
    phi,
    seed_tau,
    z_from_point,
)

logger = logging.getLogger(__name__)

STENCIL_POINTS = 5


def fornberg_weights(x0, nodes, order):
    """
    Finite-difference weights on arbitrary (complex) nodes.

    Returns:
        array of shape (order + 1, len(nodes)); row k holds the weights of
        the k-th derivative at x0
    """
    nodes = np.asarray(nodes, dtype=complex)
    n = len(nodes)
    weights = np.zeros((order + 1, n), dtype=complex)
    weights[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 = c2 * c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    weights[k, i] = c1 * (k * weights[k - 1, i - 1] - c5 * weights[k, i - 1]) / c2
                weights[0, i] = -c1 * c5 * weights[0, i - 1] / c2
            for k in range(mn, 0, -1):
                weights[k, j] = (c4 * weights[k, j] - k * weights[k - 1, j]) / c3
            weights[0, j] = c4 * weights[0, j] / c3
        c1 = c2
    return weights


def derivatives_at(x0, nodes, values, order=2):
    """(f, f', ..., f^(order)) at x0 from samples on nodes."""
    return fornberg_weights(x0, nodes, order) @ np.asarray(values, dtype=complex)


def lt_from_derivatives(t, f, df, d2f):
    return t * (1 - t) * d2f + (1 - 2 * t) * df - f / 4


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function at ordered base points along a path."""

    ts: tuple
    values: tuple

    def __post_init__(self):
        ts = tuple(complex(t) for t in self.ts)
        values = tuple(complex(v) for v in self.values)
        if len(ts) != len(values):
            raise InvalidParameter("ts and values differ in length")
        if len(ts) < STENCIL_POINTS:
            raise InsufficientSamples(f"need at least {STENCIL_POINTS} samples, got {len(ts)}")
        if len(set(ts)) != len(ts):
            raise InvalidParameter("sample points must be distinct")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, ts):
        return cls(tuple(ts), tuple(func(t) for t in ts))


def _window(bases, at, width):
    """Indices of `width` consecutive samples centred on the sample nearest `at`."""
    bases = np.asarray(bases)
    k = int(np.argmin(np.abs(bases - at)))
    half = width // 2
    if k < half or k > len(bases) - 1 - half:
        raise InsufficientSamples(f"t={at} is not interior to the sample window")
    return list(range(k - half, k + half + 1))


def apply_lt(f, at):
    """L_t applied to sampled values at `at` by 5-point finite differences."""
    window = _window(f.ts, at, STENCIL_POINTS)
    nodes = [f.ts[i] for i in window]
    values = [f.values[i] for i in window]
    value, first, second = derivatives_at(at, nodes, values)
    return lt_from_derivatives(complex(at), value, first, second)


def apply_lt_extrapolated(func, at, step=1e-3):
    """L_t of a callable on uniform 5-point stencils at spacings h and h/2, Richardson-combined."""
    at = complex(at)

    def stencil(h):
        nodes = [at + k * h for k in range(-2, 3)]
        return derivatives_at(at, nodes, [func(t) for t in nodes])

    coarse, fine = stencil(step), stencil(step / 2)
    value, first, second = (16 * fine - coarse) / 15
    return lt_from_derivatives(at, value, first, second)


def period_functions(t, tau_seed=None, branch=None, opts=DEFAULT_OPTIONS):
    """
    (Pi1, Pi2) = (2 (e2 - e1)^(1/2), 2 tau (e2 - e1)^(1/2)) at tau = tau(t).

    When a branch is supplied the square root is continued from it.
    """
    tau = invert_lambda(t, tau_seed, opts=opts)
    if branch is None:
        branch = BranchChoice.principal(tau, opts)
    else:
        branch = branch.continue_to(tau, opts)
    pi1 = 2 * branch.sqrt_e21
    return pi1, tau.tau * pi1


@dataclass
class AbelianTrack:
    """Continued Abelian integral and periods along (part of) a trajectory."""

    ts: np.ndarray
    taus: np.ndarray
    sqrt_e21: np.ndarray
    zs: np.ndarray
    Xs: np.ndarray
    Ys: np.ndarray
    integrals: np.ndarray

    @property
    def pi1(self):
        return 2 * self.sqrt_e21

    @property
    def pi2(self):
        return 2 * self.taus * self.sqrt_e21


def _unwrap(z, previous, tau):
    """Shift z by the lattice vector that minimises the jump from previous."""
    candidates = [z + m * tau + n for m in (-1, 0, 1) for n in (-1, 0, 1)]
    best = min(candidates, key=lambda c: abs(c - previous))
    if best != z:
        logger.warning("abelian integral unwrapped by a lattice vector near tau=%s", tau)
    if abs(best - previous) > 0.5 * min(1.0, abs(tau)):
        raise BranchJump(f"abelian integral jumps by more than half a period near tau={tau}")
    return best


def abelian_track(trajectory, tau_seed=None, branch=None, indices=None, opts=DEFAULT_OPTIONS):
    """
    Continue the Abelian integral from infinity to (X, Y) along trajectory samples.

    tau(t) is found by chained invert_lambda seeds, the square root of e2 - e1
    and the sign of Y are continued by nearest value, and z is unwrapped so
    that adjacent samples never differ by a period.
    """
    indices = list(range(len(trajectory.bases))) if indices is None else list(indices)
    ts, taus, roots, zs, Xs, Ys = [], [], [], [], [], []
    elliptic = trajectory.chart == "elliptic"
    seed = tau_seed
    for k in indices:
        base = trajectory.bases[k]
        if elliptic:
            tau = as_tau(base)
            branch = BranchChoice.principal(tau, opts) if branch is None else branch.continue_to(tau, opts)
            z = trajectory.component("z")[k]
            point = phi(z, tau, branch, opts)
        else:
            t = complex(base)
            if seed is None:
                seed = seed_tau(t, opts)
            tau = invert_lambda(t, seed, opts=opts)
            seed = tau
            branch = BranchChoice.principal(tau, opts) if branch is None else branch.continue_to(tau, opts)
            X = trajectory.component("X")[k]
            if trajectory.chart == "algebraic":
                Y = trajectory.component("Y")[k]
            else:
                Y = np.sqrt(complex(X * (X - 1) * (X - t)))
                if Ys and abs(-Y - Ys[-1]) < abs(Y - Ys[-1]):
                    Y = -Y
            point = CurvePoint(X, Y, t)
            z = z_from_point(point, tau, branch, zs[-1] if zs else None, opts)
        if zs:
            z = _unwrap(z, zs[-1], tau.tau)
        ts.append(point.t if elliptic else complex(base))
        taus.append(tau.tau)
        roots.append(branch.sqrt_e21)
        zs.append(z)
        Xs.append(point.X)
        Ys.append(point.Y)
    roots = np.array(roots)
    zs = np.array(zs)
    return AbelianTrack(np.array(ts), np.array(taus), roots, zs, np.array(Xs), np.array(Ys), 2 * roots * zs)


def _track_window(solution, at, tau_seed, branch, opts):
    width = 7 if len(solution.bases) >= 7 else STENCIL_POINTS
    window = _window(solution.bases, at, width)
    centre = window[len(window) // 2]
    track = abelian_track(solution, tau_seed, branch, window, opts)
    return track, len(window) // 2, centre


def _mu_rhs(params, t, X, Y):
    alpha, beta, gamma, delta = params.classical
    return (
        alpha * Y
        + beta * t * Y / X ** 2
        + gamma * (t - 1) * Y / (X - 1) ** 2
        + (delta - 0.5) * t * (t - 1) * Y / (X - t) ** 2
    )


def mu_residual(solution, params, at, tau_seed=None, branch=None, opts=DEFAULT_OPTIONS):
    """
    t(1-t) L_t [integral of dx/y from infinity to (X(t), Y(t))] minus
    alpha Y + beta t Y/X^2 + gamma (t-1) Y/(X-1)^2 + (delta - 1/2) t(t-1) Y/(X-t)^2,
    at the sample nearest `at`.
    """
    track, mid, _ = _track_window(solution, at, tau_seed, branch, opts)
    t = track.ts[mid]
    value, first, second = derivatives_at(t, track.ts, track.integrals)
    lhs = t * (1 - t) * lt_from_derivatives(t, value, first, second)
    rhs = _mu_rhs(params, t, track.Xs[mid], track.Ys[mid])
    logger.debug("mu_residual at t=%s: lhs=%s rhs=%s", t, lhs, rhs)
    return lhs - rhs


def mu_identity_residual(solution, at, branch=None, opts=DEFAULT_OPTIONS):
    """
    t(1-t) L_t [2 (e2 - e1)^(1/2) z] minus -2 pi^2 (e2 - e1)^(-3/2) d^2z/dtau^2
    along an elliptic-chart trajectory.
    """
    if solution.chart != "elliptic":
        raise InvalidParameter("mu_identity_residual needs an elliptic-chart trajectory")
    track, mid, centre = _track_window(solution, at, None, branch, opts)
    t = track.ts[mid]
    value, first, second = derivatives_at(t, track.ts, track.integrals)
    lhs = t * (1 - t) * lt_from_derivatives(t, value, first, second)
    ys = solution.component("y")[centre - mid:centre + mid + 1]
    z_dd = derivatives_at(track.taus[mid], track.taus, ys, order=1)[1]
    rhs = -2 * math.pi ** 2 * track.sqrt_e21[mid] ** -3 * z_dd
    return lhs - rhs


def _reconstructed_operator(u1, u2):
    """(p, q) of the monic operator d^2 + p d + q whose kernel is spanned by u1, u2.

    u1, u2 are (value, first, second) derivative triples at one point.
    """
    wronskian = u1[0] * u2[1] - u2[0] * u1[1]
    p = -(u1[0] * u2[2] - u2[0] * u1[2]) / wronskian
    q = (u1[1] * u2[2] - u2[1] * u1[2]) / wronskian
    return p, q


def mu_invariant(solution, at, omega_scale=None, sigma_scale=None, tau_seed=None, branch=None,
                 opts=DEFAULT_OPTIONS):
    """
    Bilinearity of the mu-expression in (sigma, omega).

    The operator annihilating the periods of g*omega is rebuilt from their
    Wronskian and applied to g times the Abelian integral, then scaled by f
    (the sigma rescaling). Dividing by f*g must give back the value obtained
    without rescaling; the difference is returned.

    Args:
        omega_scale: g(t), defaults to 1
        sigma_scale: f(t), defaults to 1
    """
    g_func = omega_scale or (lambda t: 1.0)
    f_func = sigma_scale or (lambda t: 1.0)
    track, mid, _ = _track_window(solution, at, tau_seed, branch, opts)
    t = track.ts[mid]

    def mu_expression(g_values, f_value):
        pi1 = derivatives_at(t, track.ts, g_values * track.pi1)
        pi2 = derivatives_at(t, track.ts, g_values * track.pi2)
        integral = derivatives_at(t, track.ts, g_values * track.integrals)
        p, q = _reconstructed_operator(pi1, pi2)
        return f_value * t ** 2 * (1 - t) ** 2 * (integral[2] + p * integral[1] + q * integral[0])

    ones = np.ones(len(track.ts), dtype=complex)
    raw = mu_expression(ones, 1.0)
    g_values = np.array([g_func(s) for s in track.ts], dtype=complex)
    f_value = f_func(t)
    direct = mu_expression(g_values, f_value)
    return direct / (f_value * g_values[mid]) - raw


def periods_residual(t, tau_seed=None, step=1e-3, opts=DEFAULT_OPTIONS):
    """(L_t Pi1, L_t Pi2) at t with the branch frozen at t's own tau."""
    tau = invert_lambda(t, tau_seed, opts=opts)
    branch = BranchChoice.principal(tau, opts)
    results = []
    for index in (0, 1):
        results.append(
            apply_lt_extrapolated(lambda s: period_functions(s, tau, branch, opts)[index], t, step)
        )
    return tuple(results)
