"""
Painleve VI in the elliptic, classical and algebraic charts.

Parameters, phase-space states, right-hand sides of the three flows, the
Hamiltonian of the elliptic chart, adaptive integration along declared paths,
chart-to-chart conversion of states and trajectories, and trajectory
serialization.
"""
import cmath
import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from elliptic_core import (
    DEFAULT_OPTIONS,
    MIN_IM_TAU,
    TWO_PI_I,
    HalfPeriodIndex,
    ModularParameter,
    as_tau,
    lattice_distance,
    theta_logderiv,
    wp,
    wp_z,
)
from errors import (
    InconsistentContext,
    InsufficientSamples,
    InvalidParameter,
    InvalidPath,
    PoleAtLatticePoint,
    PoleAtThetaZero,
    PoleHit,
    PointAtInfinity,
)
from integrator import IntegratorConfig, PathSpec, integrate_path
from picard_fuchs import derivatives_at
from uniformization import (
    BranchChoice,
    CurvePoint,
    curve_residual,
    invert_lambda,
    modular_lambda,
    phi,
    seed_tau,
    z_from_point,
)

logger = logging.getLogger(__name__)

CHARTS = ("elliptic", "classical", "algebraic")
COMPONENTS = {
    "elliptic": ("z", "y"),
    "classical": ("X", "Xdot"),
    "algebraic": ("X", "U", "Y"),
}
BASE_NAMES = {"elliptic": "tau", "classical": "t", "algebraic": "t"}
REPRESENTATIONS = ("classical", "alphas", "avec")

SINGULAR_GUARD = 1e-12
CONTEXT_TOLERANCE = 1e-8
ELLIPTIC_FACTOR = 1 / TWO_PI_I ** 2


def _four(values, name):
    values = tuple(complex(v) for v in values)
    if len(values) != 4:
        raise InvalidParameter(f"{name} needs exactly four entries, got {len(values)}")
    return values


def _close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol * (1 + abs(x)) for x, y in zip(a, b))


# Parameters ------------------------------------------------------------------

@dataclass(frozen=True)
class PainleveParams:
    """
    One parameter point in three coordinate systems.

    classical = (alpha, beta, gamma, delta),
    alphas = (alpha, -beta, gamma, 1/2 - delta),
    avec with avec[i]^2 = 2 alphas[i].

    Any non-empty subset may be given; the rest is filled in (principal
    square roots for avec) and the given ones are checked for consistency.
    """

    classical: tuple = None
    alphas: tuple = None
    avec: tuple = None

    def __post_init__(self):
        for name in REPRESENTATIONS:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _four(value, name))
        if self.classical is None and self.alphas is None and self.avec is None:
            raise InvalidParameter("a parameter point needs at least one representation")
        if self.classical is not None and self.alphas is not None:
            if not _close(self.alphas, _alphas_from_classical(self.classical)):
                raise InvalidParameter(f"alphas {self.alphas} do not match classical {self.classical}")
        if self.alphas is not None and self.avec is not None:
            if not _close(tuple(2 * a for a in self.alphas), tuple(a * a for a in self.avec)):
                raise InvalidParameter(f"avec {self.avec} does not square to 2*alphas {self.alphas}")

        if self.alphas is None:
            if self.classical is not None:
                alphas = _alphas_from_classical(self.classical)
            else:
                alphas = tuple(a * a / 2 for a in self.avec)
            object.__setattr__(self, "alphas", alphas)
        if self.classical is None:
            a0, a1, a2, a3 = self.alphas
            object.__setattr__(self, "classical", (a0, -a1, a2, 0.5 - a3))
        if self.avec is None:
            object.__setattr__(self, "avec", tuple(cmath.sqrt(2 * a) for a in self.alphas))

    @classmethod
    def from_classical(cls, alpha, beta, gamma, delta):
        return cls(classical=(alpha, beta, gamma, delta))

    @classmethod
    def from_alphas(cls, *alphas):
        return cls(alphas=alphas)

    @classmethod
    def from_avec(cls, *avec):
        return cls(avec=avec)

    @property
    def avec_signs(self):
        """+1 where avec[i] is the principal square root of 2 alphas[i], else -1."""
        signs = []
        for a, alpha in zip(self.avec, self.alphas):
            root = cmath.sqrt(2 * alpha)
            signs.append(1 if abs(a - root) <= abs(a + root) else -1)
        return tuple(signs)

    def shifts(self, tau):
        """(T_j/2, its tau-coefficient, alpha_j) for each half-period."""
        return [(HalfPeriodIndex(j).value(tau), HalfPeriodIndex(j).tau_part, a)
                for j, a in enumerate(self.alphas)]

    def to_dict(self):
        return {name: [[v.real, v.imag] for v in getattr(self, name)] for name in REPRESENTATIONS}


def _alphas_from_classical(classical):
    alpha, beta, gamma, delta = classical
    return (alpha, -beta, gamma, 0.5 - delta)


def params_convert(p, target):
    """
    Rebuild a parameter point from one of its representations.

    Every representation of the result is derived from p.<target>, so avec
    sign choices survive a conversion to "avec" and are reset to principal
    roots by "classical" or "alphas".

    Args:
        p: PainleveParams
        target: "classical", "alphas" or "avec"

    Returns:
        PainleveParams
    """
    if target not in REPRESENTATIONS:
        raise InvalidParameter(f"unknown parameter representation {target!r}")
    return PainleveParams(**{target: getattr(p, target)})


PICARD = PainleveParams.from_classical(0, 0, 0, 0.5)
P2 = PainleveParams.from_classical(0.125, -0.125, 0, 0.5)
HITCHIN = PainleveParams.from_classical(0.125, -0.125, 0.125, 0.375)
NAMED_POINTS = {"picard": PICARD, "p2": P2, "hitchin": HITCHIN}


@dataclass(frozen=True)
class GeneralizedParams:
    """
    Coefficients alpha_zeta attached to shift points zeta = p + q*tau.

    terms is a tuple of ((p, q), alpha); shift points must be distinct modulo
    the lattice.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple(((Fraction(p).limit_denominator(10 ** 6), Fraction(q).limit_denominator(10 ** 6)),
                       complex(a)) for (p, q), a in self.terms)
        classes = [(p % 1, q % 1) for (p, q), _ in terms]
        if len(set(classes)) != len(classes):
            raise InvalidParameter("shift points must be distinct modulo the lattice")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_params(cls, p):
        alphas = p.alphas
        points = ((0, 0), (Fraction(1, 2), 0), (0, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2)))
        return cls(tuple(zip(points, alphas)))

    def shifts(self, tau):
        t = as_tau(tau).tau
        return [(float(p) + float(q) * t, float(q), a) for (p, q), a in self.terms]

    def to_dict(self):
        return {"generalized": [[str(p), str(q), [a.real, a.imag]] for (p, q), a in self.terms]}


def params_from_dict(data):
    """Inverse of to_dict for both parameter types."""
    if "generalized" in data:
        return GeneralizedParams(tuple(((Fraction(p), Fraction(q)), complex(*a)) for p, q, a in data["generalized"]))
    return PainleveParams(**{name: [complex(*v) for v in data[name]] for name in REPRESENTATIONS if name in data})


# States ----------------------------------------------------------------------

@dataclass(frozen=True)
class EllipticState:
    """(z, y, tau) with y = dz/dtau the conjugate momentum."""

    z: complex
    y: complex
    tau: ModularParameter

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "y", complex(self.y))
        object.__setattr__(self, "tau", as_tau(self.tau))

    chart = "elliptic"

    @property
    def base(self):
        return self.tau.tau

    def vector(self):
        return np.array([self.z, self.y], dtype=complex)


@dataclass(frozen=True)
class ClassicalState:
    X: complex
    Xdot: complex
    t: complex

    def __post_init__(self):
        for name in ("X", "Xdot", "t"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _check_base(self.t)
        _check_position(self.X, self.t)

    chart = "classical"

    @property
    def base(self):
        return self.t

    def vector(self):
        return np.array([self.X, self.Xdot], dtype=complex)


@dataclass(frozen=True)
class AlgebraicState:
    """(U, X, Y, t) with (X, Y) on the Legendre curve over t."""

    U: complex
    X: complex
    Y: complex
    t: complex

    def __post_init__(self):
        for name in ("U", "X", "Y", "t"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _check_base(self.t)
        scale = 1.0 + abs(self.X) ** 3 + abs(self.t) * abs(self.X) ** 2
        if abs(curve_residual(self.X, self.Y, self.t)) > CONTEXT_TOLERANCE * scale:
            raise InvalidParameter(f"({self.X}, {self.Y}) is off the curve over t={self.t}")

    chart = "algebraic"

    @property
    def base(self):
        return self.t

    def vector(self):
        return np.array([self.X, self.U, self.Y], dtype=complex)


def _check_base(t):
    if abs(t) < SINGULAR_GUARD or abs(t - 1) < SINGULAR_GUARD:
        raise PoleHit(f"t={t} is an excluded base point")


def _check_position(X, t):
    if min(abs(X), abs(X - 1), abs(X - t)) < SINGULAR_GUARD:
        raise PoleHit(f"X={X} sits on a chart singularity over t={t}")


def state_from_vector(chart, base, vector):
    if chart == "elliptic":
        return EllipticState(vector[0], vector[1], base)
    if chart == "classical":
        return ClassicalState(vector[0], vector[1], base)
    return AlgebraicState(vector[1], vector[0], vector[2], base)


# Right-hand sides --------------------------------------------------------------

def _elliptic_acceleration(z, tau, params, opts=DEFAULT_OPTIONS):
    total = 0j
    for shift, _, alpha in params.shifts(tau):
        if alpha != 0:
            try:
                total += alpha * wp_z(z + shift, tau, opts)
            except PoleAtLatticePoint as e:
                raise PoleHit(f"z+shift={z + shift} is a lattice point at tau={tau}") from e
    return ELLIPTIC_FACTOR * total


def rhs_elliptic(s, p, opts=DEFAULT_OPTIONS):
    """d^2z/dtau^2 = (1/(2 pi i)^2) sum alpha_j wp_z(z + T_j/2, tau)."""
    return _elliptic_acceleration(s.z, s.tau, p, opts)


def _classical_acceleration(X, Xdot, t, params):
    _check_base(t)
    _check_position(X, t)
    alpha, beta, gamma, delta = params.classical
    bracket = alpha + beta * t / X ** 2 + gamma * (t - 1) / (X - 1) ** 2 + delta * t * (t - 1) / (X - t) ** 2
    return (
        0.5 * (1 / X + 1 / (X - 1) + 1 / (X - t)) * Xdot ** 2
        - (1 / t + 1 / (t - 1) + 1 / (X - t)) * Xdot
        + X * (X - 1) * (X - t) / (t ** 2 * (t - 1) ** 2) * bracket
    )


def rhs_classical(s, p):
    """d^2X/dt^2 of the classical sixth Painleve equation."""
    return _classical_acceleration(s.X, s.Xdot, s.t, p)


def potential_bracket(X, t, params):
    """alpha + beta t/X^2 + gamma (t-1)/(X-1)^2 + delta t(t-1)/(X-t)^2."""
    alpha, beta, gamma, delta = params.classical
    return alpha + beta * t / X ** 2 + gamma * (t - 1) / (X - 1) ** 2 + delta * t * (t - 1) / (X - t) ** 2


def _algebraic_velocity(U, X, Y, t, params):
    _check_base(t)
    _check_position(X, t)
    if abs(Y) < SINGULAR_GUARD:
        raise PoleHit(f"Y vanishes at X={X}, t={t}")
    s = t * (t - 1)
    dX = 2 * U * Y / s
    dU = -U / (2 * (X - t)) + Y / (2 * s) * potential_bracket(X, t, params)
    dY = ((3 * X * X - 2 * (1 + t) * X + t) * dX - X * (X - 1)) / (2 * Y)
    return dX, dU, dY


def rhs_algebraic(s, p):
    """
    (dX/dt, dU/dt, dY/dt) in the (U, X, Y, t) chart.

    dY/dt comes from differentiating Y^2 = X(X-1)(X-t), so the curve is
    preserved to integrator order.
    """
    return _algebraic_velocity(s.U, s.X, s.Y, s.t, p)


def hamiltonian(s, p, opts=DEFAULT_OPTIONS):
    """H = y^2/2 - (1/(2 pi i)^2) sum alpha_j wp(z + T_j/2, tau)."""
    total = 0j
    for shift, _, alpha in p.shifts(s.tau):
        if alpha != 0:
            try:
                total += alpha * wp(s.z + shift, s.tau, opts)
            except PoleAtLatticePoint as e:
                raise PoleHit(f"z+shift={s.z + shift} is a lattice point") from e
    return s.y ** 2 / 2 - ELLIPTIC_FACTOR * total


def hamiltonian_dtau(s, p, step=1e-4, opts=DEFAULT_OPTIONS):
    """
    Partial derivative of H in tau at fixed (y, z).

    The shift points move with tau; their wp_z contribution is exact, the
    explicit tau-dependence of wp is Richardson-differenced.
    """
    t = s.tau.tau
    total = 0j
    for shift, tau_part, alpha in p.shifts(s.tau):
        if alpha == 0:
            continue
        w = s.z + shift

        def central(h):
            return (wp(w, ModularParameter(t + h), opts) - wp(w, ModularParameter(t - h), opts)) / (2 * h)

        wp_tau = (4 * central(step / 2) - central(step)) / 3
        total += alpha * (tau_part * wp_z(w, s.tau, opts) + wp_tau)
    return -ELLIPTIC_FACTOR * total


# Trajectories ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled states of one chart along a declared path."""

    chart: str
    bases: np.ndarray
    states: np.ndarray
    errors: np.ndarray
    params: object

    def __post_init__(self):
        if self.chart not in CHARTS:
            raise InvalidParameter(f"unknown chart {self.chart!r}")
        object.__setattr__(self, "bases", np.asarray(self.bases, dtype=complex))
        object.__setattr__(self, "states", np.asarray(self.states, dtype=complex))
        object.__setattr__(self, "errors", np.asarray(self.errors, dtype=float))

    def __len__(self):
        return len(self.bases)

    def component(self, name):
        return self.states[:, COMPONENTS[self.chart].index(name)]

    def state(self, k):
        return state_from_vector(self.chart, self.bases[k], self.states[k])

    @property
    def end_state(self):
        return self.state(len(self) - 1)

    def to_json(self):
        return {
            "chart": self.chart,
            "params": self.params.to_dict(),
            "samples": [
                {
                    "base": [b.real, b.imag],
                    "state": [[v.real, v.imag] for v in state],
                    "err": float(err),
                }
                for b, state, err in zip(self.bases, self.states, self.errors)
            ],
        }

    @classmethod
    def from_json(cls, data):
        samples = data["samples"]
        return cls(
            chart=data["chart"],
            bases=[complex(*s["base"]) for s in samples],
            states=[[complex(*v) for v in s["state"]] for s in samples],
            errors=[s["err"] for s in samples],
            params=params_from_dict(data["params"]),
        )

    def csv_header(self):
        header = ["base_re", "base_im"]
        for name in COMPONENTS[self.chart]:
            header += [f"{name}_re", f"{name}_im"]
        return header + ["err"]

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.csv_header())
        for b, state, err in zip(self.bases, self.states, self.errors):
            row = [repr(b.real), repr(b.imag)]
            for v in state:
                row += [repr(v.real), repr(v.imag)]
            writer.writerow(row + [repr(float(err))])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text, params):
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], [r for r in rows[1:] if r]
        names = [h[:-3] for h in header[2:-1:2]]
        chart = next(c for c, comps in COMPONENTS.items() if list(comps) == names)
        bases, states, errors = [], [], []
        for row in body:
            values = [float(v) for v in row]
            bases.append(complex(values[0], values[1]))
            states.append([complex(values[i], values[i + 1]) for i in range(2, len(values) - 1, 2)])
            errors.append(values[-1])
        return cls(chart, bases, states, errors, params)


def _guard_for(chart, params, config):
    radius = config.pole_guard
    if chart == "elliptic":
        def guard(base, x):
            tau = complex(base)
            if tau.imag < MIN_IM_TAU + radius:
                return f"Im(tau) fell to {tau.imag:.3g}"
            for shift, _, alpha in params.shifts(ModularParameter(tau)):
                if alpha != 0 and lattice_distance(x[0] + shift, tau) < radius:
                    return f"z={x[0]} within {radius} of a pole at tau={tau}"
            return None
        return guard

    def guard(base, x):
        t = complex(base)
        X = x[0]
        if min(abs(t), abs(t - 1)) < radius:
            return f"base t={t} within {radius} of 0 or 1"
        if min(abs(X), abs(X - 1), abs(X - t)) < radius or abs(X) > 1 / radius:
            return f"X={X} within the pole guard at t={t}"
        return None
    return guard


def _validate_path(chart, path, config):
    if chart == "elliptic":
        if path.min_imag() < MIN_IM_TAU + config.pole_guard:
            raise InvalidPath(f"tau-path dips below Im(tau)={MIN_IM_TAU}")
    else:
        for point in (0, 1):
            if path.distance_to(point) < config.pole_guard:
                raise InvalidPath(f"t-path passes within {config.pole_guard} of t={point}")


def integrate(chart, state, path, params, config=None, opts=DEFAULT_OPTIONS):
    """
    Integrate one chart's flow along a polyline in its base.

    Args:
        chart: "elliptic" (base tau), "classical" or "algebraic" (base t)
        state: initial state at path.start
        path: PathSpec or sequence of complex points
        params: PainleveParams (GeneralizedParams in the elliptic chart only)
        config: IntegratorConfig

    Returns:
        Trajectory
    """
    config = config or IntegratorConfig()
    if chart not in CHARTS:
        raise InvalidParameter(f"unknown chart {chart!r}")
    if not isinstance(path, PathSpec):
        path = PathSpec(tuple(path))
    if isinstance(params, GeneralizedParams) and chart != "elliptic":
        raise InvalidParameter("generalized parameters are supported in the elliptic chart only")
    if state.chart != chart:
        raise InvalidParameter(f"initial state is in the {state.chart} chart, not {chart}")
    if abs(state.base - path.start) > 1e-12 * (1 + abs(path.start)):
        raise InvalidPath(f"path starts at {path.start} but the state sits at {state.base}")
    _validate_path(chart, path, config)

    project = None
    if chart == "elliptic":
        def f(base, x):
            return np.array([x[1], _elliptic_acceleration(x[0], ModularParameter(base), params, opts)])
    elif chart == "classical":
        def f(base, x):
            return np.array([x[1], _classical_acceleration(x[0], x[1], base, params)])
    else:
        def f(base, x):
            dX, dU, dY = _algebraic_velocity(x[1], x[0], x[2], base, params)
            return np.array([dX, dU, dY])

        def project(base, x):
            X, Y = x[0], x[2]
            x = x.copy()
            x[2] = Y - curve_residual(X, Y, base) / (2 * Y)
            return x

    result = integrate_path(f, state.vector(), path, config, _guard_for(chart, params, config), project)
    logger.debug("integrate(%s): %d samples, %s", chart, len(result.bases), result.stats)
    return Trajectory(chart, result.bases, result.states, result.errors, params)


def flow_residual(trajectory, params, opts=DEFAULT_OPTIONS):
    """
    Largest defect between finite-differenced sample derivatives and the
    chart's right-hand side, over samples with two neighbours on each side.
    """
    n = len(trajectory)
    if n < 5:
        raise InsufficientSamples(f"flow_residual needs 5 samples, got {n}")
    worst = 0.0
    for k in range(2, n - 2):
        nodes = trajectory.bases[k - 2:k + 3]
        weights = derivatives_at(nodes[2], nodes, np.eye(5), order=1)[1]
        slopes = weights @ trajectory.states[k - 2:k + 3]
        base, x = trajectory.bases[k], trajectory.states[k]
        if trajectory.chart == "elliptic":
            expected = [x[1], _elliptic_acceleration(x[0], ModularParameter(base), params, opts)]
        elif trajectory.chart == "classical":
            expected = [x[1], _classical_acceleration(x[0], x[1], base, params)]
        else:
            expected = list(_algebraic_velocity(x[1], x[0], x[2], base, params))
        worst = max(worst, float(np.max(np.abs(slopes - np.array(expected)))))
    return worst


# Chart conversion --------------------------------------------------------------

def _branch(tau, branch, opts):
    if branch is None:
        return BranchChoice.principal(tau, opts)
    return branch if branch.tau.tau == as_tau(tau).tau else branch.continue_to(tau, opts)


def _elliptic_to_algebraic(s, context, branch, opts):
    branch = _branch(s.tau, branch, opts)
    try:
        point = phi(s.z, s.tau, branch, opts)
        log_derivative = theta_logderiv(s.z, s.tau, opts)
    except (PointAtInfinity, PoleAtThetaZero) as e:
        raise PoleHit(f"z={s.z} is not in the open chart at tau={s.base}: {str(e)}") from e
    if context is not None and abs(complex(context) - point.t) > CONTEXT_TOLERANCE * (1 + abs(point.t)):
        raise InconsistentContext(f"t={context} does not match modular_lambda({s.base})={point.t}")
    U = (TWO_PI_I * s.y + log_derivative) / (2 * branch.sqrt_e21)
    return AlgebraicState(U, point.X, point.Y, point.t)


def _algebraic_to_elliptic(s, context, branch, z_seed, opts):
    if context is None:
        tau = invert_lambda(s.t, seed_tau(s.t, opts), opts=opts)
    else:
        tau = as_tau(context)
        if abs(modular_lambda(tau, opts) - s.t) > CONTEXT_TOLERANCE * (1 + abs(s.t)):
            raise InconsistentContext(f"tau={tau.tau} does not map to t={s.t}")
    branch = _branch(tau, branch, opts)
    z = z_from_point(CurvePoint(s.X, s.Y, s.t), tau, branch, z_seed, opts)
    try:
        log_derivative = theta_logderiv(z, tau, opts)
    except PoleAtThetaZero as e:
        raise PoleHit(f"X=t is a chart boundary of the elliptic chart: {str(e)}") from e
    y = (2 * branch.sqrt_e21 * s.U - log_derivative) / TWO_PI_I
    return EllipticState(z, y, tau)


def _classical_to_algebraic(s, y_hint):
    Y = cmath.sqrt(s.X * (s.X - 1) * (s.X - s.t))
    if y_hint is not None and abs(-Y - y_hint) < abs(Y - y_hint):
        Y = -Y
    if abs(Y) < SINGULAR_GUARD:
        raise PoleHit(f"Y vanishes at X={s.X}")
    return AlgebraicState(s.t * (s.t - 1) * s.Xdot / (2 * Y), s.X, Y, s.t)


def _algebraic_to_classical(s):
    return ClassicalState(s.X, 2 * s.U * s.Y / (s.t * (s.t - 1)), s.t)


def convert_state(s, target, context=None, branch=None, z_seed=None, y_hint=None, opts=DEFAULT_OPTIONS):
    """
    Convert a state between charts.

    Args:
        s: EllipticState, ClassicalState or AlgebraicState
        target: chart name
        context: t (when leaving the elliptic chart) or tau (when entering it)
            used as a consistency check; tau is solved for when omitted
        branch: BranchChoice of (e2 - e1)^(1/2)
        z_seed: preferred lattice translate of z when entering the elliptic chart
        y_hint: preferred sign of Y when leaving the classical chart
    """
    if target not in CHARTS:
        raise InvalidParameter(f"unknown chart {target!r}")
    if s.chart == target:
        return s
    if s.chart == "elliptic":
        algebraic = _elliptic_to_algebraic(s, context, branch, opts)
        return algebraic if target == "algebraic" else _algebraic_to_classical(algebraic)
    if s.chart == "classical":
        algebraic = _classical_to_algebraic(s, y_hint)
        if target == "algebraic":
            return algebraic
        return _algebraic_to_elliptic(algebraic, context, branch, z_seed, opts)
    if target == "classical":
        return _algebraic_to_classical(s)
    return _algebraic_to_elliptic(s, context, branch, z_seed, opts)


def convert_trajectory(trajectory, target, branch=None, tau_seed=None, opts=DEFAULT_OPTIONS):
    """
    Convert every sample of a trajectory, continuing the square-root branch,
    the sign of Y and the lattice translate of z from sample to sample.
    """
    if trajectory.chart == target:
        return trajectory
    bases, states = [], []
    tau, z, Y = tau_seed, None, None
    for k in range(len(trajectory)):
        s = trajectory.state(k)
        if s.chart == "elliptic":
            branch = _branch(s.tau, branch, opts)
            converted = convert_state(s, target, branch=branch, opts=opts)
        else:
            if s.chart == "classical":
                s = _classical_to_algebraic(s, Y)
            Y = s.Y
            if target == "elliptic":
                tau = invert_lambda(s.t, tau if tau is not None else seed_tau(s.t, opts), opts=opts)
                branch = _branch(tau, branch, opts)
                converted = _algebraic_to_elliptic(s, tau, branch, z, opts)
                z = converted.z
            else:
                converted = convert_state(s, target, opts=opts)
        bases.append(converted.base)
        states.append(converted.vector())
    return Trajectory(target, bases, states, trajectory.errors, trajectory.params)


def canonical_lift(e, f, tau, branch=None, opts=DEFAULT_OPTIONS):
    """
    The canonical lift z = e*tau + f, y = e of a finite-order multisection.

    Args:
        e, f: rational (or float) coefficients
        tau: modular parameter

    Returns:
        (EllipticState, AlgebraicState)
    """
    tau = as_tau(tau)
    e, f = float(e), float(f)
    z = e * tau.tau + f
    if lattice_distance(2 * z, tau) < opts.pole_guard:
        raise PoleHit(f"the section z={z} passes through a half-period at tau={tau.tau}")
    elliptic = EllipticState(z, e, tau)
    return elliptic, convert_state(elliptic, "algebraic", branch=branch, opts=opts)
