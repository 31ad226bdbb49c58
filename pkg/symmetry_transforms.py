"""
Symmetries of the sixth Painleve equation.

Gamma(2) x Z^2 acting on elliptic states, shifts of the zero section,
the Z/2 inversion, the Landin transform on parameters and solutions, the
W-group on the a-vector with a solvability classification, and Okamoto's
observables p, h and the derivation D.
"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from elliptic_core import DEFAULT_OPTIONS, HalfPeriodIndex, ModularParameter, apply_modular, wp_z
from errors import InvalidParameter, PatternMismatch, PoleAtLatticePoint, PoleHit
from pvi_dynamics import AlgebraicState, EllipticState, PainleveParams, Trajectory, flow_residual

logger = logging.getLogger(__name__)

PATTERN_TOLERANCE = 1e-12
RATIONAL_TOLERANCE = 1e-12
LANDIN_SEARCH_DEPTH = 2


# Gamma(2) x Z^2 ----------------------------------------------------------------

@dataclass(frozen=True)
class ModularElement:
    """
    (gamma, (m, n)) with gamma = [[a, b], [c, d]] in Gamma(2).

    Acts by (y, z, tau) -> (y (c tau + d) - c z, z/(c tau + d), gamma tau)
    followed by the shift (y + m, z + m tau + n, tau).
    """

    a: int = 1
    b: int = 0
    c: int = 0
    d: int = 1
    m: int = 0
    n: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "m", "n"):
            value = getattr(self, name)
            if int(value) != value:
                raise InvalidParameter(f"ModularElement.{name}={value} is not an integer")
            object.__setattr__(self, name, int(value))
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidParameter(f"({self.a}, {self.b}; {self.c}, {self.d}) does not have determinant 1")
        if self.a % 2 != 1 or self.d % 2 != 1 or self.b % 2 or self.c % 2:
            raise InvalidParameter(f"({self.a}, {self.b}; {self.c}, {self.d}) is not congruent to 1 mod 2")

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def shift(cls, m, n):
        return cls(m=m, n=n)

    @property
    def matrix(self):
        return (self.a, self.b, self.c, self.d)

    def _shift_through_inverse(self, m, n):
        """(m, n) gamma^-1, the shift seen after moving it past gamma."""
        return m * self.d - n * self.c, -m * self.b + n * self.a

    def compose(self, other):
        """self . other, acting as act(self) o act(other)."""
        a, b, c, d = self.matrix
        e, f, g, h = other.matrix
        m, n = self._shift_through_inverse(other.m, other.n)
        return ModularElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.m + m, self.n + n)

    def inverse(self):
        a, b, c, d = self.matrix
        return ModularElement(d, -b, -c, a, -(self.m * a + self.n * c), -(self.m * b + self.n * d))

    def __mul__(self, other):
        return self.compose(other)


def gamma2_act(g, s):
    """Image of an EllipticState under a Gamma(2) x Z^2 element."""
    j = g.c * s.tau.tau + g.d
    z, tau = apply_modular(g.matrix, s.z, s.tau)
    y = s.y * j - g.c * s.z
    return EllipticState(z + g.m * tau.tau + g.n, y + g.m, tau)


def shift_zero_section(i, s, p):
    """
    Move the zero section to the half-period T_i/2.

    z -> z + T_i/2 and y -> y + d(T_i/2)/dtau; the alphas are relabelled by
    half-period addition, alpha'_k = alpha_(k xor i).

    Returns:
        (EllipticState, PainleveParams)
    """
    i = HalfPeriodIndex(i)
    state = EllipticState(s.z + i.value(s.tau), s.y + i.tau_part, s.tau)
    alphas = tuple(p.alphas[k ^ int(i)] for k in range(4))
    return state, PainleveParams.from_alphas(*alphas)


def inversion(s):
    """(y, z, tau) -> (-y, -z, tau); (U, X, Y, t) -> (-U, X, -Y, t). X is fixed."""
    if s.chart == "elliptic":
        return EllipticState(-s.z, -s.y, s.tau)
    if s.chart == "algebraic":
        return AlgebraicState(-s.U, s.X, -s.Y, s.t)
    return s


def transform_trajectory(trajectory, func, params=None):
    """Map every sample of a trajectory through a state transformation."""
    states = [func(trajectory.state(k)) for k in range(len(trajectory))]
    return Trajectory(
        states[0].chart,
        [s.base for s in states],
        [s.vector() for s in states],
        trajectory.errors,
        trajectory.params if params is None else params,
    )


# Landin transform --------------------------------------------------------------

def _same(x, y):
    return abs(x - y) <= PATTERN_TOLERANCE * (1 + abs(x))


def _landin_direction(alphas):
    """Directions whose input pattern the alphas match."""
    a0, a1, a2, a3 = alphas
    directions = []
    if _same(a0, a2) and _same(a1, a3):
        directions.append("forward")
    if abs(a2) <= PATTERN_TOLERANCE and abs(a3) <= PATTERN_TOLERANCE:
        directions.append("inverse")
    return directions


def landin(p, direction="forward"):
    """
    (alpha_0, alpha_1, alpha_0, alpha_1) <-> (4 alpha_0, 4 alpha_1, 0, 0).

    Args:
        p: PainleveParams
        direction: "forward" or "inverse"
    """
    if direction not in ("forward", "inverse"):
        raise InvalidParameter(f"unknown Landin direction {direction!r}")
    if direction not in _landin_direction(p.alphas):
        raise PatternMismatch(f"alphas {p.alphas} do not have the {direction} Landin pattern")
    a0, a1, _, _ = p.alphas
    if direction == "forward":
        return PainleveParams.from_alphas(4 * a0, 4 * a1, 0, 0)
    return PainleveParams.from_alphas(a0 / 4, a1 / 4, a0 / 4, a1 / 4)


def landin_avec(a, direction="forward"):
    """(a0, a1, a0, a1) <-> (2 a0, 2 a1, 0, 0) on the a-vector."""
    a0, a1, a2, a3 = a
    if direction == "forward":
        if a0 != a2 or a1 != a3:
            raise PatternMismatch(f"a-vector {tuple(a)} is not of the form (a0, a1, a0, a1)")
        return (2 * a0, 2 * a1, 0 * a0, 0 * a1)
    if direction == "inverse":
        if a2 != 0 or a3 != 0:
            raise PatternMismatch(f"a-vector {tuple(a)} is not of the form (a0, a1, 0, 0)")
        return (a0 / 2, a1 / 2, a0 / 2, a1 / 2)
    raise InvalidParameter(f"unknown Landin direction {direction!r}")


def _landin_samples(trajectory, direction):
    if direction == "forward":
        bases = trajectory.bases / 2
        states = trajectory.states * [1, 2]
    else:
        bases = trajectory.bases * 2
        states = trajectory.states * [1, 0.5]
    return Trajectory("elliptic", bases, states, trajectory.errors, landin(trajectory.params, direction))


def landin_map(trajectory, direction=None):
    """
    Carry an elliptic-chart solution across the Landin transform.

    forward: (tau, z, y) -> (tau/2, z, 2y), so that w(sigma) = z(2 sigma);
    inverse: (sigma, w, y) -> (2 sigma, w, y/2).
    When direction is None every applicable direction is tried and the one
    with the smaller flow residual is kept.

    Returns:
        (Trajectory, direction)
    """
    if trajectory.chart != "elliptic":
        raise InvalidParameter("landin_map acts on elliptic-chart trajectories")
    candidates = [direction] if direction else _landin_direction(trajectory.params.alphas)
    if not candidates:
        raise PatternMismatch(f"alphas {trajectory.params.alphas} match neither Landin pattern")
    best = None
    for candidate in candidates:
        image = _landin_samples(trajectory, candidate)
        residual = flow_residual(image, image.params)
        logger.debug("landin_map %s: flow residual %.3g", candidate, residual)
        if best is None or residual < best[2]:
            best = (image, candidate, residual)
    return best[0], best[1]


def landin_identity_residual(z, tau, opts=DEFAULT_OPTIONS):
    """wp_z(z, tau/2) - wp_z(z, tau) - wp_z(z + tau/2, tau)."""
    tau = ModularParameter(complex(getattr(tau, "tau", tau)))
    try:
        return (
            wp_z(z, tau.tau / 2, opts)
            - wp_z(z, tau, opts)
            - wp_z(z + tau.tau / 2, tau, opts)
        )
    except PoleAtLatticePoint as e:
        raise PoleHit(f"z={z} is a pole of the Landin identity at tau={tau.tau}") from e


# W-group and classification -------------------------------------------------------

@dataclass(frozen=True)
class WElement:
    """a -> (signs[i] * a[perm[i]] + shift[i]) with sum(shift) even."""

    signs: tuple = (1, 1, 1, 1)
    perm: tuple = (0, 1, 2, 3)
    shift: tuple = (0, 0, 0, 0)

    def __post_init__(self):
        signs, perm, shift = tuple(self.signs), tuple(self.perm), tuple(int(n) for n in self.shift)
        if len(signs) != 4 or any(s not in (1, -1) for s in signs):
            raise InvalidParameter(f"signs {signs} must be four entries of +-1")
        if sorted(perm) != [0, 1, 2, 3]:
            raise InvalidParameter(f"{perm} is not a permutation of 0..3")
        if len(shift) != 4 or sum(shift) % 2:
            raise InvalidParameter(f"shift {shift} must have an even sum")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "shift", shift)

    @classmethod
    def identity(cls):
        return cls()

    def compose(self, other):
        """self o other."""
        return WElement(
            tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(4)),
            tuple(other.perm[self.perm[i]] for i in range(4)),
            tuple(self.signs[i] * other.shift[self.perm[i]] + self.shift[i] for i in range(4)),
        )

    def inverse(self):
        back = [self.perm.index(k) for k in range(4)]
        return WElement(
            tuple(self.signs[back[k]] for k in range(4)),
            tuple(back),
            tuple(-self.signs[back[k]] * self.shift[back[k]] for k in range(4)),
        )

    def to_dict(self):
        return {"signs": list(self.signs), "perm": list(self.perm), "shift": list(self.shift)}


def w_act(w, a):
    return tuple(w.signs[i] * a[w.perm[i]] + w.shift[i] for i in range(4))


@dataclass(frozen=True)
class SolvabilityClass:
    """
    Classification tag plus the witness chain reaching base_point.

    witness is a tuple of ("w", WElement) and ("landin", direction) steps.
    """

    tag: str
    witness: tuple
    base_point: tuple

    def to_dict(self):
        steps = []
        for kind, step in self.witness:
            steps.append({"w": step.to_dict()} if kind == "w" else {"landin": step})
        return {"tag": self.tag, "base_point": [str(x) for x in self.base_point], "witness": steps}


CLASSICAL_POINTS = (
    (Fraction(0), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1, 2),) * 4,
)
ONE_DIM_POINTS = (
    (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1, 2)),
    (Fraction(1, 4),) * 4,
)


def _rationalize(x):
    x = complex(x)
    if abs(x.imag) > RATIONAL_TOLERANCE:
        return None
    value = Fraction(x.real).limit_denominator(10 ** 6)
    return value if abs(float(value) - x.real) <= RATIONAL_TOLERANCE else x.real


def _is_even_integer(x):
    if isinstance(x, Fraction):
        return x.denominator == 1 and x.numerator % 2 == 0
    nearest = round(x)
    return abs(x - nearest) <= 1e-9 and nearest % 2 == 0


def canonicalize(a):
    """
    W-canonical form of an a-vector.

    Entries are reduced modulo 1, folded into [0, 1/2] by a sign change and
    sorted; an odd total shift is repaired by flipping an entry equal to 1/2
    or, failing that, by adding 1 to the last entry.

    Returns:
        (canonical tuple, WElement w with w_act(w, a) == canonical)
    """
    signs, shifts, values = [], [], []
    for x in a:
        floor = math.floor(x)
        r = x - floor
        if r > Fraction(1, 2):
            signs.append(-1)
            shifts.append(floor + 1)
            values.append(1 - r)
        else:
            signs.append(1)
            shifts.append(-floor)
            values.append(r)
    order = sorted(range(4), key=lambda i: values[i])
    signs = [signs[i] for i in order]
    shifts = [shifts[i] for i in order]
    values = [values[i] for i in order]
    if sum(shifts) % 2:
        halves = [k for k in range(4) if values[k] == Fraction(1, 2)]
        if halves:
            k = halves[0]
            signs[k], shifts[k] = -signs[k], 1 - shifts[k]
        else:
            shifts[3] += 1
            values[3] += 1
    w = WElement(tuple(signs), tuple(order), tuple(shifts))
    return tuple(values), w


def _hyperplane_witness(c):
    """A sign pattern and even shift moving c onto a0 + a1 + a2 + a3 = 1."""
    for signs in itertools.product((1, -1), repeat=4):
        total = sum(s * x for s, x in zip(signs, c))
        gap = 1 - total
        if _is_even_integer(gap):
            return WElement(signs, (0, 1, 2, 3), (round(gap), 0, 0, 0))
    return None


def _landin_moves(c):
    """(WElement, direction, image) for every signed permutation of c with a Landin pattern."""
    moves = []
    seen = set()
    for perm in itertools.permutations(range(4)):
        for signs in itertools.product((1, -1), repeat=4):
            w = WElement(signs, perm, (0, 0, 0, 0))
            v = w_act(w, c)
            for direction in ("forward", "inverse"):
                try:
                    image = landin_avec(v, direction)
                except PatternMismatch:
                    continue
                key = (direction, v)
                if key not in seen:
                    seen.add(key)
                    moves.append((w, direction, image))
    return moves


def classify(a):
    """
    Solvability class of an a-vector.

    classical_general: W-equivalent to L or (1/2,1/2,1/2,1/2) + L
    one_dim_family: (0,0,0,1) + L, (0,0,1/2,1/2) + L or (1/4,1/4,1/4,1/4) + L
    hypergeometric_hyperplane: some W-image has sum 1
    Landin moves are searched to depth two; anything else is unknown.
    """
    values = [_rationalize(x) for x in a]
    if len(values) != 4:
        raise InvalidParameter(f"an a-vector needs four entries, got {len(values)}")
    if any(v is None for v in values):
        return SolvabilityClass("unknown", (), tuple(complex(x) for x in a))

    canonical, w = canonicalize(values)
    frontier = [(canonical, (("w", w),))]
    hyperplane = None
    visited = {canonical}
    for depth in range(LANDIN_SEARCH_DEPTH + 1):
        next_frontier = []
        for c, chain in frontier:
            if c in CLASSICAL_POINTS:
                return SolvabilityClass("classical_general", chain, c)
            if c in ONE_DIM_POINTS:
                return SolvabilityClass("one_dim_family", chain, c)
            if hyperplane is None:
                witness = _hyperplane_witness(c)
                if witness is not None:
                    hyperplane = (chain + (("w", witness),), w_act(witness, c))
            if depth == LANDIN_SEARCH_DEPTH:
                continue
            for move, direction, image in _landin_moves(c):
                image_canonical, image_w = canonicalize(image)
                if image_canonical in visited:
                    continue
                visited.add(image_canonical)
                next_frontier.append(
                    (image_canonical, chain + (("w", move), ("landin", direction), ("w", image_w)))
                )
        frontier = next_frontier
    if hyperplane is not None:
        return SolvabilityClass("hypergeometric_hyperplane", hyperplane[0], hyperplane[1])
    logger.debug("classify(%s): no listed family within Landin depth %d", a, LANDIN_SEARCH_DEPTH)
    return SolvabilityClass("unknown", (("w", w),), canonical)


def replay_witness(a, chain):
    """Apply a witness chain to an a-vector."""
    point = tuple(_rationalize(x) for x in a)
    for kind, step in chain:
        point = w_act(step, point) if kind == "w" else landin_avec(point, step)
    return point


# Okamoto observables ---------------------------------------------------------------

def _avec(a):
    return a.avec if isinstance(a, PainleveParams) else tuple(complex(x) for x in a)


def _check_open(s):
    if min(abs(s.X), abs(s.X - 1), abs(s.X - s.t)) < 1e-12 or abs(s.Y) < 1e-12:
        raise PoleHit(f"X={s.X} is a chart singularity over t={s.t}")


def okamoto_p(s, a):
    """p = U/Y + (1/2)(a1/X + a2/(X-1) + (a3-1)/(X-t))."""
    _check_open(s)
    _, a1, a2, a3 = _avec(a)
    return s.U / s.Y + 0.5 * (a1 / s.X + a2 / (s.X - 1) + (a3 - 1) / (s.X - s.t))


def okamoto_h(s, a):
    """
    h = U^2 + (1/4)[-a0^2 X - a1^2 t/X + a2^2 (t-1)/(X-1) - (a3-1)^2 t(t-1)/(X-t)]
        - (1/4)(a3-1)^2 t + (1/8)[a0^2 + a1^2 - a2^2 + (a3-1)^2]
    """
    _check_open(s)
    a0, a1, a2, a3 = _avec(a)
    U, X, t = s.U, s.X, s.t
    b3 = (a3 - 1) ** 2
    bracket = -a0 ** 2 * X - a1 ** 2 * t / X + a2 ** 2 * (t - 1) / (X - 1) - b3 * t * (t - 1) / (X - t)
    return U * U + bracket / 4 - b3 * t / 4 + (a0 ** 2 + a1 ** 2 - a2 ** 2 + b3) / 8


def okamoto_vector_field(s, a):
    """(dt, dX, dU) components of D at a state."""
    _check_open(s)
    a0, a1, a2, a3 = _avec(a)
    U, X, Y, t = s.U, s.X, s.Y, s.t
    st = t * (t - 1)
    potential = a0 ** 2 - a1 ** 2 * t / X ** 2 + a2 ** 2 * (t - 1) / (X - 1) ** 2 - (a3 ** 2 - 1) * st / (X - t) ** 2
    return 1, 2 * U * Y / st, -(U / (2 * (X - t)) - Y / (4 * st) * potential)


@dataclass(frozen=True)
class Observable:
    """A named function of an algebraic state, with an optional gradient in (t, X, U)."""

    name: str
    func: object
    gradient: object = None

    def __call__(self, s, a):
        return self.func(s, a)


def _state_near(s, t, X, U):
    Y = cmath.sqrt(X * (X - 1) * (X - t))
    if abs(Y + s.Y) < abs(Y - s.Y):
        Y = -Y
    return AlgebraicState(U, X, Y, t)


def _numeric_gradient(f, s, a, step):
    point = (s.t, s.X, s.U)
    gradient = []
    for k in range(3):
        def central(h):
            plus, minus = list(point), list(point)
            plus[k] += h
            minus[k] -= h
            return (f(_state_near(s, *plus), a) - f(_state_near(s, *minus), a)) / (2 * h)
        gradient.append((4 * central(step / 2) - central(step)) / 3)
    return gradient


def okamoto_D(f, s, a, step=1e-5):
    """
    Apply D = d/dt + (2UY/(t(t-1))) d/dX - [...] d/dU to an observable.

    Exact gradients are used when the observable supplies one; otherwise
    (t, X, U) are differenced with Y continued to the nearest root.
    """
    field = okamoto_vector_field(s, a)
    if isinstance(f, Observable) and f.gradient is not None:
        gradient = f.gradient(s, a)
    else:
        gradient = _numeric_gradient(f, s, a, step)
    return sum(c * g for c, g in zip(field, gradient))


def okamoto_shift_h(h_value, s, a):
    """
    Action of the shift a -> a + e_0 + e_3 on h.

    Returns:
        (transformed h, shifted a-vector)
    """
    _check_open(s)
    a0, a1, a2, a3 = _avec(a)
    U, X, Y, t = s.U, s.X, s.Y, s.t
    bracket = U / Y + a1 / (2 * X) + a2 / (2 * (X - 1)) + (a3 - 1) / (2 * (X - t))
    h = h_value - X * (X - 1) * bracket + 0.5 * (-a0 + a1 + a2 + a3 - 1) * X + 0.25 * (a0 - 2 * a1 - a3 + 1)
    return h, (a0 + 1, a1, a2, a3 + 1)


OBSERVABLE_X = Observable("X", lambda s, a: s.X, lambda s, a: (0, 1, 0))
OBSERVABLE_U = Observable("U", lambda s, a: s.U, lambda s, a: (0, 0, 1))
OBSERVABLE_P = Observable("p", okamoto_p)
OBSERVABLE_H = Observable("h", okamoto_h)
OBSERVABLES = {o.name: o for o in (OBSERVABLE_X, OBSERVABLE_U, OBSERVABLE_P, OBSERVABLE_H)}
