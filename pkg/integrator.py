"""
Adaptive embedded Runge-Kutta integration along polylines in the complex plane.

The independent variable is complex (t or tau). Each segment of a polyline is
parameterized by real arc length s, so dx/ds = f(base(s), x) * direction and
the usual real-time step control applies unchanged. Steps are clipped so that
they land exactly on the sample positions; the recorded error of a sample is
the sum of the local error estimates accumulated since the previous sample.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from errors import InvalidParameter, InvalidPath, PoleApproach, SingularityError, StepUnderflow

logger = logging.getLogger(__name__)

# Cash-Karp 5(4) pair
_NODES = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_TABLEAU = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_WEIGHTS = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
_ERROR_WEIGHTS = np.array([-277 / 64512, 0.0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084])

_SAFETY = 0.9
_MAX_GROWTH = 5.0
_MAX_SHRINK = 0.2


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Step control for integrate_path.

    Args:
        rtol, atol: local error tolerances per component
        max_step: largest arc-length step
        min_step: steps below this raise StepUnderflow
        pole_guard: radius handed to chart guards
        sample_step: spacing of recorded samples (None: min(max_step, length/50))
        max_steps: cap on accepted plus rejected steps
    """

    rtol: float = 1e-11
    atol: float = 1e-13
    max_step: float = 0.02
    min_step: float = 1e-12
    pole_guard: float = 1e-6
    sample_step: float = None
    max_steps: int = 200000

    def __post_init__(self):
        for name in ("rtol", "atol", "max_step", "min_step", "pole_guard"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"IntegratorConfig.{name} must be positive")
        if self.min_step >= self.max_step:
            raise InvalidParameter("IntegratorConfig.min_step must be below max_step")
        if self.sample_step is not None and not self.sample_step > 0:
            raise InvalidParameter("IntegratorConfig.sample_step must be positive")
        if self.max_steps < 1:
            raise InvalidParameter("IntegratorConfig.max_steps must be at least 1")


@dataclass(frozen=True)
class PathSpec:
    """A polyline of complex base points, traversed in order."""

    points: tuple

    def __post_init__(self):
        points = tuple(complex(p) for p in self.points)
        if len(points) < 2:
            raise InvalidPath("a path needs at least two points")
        for a, b in zip(points, points[1:]):
            if abs(b - a) == 0:
                raise InvalidPath(f"path has a zero-length segment at {a}")
        object.__setattr__(self, "points", points)

    @classmethod
    def segment(cls, start, end):
        return cls((start, end))

    @property
    def segments(self):
        return list(zip(self.points, self.points[1:]))

    @property
    def length(self):
        return sum(abs(b - a) for a, b in self.segments)

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def reversed(self):
        return PathSpec(self.points[::-1])

    def distance_to(self, point):
        """Smallest distance between the polyline and a point."""
        best = math.inf
        for a, b in self.segments:
            d = b - a
            s = min(1.0, max(0.0, ((point - a) * d.conjugate()).real / abs(d) ** 2))
            best = min(best, abs(a + s * d - point))
        return best

    def min_imag(self):
        return min(p.imag for p in self.points)


@dataclass
class IntegrationResult:
    """Samples produced by integrate_path."""

    bases: np.ndarray
    states: np.ndarray
    errors: np.ndarray
    accepted: int = 0
    rejected: int = 0
    stats: dict = field(default_factory=dict)


def _sample_positions(length, config):
    spacing = config.sample_step or min(config.max_step, length / 50)
    count = max(1, math.ceil(length / spacing - 1e-9))
    return [length * k / count for k in range(1, count + 1)]


def _cash_karp_step(f, base, direction, x, h):
    stages = []
    for c, row in zip(_NODES, _TABLEAU):
        xi = x + h * sum(a * k for a, k in zip(row, stages)) if row else x
        stages.append(np.asarray(f(base + c * h * direction, xi), dtype=complex) * direction)
    k = np.array(stages)
    return x + h * (_WEIGHTS @ k), h * (_ERROR_WEIGHTS @ k)


def integrate_path(f, state0, path, config=None, guard=None, project=None):
    """
    Integrate dx/d(base) = f(base, x) along a polyline.

    Args:
        f: right-hand side, f(base, x) -> array like x
        state0: initial state at path.start
        path: PathSpec
        config: IntegratorConfig
        guard: optional guard(base, x) -> message or None; a message aborts
            with PoleApproach
        project: optional map applied to every accepted state (constraint
            projection)

    Returns:
        IntegrationResult with the initial sample first
    """
    config = config or IntegratorConfig()
    x = np.array(state0, dtype=complex)
    bases, states, errors = [path.start], [x.copy()], [0.0]
    accepted = rejected = 0
    h = config.max_step / 4

    def partial():
        return IntegrationResult(np.array(bases), np.array(states), np.array(errors), accepted, rejected)

    if guard is not None:
        message = guard(path.start, x)
        if message:
            raise PoleApproach(message, base=path.start, state=x, partial=partial())

    for a, b in path.segments:
        length = abs(b - a)
        direction = (b - a) / length
        s = 0.0
        accumulated = 0.0
        for target in _sample_positions(length, config):
            while s < target:
                if accepted + rejected >= config.max_steps:
                    raise StepUnderflow(f"max_steps={config.max_steps} exhausted at base {a + s * direction}")
                step = min(h, config.max_step, target - s)
                clipped = step < h
                try:
                    x_new, err = _cash_karp_step(f, a + s * direction, direction, x, step)
                except SingularityError as e:
                    raise PoleApproach(
                        f"right-hand side singular near base {a + s * direction}: {str(e)}",
                        base=a + s * direction, state=x, partial=partial(),
                    ) from e
                scale = config.atol + config.rtol * np.maximum(np.abs(x), np.abs(x_new))
                ratio = float(np.max(np.abs(err) / scale))
                if not np.isfinite(ratio):
                    ratio = math.inf
                if ratio <= 1.0:
                    s = target if step >= target - s else s + step
                    x = project(a + s * direction, x_new) if project else x_new
                    accumulated += float(np.max(np.abs(err)))
                    accepted += 1
                    growth = _MAX_GROWTH if ratio == 0 else min(_MAX_GROWTH, _SAFETY * ratio ** -0.2)
                    # steps clipped to a sample position only ever shrink h
                    if not clipped or growth < 1:
                        h = step * growth
                    if guard is not None:
                        message = guard(a + s * direction, x)
                        if message:
                            raise PoleApproach(message, base=a + s * direction, state=x, partial=partial())
                else:
                    rejected += 1
                    shrink = _MAX_SHRINK if math.isinf(ratio) else max(_MAX_SHRINK, _SAFETY * ratio ** -0.25)
                    h = step * shrink
                    if h < config.min_step:
                        raise StepUnderflow(
                            f"step {h:.3g} fell below min_step={config.min_step} at base {a + s * direction}"
                        )
            bases.append(a + target * direction)
            states.append(x.copy())
            errors.append(accumulated)
            accumulated = 0.0

    logger.debug("integrate_path: %d accepted, %d rejected steps over length %.4g", accepted, rejected, path.length)
    result = partial()
    result.stats = {"accepted": accepted, "rejected": rejected, "length": path.length}
    return result
