"""Exception hierarchy shared by every module of the toolkit."""


class PainleveError(Exception):
    """Root of all toolkit errors."""


# Numeric infrastructure ------------------------------------------------------

class NumericError(PainleveError):
    """A numerical procedure could not deliver the requested accuracy."""


class NonConvergent(NumericError):
    """A series needed more terms than EvalOptions.max_terms allows."""


class NoConvergence(NumericError):
    """An iterative solver (Newton) ran out of iterations."""


class StepUnderflow(NumericError):
    """A step size fell below what double precision can resolve."""


class InsufficientSamples(NumericError):
    """Not enough samples around a point for a finite-difference stencil."""


class BranchJump(NumericError):
    """A continued quantity jumped by more than lattice unwrapping can repair."""


# Singularities ---------------------------------------------------------------

class SingularityError(PainleveError):
    """Evaluation requested within the guard radius of a pole."""


class PoleAtLatticePoint(SingularityError):
    pass


class PoleAtThetaZero(SingularityError):
    pass


class PointAtInfinity(SingularityError):
    pass


class PoleHit(SingularityError):
    pass


class PoleApproach(SingularityError):
    """An integrated state drifted into the guard radius of a chart singularity.

    Carries the base parameter and state of the offending step together with
    the trajectory accumulated up to the last valid sample.
    """

    def __init__(self, message, base=None, state=None, partial=None):
        super().__init__(message)
        self.base = base
        self.state = state
        self.partial = partial


# Input consistency -----------------------------------------------------------

class InputError(PainleveError):
    """Arguments that are inconsistent with each other or with a type invariant."""


class InconsistentTau(InputError):
    pass


class InconsistentContext(InputError):
    pass


class PatternMismatch(InputError):
    pass


class InvalidPath(InputError):
    pass


class InvalidParameter(InputError):
    pass
