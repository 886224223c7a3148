"""Exception hierarchy.

Every failure that signals an inconsistency between independent parts of the
computation derives from :class:`ConsistencyError`; the CLI maps those to a
nonzero exit code.
"""


class K3PicardError(Exception):
    pass


class FieldError(K3PicardError, ValueError):
    """Bad field parameters or mixing elements of different fields."""


class DegenerateSurface(K3PicardError):
    """The coefficient vector is outside the 14-node A1 stratum."""


class BadReduction(K3PicardError):
    def __init__(self, p: int, reason: str):
        super().__init__(f"bad reduction at p={p}: {reason}")
        self.p = p
        self.reason = reason


class NotAPerfectSquare(K3PicardError):
    pass


class NodeNotRational(K3PicardError):
    pass


class DegenerateTangentCone(K3PicardError):
    pass


class NoExteriorPoint(K3PicardError):
    pass


class InsufficientNodes(K3PicardError):
    pass


class MultiplicityUnsupported(K3PicardError):
    pass


class SingularSpan(K3PicardError):
    pass


class ConsistencyError(K3PicardError):
    """Two independent computations disagree."""


class NewtonNonIntegral(ConsistencyError):
    pass


class NoCandidateSurvives(ConsistencyError):
    pass


class BothRejected(ConsistencyError):
    pass


class ParityViolation(ConsistencyError):
    pass


class NonzeroRemainder(ConsistencyError):
    pass


class NonPositiveLimit(ConsistencyError):
    pass
