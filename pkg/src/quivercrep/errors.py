class QuiverError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedType(QuiverError):
    pass


class UnsupportedCase(QuiverError):
    pass


class PartialInvariants(QuiverError):
    """The orbit is not covered by the rank invariants of its case."""


class Infeasible(QuiverError):
    pass


class DimensionMismatch(QuiverError):
    pass


class InfeasibleMonomial(QuiverError):
    pass


class NoResolutionRule(QuiverError):
    pass


class NotCrepant(QuiverError):
    pass


class WeightCollision(QuiverError):
    pass


class DegreeMismatch(QuiverError):
    pass


class NonIntegerResult(QuiverError):
    pass


class RankError(QuiverError):
    pass


class PointNotInOrbit(QuiverError):
    pass


class ExpectedDimensionNegative(QuiverError):
    pass


class ConfigError(QuiverError):
    pass
