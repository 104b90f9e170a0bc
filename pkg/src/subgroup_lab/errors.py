"""Exception hierarchy. Every library error derives from SubgroupLabError."""


class SubgroupLabError(Exception):
    pass


class NotPrime(SubgroupLabError, ValueError):
    pass


class TooLarge(SubgroupLabError, ValueError):
    pass


class NotADivisor(SubgroupLabError, ValueError):
    pass


class ZeroDilation(SubgroupLabError, ValueError):
    pass


class FieldMismatch(SubgroupLabError, ValueError):
    pass


class BadArity(SubgroupLabError, ValueError):
    pass


class EmptySet(SubgroupLabError, ValueError):
    pass


class SupportViolation(SubgroupLabError, ValueError):
    pass


class HypothesisViolation(SubgroupLabError, ValueError):
    pass


class NotInvariant(SubgroupLabError, ValueError):
    pass


class NotHermitian(SubgroupLabError, ValueError):
    pass


class BadShifts(SubgroupLabError, ValueError):
    pass


class TooLargeForExhaustive(SubgroupLabError, ValueError):
    pass


class EmptyConfig(SubgroupLabError, ValueError):
    pass


class LimitExceeded(SubgroupLabError, ValueError):
    pass


class ParseError(SubgroupLabError, ValueError):
    pass
