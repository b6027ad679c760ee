"""Exception types shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PoleError(DomainError):
    """A denominator factor vanished (Pochhammer zero or sampled pole)."""


class DivergenceError(DomainError):
    """A series was requested at a point where it diverges."""


class RangeError(OverflowError):
    """A result does not fit in a double."""
