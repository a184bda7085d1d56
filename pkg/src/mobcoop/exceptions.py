"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the model.

    ``param`` names the offending parameter so front ends can point at the
    flag that caused it.
    """

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class CapacityError(DomainError):
    """A request exceeds a hard size limit (factorial state spaces)."""


class UsageError(TypeError):
    """A function was called in a configuration it does not support."""


class BindingTypeError(RuntimeError):
    """A type other than the richest binds at the richest type's threshold."""

    def __init__(self, message, binding_type=None, delta=None):
        super().__init__(message)
        self.binding_type = binding_type
        self.delta = delta


class UniquenessError(RuntimeError):
    """More than one sign change of the incentive gap was found on (0, 1)."""


class EmptyResultError(ValueError):
    """Nothing to emit or render."""
