"""Exception hierarchy shared by every module of the package."""


class ArgumentError(ValueError):
    """Malformed or inconsistent arguments (bad bitstrings, indices, sizes)."""


class CapacityError(ArgumentError):
    """Requested register exceeds the simulator's qubit cap."""


class ValidationError(ValueError):
    """A value violates a structural invariant (e.g. a non-unitary matrix)."""


class ConfigurationError(ValueError):
    """An operation was requested in a mode that cannot support it."""


class ContractViolation(RuntimeError):
    """Two independently computed artifacts disagree where they must not."""


class ProtocolError(RuntimeError):
    """A protocol run produced an inconsistent result (e.g. a decode mismatch)."""


class TableIntegrityError(ContractViolation):
    """Embedded table data does not match its recorded digest."""
