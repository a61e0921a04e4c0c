"""Shared exception types."""


class DomainError(ValueError):
    """An argument is outside the documented domain of an operation."""


class ContractError(RuntimeError):
    """A documented precondition (unitarity, causality, ...) is violated."""


class ResourceError(RuntimeError):
    """The request would exceed a configured resource cap."""


class CompileError(RuntimeError):
    """A fermionic factor cannot be realized as a local qubit gate."""
