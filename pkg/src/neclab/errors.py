"""Shared exception types."""


class CapExceeded(ValueError):
    """An operation was asked to enumerate more than its configured cap allows."""


class InvalidInput(ValueError):
    """Malformed argument (bad family parameters, arity mismatch, broken certificate...)."""
