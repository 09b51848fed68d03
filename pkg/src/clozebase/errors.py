"""Shared exception types."""


class ParseError(ValueError):
    """A data file does not conform to its declared format.

    Messages name the offending location (byte offset, line, or row).
    """
