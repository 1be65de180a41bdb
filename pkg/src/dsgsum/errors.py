"""Shared exception types. The CLI maps ValidationError to exit 1 and OS-level
I/O failures to exit 2."""


class ValidationError(Exception):
    """Bad inputs, bad configuration, or inconsistent data."""


class FileFormatError(ValidationError):
    """A data file failed header or schema validation."""
