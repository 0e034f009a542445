"""Common exception base for the package.

Module-specific errors live next to the code that raises them; they all
derive from :class:`DistwsdError` so the CLI can map any expected failure
to exit code 1 and reserve exit code 2 for genuine bugs.
"""


class DistwsdError(Exception):
    """Base class for all errors raised by distwsd on bad input or state."""
