"""Debugging aids."""

from contextlib import contextmanager

from typing import Iterator

class Debug:
    """Use this to turn on/off progress and debug messages."""

    _debug = False

    @classmethod
    def is_enabled(cls) -> bool:
        """Return True if debugging is activated."""
        return cls._debug

    @classmethod
    def set_debug(cls, value: bool) -> None:
        """Set the debug flag."""
        cls._debug = value

    @classmethod
    @contextmanager
    def scoped(cls, value: bool) -> Iterator[None]:
        """Set the flag for the duration of a block.

        Worker processes of a sweep do not share the flag of the
        parent, so they set it this way.

        """
        previous = cls._debug
        cls._debug = value
        try:
            yield
        finally:
            cls._debug = previous
