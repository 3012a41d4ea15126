"""
Repository interface definition.
"""

from typing import Protocol

from instanton_calculus.domain.models import KnotRecord


class KnotRepository(Protocol):
    """
    Interface for accessing knot records.
    Implementations can be JSON-file based, in-memory, etc.
    """

    def get_record(self, name: str) -> KnotRecord:
        """Retrieve a single record by name; ValueError when unknown."""
        ...

    def list_records(self) -> list[KnotRecord]:
        """All records, sorted by name."""
        ...

    def names(self) -> list[str]:
        ...
