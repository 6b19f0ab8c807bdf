"""
Qualified names
---------------
Names in CIL are paths of identifiers. A leading dot anchors the path at the
global namespace; every namespace used by the pipeline is anchored.
"""

import re
from dataclasses import dataclass
from typing import Tuple

_SEGMENT = re.compile(r'^[A-Za-z0-9_]+$')


@dataclass(frozen=True, order=True)
class QualifiedName:
    """
    A possibly anchored dotted name.

    The global namespace itself is the anchored name with an empty path.
    """

    anchored: bool
    path: Tuple[str, ...]

    def __post_init__(self):
        if not self.path and not self.anchored:
            raise ValueError("relative names need at least one segment")
        for segment in self.path:
            if not _SEGMENT.match(segment):
                raise ValueError(f"invalid name segment '{segment}'")

    @classmethod
    def parse(cls, text):
        """
        Parse the concrete form of a name.

        Args:
            text: '.a.b' (anchored) or 'a.b' (relative)

        Returns:
            QualifiedName
        """
        anchored = text.startswith('.')
        body = text[1:] if anchored else text
        if not body:
            raise ValueError(f"invalid name '{text}'")
        return cls(anchored, tuple(body.split('.')))

    @classmethod
    def relative(cls, *segments):
        return cls(False, tuple(segments))

    @property
    def is_global(self):
        return self.anchored and not self.path

    @property
    def last(self):
        return self.path[-1]

    @property
    def prefix(self):
        """All segments but the last, as a tuple."""
        return self.path[:-1]

    @property
    def parent(self):
        if not self.anchored or not self.path:
            raise ValueError(f"{self} has no parent namespace")
        return QualifiedName(True, self.path[:-1])

    def child(self, *segments):
        return QualifiedName(self.anchored, self.path + tuple(segments))

    def join(self, other):
        """Extend this namespace with a relative name (sigma.rho)."""
        return QualifiedName(self.anchored, self.path + other.path)

    def is_within(self, namespace):
        """True if this anchored name equals or lies below namespace."""
        return (self.anchored and namespace.anchored
                and self.path[:len(namespace.path)] == namespace.path)

    def relative_to(self, namespace):
        """Path of this name below namespace (empty tuple if equal)."""
        if not self.is_within(namespace):
            raise ValueError(f"{self} is not inside {namespace}")
        return self.path[len(namespace.path):]

    def display(self):
        """Namespace rendering used in diagnostics: '#' for the global one."""
        return '#' if self.is_global else str(self)

    def __str__(self):
        text = '.'.join(self.path)
        return f'.{text}' if self.anchored else text


GLOBAL = QualifiedName(True, ())
