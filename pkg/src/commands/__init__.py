"""Command groups dispatched by the CLI."""

from .algebra import AlgebraCommands
from .geometry import GeometryCommands

__all__ = ["AlgebraCommands", "GeometryCommands"]
