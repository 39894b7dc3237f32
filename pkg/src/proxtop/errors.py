"""Exception types shared across the toolkit."""

from __future__ import annotations


class ProxtopError(Exception):
    """Base class for all toolkit errors."""


class ForeignPointError(ProxtopError):
    """A point id was used that does not belong to the space."""


class MissingCoordinatesError(ProxtopError):
    """An operation needed planar coordinates that a point does not carry."""


class MissingProbeError(ProxtopError):
    """A descriptive operation was requested without a probe function."""


class SpaceMismatchError(ProxtopError):
    """Two maps or spaces that must share a space do not."""


class GluePreconditionError(ProxtopError):
    """A gluing precondition failed.

    ``condition`` is one of ``"not-closed"``, ``"not-covering"``,
    ``"disagreement"``.
    """

    def __init__(self, condition: str, detail: str):
        self.condition = condition
        super().__init__(f"{condition}: {detail}")


class DegenerateTriangleError(ProxtopError):
    """Side lengths do not form a valid comparison triangle."""


class RasterizationError(ProxtopError):
    """A vertex cycle could not be rasterized (out of window, too short,
    repeated vertex, or a proper self-crossing)."""


class InvalidShapeError(ProxtopError):
    """A frame shape failed validation."""


class InputError(ProxtopError):
    """A parse or validation failure in user-supplied input.

    Carries the offending file, field and reason so the CLI can report
    them and exit with code 2.
    """

    def __init__(self, file: str, field: str, reason: str):
        self.file = file
        self.field = field
        self.reason = reason
        super().__init__(f"{file}: field {field!r}: {reason}")
