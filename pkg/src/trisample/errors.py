"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the offending
``field`` (a vertex, face, edge or parameter name) so the CLI can emit a
structured error record.
"""


class TrisampleError(Exception):
    code = "error"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def record(self):
        return {"error": self.code, "field": None if self.field is None else str(self.field),
                "message": str(self)}


class ValidationError(TrisampleError, ValueError):
    code = "validation"


class NonTriangularFace(ValidationError):
    code = "non_triangular_face"


class InconsistentRotation(ValidationError):
    code = "inconsistent_rotation"


class WrongExternalCount(ValidationError):
    code = "wrong_external_count"


class NotSimple(ValidationError):
    code = "not_simple"


class TooSmall(ValidationError):
    code = "too_small"


class InvalidOrientation(ValidationError):
    code = "invalid_orientation"


class ExternalVertex(ValidationError):
    code = "external_vertex"


class InvalidTower(ValidationError):
    code = "invalid_tower"


class InvalidDyckPair(ValidationError):
    code = "invalid_dyck_pair"


class Infeasible(TrisampleError, RuntimeError):
    """No 3-orientation found; signals a data-model bug on valid input."""

    code = "infeasible"


class NoValidColoring(TrisampleError, RuntimeError):
    code = "no_valid_coloring"


class CapExceeded(TrisampleError, RuntimeError):
    code = "cap_exceeded"

    def __init__(self, message, partial_count=None, field=None):
        super().__init__(message, field)
        self.partial_count = partial_count


class TooLarge(TrisampleError, ValueError):
    code = "too_large"


class IncompleteSpace(TrisampleError, RuntimeError):
    code = "incomplete_space"


class HorizonTooShort(TrisampleError, RuntimeError):
    code = "horizon_too_short"


class EmptySide(TrisampleError, ValueError):
    code = "empty_side"
