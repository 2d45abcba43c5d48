"""Exception hierarchy shared by all cpma modules."""


class CpmaError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(CpmaError):
    """A file does not conform to its declared format.

    ``offset`` is the byte offset of the first offending byte when known;
    ``line`` is the 1-based line number for line-oriented formats (PLY).
    """

    def __init__(self, message, offset=None, line=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.offset = offset
        self.line = line


class DomainError(CpmaError):
    """Input violates a domain precondition (e.g. empty shape)."""


class ParameterError(CpmaError):
    """An argument is outside its allowed range or inconsistent."""


class MethodNotImplementedError(CpmaError):
    """A declared-but-unimplemented pruning method was requested."""


class VoxelizationError(CpmaError):
    """Mesh voxelization failed (ray-parity inconsistency)."""
