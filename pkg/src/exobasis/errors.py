"""Exception hierarchy shared by every module."""


class ExobasisError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class SingularMatrix(ExobasisError, ValueError):
    pass


class DimensionMismatch(ExobasisError, ValueError):
    pass


class MalformedBox(ExobasisError, ValueError):
    pass


class KExceedsN(ExobasisError, ValueError):
    pass


class DuplicateResidue(ExobasisError, ValueError):
    pass


class NotHermitian(ExobasisError, ValueError):
    pass


class ClassTooLarge(ExobasisError, ValueError):
    pass


class Unachievable(ExobasisError, ValueError):
    pass


class CertificateInvalid(ExobasisError, ValueError):
    pass


class NotEnoughResidues(ExobasisError, ValueError):
    pass


class EmptyPoly(ExobasisError, ValueError):
    pass


class WindowEmpty(ExobasisError, ValueError):
    pass


class KroneckerSearchFailed(ExobasisError, RuntimeError):
    def __init__(self, j: int):
        super().__init__(f"no Kronecker translate found for j={j}")
        self.j = j


class GeneratorInconsistent(ExobasisError, ValueError):
    pass


class SchemaError(ExobasisError, ValueError):
    """Well-formed JSON that does not match the expected document shape."""
