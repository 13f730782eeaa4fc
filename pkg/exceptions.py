"""
Engine exceptions.

Every error carries the process exit code the command line reports for it,
the same way an HTTP exception carries its status code.
"""

from typing import Optional, Sequence


class EngineError(Exception):
    """Base class for all errors raised by the engine"""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class DSLSyntaxError(EngineError):
    exit_code = 2

    def __init__(self, detail: str, line: int, column: int):
        super().__init__(f"{detail} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownSpeciesError(DSLSyntaxError):
    pass


class MalformedIndexError(EngineError):
    exit_code = 2

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(detail if line is None else f"{detail} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnsupportedPatternError(EngineError):
    exit_code = 3


class ResourceGuardError(EngineError):
    exit_code = 4


class UnknownModeError(EngineError):
    pass


class StatisticsMismatchError(EngineError):
    pass


class SpaceMismatchError(EngineError):
    pass


class NormalizationError(EngineError):
    pass


class SectorLeakError(EngineError):
    pass


class LatticeError(EngineError):
    pass


class PolarizationError(EngineError):
    pass


class NonUnitaryError(EngineError):
    pass


class OffShellModeError(EngineError):
    """Raised in strict mode for an off-shell photon mode; keeps the coefficient"""

    def __init__(self, detail: str, coefficient: Sequence[complex]):
        super().__init__(detail)
        self.coefficient = tuple(coefficient)


class SpaceConfigurationError(EngineError):
    pass
