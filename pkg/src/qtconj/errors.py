"""Exception hierarchy shared by all modules.

Every domain error carries the name of the module that raised it so the CLI
can report ``<module>.<ErrorName>`` without guessing.
"""

from __future__ import annotations


class QTError(Exception):
    """Base class for all domain errors."""

    module = "qtconj"

    @property
    def name(self) -> str:
        return type(self).__name__

    @property
    def qualified_name(self) -> str:
        return f"{self.module}.{self.name}"


class ParseError(QTError):
    module = "cli"

    def __init__(self, message: str, line: int | None = None, position: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.position = position


# scalars
class ScalarError(QTError):
    module = "scalars"


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class KindMismatch(ScalarError, TypeError):
    pass


class ZeroArgument(ScalarError, ValueError):
    pass


class OutsideSubring(ScalarError, ValueError):
    pass


# lattice
class LatticeError(QTError):
    module = "lattice"


class NotUnimodular(LatticeError, ValueError):
    pass


class UnsupportedScalarKind(LatticeError, ValueError):
    pass


class NotFgc(LatticeError, ValueError):
    pass


class CanonicalizationFailed(LatticeError, RuntimeError):
    pass


class NotCanonical(LatticeError, ValueError):
    pass


class InvalidPresentation(LatticeError, ValueError):
    pass


# qtorus
class TorusError(QTError):
    module = "qtorus"


class PresentationMismatch(TorusError, ValueError):
    pass


class NotInPositivePart(TorusError, ValueError):
    pass


# matlie
class MatLieError(QTError):
    module = "matlie"


class SizeMismatch(MatLieError, ValueError):
    pass


class NotInSl(MatLieError, ValueError):
    pass


class NotDiagonal(MatLieError, ValueError):
    pass


class BadCharacteristic(MatLieError, ValueError):
    pass


class ChainMismatch(MatLieError, ValueError):
    pass


class InvalidWitness(MatLieError, ValueError):
    pass


# modules
class ModulesError(QTError):
    module = "modules"


class NotAssociativeWord(ModulesError, ValueError):
    pass


class SystemInvalid(ModulesError, RuntimeError):
    pass


class WindowExhausted(ModulesError, RuntimeError):
    def __init__(self, t_max: int, message: str | None = None):
        super().__init__(message or f"no conclusion within degree window t_max={t_max}")
        self.t_max = t_max


class ZeroVector(ModulesError, ValueError):
    pass


class NotPositive(ModulesError, ValueError):
    pass


class NotCyclic(ModulesError, RuntimeError):
    def __init__(self, index: int, witness, message: str | None = None):
        super().__init__(message or f"summand {index} is not cyclic")
        self.index = index
        self.witness = witness


class NotInvertible(ModulesError, RuntimeError):
    pass


class IndivisibilityViolated(ModulesError, RuntimeError):
    pass


# specialize
class SpecializeError(QTError):
    module = "specialize"


class NoPrimeInRange(SpecializeError, RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"no admissible prime below {limit}")
        self.limit = limit


class WitnessDegenerates(SpecializeError, RuntimeError):
    pass


# conjugacy
class ConjugacyError(QTError):
    module = "conjugacy"


class VerificationFailed(ConjugacyError, RuntimeError):
    pass


class NoSolution(ConjugacyError, ValueError):
    pass
