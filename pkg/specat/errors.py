"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

from typing import List, Optional, Sequence


class SpecatError(ValueError):
    """Base class for every error raised by the toolkit."""


# Category data model

class DuplicateId(SpecatError):
    pass


class DanglingEndpoint(SpecatError):
    pass


class NonTotalComposition(SpecatError):
    pass


class LawViolation(SpecatError):
    """A law failed; ``violations`` lists every offending witness."""

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None) -> None:
        super().__init__(message)
        self.violations: List[str] = list(violations or [])


class UnknownObject(SpecatError):
    pass


class UnknownMorphism(SpecatError):
    pass


class RelationNotReflexiveTransitive(SpecatError):
    pass


class SearchBudgetExceeded(SpecatError, RuntimeError):
    def __init__(self, budget: int) -> None:
        super().__init__(f"search exceeded the budget of {budget} nodes")
        self.budget = budget


# Species

class FunctorLawViolation(LawViolation):
    pass


class SubfunctorViolation(SpecatError):
    pass


class MonotonicityViolation(SpecatError):
    def __init__(self, message: str, witness: Optional[tuple] = None) -> None:
        super().__init__(message)
        self.witness = witness


class PayloadTooLarge(SpecatError):
    pass


# Constructive functors

class NotFaithful(SpecatError):
    pass


class LiftMissing(SpecatError):
    pass


class LiftNotUnique(SpecatError):
    pass


class NotAnIso(SpecatError):
    pass


class DomainMismatch(SpecatError):
    pass


class NotMaximalGroupoid(SpecatError):
    pass


class NotConnectedGroupoid(SpecatError):
    pass


class NotInvertible(SpecatError):
    pass


class VIsInvertible(SpecatError):
    pass


class SameComponent(SpecatError):
    pass


class NoColimit(SpecatError):
    """The requested colimit does not exist; a legitimate outcome."""


# Reconstruction

class NotConnected(SpecatError):
    pass


class SizeBound(SpecatError):
    pass


class NotMinimal(SpecatError):
    pass


class InconsistentOrientation(SpecatError):
    pass


class EndomorphismNotClosed(SpecatError):
    pass


# Documents and corpus

class BoundsTooLarge(SpecatError):
    pass


class DocumentSyntaxError(SpecatError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(SpecatError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
