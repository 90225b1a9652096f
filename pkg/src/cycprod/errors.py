"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GroupError(Exception):
    """Base class for all package errors."""


class InvalidAction(GroupError):
    pass


class TableInvalid(GroupError):
    """A multiplication table or input file failed validation.

    ``line`` and ``column`` are 1-based positions in the source text when the
    failure can be pinned to one.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class OrderBound(GroupError):
    pass


class IndexOutOfRange(GroupError, IndexError):
    pass


class GroupMismatch(GroupError, ValueError):
    pass


class NotSubgroup(GroupError):
    pass


class NotNormal(GroupError):
    pass


class EmptySeed(GroupError):
    pass


class InvalidFactorization(GroupError):
    pass


class NotCyclic(GroupError):
    pass


class NotPermutable(GroupError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"factors {i} and {j} do not permute")


class ProductNotWhole(GroupError):
    pass


class NotSoluble(GroupError):
    pass


class ActionNotAutomorphism(GroupError):
    pass


class ClaimViolation(GroupError):
    """A structural claim that must hold for factorized groups failed.

    Raised by the factorization machinery; the batch runner turns these into
    failed verdicts instead of aborting.
    """


class ProductNotSubgroup(ClaimViolation):
    pass


class BasisNotPermutable(ClaimViolation):
    pass


class NoHallSubgroup(ClaimViolation):
    pass
