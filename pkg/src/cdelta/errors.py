"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CDeltaError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 5


class InvalidParameter(CDeltaError, ValueError):
    pass


class MalformedTable(CDeltaError, ValueError):
    pass


class AxiomViolation(CDeltaError):
    """A ring law fails; ``witness`` is the offending index triple (or pair)."""

    def __init__(self, law: str, witness: tuple[int, ...]):
        self.law = law
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"{law} fails at {self.witness}")


class OrderCapExceeded(CDeltaError):
    exit_code = 3

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"ring of order {order} exceeds the order cap {cap}")


class RingMismatch(CDeltaError, TypeError):
    pass


class NonCommutativeBase(CDeltaError):
    def __init__(self, witness: tuple[int, int]):
        self.witness = witness
        super().__init__(f"base ring is not commutative: {witness[0]}*{witness[1]} != {witness[1]}*{witness[0]}")


class NonMonicModulus(CDeltaError, ValueError):
    pass


class NotAHomomorphism(CDeltaError):
    def __init__(self, law: str, witness: tuple[int, int]):
        self.law = law
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"map does not preserve {law} at {self.witness}")


class NotUnital(CDeltaError):
    pass


class NotASubring(CDeltaError):
    def __init__(self, reason: str, witness: tuple = ()):
        self.reason = reason
        self.witness = tuple(witness)
        super().__init__(f"carrier is not a subring: {reason} {self.witness}".rstrip())


class NonCentralParameter(CDeltaError, ValueError):
    pass


class NotIdempotent(CDeltaError, ValueError):
    pass


class NotAnIdeal(CDeltaError):
    def __init__(self, reason: str, witness: tuple = ()):
        self.reason = reason
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"not a two-sided ideal: {reason} {self.witness}".rstrip())


class NotAGroup(CDeltaError):
    def __init__(self, reason: str, witness: tuple = ()):
        self.reason = reason
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"not a group: {reason} {self.witness}".rstrip())


class InternalInconsistency(CDeltaError):
    pass


class UnknownKind(CDeltaError, KeyError):
    pass


class UnknownCheck(CDeltaError, KeyError):
    pass


class PredicateParseError(CDeltaError, ValueError):
    exit_code = 2


class ExpressionSyntaxError(CDeltaError, SyntaxError):
    exit_code = 2

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class BadMagic(CDeltaError):
    pass


class ChecksumMismatch(CDeltaError):
    pass


class VersionUnsupported(CDeltaError):
    pass
