"""
Error types for spanfact.

Every error carries a stable ``kind`` and a ``details`` dict so the CLI can
print it as machine-readable JSON and pick an exit code.
"""

from typing import Any, Dict

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class SpanFactError(Exception):
    """Base error with a kind, details and an exit code."""

    exit_code = EXIT_INTERNAL

    def __init__(self, kind: str, message: str = "", **details: Any):
        self.kind = kind
        self.details: Dict[str, Any] = details
        super().__init__(message or kind)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.kind,
            "message": str(self),
            "details": self.details,
            "exit_code": self.exit_code,
        }


class UsageError(SpanFactError):
    """Bad parameters or malformed input."""

    exit_code = EXIT_USAGE


class VerificationError(SpanFactError):
    """A checked property does not hold for the given input."""

    exit_code = EXIT_VERIFICATION


class InternalInconsistency(SpanFactError):
    """A construction that must succeed did not. Never swallowed."""

    exit_code = EXIT_INTERNAL


class NotRegular(VerificationError):
    def __init__(self, vertex: int, in_degree: int, out_degree: int, expected: int):
        super().__init__(
            "NotRegular",
            f"vertex {vertex} has in-degree {in_degree}, out-degree {out_degree} (expected {expected})",
            vertex=vertex, **{"in": in_degree, "out": out_degree, "expected": expected},
        )


class Disconnected(VerificationError):
    def __init__(self, source: int, unreachable_vertex: int):
        super().__init__(
            "Disconnected",
            f"vertex {unreachable_vertex} is unreachable from {source}",
            source=source, unreachable_vertex=unreachable_vertex,
        )


class BadParams(UsageError):
    def __init__(self, message: str, **details: Any):
        super().__init__("BadParams", message, **details)


class BadFactorIndex(UsageError):
    def __init__(self, letter: int, d: int):
        super().__init__("BadFactorIndex", f"factor index {letter} outside [1, {d}]",
                         letter=letter, d=d)


class CapExceeded(UsageError):
    def __init__(self, cap: int, what: str = "elements"):
        super().__init__("CapExceeded", f"more than {cap} {what}", cap=cap, what=what)


class InvalidArtifact(UsageError):
    def __init__(self, message: str, **details: Any):
        super().__init__("InvalidArtifact", message, **details)


class MatchingFailed(InternalInconsistency):
    def __init__(self, round_index: int, matched: int, n: int):
        super().__init__(
            "MatchingFailed",
            f"matching round {round_index} covered {matched} of {n} vertices",
            round=round_index, matched=matched, n=n,
        )


class FactorNotPermutation(InternalInconsistency):
    def __init__(self, factor: int, vertex: int):
        super().__init__(
            "FactorNotPermutation",
            f"factor F_{factor} is not a fixed-point-free permutation near vertex {vertex}",
            factor=factor, vertex=vertex,
        )


class SpanningFailed(InternalInconsistency):
    def __init__(self, witness: Dict[str, Any]):
        super().__init__("SpanningFailed", "word list is not spanning", witness=witness)


class SpanningSearchFailed(VerificationError):
    def __init__(self, attempts: int, witness: Dict[str, Any]):
        super().__init__(
            "SpanningSearchFailed",
            f"no spanning word list found in {attempts} attempts",
            attempts=attempts, witness=witness,
        )
        self.attempts = attempts
        self.witness = witness
