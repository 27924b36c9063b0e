"""Exception hierarchy shared across the package.

Kernel and signature errors carry the offending terms; rendering them uses
the pretty printer lazily to avoid an import cycle with the syntax module.
"""

from __future__ import annotations

from .terms import Term


def _show(t: Term, ctx_hints: tuple[str, ...] = ()) -> str:
    from .syntax import print_term

    return print_term(t, env=ctx_hints)


class LpmError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LpmError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(message)

    def __str__(self) -> str:
        msg = f"{self.line}:{self.column}: {self.args[0]}"
        if self.expected:
            msg += " (expected " + ", ".join(sorted(self.expected)) + ")"
        return msg


class PatternError(LpmError):
    """Rule left-hand side falls outside the first-order left-linear fragment."""


class BudgetExceeded(LpmError):
    def __init__(self, term: Term, limit: int):
        self.term = term
        self.limit = limit
        super().__init__(f"step budget of {limit} exceeded")

    def __str__(self) -> str:
        return f"step budget of {self.limit} exceeded while reducing {_show(self.term)}"


class KernelError(LpmError):
    """Base class for type checking failures."""


class UnboundVariable(KernelError):
    def __init__(self, index: int, depth: int):
        self.index = index
        self.depth = depth
        super().__init__(f"unbound variable index {index} in context of size {depth}")


class UnknownConstant(KernelError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown constant '{name}'")


class NotAFunction(KernelError):
    def __init__(self, term: Term, type_: Term, ctx_hints: tuple[str, ...] = ()):
        self.term = term
        self.type = type_
        self.ctx_hints = ctx_hints
        super().__init__("application head is not a function")

    def __str__(self) -> str:
        return (
            f"term {_show(self.term, self.ctx_hints)} of type "
            f"{_show(self.type, self.ctx_hints)} is applied but is not a function"
        )


class SortError(KernelError):
    def __init__(self, message: str, term: Term | None = None, ctx_hints: tuple[str, ...] = ()):
        self.term = term
        self.ctx_hints = ctx_hints
        super().__init__(message)

    def __str__(self) -> str:
        if self.term is None:
            return str(self.args[0])
        return f"{self.args[0]}: {_show(self.term, self.ctx_hints)}"


class TypeMismatch(KernelError):
    def __init__(
        self,
        expected: Term,
        inferred: Term,
        path: tuple[str, ...] = (),
        ctx_hints: tuple[str, ...] = (),
        entry: str | None = None,
    ):
        self.expected = expected
        self.inferred = inferred
        self.path = path
        self.ctx_hints = ctx_hints
        self.entry = entry
        super().__init__("type mismatch")

    def __str__(self) -> str:
        where = f" in '{self.entry}'" if self.entry else ""
        at = " at " + ".".join(self.path) if self.path else ""
        return (
            f"type mismatch{where}{at}: expected {_show(self.expected, self.ctx_hints)}, "
            f"inferred {_show(self.inferred, self.ctx_hints)}"
        )


class SignatureError(LpmError):
    """Base class for theory construction failures."""


class DuplicateName(SignatureError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"name '{name}' is already declared")


class TheorySealed(SignatureError):
    def __init__(self, name: str):
        super().__init__(f"theory '{name}' is sealed and cannot be extended")


class HeadNotDeclared(SignatureError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"rule head '{name}' is not declared")


class HeadIsDefined(SignatureError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"rule head '{name}' is a defined constant; rules may only rewrite declared ones")


class IllTypedRule(SignatureError):
    def __init__(
        self,
        lhs_type: Term | None = None,
        rhs_type: Term | None = None,
        ctx_hints: tuple[str, ...] = (),
        detail: str = "",
    ):
        self.lhs_type = lhs_type
        self.rhs_type = rhs_type
        self.ctx_hints = ctx_hints
        self.detail = detail
        super().__init__("ill-typed rewrite rule")

    def __str__(self) -> str:
        if self.lhs_type is not None and self.rhs_type is not None:
            return (
                f"rule sides have unconvertible types: left {_show(self.lhs_type, self.ctx_hints)}, "
                f"right {_show(self.rhs_type, self.ctx_hints)}"
            )
        return f"ill-typed rewrite rule: {self.detail}"


class TranslateError(LpmError):
    """Base class for translation failures."""


class FeatureViolation(TranslateError):
    def __init__(self, features, path: tuple[str, ...] = ()):
        self.features = features
        self.path = path
        super().__init__("term uses features outside the simply typed fragment")

    def __str__(self) -> str:
        at = " at " + ".".join(self.path) if self.path else ""
        return f"outside the simply typed fragment ({self.features.describe()}){at}"


class LiftCheckFailure(TranslateError):
    def __init__(self, entry: str, cause: LpmError):
        self.entry = entry
        self.cause = cause
        super().__init__(f"internal defect: lifted entry '{entry}' fails re-checking: {cause}")


class LowerCheckFailure(TranslateError):
    def __init__(self, entry: str, cause: LpmError):
        self.entry = entry
        self.cause = cause
        super().__init__(f"internal defect: lowered entry '{entry}' fails re-checking: {cause}")
