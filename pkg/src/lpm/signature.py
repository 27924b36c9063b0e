"""Incremental theory construction and sealing.

A theory is an ordered list of entries, each validated against the strictly
preceding prefix: declarations must have a well-sorted type, definition
bodies must check against their stated type, and rewrite rules must have
convertible types on both sides under their bracket context. Sealing
freezes the theory into an immutable handle that kernel operations accept
and that can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import kernel
from .errors import (
    DuplicateName,
    HeadIsDefined,
    HeadNotDeclared,
    IllTypedRule,
    KernelError,
    SortError,
    TheorySealed,
    TypeMismatch,
)
from .rewriting import RewriteRule, pattern_to_term
from .terms import Sort, Term


@dataclass(frozen=True)
class Declaration:
    name: str
    type: Term


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term


@dataclass(frozen=True)
class RuleEntry:
    rule: RewriteRule


Entry = Union[Declaration, Definition, RuleEntry]


def entry_name(entry: Entry, index: int = 0) -> str:
    """Display name of an entry; unnamed rule entries are labelled by position."""
    if isinstance(entry, RuleEntry):
        return f"rule[{index}]"
    return entry.name


class SealedTheory:
    """Immutable view of a fully validated theory."""

    __slots__ = ("name", "entries", "_types", "_bodies", "_rules", "step_budget")

    def __init__(self, name, entries, types, bodies, rules, step_budget):
        self.name = name
        self.entries: tuple[Entry, ...] = entries
        self._types = types
        self._bodies = bodies
        self._rules = rules
        self.step_budget = step_budget

    def lookup_type(self, name: str) -> Optional[Term]:
        return self._types.get(name)

    def lookup_body(self, name: str) -> Optional[Term]:
        return self._bodies.get(name)

    def rules_for(self, name: str) -> tuple[RewriteRule, ...]:
        return self._rules.get(name, ())

    @property
    def constants(self) -> frozenset[str]:
        return frozenset(self._types)

    def with_budget(self, step_budget: int) -> "SealedTheory":
        return SealedTheory(self.name, self.entries, self._types, self._bodies, self._rules, step_budget)

    def __repr__(self) -> str:
        return f"<SealedTheory {self.name}: {len(self.entries)} entries>"


class Theory:
    """Mutable theory builder; validation happens on every add."""

    def __init__(self, name: str, base: SealedTheory | None = None, step_budget: int | None = None):
        self.name = name
        self.sealed = False
        if base is not None:
            self.entries: list[Entry] = list(base.entries)
            self._types = dict(base._types)
            self._bodies = dict(base._bodies)
            self._rules = {head: list(rs) for head, rs in base._rules.items()}
            self.step_budget = step_budget if step_budget is not None else base.step_budget
        else:
            self.entries = []
            self._types = {}
            self._bodies = {}
            self._rules = {}
            self.step_budget = step_budget if step_budget is not None else kernel.DEFAULT_STEP_BUDGET

    # The kernel reads theories through these three lookups.
    def lookup_type(self, name: str) -> Optional[Term]:
        return self._types.get(name)

    def lookup_body(self, name: str) -> Optional[Term]:
        return self._bodies.get(name)

    def rules_for(self, name: str) -> tuple[RewriteRule, ...]:
        return tuple(self._rules.get(name, ()))

    @property
    def constants(self) -> frozenset[str]:
        return frozenset(self._types)

    def _writable(self) -> None:
        if self.sealed:
            raise TheorySealed(self.name)

    def _fresh(self, name: str) -> None:
        if name in self._types:
            raise DuplicateName(name)

    def add_declaration(self, name: str, ty: Term) -> "Theory":
        self._writable()
        self._fresh(name)
        validate_entry(self, Declaration(name, ty))
        self._types[name] = ty
        self.entries.append(Declaration(name, ty))
        return self

    def add_definition(self, name: str, ty: Term, body: Term) -> "Theory":
        self._writable()
        self._fresh(name)
        validate_entry(self, Definition(name, ty, body))
        self._types[name] = ty
        self._bodies[name] = body
        self.entries.append(Definition(name, ty, body))
        return self

    def add_rule(self, rule: RewriteRule) -> "Theory":
        self._writable()
        validate_entry(self, RuleEntry(rule))
        self._rules.setdefault(rule.head, []).append(rule)
        self.entries.append(RuleEntry(rule))
        return self

    def check_rule_typing(self, rule: RewriteRule) -> None:
        check_rule_typing(self, rule)

    def add_entry(self, entry: Entry) -> "Theory":
        match entry:
            case Declaration(name, ty):
                return self.add_declaration(name, ty)
            case Definition(name, ty, body):
                return self.add_definition(name, ty, body)
            case RuleEntry(rule):
                return self.add_rule(rule)
        raise AssertionError(entry)

    def add_entries(self, entries: Iterable[Entry]) -> "Theory":
        for e in entries:
            self.add_entry(e)
        return self

    def admit_unchecked(self, entry: Entry) -> "Theory":
        """Record an entry validated elsewhere (against a snapshot of this theory).

        Only freshness and sealing are re-checked here; used by concurrent
        checking drivers that validate entries against `snapshot()` first.
        """
        self._writable()
        match entry:
            case Declaration(name, ty):
                self._fresh(name)
                self._types[name] = ty
            case Definition(name, ty, body):
                self._fresh(name)
                self._types[name] = ty
                self._bodies[name] = body
            case RuleEntry(rule):
                self._rules.setdefault(rule.head, []).append(rule)
        self.entries.append(entry)
        return self

    def snapshot(self) -> SealedTheory:
        """An immutable copy of the current state; the builder stays usable."""
        return SealedTheory(
            self.name,
            tuple(self.entries),
            dict(self._types),
            dict(self._bodies),
            {head: tuple(rs) for head, rs in self._rules.items()},
            self.step_budget,
        )

    def seal(self) -> SealedTheory:
        self.sealed = True
        return self.snapshot()


def check_rule_typing(theory, rule: RewriteRule) -> None:
    """Both rule sides must infer to convertible types under the bracket context."""
    ctx: tuple[tuple[str, Term], ...] = ()
    for name, ty in rule.varctx:
        try:
            s = kernel.whnf(theory, kernel.infer(theory, ctx, ty))
        except KernelError as e:
            raise IllTypedRule(detail=f"rule variable '{name}': {e}") from e
        if not isinstance(s, Sort):
            raise IllTypedRule(detail=f"rule variable '{name}' has a type that lives in no sort")
        ctx += ((name, ty),)
    lhs_term = pattern_to_term(rule.lhs, rule.varctx)
    hints = tuple(name for name, _ in rule.varctx)
    try:
        lhs_ty = kernel.infer(theory, ctx, lhs_term)
        rhs_ty = kernel.infer(theory, ctx, rule.rhs)
    except KernelError as e:
        raise IllTypedRule(detail=str(e)) from e
    if not kernel.convertible(theory, lhs_ty, rhs_ty):
        raise IllTypedRule(lhs_ty, rhs_ty, hints)


def validate_entry(theory, entry: Entry) -> None:
    """Check one entry against a theory view without mutating anything."""
    match entry:
        case Declaration(_, ty):
            _valid_type(theory, ty)
        case Definition(name, ty, body):
            _valid_type(theory, ty)
            try:
                kernel.check(theory, (), body, ty)
            except TypeMismatch as e:
                e.entry = name
                raise
        case RuleEntry(rule):
            if theory.lookup_type(rule.head) is None:
                raise HeadNotDeclared(rule.head)
            if theory.lookup_body(rule.head) is not None:
                raise HeadIsDefined(rule.head)
            check_rule_typing(theory, rule)


def _valid_type(theory, ty: Term) -> None:
    s = kernel.whnf(theory, kernel.infer(theory, (), ty))
    if not isinstance(s, Sort):
        raise SortError("declared type is neither a type nor a kind", ty)


def empty_theory(step_budget: int | None = None) -> SealedTheory:
    return Theory("empty", step_budget=step_budget).seal()
