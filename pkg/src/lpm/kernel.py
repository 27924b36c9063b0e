"""Reduction, conversion, and type checking.

Definitional equality is beta reduction plus definition unfolding plus the
theory's rewrite rules. Weak head normalisation repeats three kinds of head
step to a fixpoint: unfold a defined head constant, contract a beta redex,
or apply the first matching rewrite rule. Conversion compares weak head
normal forms structurally, re-normalising at each mismatch, with no eta
rule. Typing is the two-sorted functional pure type system over TYPE and
KIND with products formed at (TYPE, TYPE) and (TYPE, KIND).

Every public operation runs under a step budget (one unit per head step) so
that ill-founded user rule sets fail loudly instead of hanging.
"""

from __future__ import annotations

from typing import Optional

from .errors import (
    BudgetExceeded,
    NotAFunction,
    SortError,
    TypeMismatch,
    UnboundVariable,
    UnknownConstant,
)
from .rewriting import rewrite_with
from .terms import (
    KIND,
    TYPE,
    App,
    Const,
    Context,
    Lam,
    Pi,
    Sort,
    SortKind,
    Term,
    Var,
    apply_spine,
    shift,
    spine,
    subst,
)

DEFAULT_STEP_BUDGET = 10_000_000


class Budget:
    """Mutable head-step counter shared by one top-level kernel call."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, t: Term) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(t, self.limit)


def _budget(theory, budget: Optional[int]) -> Budget:
    return Budget(budget if budget is not None else theory.step_budget)


def _head_step(theory, t: Term, budget: Budget) -> Optional[Term]:
    head, args = spine(t)
    if isinstance(head, Lam) and args:
        return apply_spine(subst(head.body, 0, args[0]), args[1:])
    if isinstance(head, Const):
        body = theory.lookup_body(head.name)
        if body is not None:
            return apply_spine(body, args)
        rules = theory.rules_for(head.name)
        if rules:
            return rewrite_with(rules, t, lambda u: _whnf(theory, u, budget))
    return None


def _whnf(theory, t: Term, budget: Budget) -> Term:
    while True:
        stepped = _head_step(theory, t, budget)
        if stepped is None:
            return t
        budget.spend(t)
        t = stepped


def whnf(theory, t: Term, budget: Optional[int] = None) -> Term:
    """Weak head normal form: no reduction under binders."""
    return _whnf(theory, t, _budget(theory, budget))


def head_step(theory, t: Term, budget: Optional[int] = None) -> Optional[Term]:
    """A single head reduction step (unfold, beta, or rewrite), if one exists."""
    return _head_step(theory, t, _budget(theory, budget))


def reducer_for(theory, budget: Optional[int] = None):
    """Weak head reduction closure over a fresh budget, for rule matching."""
    b = _budget(theory, budget)
    return lambda u: _whnf(theory, u, b)


def _normalize(theory, t: Term, budget: Budget) -> Term:
    t = _whnf(theory, t, budget)
    match t:
        case App(f, a):
            return App(_normalize(theory, f, budget), _normalize(theory, a, budget))
        case Lam(h, dom, body):
            return Lam(h, _normalize(theory, dom, budget), _normalize(theory, body, budget))
        case Pi(h, dom, cod):
            return Pi(h, _normalize(theory, dom, budget), _normalize(theory, cod, budget))
        case _:
            return t


def normalize(theory, t: Term, budget: Optional[int] = None) -> Term:
    """Full normal form, reducing under binders; idempotent."""
    return _normalize(theory, t, _budget(theory, budget))


def _conv(theory, t: Term, u: Term, budget: Budget) -> bool:
    if t == u:
        return True
    t = _whnf(theory, t, budget)
    u = _whnf(theory, u, budget)
    match t, u:
        case Sort(a), Sort(b):
            return a is b
        case Const(a), Const(b):
            return a == b
        case Var(i), Var(j):
            return i == j
        case App(f, a), App(g, b):
            return _conv(theory, f, g, budget) and _conv(theory, a, b, budget)
        case Lam(_, d1, b1), Lam(_, d2, b2):
            return _conv(theory, d1, d2, budget) and _conv(theory, b1, b2, budget)
        case Pi(_, d1, c1), Pi(_, d2, c2):
            return _conv(theory, d1, d2, budget) and _conv(theory, c1, c2, budget)
        case _:
            return False


def convertible(theory, t: Term, u: Term, budget: Optional[int] = None) -> bool:
    """Equality modulo beta, definition unfolding, and the theory's rules."""
    return _conv(theory, t, u, _budget(theory, budget))


def _hints(ctx: Context) -> tuple[str, ...]:
    return tuple(name for name, _ in ctx)


def _ensure_domain(theory, ctx: Context, dom: Term, budget: Budget) -> None:
    s = _whnf(theory, _infer(theory, ctx, dom, budget), budget)
    if s != TYPE:
        raise SortError("binder domain is not a type", dom, _hints(ctx))


def _infer(theory, ctx: Context, t: Term, budget: Budget) -> Term:
    match t:
        case Sort(k):
            if k is SortKind.TYPE:
                return KIND
            raise SortError("Kind has no type")
        case Const(name):
            ty = theory.lookup_type(name)
            if ty is None:
                raise UnknownConstant(name)
            return ty
        case Var(i):
            if i >= len(ctx):
                raise UnboundVariable(i, len(ctx))
            return shift(ctx[len(ctx) - 1 - i][1], i + 1)
        case App(f, a):
            fty = _whnf(theory, _infer(theory, ctx, f, budget), budget)
            if not isinstance(fty, Pi):
                raise NotAFunction(f, fty, _hints(ctx))
            _check(theory, ctx, a, fty.domain, budget, ())
            return subst(fty.codomain, 0, a)
        case Lam(h, dom, body):
            _ensure_domain(theory, ctx, dom, budget)
            inner = ctx + ((h, dom),)
            bty = _infer(theory, inner, body, budget)
            s = _whnf(theory, _infer(theory, inner, bty, budget), budget)
            if not isinstance(s, Sort):
                raise SortError("abstraction body lives in no sort", body, _hints(inner))
            return Pi(h, dom, bty)
        case Pi(h, dom, cod):
            _ensure_domain(theory, ctx, dom, budget)
            s = _whnf(theory, _infer(theory, ctx + ((h, dom),), cod, budget), budget)
            if not isinstance(s, Sort):
                raise SortError("product codomain is not a type or kind", cod, _hints(ctx) + (h,))
            return s
    raise AssertionError(t)


def infer(theory, ctx: Context | list, t: Term, budget: Optional[int] = None) -> Term:
    """Type of t in ctx under the given theory."""
    return _infer(theory, tuple(ctx), t, _budget(theory, budget))


def _check(theory, ctx: Context, t: Term, expected: Term, budget: Budget, path: tuple[str, ...]) -> None:
    want = _whnf(theory, expected, budget)
    if isinstance(t, Lam) and isinstance(want, Pi):
        _ensure_domain(theory, ctx, t.domain, budget)
        if not _conv(theory, t.domain, want.domain, budget):
            raise TypeMismatch(want.domain, t.domain, path + ("domain",), _hints(ctx))
        _check(theory, ctx + ((t.hint, want.domain),), t.body, want.codomain, budget, path + ("body",))
        return
    actual = _infer(theory, ctx, t, budget)
    if not _conv(theory, actual, expected, budget):
        raise TypeMismatch(expected, actual, path, _hints(ctx))


def check(theory, ctx: Context | list, t: Term, expected: Term, budget: Optional[int] = None) -> None:
    """Check t against an expected type, refining abstractions against products."""
    _check(theory, tuple(ctx), t, expected, _budget(theory, budget), ())
