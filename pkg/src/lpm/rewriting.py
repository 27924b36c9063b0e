"""First-order left-linear rewrite rules and pattern matching.

Rules extend definitional equality: the kernel reduces with them alongside
beta steps and definition unfolding. Patterns are restricted to constant
heads applied to rule variables and nested constant-headed patterns; rule
selection is first match in declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import PatternError
from .terms import App, Const, Lam, Pi, Term, Var, apply_spine, shift, spine

SubstitutionMap = dict[str, Term]


@dataclass(frozen=True)
class Pattern:
    pass


@dataclass(frozen=True)
class PatternVar(Pattern):
    name: str


@dataclass(frozen=True)
class PatternConst(Pattern):
    name: str


@dataclass(frozen=True)
class PatternApp(Pattern):
    head: PatternConst
    args: tuple[Pattern, ...]

    def __post_init__(self):
        if not isinstance(self.head, PatternConst):
            raise PatternError("pattern head must be a constant")
        if not self.args:
            raise PatternError("applied pattern needs at least one argument")


def pattern_vars(p: Pattern) -> list[str]:
    """Pattern variable names in left-to-right order (with repetitions)."""
    match p:
        case PatternVar(name):
            return [name]
        case PatternConst(_):
            return []
        case PatternApp(_, args):
            out: list[str] = []
            for a in args:
                out += pattern_vars(a)
            return out
    raise AssertionError(p)


@dataclass(frozen=True)
class RewriteRule:
    """varctx is a telescope of (name, type) pairs binding the rule variables.

    In rhs (and in the lhs read back as a term) the last varctx entry is
    de Bruijn index 0.
    """

    varctx: tuple[tuple[str, Term], ...]
    lhs: Pattern
    rhs: Term

    def __post_init__(self):
        if not isinstance(self.lhs, (PatternApp, PatternConst)):
            raise PatternError("rule left-hand side must have a constant head")
        occurring = pattern_vars(self.lhs)
        dups = {v for v in occurring if occurring.count(v) > 1}
        if dups:
            raise PatternError(f"pattern variable '{sorted(dups)[0]}' occurs twice; rules must be left-linear")
        declared = [name for name, _ in self.varctx]
        if len(declared) != len(set(declared)):
            raise PatternError("duplicate rule variable in bracket context")
        unknown = set(occurring) - set(declared)
        if unknown:
            raise PatternError(f"pattern variable '{sorted(unknown)[0]}' missing from the bracket context")
        stray = _rule_vars_in_rhs(self.rhs, self.varctx) - set(occurring)
        if stray:
            raise PatternError(
                f"right-hand side uses variable '{sorted(stray)[0]}' that the left-hand side does not bind"
            )

    @property
    def head(self) -> str:
        lhs = self.lhs
        return lhs.head.name if isinstance(lhs, PatternApp) else lhs.name

    @property
    def arity(self) -> int:
        return len(self.lhs.args) if isinstance(self.lhs, PatternApp) else 0


def _rule_vars_in_rhs(rhs: Term, varctx: Sequence[tuple[str, Term]]) -> set[str]:
    n = len(varctx)
    names: set[str] = set()

    def go(t: Term, depth: int) -> None:
        match t:
            case Var(i):
                if i >= depth:
                    j = i - depth
                    assert j < n, "rhs variable escapes the rule context"
                    names.add(varctx[n - 1 - j][0])
            case App(f, a):
                go(f, depth)
                go(a, depth)
            case Lam(_, dom, body):
                go(dom, depth)
                go(body, depth + 1)
            case Pi(_, dom, cod):
                go(dom, depth)
                go(cod, depth + 1)
            case _:
                pass

    go(rhs, 0)
    return names


Reduce = Callable[[Term], Term]


def match(p: Pattern, t: Term, reduce: Reduce | None = None) -> Optional[SubstitutionMap]:
    """First-order matching: the unique sigma with sigma(p) == t, if any.

    `reduce` brings a subterm to weak head normal form before a constant
    head is inspected; by default terms are taken as given.
    """
    if reduce is None:
        reduce = lambda u: u
    bindings: SubstitutionMap = {}
    return bindings if _match_into(p, t, reduce, bindings) else None


def _match_into(p: Pattern, t: Term, reduce: Reduce, bindings: SubstitutionMap) -> bool:
    match p:
        case PatternVar(name):
            bindings[name] = t
            return True
        case PatternConst(name):
            head, args = spine(reduce(t))
            return not args and isinstance(head, Const) and head.name == name
        case PatternApp(phead, pargs):
            head, args = spine(reduce(t))
            if not (isinstance(head, Const) and head.name == phead.name):
                return False
            if len(args) != len(pargs):
                return False
            return all(_match_into(q, a, reduce, bindings) for q, a in zip(pargs, args))
    raise AssertionError(p)


def instantiate(rule: RewriteRule, bindings: SubstitutionMap) -> Term:
    """Rule rhs with every rule variable replaced by its matched term.

    Matched terms live at the depth of the matched redex; they are shifted
    by the number of rhs binders crossed on the way in.
    """
    n = len(rule.varctx)

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(i):
                if i < depth:
                    return t
                name = rule.varctx[n - 1 - (i - depth)][0]
                return shift(bindings[name], depth)
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Lam(h, dom, body):
                return Lam(h, go(dom, depth), go(body, depth + 1))
            case Pi(h, dom, cod):
                return Pi(h, go(dom, depth), go(cod, depth + 1))
            case _:
                return t

    return go(rule.rhs, 0)


def rewrite_with(rules: Sequence[RewriteRule], t: Term, reduce: Reduce) -> Optional[Term]:
    """One head rewrite step using the first rule that matches a spine prefix.

    Extra spine arguments beyond the rule's arity stay applied to the result.
    """
    head, args = spine(t)
    if not isinstance(head, Const):
        return None
    for rule in rules:
        k = rule.arity
        if k > len(args):
            continue
        pargs = rule.lhs.args if isinstance(rule.lhs, PatternApp) else ()
        bindings: SubstitutionMap = {}
        if all(_match_into(q, a, reduce, bindings) for q, a in zip(pargs, args)):
            return apply_spine(instantiate(rule, bindings), args[k:])
    return None


def head_rewrite(theory, t: Term) -> Optional[Term]:
    """Public one-step head rewrite against a sealed theory."""
    from .kernel import reducer_for

    head, _ = spine(t)
    if not isinstance(head, Const):
        return None
    return rewrite_with(theory.rules_for(head.name), t, reducer_for(theory))


def pattern_to_term(p: Pattern, varctx: Sequence[tuple[str, Term]]) -> Term:
    """Read a pattern back as a term over the rule context."""
    n = len(varctx)
    positions = {name: j for j, (name, _) in enumerate(varctx)}

    def go(q: Pattern) -> Term:
        match q:
            case PatternVar(name):
                return Var(n - 1 - positions[name], name)
            case PatternConst(name):
                return Const(name)
            case PatternApp(head, args):
                return apply_spine(Const(head.name), [go(a) for a in args])
        raise AssertionError(q)

    return go(p)


def pattern_from_term(t: Term, var_names: Sequence[str]) -> Pattern:
    """Convert a parsed left-hand side into a pattern.

    Anything outside the first-order left-linear fragment (binders, sorts,
    variable heads) is rejected with a diagnostic.
    """
    n = len(var_names)

    def go(u: Term, top: bool) -> Pattern:
        head, args = spine(u)
        match head:
            case Const(name):
                if not args:
                    return PatternConst(name)
                return PatternApp(PatternConst(name), tuple(go(a, False) for a in args))
            case Var(i):
                if i >= n:
                    raise PatternError("pattern variable escapes the rule context")
                if args:
                    raise PatternError("pattern variables may not be applied (higher-order patterns are unsupported)")
                if top:
                    raise PatternError("rule left-hand side must have a constant head")
                return PatternVar(var_names[n - 1 - i])
            case _:
                raise PatternError("rule left-hand sides may only contain constants and rule variables")

    return go(t, True)
