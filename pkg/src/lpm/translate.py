"""Translation between the two built-in theories.

Lifting rewrites every simple arrow/imp application into its dependent
form with a constant family as second argument; it is total on libraries
that check in the simple theory. Classification reports, per entry, which
dependent-only features the entry touches: the pi symbol, a genuinely
dependent arrow family, or a genuinely dependent imp family. Features are
read off the beta normal form; the second argument of arrow/imp counts as
non-dependent only when it is an abstraction whose bound variable does not
occur in its body, and under-applied occurrences are eta-expanded first
(which makes them dependent, since their family argument is opaque).
Lowering strips constant families back off and is defined exactly on
entries whose transitive dependency closure is feature-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Flag, auto
from typing import Optional, Sequence

from .errors import (
    FeatureViolation,
    LiftCheckFailure,
    LowerCheckFailure,
    LpmError,
    TranslateError,
)
from .kernel import DEFAULT_STEP_BUDGET, Budget
from .signature import Declaration, Definition, Entry, RuleEntry, SealedTheory, Theory
from .terms import (
    App,
    Const,
    Lam,
    Pi,
    Term,
    Var,
    apply_spine,
    constants_in,
    shift,
    spine,
    subst,
    uses_var,
)
from .theories import coc_theory, stt_theory


class Feature(Flag):
    """A set of dependent-only features; the empty value means none."""

    USES_PI = auto()
    DEPENDENT_ARROW = auto()
    DEPENDENT_IMP = auto()

    def describe(self) -> str:
        if not self:
            return "-"
        parts = []
        if Feature.USES_PI in self:
            parts.append("pi")
        if Feature.DEPENDENT_ARROW in self:
            parts.append("arrow")
        if Feature.DEPENDENT_IMP in self:
            parts.append("imp")
        return "+".join(parts)


NO_FEATURES = Feature(0)

_FAMILY_SYMBOLS = {"arrow": Feature.DEPENDENT_ARROW, "imp": Feature.DEPENDENT_IMP}


def beta_normalize(t: Term, max_steps: int = DEFAULT_STEP_BUDGET) -> Term:
    """Beta normal form, ignoring definitions and rewrite rules."""
    budget = Budget(max_steps)

    def head(t: Term) -> Term:
        while True:
            h, args = spine(t)
            if isinstance(h, Lam) and args:
                budget.spend(t)
                t = apply_spine(subst(h.body, 0, args[0]), args[1:])
            else:
                return t

    def norm(t: Term) -> Term:
        t = head(t)
        match t:
            case App(f, a):
                return App(norm(f), norm(a))
            case Lam(h, dom, body):
                return Lam(h, norm(dom), norm(body))
            case Pi(h, dom, cod):
                return Pi(h, norm(dom), norm(cod))
            case _:
                return t

    return norm(t)


# ---- lifting: simple theory into the dependent one ----


def _wrap_family(symbol: str, first: Term, second: Term) -> Term:
    """arrow A B  ->  arrow A ((_ : eta A) => B);  imp P Q likewise with eps."""
    coercion = "eta" if symbol == "arrow" else "eps"
    family = Lam("_", App(Const(coercion), first), shift(second, 1))
    return apply_spine(Const(symbol), [first, family])


def _lift_family_symbol(symbol: str, args: list[Term]) -> Term:
    if len(args) >= 2:
        return apply_spine(_wrap_family(symbol, args[0], args[1]), args[2:])
    # under-applied: eta-expand to full application, then wrap
    if symbol == "arrow":
        dom, hints = Const("type"), ("a", "b")
    else:
        dom, hints = App(Const("eta"), Const("o")), ("p", "q")
    if len(args) == 1:
        return Lam(hints[1], dom, _wrap_family(symbol, shift(args[0], 1), Var(0, hints[1])))
    return Lam(
        hints[0],
        dom,
        Lam(hints[1], dom, _wrap_family(symbol, Var(1, hints[0]), Var(0, hints[1]))),
    )


def lift_term(t: Term) -> Term:
    """Total map from simple-theory terms to dependent-theory terms."""
    h, args = spine(t)
    if isinstance(h, Const) and h.name in _FAMILY_SYMBOLS:
        return _lift_family_symbol(h.name, [lift_term(a) for a in args])
    match t:
        case App(f, a):
            return App(lift_term(f), lift_term(a))
        case Lam(hint, dom, body):
            return Lam(hint, lift_term(dom), lift_term(body))
        case Pi(hint, dom, cod):
            return Pi(hint, lift_term(dom), lift_term(cod))
        case _:
            return t


def lift_entry(entry: Entry) -> Entry:
    match entry:
        case Declaration(name, ty):
            return Declaration(name, lift_term(ty))
        case Definition(name, ty, body):
            return Definition(name, lift_term(ty), lift_term(body))
    raise TranslateError("rewrite rule entries cannot be translated")


def lift_library(entries: Sequence[Entry], step_budget: Optional[int] = None) -> list[Entry]:
    """Lift a whole library; the input is checked first, the output re-checked.

    The output presupposes the dependent base theory: theory symbols are not
    re-emitted. A lifted entry failing to re-check is a defect, not bad input.
    """
    Theory("input", base=stt_theory(), step_budget=step_budget).add_entries(entries)
    lifted = [lift_entry(e) for e in entries]
    out = Theory("lifted", base=coc_theory(), step_budget=step_budget)
    for e in lifted:
        try:
            out.add_entry(e)
        except LpmError as exc:
            raise LiftCheckFailure(e.name, exc) from exc
    return lifted


# ---- classification ----


def _classify_nf(nf: Term) -> tuple[Feature, tuple[str, ...]]:
    """Features of a beta-normal term, with the path to the first hit."""
    found = NO_FEATURES
    first_path: tuple[str, ...] = ()

    def hit(feature: Feature, path: tuple[str, ...]) -> None:
        nonlocal found, first_path
        if not found:
            first_path = path
        found |= feature

    def walk(t: Term, path: tuple[str, ...]) -> None:
        h, args = spine(t)
        if isinstance(h, Const):
            if h.name == "pi":
                hit(Feature.USES_PI, path)
            elif h.name in _FAMILY_SYMBOLS:
                feature = _FAMILY_SYMBOLS[h.name]
                if len(args) < 2:
                    # eta-expanding exposes an opaque family argument
                    hit(feature, path)
                else:
                    fam = args[1]
                    if not (isinstance(fam, Lam) and not uses_var(fam.body, 0)):
                        hit(feature, path)
        if args:
            # a beta-normal applied head is a variable or constant; only
            # the arguments have structure left to inspect
            for i, a in enumerate(args):
                walk(a, path + (f"arg{i}",))
            return
        match t:
            case Lam(_, dom, body):
                walk(dom, path + ("domain",))
                walk(body, path + ("body",))
            case Pi(_, dom, cod):
                walk(dom, path + ("domain",))
                walk(cod, path + ("codomain",))
            case _:
                pass

    walk(nf, ())
    return found, first_path


def classify_term(t: Term, max_steps: int = DEFAULT_STEP_BUDGET) -> Feature:
    return _classify_nf(beta_normalize(t, max_steps))[0]


def _entry_terms(entry: Entry) -> list[Term]:
    match entry:
        case Declaration(_, ty):
            return [ty]
        case Definition(_, ty, body):
            return [ty, body]
        case RuleEntry(rule):
            from .rewriting import pattern_to_term

            return [pattern_to_term(rule.lhs, rule.varctx), rule.rhs]
    raise AssertionError(entry)


def classify_entry(theory: SealedTheory, entry: Entry) -> Feature:
    """Features syntactically present in one entry's type and body."""
    feats = NO_FEATURES
    for t in _entry_terms(entry):
        feats |= classify_term(t, theory.step_budget)
    return feats


@dataclass(frozen=True)
class EntryReport:
    name: str
    direct: Feature
    closure: Feature

    @property
    def translatable(self) -> bool:
        return not self.closure


@dataclass(frozen=True)
class FragmentReport:
    rows: tuple[EntryReport, ...]

    def __iter__(self):
        return iter(self.rows)

    def row(self, name: str) -> EntryReport:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def blockers(self) -> list[str]:
        return [r.name for r in self.rows if not r.translatable]

    def translatable_names(self) -> list[str]:
        return [r.name for r in self.rows if r.translatable]

    def to_tsv(self) -> str:
        lines = ["entry\tdirect\tclosure\ttranslatable"]
        for r in self.rows:
            flag = "true" if r.translatable else "false"
            lines.append(f"{r.name}\t{r.direct.describe()}\t{r.closure.describe()}\t{flag}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in self.rows:
            flag = "true" if r.translatable else "false"
            lines.append(
                f"{r.name}: direct={r.direct.describe()} closure={r.closure.describe()} translatable={flag}"
            )
        return "\n".join(lines) + "\n"

    def render(self, format: str) -> str:
        return self.to_tsv() if format == "tsv" else self.to_text()


def classify_library(entries: Sequence[Entry], theory: SealedTheory | None = None) -> FragmentReport:
    """Per-entry direct features plus their union over transitive dependencies.

    An entry depends on every library constant occurring in its type or body;
    base theory symbols do not count as dependencies.
    """
    theory = theory if theory is not None else coc_theory()
    base_names = theory.constants
    closures: dict[str, Feature] = {}
    rows: list[EntryReport] = []
    for i, entry in enumerate(entries):
        direct = classify_entry(theory, entry)
        deps: set[str] = set()
        for t in _entry_terms(entry):
            deps |= constants_in(t)
        closure = direct
        for dep in deps - base_names:
            closure |= closures.get(dep, NO_FEATURES)
        name = entry.name if not isinstance(entry, RuleEntry) else f"rule[{i}]"
        closures[name] = closure
        rows.append(EntryReport(name, direct, closure))
    return FragmentReport(tuple(rows))


# ---- lowering: the partial inverse ----


def _strip_families(t: Term) -> Term:
    """Drop constant-family wrappers; t must be beta-normal and feature-free."""
    h, args = spine(t)
    if isinstance(h, Const) and h.name in _FAMILY_SYMBOLS and len(args) >= 2:
        fam = args[1]
        assert isinstance(fam, Lam) and not uses_var(fam.body, 0)
        second = _strip_families(shift(fam.body, -1))
        rest = [_strip_families(a) for a in args[2:]]
        return apply_spine(Const(h.name), [_strip_families(args[0]), second] + rest)
    match t:
        case App(f, a):
            return App(_strip_families(f), _strip_families(a))
        case Lam(hint, dom, body):
            return Lam(hint, _strip_families(dom), _strip_families(body))
        case Pi(hint, dom, cod):
            return Pi(hint, _strip_families(dom), _strip_families(cod))
        case _:
            return t


def lower_term(t: Term, max_steps: int = DEFAULT_STEP_BUDGET) -> Term:
    """Map a feature-free dependent-theory term back to the simple theory.

    Raises FeatureViolation when the term uses pi or a dependent family.
    The result is the stripped beta normal form.
    """
    nf = beta_normalize(t, max_steps)
    feats, path = _classify_nf(nf)
    if feats:
        raise FeatureViolation(feats, path)
    return _strip_families(nf)


def lower_entry(entry: Entry, max_steps: int = DEFAULT_STEP_BUDGET) -> Entry:
    match entry:
        case Declaration(name, ty):
            return Declaration(name, lower_term(ty, max_steps))
        case Definition(name, ty, body):
            return Definition(name, lower_term(ty, max_steps), lower_term(body, max_steps))
    raise TranslateError("rewrite rule entries cannot be translated")


@dataclass(frozen=True)
class LowerResult:
    entries: tuple[Entry, ...]
    report: FragmentReport
    complete: bool


def lower_library(
    entries: Sequence[Entry], best_effort: bool = False, step_budget: Optional[int] = None
) -> LowerResult:
    """Lower a library that checks in the dependent theory.

    Strict mode returns no entries when any entry's closure has features;
    best-effort mode lowers the feature-free subset, which is closed under
    dependencies by construction. Lowered output is re-checked in the simple
    theory before being returned.
    """
    Theory("input", base=coc_theory(), step_budget=step_budget).add_entries(entries)
    report = classify_library(entries)
    blockers = set(report.blockers())
    if blockers and not best_effort:
        return LowerResult((), report, False)
    lowered: list[Entry] = []
    out = Theory("lowered", base=stt_theory(), step_budget=step_budget)
    for entry in entries:
        if isinstance(entry, RuleEntry) or entry.name in blockers:
            continue
        low = lower_entry(entry)
        try:
            out.add_entry(low)
        except LpmError as exc:
            raise LowerCheckFailure(low.name, exc) from exc
        lowered.append(low)
    return LowerResult(tuple(lowered), report, not blockers)
