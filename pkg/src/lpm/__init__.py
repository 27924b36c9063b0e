"""Proof checking and proof translation for a dependently typed calculus
whose definitional equality is extended by user-declared rewrite rules."""

from .errors import LpmError
from .kernel import check, convertible, infer, normalize, whnf
from .signature import Declaration, Definition, RuleEntry, SealedTheory, Theory, empty_theory
from .terms import KIND, TYPE, App, Const, Lam, Pi, Sort, Term, Var, shift, subst
from .theories import TheoryId, coc_theory, stt_theory

__all__ = [
    "App",
    "Const",
    "Declaration",
    "Definition",
    "KIND",
    "Lam",
    "LpmError",
    "Pi",
    "RuleEntry",
    "SealedTheory",
    "Sort",
    "TYPE",
    "Term",
    "Theory",
    "TheoryId",
    "Var",
    "check",
    "coc_theory",
    "convertible",
    "empty_theory",
    "infer",
    "normalize",
    "shift",
    "stt_theory",
    "subst",
    "whnf",
]
