"""The two built-in theories.

STT (displayed as D[HOLL]) is a simple type theory encoding: 8 declared
symbols and 3 rewrite rules. COC (displayed as D[Mat]) encodes the calculus
of constructions: 9 declarations and 4 rules. The two differ in exactly
three ways: arrow takes a type family instead of a second type, imp takes a
proposition family over proofs instead of a second proposition, and pi
(types for functions from proofs to terms) exists only in COC.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

from .rewriting import PatternApp, PatternConst, PatternVar, RewriteRule
from .signature import SealedTheory, Theory
from .terms import TYPE, App, Const, Pi, Term, Var, shift


class TheoryId(Enum):
    STT = "stt"
    COC = "coc"

    @property
    def display_name(self) -> str:
        return {TheoryId.STT: "D[HOLL]", TheoryId.COC: "D[Mat]"}[self]


def _app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def _arr(dom: Term, cod: Term) -> Term:
    """Non-dependent product: cod is given outside the binder."""
    return Pi("_", dom, shift(cod, 1))


_type = Const("type")
_iota = Const("iota")
_o = Const("o")
_eta = Const("eta")
_eps = Const("eps")
_eta_o = _app(_eta, _o)


def _pvar(name: str) -> PatternVar:
    return PatternVar(name)


def _papp(head: str, *args) -> PatternApp:
    return PatternApp(PatternConst(head), tuple(args))


@lru_cache(maxsize=None)
def stt_theory() -> SealedTheory:
    """The simple type theory encoding (8 declarations, 3 rules)."""
    th = Theory("D[HOLL]")
    th.add_declaration("type", TYPE)
    th.add_declaration("iota", _type)
    th.add_declaration("o", _type)
    th.add_declaration("arrow", _arr(_type, _arr(_type, _type)))
    th.add_declaration("eta", _arr(_type, TYPE))
    th.add_declaration("eps", _arr(_eta_o, TYPE))
    th.add_declaration("imp", _arr(_eta_o, _arr(_eta_o, _eta_o)))
    th.add_declaration(
        "forall",
        Pi("a", _type, _arr(_arr(_app(_eta, Var(0, "a")), _eta_o), _eta_o)),
    )
    # eta (arrow a b) --> eta a -> eta b
    th.add_rule(
        RewriteRule(
            varctx=(("a", _type), ("b", _type)),
            lhs=_papp("eta", _papp("arrow", _pvar("a"), _pvar("b"))),
            rhs=_arr(_app(_eta, Var(1, "a")), _app(_eta, Var(0, "b"))),
        )
    )
    # eps (imp p q) --> eps p -> eps q
    th.add_rule(
        RewriteRule(
            varctx=(("p", _eta_o), ("q", _eta_o)),
            lhs=_papp("eps", _papp("imp", _pvar("p"), _pvar("q"))),
            rhs=_arr(_app(_eps, Var(1, "p")), _app(_eps, Var(0, "q"))),
        )
    )
    # eps (forall a f) --> (x : eta a) -> eps (f x)
    th.add_rule(
        RewriteRule(
            varctx=(("a", _type), ("f", _arr(_app(_eta, Var(0, "a")), _eta_o))),
            lhs=_papp("eps", _papp("forall", _pvar("a"), _pvar("f"))),
            rhs=Pi("x", _app(_eta, Var(1, "a")), _app(_eps, App(Var(1, "f"), Var(0, "x")))),
        )
    )
    return th.seal()


@lru_cache(maxsize=None)
def coc_theory() -> SealedTheory:
    """The calculus of constructions encoding (9 declarations, 4 rules).

    eta and eps are declared ahead of arrow and imp: the dependent arrow
    and imp types mention them, and entries may only use the prefix.
    """
    th = Theory("D[Mat]")
    th.add_declaration("type", TYPE)
    th.add_declaration("iota", _type)
    th.add_declaration("o", _type)
    th.add_declaration("eta", _arr(_type, TYPE))
    th.add_declaration("eps", _arr(_eta_o, TYPE))
    th.add_declaration(
        "arrow",
        Pi("a", _type, _arr(_arr(_app(_eta, Var(0, "a")), _type), _type)),
    )
    th.add_declaration(
        "imp",
        Pi("p", _eta_o, _arr(_arr(_app(_eps, Var(0, "p")), _eta_o), _eta_o)),
    )
    th.add_declaration(
        "forall",
        Pi("a", _type, _arr(_arr(_app(_eta, Var(0, "a")), _eta_o), _eta_o)),
    )
    th.add_declaration(
        "pi",
        Pi("p", _eta_o, _arr(_arr(_app(_eps, Var(0, "p")), _type), _type)),
    )
    # eta (arrow a b) --> (x : eta a) -> eta (b x)
    th.add_rule(
        RewriteRule(
            varctx=(("a", _type), ("b", _arr(_app(_eta, Var(0, "a")), _type))),
            lhs=_papp("eta", _papp("arrow", _pvar("a"), _pvar("b"))),
            rhs=Pi("x", _app(_eta, Var(1, "a")), _app(_eta, App(Var(1, "b"), Var(0, "x")))),
        )
    )
    # eps (imp p q) --> (h : eps p) -> eps (q h)
    th.add_rule(
        RewriteRule(
            varctx=(("p", _eta_o), ("q", _arr(_app(_eps, Var(0, "p")), _eta_o))),
            lhs=_papp("eps", _papp("imp", _pvar("p"), _pvar("q"))),
            rhs=Pi("h", _app(_eps, Var(1, "p")), _app(_eps, App(Var(1, "q"), Var(0, "h")))),
        )
    )
    # eps (forall a f) --> (x : eta a) -> eps (f x)
    th.add_rule(
        RewriteRule(
            varctx=(("a", _type), ("f", _arr(_app(_eta, Var(0, "a")), _eta_o))),
            lhs=_papp("eps", _papp("forall", _pvar("a"), _pvar("f"))),
            rhs=Pi("x", _app(_eta, Var(1, "a")), _app(_eps, App(Var(1, "f"), Var(0, "x")))),
        )
    )
    # eta (pi p f) --> (h : eps p) -> eta (f h)
    th.add_rule(
        RewriteRule(
            varctx=(("p", _eta_o), ("f", _arr(_app(_eps, Var(0, "p")), _type))),
            lhs=_papp("eta", _papp("pi", _pvar("p"), _pvar("f"))),
            rhs=Pi("h", _app(_eps, Var(1, "p")), _app(_eta, App(Var(1, "f"), Var(0, "h")))),
        )
    )
    return th.seal()


def builtin_theory(id_: TheoryId) -> SealedTheory:
    return stt_theory() if id_ is TheoryId.STT else coc_theory()
