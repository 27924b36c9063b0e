"""Nameless term syntax and de Bruijn index arithmetic.

Bound variables are de Bruijn indices counted from the innermost binder.
Binder names are kept as display hints only: they are excluded from
equality and hashing, so structural equality of terms is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class SortKind(Enum):
    TYPE = "Type"
    KIND = "Kind"


@dataclass(frozen=True)
class Term:
    """Base class of all term nodes."""


@dataclass(frozen=True)
class Sort(Term):
    kind: SortKind


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Var(Term):
    index: int
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Lam(Term):
    hint: str = field(compare=False)
    domain: Term
    body: Term


@dataclass(frozen=True)
class Pi(Term):
    hint: str = field(compare=False)
    domain: Term
    codomain: Term


TYPE = Sort(SortKind.TYPE)
KIND = Sort(SortKind.KIND)

# A typing context: (name hint, type) pairs, innermost binder last.
Context = tuple[tuple[str, Term], ...]


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Displace every free variable of t with index >= cutoff by d."""
    if d == 0:
        return t
    match t:
        case Var(i):
            if i < cutoff:
                return t
            assert i + d >= 0, f"index underflow shifting {i} by {d}"
            return Var(i + d, t.hint)
        case App(f, a):
            return App(shift(f, d, cutoff), shift(a, d, cutoff))
        case Lam(h, dom, body):
            return Lam(h, shift(dom, d, cutoff), shift(body, d, cutoff + 1))
        case Pi(h, dom, cod):
            return Pi(h, shift(dom, d, cutoff), shift(cod, d, cutoff + 1))
        case _:
            return t


def subst(t: Term, j: int, u: Term) -> Term:
    """Replace free variable j of t by u and close the binder that bound j.

    Free indices of t above j come down by one; this is the binder
    elimination step of beta reduction.
    """
    match t:
        case Var(i):
            if i == j:
                return u
            if i > j:
                return Var(i - 1, t.hint)
            return t
        case App(f, a):
            return App(subst(f, j, u), subst(a, j, u))
        case Lam(h, dom, body):
            return Lam(h, subst(dom, j, u), subst(body, j + 1, shift(u, 1)))
        case Pi(h, dom, cod):
            return Pi(h, subst(dom, j, u), subst(cod, j + 1, shift(u, 1)))
        case _:
            return t


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into (head, [arg0, arg1, ...])."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def apply_spine(head: Term, args: Iterator[Term] | list[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


def uses_var(t: Term, j: int) -> bool:
    """Does free variable j occur in t?"""
    match t:
        case Var(i):
            return i == j
        case App(f, a):
            return uses_var(f, j) or uses_var(a, j)
        case Lam(_, dom, body):
            return uses_var(dom, j) or uses_var(body, j + 1)
        case Pi(_, dom, cod):
            return uses_var(dom, j) or uses_var(cod, j + 1)
        case _:
            return False


def constants_in(t: Term) -> set[str]:
    """Names of all constants occurring in t."""
    out: set[str] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        match s:
            case Const(name):
                out.add(name)
            case App(f, a):
                stack += (f, a)
            case Lam(_, dom, body):
                stack += (dom, body)
            case Pi(_, dom, cod):
                stack += (dom, cod)
            case _:
                pass
    return out


def max_free_index(t: Term) -> int:
    """Largest free index in t, or -1 if t is closed."""
    match t:
        case Var(i):
            return i
        case App(f, a):
            return max(max_free_index(f), max_free_index(a))
        case Lam(_, dom, body):
            return max(max_free_index(dom), max_free_index(body) - 1)
        case Pi(_, dom, cod):
            return max(max_free_index(dom), max_free_index(cod) - 1)
        case _:
            return -1
