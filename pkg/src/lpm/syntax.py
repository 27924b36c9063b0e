"""Concrete syntax: lexer, parser, and printer for .lpm files.

    file  := item*
    item  := IDENT ":" term "."
           | "def" IDENT ":" term ":=" term "."
           | "[" rulevars "]" term "-->" term "."
    rulevars := (group ("," group)*)?   group := IDENT ("," IDENT)* ":" term
    term  := "Type" | IDENT | term term | "(" IDENT ":" term ")" "->" term
           | term "->" term | "(" IDENT ":" term ")" "=>" term | "(" term ")"

Application is left-associative and binds tightest; "->" is
right-associative; "A -> B" is sugar for a product whose bound variable is
unused. Comments are "(;" ... ";)" and nest. Identifiers match
[A-Za-z_][A-Za-z0-9_']*; free identifiers parse as constants and binders
resolve to de Bruijn indices.

The printer is the normative inverse: single spaces between tokens, minimal
parentheses, one entry per line, "." terminators. Its output reparses to an
alpha-equal term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, PatternError
from .rewriting import RewriteRule, pattern_from_term, pattern_to_term
from .signature import Declaration, Definition, Entry, RuleEntry
from .terms import (
    KIND,
    TYPE,
    App,
    Const,
    Lam,
    Pi,
    Sort,
    Term,
    Var,
    constants_in,
    shift,
    uses_var,
)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_KEYWORDS = {"Type", "def"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, TYPE, DEF, LPAREN, RPAREN, LBRACKET, RBRACKET, COMMA, COLON, COLONEQ, DOT, ARROW, LONGARROW, DARROW, EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def err(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("(;", i):
            depth = 1
            i, col = i + 2, col + 2
            while i < n and depth:
                if text.startswith("(;", i):
                    depth += 1
                    i, col = i + 2, col + 2
                elif text.startswith(";)", i):
                    depth -= 1
                    i, col = i + 2, col + 2
                elif text[i] == "\n":
                    i, line, col = i + 1, line + 1, 1
                else:
                    i, col = i + 1, col + 1
            if depth:
                raise err("unterminated comment")
            continue
        start_line, start_col = line, col
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group(0)
            kind = {"Type": "TYPE", "def": "DEF"}.get(word, "IDENT")
            tokens.append(Token(kind, word, start_line, start_col))
            i += len(word)
            col += len(word)
            continue
        for lexeme, kind in (
            ("-->", "LONGARROW"),
            ("->", "ARROW"),
            ("=>", "DARROW"),
            (":=", "COLONEQ"),
            ("(", "LPAREN"),
            (")", "RPAREN"),
            ("[", "LBRACKET"),
            ("]", "RBRACKET"),
            (",", "COMMA"),
            (":", "COLON"),
            (".", "DOT"),
        ):
            if text.startswith(lexeme, i):
                tokens.append(Token(kind, lexeme, start_line, start_col))
                i += len(lexeme)
                col += len(lexeme)
                break
        else:
            raise err(f"unexpected character {c!r}")
    tokens.append(Token("EOF", "", line, col))
    return tokens


_SHOW = {
    "IDENT": "an identifier",
    "TYPE": "'Type'",
    "DEF": "'def'",
    "LPAREN": "'('",
    "RPAREN": "')'",
    "LBRACKET": "'['",
    "RBRACKET": "']'",
    "COMMA": "','",
    "COLON": "':'",
    "COLONEQ": "':='",
    "DOT": "'.'",
    "ARROW": "'->'",
    "LONGARROW": "'-->'",
    "DARROW": "'=>'",
    "EOF": "end of input",
}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.binders: list[str] = []

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, *kinds: str) -> Token:
        tok = self.peek()
        if tok.kind not in kinds:
            raise self.fail(tok, *kinds)
        return self.next()

    def fail(self, tok: Token, *kinds: str) -> ParseError:
        got = _SHOW.get(tok.kind, repr(tok.text))
        return ParseError(
            f"unexpected {got}",
            tok.line,
            tok.column,
            frozenset(_SHOW[k] for k in kinds),
        )

    # ---- terms ----

    def term(self) -> Term:
        if (
            self.peek().kind == "LPAREN"
            and self.peek(1).kind == "IDENT"
            and self.peek(2).kind == "COLON"
        ):
            self.next()
            name = self.next().text
            self.expect("COLON")
            dom = self.term()
            self.expect("RPAREN")
            arrow = self.expect("ARROW", "DARROW")
            self.binders.append(name)
            try:
                rest = self.term()
            finally:
                self.binders.pop()
            return Pi(name, dom, rest) if arrow.kind == "ARROW" else Lam(name, dom, rest)
        left = self.app_term()
        if self.peek().kind == "ARROW":
            self.next()
            right = self.term()
            return Pi("_", left, shift(right, 1))
        return left

    def app_term(self) -> Term:
        t = self.atom()
        while self.peek().kind in ("TYPE", "IDENT", "LPAREN"):
            # a parenthesized binder is the start of a new term, not an argument
            if (
                self.peek().kind == "LPAREN"
                and self.peek(1).kind == "IDENT"
                and self.peek(2).kind == "COLON"
            ):
                break
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "TYPE":
            self.next()
            return TYPE
        if tok.kind == "IDENT":
            self.next()
            for depth, name in enumerate(reversed(self.binders)):
                if name == tok.text:
                    return Var(depth, tok.text)
            return Const(tok.text)
        if tok.kind == "LPAREN":
            self.next()
            t = self.term()
            self.expect("RPAREN")
            return t
        raise self.fail(tok, "TYPE", "IDENT", "LPAREN")

    # ---- entries ----

    def rule_vars(self) -> tuple[tuple[str, Term], ...]:
        varctx: list[tuple[str, Term]] = []
        if self.peek().kind == "RBRACKET":
            return ()
        while True:
            names = [self.expect("IDENT").text]
            while self.peek().kind == "COMMA":
                self.next()
                names.append(self.expect("IDENT").text)
            self.expect("COLON")
            ty = self.term()
            # names sharing one stated type sit at successive depths
            for k, name in enumerate(names):
                varctx.append((name, shift(ty, k)))
                self.binders.append(name)
            if self.peek().kind != "COMMA":
                break
            self.next()
        return tuple(varctx)

    def entry(self) -> Entry:
        tok = self.peek()
        if tok.kind == "DEF":
            self.next()
            name = self.expect("IDENT").text
            self.expect("COLON")
            ty = self.term()
            self.expect("COLONEQ")
            body = self.term()
            self.expect("DOT")
            return Definition(name, ty, body)
        if tok.kind == "LBRACKET":
            self.next()
            try:
                varctx = self.rule_vars()
                self.expect("RBRACKET")
                lhs_tok = self.peek()
                lhs = self.term()
                self.expect("LONGARROW")
                rhs = self.term()
                self.expect("DOT")
            finally:
                self.binders.clear()
            try:
                pattern = pattern_from_term(lhs, [name for name, _ in varctx])
                return RuleEntry(RewriteRule(varctx, pattern, rhs))
            except PatternError as e:
                raise ParseError(str(e), lhs_tok.line, lhs_tok.column) from e
        if tok.kind == "IDENT":
            name = self.next().text
            self.expect("COLON")
            ty = self.term()
            self.expect("DOT")
            return Declaration(name, ty)
        raise self.fail(tok, "IDENT", "DEF", "LBRACKET")


@dataclass(frozen=True)
class SourceFile:
    path: str
    entries: tuple[Entry, ...]
    spans: tuple[tuple[int, int], ...]  # (first line, last line) per entry


def parse_library(text: str, path: str = "<string>") -> SourceFile:
    p = _Parser(text)
    entries: list[Entry] = []
    spans: list[tuple[int, int]] = []
    while p.peek().kind != "EOF":
        first = p.peek().line
        entries.append(p.entry())
        spans.append((first, p.tokens[p.pos - 1].line))
    return SourceFile(path, tuple(entries), tuple(spans))


def parse_file(text: str) -> list[Entry]:
    return list(parse_library(text).entries)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    tok = p.peek()
    if tok.kind != "EOF":
        raise p.fail(tok, "EOF")
    return t


# ---- printing ----


def _sanitize(hint: str) -> str:
    if _IDENT_RE.fullmatch(hint) and hint not in _KEYWORDS:
        return hint
    return "x"


def _fresh(hint: str, avoid: set[str]) -> str:
    base = _sanitize(hint)
    if base == "_":
        base = "x"
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


class _Printer:
    """Renders one term; `avoid` holds every name a binder must not capture."""

    def __init__(self, avoid: set[str]):
        self.avoid = avoid

    def bind(self, hint: str, used: bool, env: tuple[str, ...]) -> str:
        if not used:
            return "_"
        return _fresh(hint, self.avoid | set(env))

    def show(self, t: Term, env: tuple[str, ...], level: int) -> str:
        match t:
            case Sort(kind):
                return kind.value
            case Const(name):
                return name
            case Var(i):
                s = env[len(env) - 1 - i] if i < len(env) else f"#{i - len(env)}"
                return s
            case App(f, a):
                s = f"{self.show(f, env, 1)} {self.show(a, env, 2)}"
                return f"({s})" if level > 1 else s
            case Lam(hint, dom, body):
                name = self.bind(hint, uses_var(body, 0), env)
                s = f"({name} : {self.show(dom, env, 0)}) => {self.show(body, env + (name,), 0)}"
                return f"({s})" if level > 0 else s
            case Pi(hint, dom, cod):
                if uses_var(cod, 0):
                    name = self.bind(hint, True, env)
                    s = f"({name} : {self.show(dom, env, 0)}) -> {self.show(cod, env + (name,), 0)}"
                else:
                    s = f"{self.show(dom, env, 1)} -> {self.show(cod, env + ('',), 0)}"
                return f"({s})" if level > 0 else s
        raise AssertionError(t)


def print_term(t: Term, env: tuple[str, ...] = ()) -> str:
    """Render t; env names the free variables, innermost binder last."""
    return _Printer(constants_in(t) | _KEYWORDS).show(t, env, 0)


def _print_rule(rule: RewriteRule) -> str:
    lhs_term = pattern_to_term(rule.lhs, rule.varctx)
    avoid = (
        constants_in(lhs_term)
        | constants_in(rule.rhs)
        | set().union(*(constants_in(ty) for _, ty in rule.varctx))
        if rule.varctx
        else constants_in(lhs_term) | constants_in(rule.rhs)
    )
    avoid |= _KEYWORDS
    printer = _Printer(avoid)
    names: list[str] = []
    shown: list[tuple[str, str]] = []  # (display name, printed type)
    for hint, ty in rule.varctx:
        name = _fresh(hint, avoid | set(names))
        shown.append((name, printer.show(ty, tuple(names), 0)))
        names.append(name)
    groups: list[tuple[list[str], str]] = []
    for name, ty_s in shown:
        if groups and groups[-1][1] == ty_s:
            groups[-1][0].append(name)
        else:
            groups.append(([name], ty_s))
    ctx_s = ", ".join(f"{', '.join(g)} : {ty_s}" for g, ty_s in groups)
    env = tuple(names)
    lhs_s = printer.show(lhs_term, env, 0)
    rhs_s = printer.show(rule.rhs, env, 0)
    return f"[{ctx_s}] {lhs_s} --> {rhs_s}."


def print_entry(entry: Entry) -> str:
    match entry:
        case Declaration(name, ty):
            return f"{name} : {print_term(ty)}."
        case Definition(name, ty, body):
            return f"def {name} : {print_term(ty)} := {print_term(body)}."
        case RuleEntry(rule):
            return _print_rule(rule)
    raise AssertionError(entry)


def print_file(entries) -> str:
    return "".join(print_entry(e) + "\n" for e in entries)
