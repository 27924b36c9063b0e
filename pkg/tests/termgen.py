"""Well-scoped random terms, both as a seeded generator (for fixed-count
acceptance runs) and as hypothesis strategies (for property tests).

Generated terms use the simple theory's constants, never the Kind sort
(mirroring what the parser can produce), and deliberately awkward binder
hints: clashes with constants, keywords, underscores, and invalid
identifiers, so printing has something to freshen and sanitize.
"""

from __future__ import annotations

from random import Random

import hypothesis.strategies as st

from lpm.terms import TYPE, App, Const, Lam, Pi, Term, Var

CONSTANTS = ["type", "iota", "o", "arrow", "eta", "eps", "imp", "forall"]
HINTS = ["x", "y", "p", "h", "a", "_", "eta", "Type", "x1", "bad name", ""]


def random_term(rng: Random, depth: int = 4, ctx_size: int = 0) -> Term:
    leaf_only = depth <= 0
    choices = "vcs" if leaf_only else "vcsalp"
    kind = rng.choice(choices)
    if kind == "v" and ctx_size == 0:
        kind = "c"
    if kind == "v":
        return Var(rng.randrange(ctx_size), rng.choice(HINTS))
    if kind == "c":
        return Const(rng.choice(CONSTANTS))
    if kind == "s":
        return TYPE
    if kind == "a":
        return App(random_term(rng, depth - 1, ctx_size), random_term(rng, depth - 1, ctx_size))
    hint = rng.choice(HINTS)
    dom = random_term(rng, depth - 1, ctx_size)
    body = random_term(rng, depth - 1, ctx_size + 1)
    return Lam(hint, dom, body) if kind == "l" else Pi(hint, dom, body)


def random_terms(seed: int, count: int, depth: int = 4, ctx_size: int = 0):
    rng = Random(seed)
    return [random_term(rng, depth, ctx_size) for _ in range(count)]


@st.composite
def scoped_terms(draw, ctx_size: int = 0, depth: int = 3) -> Term:
    options = ["const", "sort"]
    if ctx_size:
        options.append("var")
    if depth > 0:
        options += ["app", "lam", "pi"]
    kind = draw(st.sampled_from(options))
    if kind == "var":
        return Var(draw(st.integers(0, ctx_size - 1)), draw(st.sampled_from(HINTS)))
    if kind == "const":
        return Const(draw(st.sampled_from(CONSTANTS)))
    if kind == "sort":
        return TYPE
    if kind == "app":
        return App(
            draw(scoped_terms(ctx_size=ctx_size, depth=depth - 1)),
            draw(scoped_terms(ctx_size=ctx_size, depth=depth - 1)),
        )
    hint = draw(st.sampled_from(HINTS))
    dom = draw(scoped_terms(ctx_size=ctx_size, depth=depth - 1))
    body = draw(scoped_terms(ctx_size=ctx_size + 1, depth=depth - 1))
    return Lam(hint, dom, body) if kind == "lam" else Pi(hint, dom, body)
