"""Applicative term language over K/S, bracket abstraction, and evaluation.

Terms are finite binary application trees whose leaves are the basic
combinators K and S, named variables, or references to elements of a host
structure.  Bracket abstraction compiles variables away with the classic
algorithm, reduction is weak leftmost-outermost with a fuel budget, and
``eval_in_opca`` interprets closed terms inside any finite ordered partial
combinatory algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Term", "Var", "Const", "App", "K", "S", "Diverged",
    "app", "free_vars", "subst", "bracket", "lam",
    "reduce_term", "eval_in_opca", "parse_term", "term_str",
]


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class _Basic:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    """Reference to an element of a host structure (any hashable handle)."""

    value: object

    def __repr__(self):
        return f"`{self.value}"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"

    def __repr__(self):
        return term_str(self)


K = _Basic("K")
S = _Basic("S")

Term = object  # Var | _Basic | Const | App


def app(*terms):
    """Left-associated application: app(a, b, c) = (a·b)·c."""
    if not terms:
        raise ValueError("app() needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


def free_vars(term):
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, App):
        return free_vars(term.fn) | free_vars(term.arg)
    return frozenset()


def subst(term, name, replacement):
    """Capture-free substitution (there are no binders in the term language)."""
    if isinstance(term, Var):
        return replacement if term.name == name else term
    if isinstance(term, App):
        return App(subst(term.fn, name, replacement), subst(term.arg, name, replacement))
    return term


_SKK = App(App(S, K), K)


def bracket(name, body):
    """Abstract ``name`` out of ``body`` with the classic algorithm.

    <x>x = S·K·K; <x>M = K·M when x is not free in M;
    <x>(M·N) = S·(<x>M)·(<x>N) otherwise.  The result contains no
    occurrence of ``name``.
    """
    if name not in free_vars(body):
        return App(K, body)
    if isinstance(body, Var):  # body == Var(name) by the test above
        return _SKK
    return App(App(S, bracket(name, body.fn)), bracket(name, body.arg))


def lam(names, body):
    """Multi-variable abstraction: lam("x y", M) = <x>(<y>M)."""
    split = names.split() if isinstance(names, str) else list(names)
    for name in reversed(split):
        body = bracket(name, body)
    return body


@dataclass(frozen=True)
class Diverged:
    """Fuel ran out before the term became head-stable."""

    term: object


def _spine(term):
    args = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fn
    args.reverse()
    return term, args


def reduce_term(term, fuel):
    """Weak leftmost-outermost reduction of a closed term.

    Contracts head redexes (K·a·b -> a, S·a·b·c -> (a·c)·(b·c)) until the
    head is stable; never reduces under a partial application.  Fuel counts
    contractions; exhaustion yields ``Diverged``, not an error.
    """
    if free_vars(term):
        raise ValueError(f"reduce_term needs a closed term, got free {sorted(free_vars(term))}")
    remaining = fuel
    while True:
        head, args = _spine(term)
        if head is K and len(args) >= 2:
            contracted = args[0]
            rest = args[2:]
        elif head is S and len(args) >= 3:
            contracted = App(App(args[0], args[2]), App(args[1], args[2]))
            rest = args[3:]
        else:
            return term
        if remaining <= 0:
            return Diverged(term)
        remaining -= 1
        term = app(contracted, *rest) if rest else contracted


def eval_in_opca(term, env, opca):
    """Interpret a term bottom-up in ``opca``; None means undefined.

    Every free variable must be bound in ``env`` and every Const / env value
    must lie in the carrier.  Undefined table entries propagate strictly.
    """
    if isinstance(term, Var):
        if env is None or term.name not in env:
            raise ValueError(f"unbound variable {term.name!r}")
        value = env[term.name]
        if value not in opca.element_set:
            raise ValueError(f"environment maps {term.name!r} outside the carrier")
        return value
    if term is K:
        return opca.k
    if term is S:
        return opca.s
    if isinstance(term, Const):
        if term.value not in opca.element_set:
            raise ValueError(f"constant {term.value!r} outside the carrier")
        return term.value
    fn = eval_in_opca(term.fn, env, opca)
    if fn is None:
        return None
    arg = eval_in_opca(term.arg, env, opca)
    if arg is None:
        return None
    return opca.app(fn, arg)


# ---------------------------------------------------------------------------
# Surface syntax: K, S, identifiers, juxtaposition, parens, \x. M
# ---------------------------------------------------------------------------

def term_str(term):
    def go(t, parenthesize):
        if isinstance(t, Var):
            return t.name
        if isinstance(t, _Basic):
            return t.name
        if isinstance(t, Const):
            return str(t.value)
        inner = f"{go(t.fn, False)} {go(t.arg, True)}"
        return f"({inner})" if parenthesize else inner
    return go(term, False)


def _tokenize(src):
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch in "()\\.":
            tokens.append(ch)
            i += 1
        else:
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            if j == i:
                raise ValueError(f"bad character {ch!r} in term at {i}")
            tokens.append(src[i:j])
            i = j
    return tokens


def parse_term(src):
    """Parse the surface syntax; ``\\x y. M`` compiles via bracket abstraction.

    Identifiers bound by an enclosing ``\\`` become variables; all other
    identifiers become Const handles (resolved by the caller).
    """
    tokens = _tokenize(src)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def parse_expr(bound):
        nonlocal pos
        if peek() == "\\":
            pos += 1
            names = []
            while peek() not in (".", None):
                tok = peek()
                if tok in ("(", ")", "\\"):
                    raise ValueError("expected variable names after \\")
                names.append(tok)
                pos += 1
            if peek() != "." or not names:
                raise ValueError("expected '.' after \\-binder names")
            pos += 1
            body = parse_expr(bound | set(names))
            return lam(names, body)
        out = None
        while True:
            tok = peek()
            if tok is None or tok in (")", "."):
                break
            if tok == "\\":
                atom = parse_expr(bound)
            elif tok == "(":
                pos += 1
                atom = parse_expr(bound)
                if peek() != ")":
                    raise ValueError("unbalanced parenthesis")
                pos += 1
            else:
                pos += 1
                if tok == "K":
                    atom = K
                elif tok == "S":
                    atom = S
                elif tok in bound:
                    atom = Var(tok)
                else:
                    atom = Const(tok)
            out = atom if out is None else App(out, atom)
        if out is None:
            raise ValueError("empty term")
        return out

    result = parse_expr(set())
    if pos != len(tokens):
        raise ValueError(f"trailing tokens at {pos}: {tokens[pos:]}")
    return result
