"""Dialogue application on Baire space, its k/s basis, and the extraction
algorithm behind the non-localic examples.

Elements are total functions on the naturals.  Application interrogates
the argument along ever longer prefixes: alpha·beta at n is k when alpha,
fed the code of [n, beta(0), ..., beta(N-1)], answers k+1 at the first N
where it answers positively (zero means "read more").

Sequence coding (fixed once, used everywhere): the empty sequence is 0; a
sequence of length l+1 with values v0..vl is pair(l, fold)+1, where pair
is the Cantor pairing (x+y)(x+y+1)/2 + y and fold combines the sequence by
balanced halves (the left half takes the extra element when odd).  For
each length the fold is a bijection, so the whole coding is one.  A
Cantor pairing doubles bit width, so the balanced shape is load-bearing:
it keeps codes linear in the content where a left-to-right chain would be
exponential, and dialogue positions stay machine-sized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StructureError

__all__ = [
    "pair", "unpair", "encode_seq", "decode_seq",
    "K2Element", "FuelExhausted", "k2_apply", "apply_elem", "apply_many",
    "k2_basis", "basic_open_contains", "is_discrete", "DiscreteReport",
    "tau_extract", "parse_generator", "from_expr",
]


def pair(x, y):
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z):
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def _fold(items):
    if len(items) == 1:
        return items[0]
    mid = (len(items) + 1) // 2
    return pair(_fold(items[:mid]), _fold(items[mid:]))


def _unfold(code, count):
    if count == 1:
        return [code]
    left = (count + 1) // 2
    a, b = unpair(code)
    return _unfold(a, left) + _unfold(b, count - left)


def encode_seq(seq):
    seq = list(seq)
    if not seq:
        return 0
    return pair(len(seq) - 1, _fold(seq)) + 1


def decode_seq(z):
    if z == 0:
        return ()
    rest, fold = unpair(z - 1)
    return tuple(_unfold(fold, rest + 1))


class FuelExhausted(RuntimeError):
    """A composite element was queried beyond its dialogue budget."""


class K2Element:
    """A total function on the naturals, memoized, safe to query concurrently.

    The generator must be pure; racing queries at worst recompute the same
    value.  ``recursive`` tags elements built from the bounded expression
    language (or the basis): the constructive stand-in for filter membership.
    """

    def __init__(self, fn, recursive=False, name=None):
        self._fn = fn
        self.recursive = recursive
        self.name = name or "elem"
        self._memo = {}

    def __call__(self, n):
        memo = self._memo
        if n in memo:
            return memo[n]
        v = self._fn(n)
        if not isinstance(v, int) or v < 0:
            raise StructureError(f"{self.name} produced {v!r} at {n}; needs a natural")
        memo[n] = v
        return v

    def __repr__(self):
        tag = "rec" if self.recursive else "raw"
        return f"<K2 {self.name} [{tag}]>"


def k2_apply(alpha, beta, n, fuel):
    """Value of alpha·beta at n, reading at most ``fuel`` values of beta.

    Scans N = 0..fuel in order, so a positive answer is automatically the
    first one and everything below it answered zero; None is the
    undefined-at-this-fuel verdict, not an error.  Monotone in fuel.
    """
    query = [n]
    for length in range(fuel + 1):
        v = alpha(pair(length, _fold(query)) + 1)
        if v > 0:
            return v - 1
        if length < fuel:
            query.append(beta(length))
    return None


def apply_elem(alpha, beta, fuel, name=None):
    """alpha·beta as a (possibly partial) element; queries beyond the fuel
    raise FuelExhausted."""
    label = name or f"({alpha.name}·{beta.name})"

    def fn(n):
        v = k2_apply(alpha, beta, n, fuel)
        if v is None:
            raise FuelExhausted(f"{label} at {n} (fuel {fuel})")
        return v

    return K2Element(fn, recursive=False, name=label)


def apply_many(fuel, *elems):
    out = elems[0]
    for e in elems[1:]:
        out = apply_elem(out, e, fuel)
    return out


# ---------------------------------------------------------------------------
# The basis: k and s as honest dialogue elements
# ---------------------------------------------------------------------------

class _NeedMore(Exception):
    __slots__ = ("token",)

    def __init__(self, token):
        self.token = token


class _LazyView:
    """Random access into a coded sequence without decoding all of it.

    Dialogue prefixes get long while the computations reading them touch a
    handful of positions, so items are resolved by descending the balanced
    fold, caching the subtree codes along the way (O(log n) per access).
    """

    __slots__ = ("length", "_nodes")

    def __init__(self, z):
        if z == 0:
            self.length = 0
            self._nodes = {}
        else:
            rest, fold = unpair(z - 1)
            self.length = rest + 1
            self._nodes = {(0, self.length): fold}

    def item(self, i):
        lo, hi = 0, self.length
        nodes = self._nodes
        code = nodes[(lo, hi)]
        while hi - lo > 1:
            mid = lo + (hi - lo + 1) // 2
            left_key = (lo, mid)
            if left_key in nodes:
                lcode, rcode = nodes[left_key], nodes[(mid, hi)]
            else:
                lcode, rcode = unpair(code)
                nodes[left_key] = lcode
                nodes[(mid, hi)] = rcode
            if i < mid:
                hi, code = mid, lcode
            else:
                lo, code = mid, rcode
        return code


def _assoc_value(h, x):
    """Value at x of the element associated to the oracle computation h.

    x decodes as [n, prefix...]; h runs with an oracle giving the prefix
    and raising beyond it, in which case the answer is 0 ("read more");
    a completed run answers result+1.  Aborts raised by *outer* oracles
    propagate, which is what nests the construction soundly.
    """
    view = _LazyView(x)
    if view.length == 0:
        return 0
    n = view.item(0)
    bound = view.length - 1
    token = object()

    def oracle(i):
        if i < bound:
            return view.item(i + 1)
        raise _NeedMore(token)

    try:
        return h(oracle, n) + 1
    except _NeedMore as e:
        if e.token is token:
            return 0
        raise


def _oracle_apply(f_or, g_or, n):
    """Dialogue of f against g at n where both sides are oracles; terminates
    because queried positions grow strictly and prefix oracles abort."""
    query = [n]
    length = 0
    while True:
        v = f_or(pair(length, _fold(query)) + 1)
        if v > 0:
            return v - 1
        query.append(g_or(length))
        length += 1


def k2_basis():
    """Recursive-tagged k and s with k·a·b ~ a and s·a·b·c ~ (a·c)·(b·c).

    Prefix agreement with the right-hand sides holds wherever those
    converge; the s dialogues are expensive by nature (they must read the
    first argument up to sequence-code positions), so law checks probe
    where the simulated application converges quickly.
    """
    def k_outer(a_or, n1):
        return _assoc_value(lambda b_or, n: a_or(n), n1)

    k = K2Element(lambda x: _assoc_value(k_outer, x), recursive=True, name="k")

    def s_level1(a_or, n1):
        def s_level2(b_or, n2):
            def s_level3(c_or, n):
                def ac(j):
                    return _oracle_apply(a_or, c_or, j)

                def bc(j):
                    return _oracle_apply(b_or, c_or, j)

                return _oracle_apply(ac, bc, n)

            return _assoc_value(s_level3, n2)

        return _assoc_value(s_level2, n1)

    s = K2Element(lambda x: _assoc_value(s_level1, x), recursive=True, name="s")
    return k, s


# ---------------------------------------------------------------------------
# Topology: basic opens and discreteness of finite sets
# ---------------------------------------------------------------------------

def basic_open_contains(sigma, alpha):
    """Membership in the basic open of functions extending sigma."""
    return all(alpha(i) == v for i, v in enumerate(sigma))


@dataclass(frozen=True)
class DiscreteReport:
    discrete: bool
    prefixes: dict | None   # element position -> isolating prefix (tuple)
    witness: tuple | None   # positions of two elements agreeing to depth


def is_discrete(elements, depth):
    """Isolating prefixes of length <= depth for each element, if any.

    Two elements agreeing on 0..depth-1 make the family non-discrete at
    this depth; the offending pair is reported.
    """
    elements = list(elements)
    for i, a in enumerate(elements):
        for j in range(i + 1, len(elements)):
            if all(a(t) == elements[j](t) for t in range(depth)):
                return DiscreteReport(False, None, (i, j))
    prefixes = {}
    for i, a in enumerate(elements):
        for length in range(depth + 1):
            sigma = tuple(a(t) for t in range(length))
            if all(idx == i or not basic_open_contains(sigma, other)
                   for idx, other in enumerate(elements)):
                prefixes[i] = sigma
                break
    return DiscreteReport(True, prefixes, None)


# ---------------------------------------------------------------------------
# The extraction recipe from the non-localic argument
# ---------------------------------------------------------------------------

def tau_extract(alpha, prefix, nprime, j, fuel):
    """Two-phase search for the hidden value at j.

    Phase 1 scans k <= nprime for a positive alpha([j, prefix[..k]]).
    Phase 2 extends the full prefix by tuples, breadth-first in length and
    lexicographic within one, values and length both bounded by fuel.
    The first positive answer, minus one, is returned; None otherwise.
    """
    prefix = list(prefix)
    if len(prefix) != nprime + 1:
        raise StructureError(f"prefix length {len(prefix)} != nprime+1 = {nprime + 1}")
    for k in range(nprime + 1):
        v = alpha(encode_seq([j] + prefix[:k + 1]))
        if v > 0:
            return v - 1
    from itertools import product
    base = [j] + prefix
    for ext_len in range(1, fuel + 1):
        for ext in product(range(fuel + 1), repeat=ext_len):
            v = alpha(encode_seq(base + list(ext)))
            if v > 0:
                return v - 1
    return None


# ---------------------------------------------------------------------------
# Bounded expression language for generators
# ---------------------------------------------------------------------------
#
#   expr   := term (('+' | '-') term)*          '-' is truncated
#   term   := atom ('*' atom)*
#   atom   := NAT | IDENT | FN '(' args ')' | '(' expr ')'
#   FN     := eq | lt | le | mu
#
# eq/lt/le return 0 or 1.  mu(v, bound, body) binds v and yields the least
# v < bound with body > 0, else bound.  The argument is the identifier n.
# Everything is total on the naturals; composition is expression nesting.

_FUNCTIONS = ("eq", "lt", "le", "mu")


def _tokenize_expr(src):
    out = []
    i = 0
    while i < len(src):
        c = src[i]
        if c.isspace():
            i += 1
        elif c in "+-*(),":
            out.append(c)
            i += 1
        elif c.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(int(src[i:j]))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(src[i:j])
            i = j
        else:
            raise StructureError(f"bad character {c!r} in generator expression")
    return out


def parse_generator(src):
    """Parse an expression; returns an AST of nested tuples."""
    tokens = _tokenize_expr(src)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def eat(tok):
        nonlocal pos
        if peek() != tok:
            raise StructureError(f"expected {tok!r}, got {peek()!r}")
        pos += 1

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = peek()
            eat(op)
            node = (op, node, parse_term())
        return node

    def parse_term():
        node = parse_atom()
        while peek() == "*":
            eat("*")
            node = ("*", node, parse_atom())
        return node

    def parse_atom():
        nonlocal pos
        tok = peek()
        if isinstance(tok, int):
            pos += 1
            return ("nat", tok)
        if tok == "(":
            eat("(")
            node = parse_expr()
            eat(")")
            return node
        if isinstance(tok, str) and tok not in ("+", "-", "*", "(", ")", ","):
            pos += 1
            if peek() == "(":
                if tok not in _FUNCTIONS:
                    raise StructureError(f"unknown function {tok!r}")
                eat("(")
                args = [parse_expr()]
                while peek() == ",":
                    eat(",")
                    args.append(parse_expr())
                eat(")")
                if tok == "mu":
                    if len(args) != 3 or args[0][0] != "var":
                        raise StructureError("mu needs (variable, bound, body)")
                    return ("mu", args[0][1], args[1], args[2])
                if len(args) != 2:
                    raise StructureError(f"{tok} needs two arguments")
                return (tok, args[0], args[1])
            return ("var", tok)
        raise StructureError(f"unexpected token {tok!r}")

    node = parse_expr()
    if pos != len(tokens):
        raise StructureError(f"trailing tokens {tokens[pos:]!r}")
    return node


def _eval_ast(node, env):
    kind = node[0]
    if kind == "nat":
        return node[1]
    if kind == "var":
        if node[1] not in env:
            raise StructureError(f"unbound variable {node[1]!r}")
        return env[node[1]]
    if kind in ("+", "-", "*"):
        a, b = _eval_ast(node[1], env), _eval_ast(node[2], env)
        if kind == "+":
            return a + b
        if kind == "-":
            return max(a - b, 0)
        return a * b
    if kind == "eq":
        return int(_eval_ast(node[1], env) == _eval_ast(node[2], env))
    if kind == "lt":
        return int(_eval_ast(node[1], env) < _eval_ast(node[2], env))
    if kind == "le":
        return int(_eval_ast(node[1], env) <= _eval_ast(node[2], env))
    if kind == "mu":
        _, var, bound_ast, body = node
        bound = _eval_ast(bound_ast, env)
        inner = dict(env)
        for candidate in range(bound):
            inner[var] = candidate
            if _eval_ast(body, inner) > 0:
                return candidate
        return bound
    raise StructureError(f"bad AST node {node!r}")


def from_expr(src, name=None):
    """Compile a generator expression to a recursive-tagged element."""
    ast = parse_generator(src)
    return K2Element(lambda n: _eval_ast(ast, {"n": n}),
                     recursive=True, name=name or src)
