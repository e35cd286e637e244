"""Finite ordered partial combinatory algebras.

Carries the axiom checkers for the order/application laws and designated
k/s, filter verification, the derived sequence/numeral coding machinery
(pairing, case-analyzable numerals, and the list combinators used by the
Krivine-structure construction), and the Turing-style reducibility search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import ConstructionError, StructureError
from .report import FAIL, PASS, Report
from .terms import App, Const, K, S, Var, app, eval_in_opca, lam

__all__ = [
    "FiniteOpca", "check_opca_axioms", "check_filter",
    "SequenceKit", "derive_sequence_kit", "turing_leq", "skk_element",
]


def transitive_reflexive_closure(elements, pairs):
    leq = {(a, a) for a in elements}
    leq.update(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return frozenset(leq)


@dataclass(frozen=True, eq=False)
class FiniteOpca:
    """Finite carrier, partial order, partial application table, designated k/s.

    ``leq_pairs`` is closed reflexively/transitively at construction; the
    table is a dict (a, b) -> c with absent entries meaning undefined.
    ``filter`` and ``U`` are optional subsets.  Instances are immutable;
    all operations on them are pure.
    """

    elements: tuple
    leq_pairs: frozenset
    table: dict
    k: object
    s: object
    filter: frozenset | None = None
    U: frozenset | None = None
    name: str = "opca"
    element_set: frozenset = field(init=False)
    _index: dict = field(init=False)

    def __post_init__(self):
        element_set = frozenset(self.elements)
        if len(self.elements) != len(element_set):
            raise StructureError("duplicate carrier elements", source=self.name)
        if not element_set:
            raise StructureError("empty carrier", source=self.name)
        for (a, b), c in self.table.items():
            for x in (a, b, c):
                if x not in element_set:
                    raise StructureError(f"app entry {x!r} outside carrier",
                                         source=self.name, field="app")
        for (a, b) in self.leq_pairs:
            if a not in element_set or b not in element_set:
                raise StructureError(f"leq entry ({a!r},{b!r}) outside carrier",
                                     source=self.name, field="leq")
        for which, v in (("k", self.k), ("s", self.s)):
            if v not in element_set:
                raise StructureError(f"designated {which}={v!r} outside carrier",
                                     source=self.name, field=which)
        for fname, sub in (("filter", self.filter), ("U", self.U)):
            if sub is not None and not sub <= element_set:
                raise StructureError("subset escapes carrier", source=self.name, field=fname)
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(self, "leq_pairs",
                           transitive_reflexive_closure(self.elements, self.leq_pairs))
        object.__setattr__(self, "element_set", element_set)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    # -- basic queries ----------------------------------------------------

    def leq(self, a, b):
        return (a, b) in self.leq_pairs

    def app(self, a, b):
        return self.table.get((a, b))

    def index(self, a):
        return self._index[a]

    def ordered(self, subset):
        """Deterministic iteration order for a subset of the carrier."""
        return sorted(subset, key=self._index.__getitem__)

    def down(self, a):
        return frozenset(b for b in self.elements if self.leq(b, a))

    def downward_closure(self, subset):
        return frozenset(b for b in self.elements
                         if any(self.leq(b, a) for a in subset))

    def is_downward_closed(self, subset):
        return subset == self.downward_closure(subset)

    def downsets(self):
        """All downward closed subsets, smallest first (deterministic)."""
        out = set()
        for mask in range(1 << len(self.elements)):
            seed = frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)
            out.add(self.downward_closure(seed))
        return sorted(out, key=lambda d: (len(d), tuple(self._index[e] for e in self.ordered(d))))

    def eval(self, term, env=None):
        return eval_in_opca(term, env, self)

    def replace(self, **kw):
        data = dict(elements=self.elements, leq_pairs=self.leq_pairs, table=self.table,
                    k=self.k, s=self.s, filter=self.filter, U=self.U, name=self.name)
        data.update(kw)
        return FiniteOpca(**data)


# ---------------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------------

def check_opca_axioms(opca, search_ks=False):
    """Clause-by-clause verification; first counterexample per failed clause.

    Checks the order axioms, downward compatibility of application, and the
    k/s laws (k·x·y defined and <= x; s·x·y always defined; s·x·y·z defined
    and <= (x·z)·(y·z) whenever the latter is defined).  With ``search_ks``
    a brute-force scan for a working (k, s) pair is reported as well.
    """
    rep = Report(opca.name)
    els = opca.elements

    bad = next(((a,) for a in els if not opca.leq(a, a)), None)
    rep.add("order.reflexive", FAIL if bad else PASS, counterexample=bad)
    bad = next(((a, b) for a in els for b in els
                if a != b and opca.leq(a, b) and opca.leq(b, a)), None)
    rep.add("order.antisymmetric", FAIL if bad else PASS, counterexample=bad)
    bad = next(((a, b, c) for a in els for b in els for c in els
                if opca.leq(a, b) and opca.leq(b, c) and not opca.leq(a, c)), None)
    rep.add("order.transitive", FAIL if bad else PASS, counterexample=bad)

    bad = None
    for (a, b), ab in opca.table.items():
        for a2 in els:
            if not opca.leq(a2, a):
                continue
            for b2 in els:
                if not opca.leq(b2, b):
                    continue
                ab2 = opca.app(a2, b2)
                if ab2 is None or not opca.leq(ab2, ab):
                    bad = (a, b, a2, b2)
                    break
            if bad:
                break
        if bad:
            break
    rep.add("app.downward_compatible", FAIL if bad else PASS, counterexample=bad)

    def k_law(k):
        for x in els:
            kx = opca.app(k, x)
            if kx is None:
                return (k, x)
            for y in els:
                kxy = opca.app(kx, y)
                if kxy is None or not opca.leq(kxy, x):
                    return (k, x, y)
        return None

    def s_law(s):
        for x in els:
            sx = opca.app(s, x)
            if sx is None:
                return (s, x)
            for y in els:
                sxy = opca.app(sx, y)
                if sxy is None:
                    return (s, x, y)
                for z in els:
                    xz = opca.app(x, z)
                    yz = opca.app(y, z)
                    if xz is None or yz is None:
                        continue
                    rhs = opca.app(xz, yz)
                    if rhs is None:
                        continue
                    sxyz = opca.app(sxy, z)
                    if sxyz is None or not opca.leq(sxyz, rhs):
                        return (s, x, y, z)
        return None

    bad = k_law(opca.k)
    rep.add("k.law", FAIL if bad else PASS, counterexample=bad)
    bad = s_law(opca.s)
    rep.add("s.law", FAIL if bad else PASS, counterexample=bad)

    if search_ks:
        found = next((((k, s)) for k in els for s in els
                      if k_law(k) is None and s_law(s) is None), None)
        rep.add("ks.search", PASS if found else FAIL,
                witnesses={"k": found[0], "s": found[1]} if found else {},
                counterexample=None if found else ("no (k,s) pair",))
    return rep


def check_filter(opca, subset):
    """Closure of ``subset`` under defined application plus k/s membership."""
    rep = Report(opca.name)
    subset = frozenset(subset)
    if not subset <= opca.element_set:
        raise StructureError("filter subset escapes carrier", source=opca.name, field="filter")
    bad = next(((a, b, opca.app(a, b)) for a in opca.ordered(subset)
                for b in opca.ordered(subset)
                if opca.app(a, b) is not None and opca.app(a, b) not in subset), None)
    rep.add("filter.app_closed", FAIL if bad else PASS, counterexample=bad)
    rep.add("filter.has_k", PASS if opca.k in subset else FAIL,
            counterexample=None if opca.k in subset else (opca.k,))
    rep.add("filter.has_s", PASS if opca.s in subset else FAIL,
            counterexample=None if opca.s in subset else (opca.s,))
    return rep


def skk_element(opca):
    """The identity realizer s·k·k, always defined in a law-abiding opca."""
    value = opca.eval(app(S, K, K))
    if value is None:
        raise ConstructionError("s·k·k undefined; structure violates the s law")
    return value


# ---------------------------------------------------------------------------
# Sequence/numeral coding and the list-handling combinators
# ---------------------------------------------------------------------------
#
# Pairing is the usual p = <x y z> z x y with selectors; numerals are the
# case-analyzable ones (zero = <x y> y, succ n = <x y> x n), so a numeral
# applied to (step, base) either returns base or feeds its predecessor to
# step.  A sequence [a0..a(n-1)] is coded as p n [a0, [a1, ... nil]] with
# nil = numeral 0.  The b/c/d/t combinators below satisfy, for sequences of
# length <= max_len,
#   (i)   b n [a0..ak]  <=  a_n             (n <= k)
#   (ii)  c n [a0..ak]  <=  [an..ak]        (n <= k)
#   (iii) d a [a0..ak]  <=  [a, a0..ak]
#   (iv)  t a           <=  [a]
# and all four evaluate into the filter.  Index-driven recursion is unrolled
# to a fixed depth, which is why the kit takes max_len.

PAIR = lam("x y z", app(Var("z"), Var("x"), Var("y")))
FST = lam("t", app(Var("t"), lam("x y", Var("x"))))
SND = lam("t", app(Var("t"), lam("x y", Var("y"))))
ZERO = lam("x y", Var("y"))
SUCC = lam("n x y", app(Var("x"), Var("n")))
IDENT = app(S, K, K)
PRED = lam("n", app(Var("n"), IDENT, ZERO))
NIL = ZERO


def numeral(n):
    # Built so that succ·(numeral n) weakly reduces to exactly numeral (n+1).
    t = ZERO
    for _ in range(n):
        t = lam("x y", App(Var("x"), t))
    return t


def _nth_recursor(depth):
    """B_d with B_d n rho <= (rho's n-th head) for n <= d."""
    body = lam("n rho", app(FST, Var("rho")))
    for _ in range(depth):
        step = lam("m", app(body, Var("m"), app(SND, Var("rho"))))
        body = lam("n rho", app(Var("n"), step, app(FST, Var("rho"))))
    return body


def _drop_recursor(depth):
    body = lam("n rho", Var("rho"))
    for _ in range(depth):
        step = lam("m", app(body, Var("m"), app(SND, Var("rho"))))
        body = lam("n rho", app(Var("n"), step, Var("rho")))
    return body


def _minus_recursor(depth):
    body = lam("m n", Var("m"))
    for _ in range(depth):
        step = lam("n2", app(body, app(PRED, Var("m")), Var("n2")))
        body = lam("m n", app(Var("n"), step, Var("m")))
    return body


def seq_term(items):
    """Coded sequence as a term; items are terms (typically Const leaves)."""
    payload = NIL
    for item in reversed(items):
        payload = app(PAIR, item, payload)
    return app(PAIR, numeral(len(items)), payload)


@dataclass(frozen=True, eq=False)
class SequenceKit:
    """Closed k,s-terms for pairing, numerals, and sequence management."""

    opca: FiniteOpca
    max_len: int
    p: object
    p0: object
    p1: object
    b: object
    c: object
    d: object
    t: object

    def numeral(self, n):
        return numeral(n)

    def seq_term(self, elements):
        return seq_term([Const(e) for e in elements])

    def seq_value(self, elements):
        value = self.opca.eval(self.seq_term(elements))
        if value is None:
            raise ConstructionError(f"sequence code for {list(elements)!r} undefined")
        return value

    def numeral_value(self, n):
        value = self.opca.eval(numeral(n))
        if value is None:
            raise ConstructionError(f"numeral {n} undefined")
        return value

    def element(self, term):
        value = self.opca.eval(term)
        if value is None:
            raise ConstructionError(f"kit term undefined: {term!r}")
        return value


def derive_sequence_kit(opca, max_len=3, verify=True):
    """Build the coding terms and check the four list clauses exhaustively.

    Requires a filter; raises ConstructionError when an evaluation that the
    clauses need comes out undefined, naming the offending term.
    """
    if opca.filter is None:
        raise StructureError("sequence kit needs a filtered opca", source=opca.name)
    depth = max_len + 1
    kit = SequenceKit(
        opca=opca, max_len=max_len,
        p=PAIR, p0=FST, p1=SND,
        b=lam("n l", app(_nth_recursor(depth), Var("n"), app(SND, Var("l")))),
        c=lam("n l", app(PAIR,
                         app(_minus_recursor(depth), app(FST, Var("l")), Var("n")),
                         app(_drop_recursor(depth), Var("n"), app(SND, Var("l"))))),
        d=lam("a l", app(PAIR,
                         app(SUCC, app(FST, Var("l"))),
                         app(PAIR, Var("a"), app(SND, Var("l"))))),
        t=lam("a", app(PAIR, app(SUCC, ZERO), app(PAIR, Var("a"), NIL))),
    )
    if verify:
        _verify_kit(kit)
    return kit


def _verify_kit(kit):
    opca = kit.opca
    b_el, c_el, d_el, t_el = (kit.element(t) for t in (kit.b, kit.c, kit.d, kit.t))
    for label, el in (("b", b_el), ("c", c_el), ("d", d_el), ("t", t_el)):
        if el not in opca.filter:
            raise ConstructionError(f"kit term {label} evaluates outside the filter")
    nums = [kit.numeral_value(n) for n in range(kit.max_len + 1)]

    code_cache = {}

    def code_of(seq):
        if seq not in code_cache:
            code_cache[seq] = kit.seq_value(seq)
        return code_cache[seq]

    def apply2(f, x, y, what):
        fx = opca.app(f, x)
        fxy = None if fx is None else opca.app(fx, y)
        if fxy is None:
            raise ConstructionError(f"{what} undefined")
        return fxy

    for length in range(kit.max_len + 1):
        for seq in product(opca.elements, repeat=length):
            code = code_of(seq)
            # (iii) and (iv)
            for a in opca.elements:
                lhs = apply2(d_el, a, code, f"d·{a}·{list(seq)}")
                rhs = code_of((a,) + seq)
                if not opca.leq(lhs, rhs):
                    raise ConstructionError(f"clause (iii) fails at {a!r}, {list(seq)!r}")
            for n in range(length):
                lhs = apply2(b_el, nums[n], code, f"b·{n}·{list(seq)}")
                if not opca.leq(lhs, seq[n]):
                    raise ConstructionError(f"clause (i) fails at n={n}, {list(seq)!r}")
                lhs = apply2(c_el, nums[n], code, f"c·{n}·{list(seq)}")
                rhs = code_of(seq[n:])
                if not opca.leq(lhs, rhs):
                    raise ConstructionError(f"clause (ii) fails at n={n}, {list(seq)!r}")
    for a in opca.elements:
        ta = opca.app(t_el, a)
        if ta is None or not opca.leq(ta, code_of((a,))):
            raise ConstructionError(f"clause (iv) fails at {a!r}")


# ---------------------------------------------------------------------------
# Turing-style reducibility induced by the filter
# ---------------------------------------------------------------------------

def turing_leq(opca, a1, a2):
    """First filter element b with b·a2 <= a1, else None.

    a1 <=_T a2 holds exactly when such a witness exists; the search order is
    the carrier order restricted to the filter, so results are stable.
    """
    if opca.filter is None:
        raise StructureError("turing_leq needs a filtered opca", source=opca.name)
    for b in opca.ordered(opca.filter):
        ba2 = opca.app(b, a2)
        if ba2 is not None and opca.leq(ba2, a1):
            return b
    return None
