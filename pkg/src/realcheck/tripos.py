"""Indexed realizability preorders, Booleanization, and localic criteria.

Predicates over a finite index set are total assignments of carrier
elements (or downsets, or closed stack sets).  The preorder is uniform
realizability: one function from the structure works at every index.
The Booleanization orders downset-valued predicates through double
negation into a fixed downset U, and the Streicher preorder on stack-set
predicates matches it across the Krivine-structure construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aks import orthogonal_terms
from .errors import InvariantViolation, StructureError

__all__ = [
    "Predicate", "predicate_leq", "arrow_U",
    "boolean_leq", "BooleanVerdict", "streicher_leq", "localic_criterion",
]


@dataclass(frozen=True, eq=False)
class Predicate:
    index: tuple
    assign: dict

    def __post_init__(self):
        for i in self.index:
            if i not in self.assign:
                raise StructureError(f"predicate not total at index {i!r}")

    def __call__(self, i):
        return self.assign[i]

    def map_values(self, fn):
        return Predicate(self.index, {i: fn(self.assign[i]) for i in self.index})


def predicate_leq(phi, psi, bco):
    """First function name f with f(phi(i)) defined and <= psi(i) for all i."""
    if phi.index != psi.index:
        raise StructureError("predicates over different index sets")
    for fname, ftab in bco.functions.items():
        if all(phi(i) in ftab and bco.leq(ftab[phi(i)], psi(i)) for i in phi.index):
            return fname
    return None


def arrow_U(alpha, opca, U=None):
    """{a | a·b defined and lands in U, for every b in alpha}; a downset."""
    U = frozenset(U) if U is not None else opca.U
    if U is None:
        raise StructureError("arrow_U needs a downset U", source=opca.name)
    out = frozenset(a for a in opca.elements
                    if all(opca.app(a, b) is not None and opca.app(a, b) in U
                           for b in alpha))
    if not opca.is_downward_closed(out):
        raise InvariantViolation(f"alpha -> U not downward closed in {opca.name}")
    return out


@dataclass(frozen=True)
class BooleanVerdict:
    holds: bool
    realizer: object          # downset witness from the filter of D(A,A'), or None
    via_double_negation: bool  # the other formulation, asserted equal


def _d_predicate_leq(phi, psi, opca):
    """Realizer in A' for a pointwise inclusion-tracking between downset
    predicates: r·u defined and in psi(i) for every u in phi(i).

    Equivalent to the downset-opca formulation: a filter downset gamma works
    iff any of its filter members does, and the principal downset of a
    working r works.
    """
    for r in opca.ordered(opca.filter):
        if all(opca.app(r, u) is not None and opca.app(r, u) in psi(i)
               for i in phi.index for u in phi(i)):
            return r
    return None


def boolean_leq(phi, psi, opca):
    """The Boolean order on downset-valued predicates relative to U.

    Computes both equivalent forms — (psi -> U) <= (phi -> U), and
    phi <= ((psi -> U) -> U) — asserts they agree, and returns the
    contravariant form's verdict with its realizer.
    """
    if opca.U is None:
        raise StructureError("boolean_leq needs U on the opca", source=opca.name)
    not_phi = phi.map_values(lambda a: arrow_U(a, opca))
    not_psi = psi.map_values(lambda a: arrow_U(a, opca))
    contravariant = _d_predicate_leq(not_psi, not_phi, opca)
    double_neg = _d_predicate_leq(phi, not_psi.map_values(lambda a: arrow_U(a, opca)), opca)
    if (contravariant is None) != (double_neg is None):
        raise InvariantViolation(
            f"Booleanization forms disagree on {opca.name}: "
            f"contravariant={contravariant!r} double-negation={double_neg!r}")
    return BooleanVerdict(holds=contravariant is not None,
                          realizer=contravariant,
                          via_double_negation=double_neg is not None)


def streicher_leq(phi, psi, aks):
    """First quasi-proof t with (t, u.pi) in the pole for every index i,
    u facing phi(i), and pi in psi(i); None when no uniform witness exists."""
    if phi.index != psi.index:
        raise StructureError("predicates over different index sets")
    ordered_qp = [t for t in aks.terms if t in aks.qp]
    for t in ordered_qp:
        if all(aks.in_pole(t, aks.app_push(u, pi))
               for i in phi.index
               for u in orthogonal_terms(aks, phi(i))
               for pi in psi(i)):
            return t
    return None


def localic_criterion(opca, U=None):
    """First filter element e with: b in A', b·a in U implies e·a in U.

    A witness makes the induced Boolean preorder localic; the search is
    exhaustive over the filter in carrier order.
    """
    U = frozenset(U) if U is not None else opca.U
    if opca.filter is None or U is None:
        raise StructureError("localic criterion needs a filter and U", source=opca.name)
    triggers = [a for a in opca.elements
                if any(opca.app(b, a) is not None and opca.app(b, a) in U
                       for b in opca.filter)]
    for e in opca.ordered(opca.filter):
        if all(opca.app(e, a) is not None and opca.app(e, a) in U for a in triggers):
            return e
    return None
