"""Executable checkers and constructions for realizability structures.

Finite ordered partial combinatory algebras and basic combinatorial
objects, their axiom checkers, the downset construction, pseudo-sup-algebra
and implicative structure, abstract Krivine structures with the
orthogonality apparatus, the induced realizability preorders and their
Booleanization, localic criteria, and a dialogue model on Baire space.
"""

__version__ = "0.1.0"

from .aks import (Aks, BuiltAks, aks_apply, aks_imp, biorthogonal_closure,
                  build_aks, cc_element, check_aks, check_kr, check_order_ca,
                  closed_stack_sets, order_ca, orthogonal_stacks,
                  orthogonal_terms, tv_least_of_aks)
from .bco import (BcoMorphism, DensityWitnesses, FiniteBco, ImplicativeKit,
                  InternalMeets, PseudoDAlgebra, applicative_verdict,
                  check_applicative_morphism, check_bco, check_bco_morphism,
                  check_density, check_implicative, check_pseudo_d_algebra,
                  check_star, downset_bco, downset_monad, downset_opca,
                  downsets_of_poset, find_right_adjoint, find_top,
                  implication_from_sup, internal_meets, join_sup,
                  morphism_leq, opca_to_bco, preserves_finite_meets,
                  product_bco, sup_from_implication, truth_values, tv_least)
from .errors import (CapExceeded, ConstructionError, InvariantViolation,
                     StructureError)
from .k2 import (K2Element, FuelExhausted, apply_elem, apply_many,
                 basic_open_contains, decode_seq, encode_seq, from_expr,
                 is_discrete, k2_apply, k2_basis, tau_extract)
from .opca import (FiniteOpca, SequenceKit, check_filter, check_opca_axioms,
                   derive_sequence_kit, skk_element, turing_leq)
from .report import Report
from .terms import (App, Const, Diverged, K, S, Var, app, bracket,
                    eval_in_opca, free_vars, lam, parse_term, reduce_term,
                    subst, term_str)
from .tripos import (BooleanVerdict, Predicate, arrow_U, boolean_leq,
                     localic_criterion, predicate_leq, streicher_leq)
