"""Finite, checkable versions of generalized Boolean algebras, partial
actions, skew group rings, inverse semigroups, labelled spaces and their
desingularization, with checkers for Morita sufficient conditions."""

from .errors import (
    CapacityError,
    ClosureViolationError,
    InvalidInputError,
    MoritaKitError,
    PreconditionError,
)
from .gba import Gba, GbaElement, Universe, is_cover, is_ideal, make_gba, powerset, relative_complement
from .groups import FiniteGroup, FreeGroup, GroupWord, Letter, h, parse_word, prefix_relation, reduce
from .semilattice import CompactOpens, Semilattice, check_cover_preserving, check_tight_inclusion
from .partial_action import (
    PartialAction,
    SubactionMap,
    check_cover_condition,
    check_fullness_via_closure,
    check_ideal_condition,
    intermediate_closure,
    validate_axioms,
)
from .skew_ring import QQ, ZZ, ModularRing, SkewRing, absorbing_unit, unit_join, unit_join_identity
from .inv_semigroup import (
    FiniteInverseSemigroup,
    Grading,
    brandt,
    induced_action,
    induced_inclusion,
    natural_leq,
    verify_grading,
)
from .graph_alg import (
    DirectedGraph,
    GraphSemigroup,
    check_graph_morita,
    classify_dag,
    classify_functional,
    is_hereditary,
    saturated_hereditary_closure,
)
from .labelled_space import LabelledSemigroup, LabelledSpace, relative_range, true_sinks, validate_space
from .desing import (
    BFElement,
    DesingSemigroup,
    DesingSpace,
    bf_range,
    build,
    embed,
    lift_above,
    membership_in_S1,
    verify_all_regular,
    verify_conditions,
)
from .morita import MoritaReport, check_boolean, check_enlargement, check_semigroup

__version__ = "0.1.0"
