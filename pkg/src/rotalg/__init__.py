"""Finite Goedel and nilpotent minimum algebras with modal operators.

Build algebras from Hasse diagrams, classify them, rotate Goedel algebras
into NM+/NM- algebras (lifting box/diamond operators along the way), take
Goedel skeletons back, and check the representation theorems exhaustively
on every algebra generated from small forests.
"""

__version__ = "0.1.0"

from .document import (
    AlgebraDocument,
    algebra_to_document,
    doc_to_algebra,
    emit_document,
    load,
    parse_document,
)
from .enumeration import (
    Forest,
    enumerate_forests,
    enumerate_trees,
    godel_from_forest,
    verify_thm_2_4,
)
from .errors import *  # noqa: F401,F403
from .harness import HarnessReport, run_harness
from .lattice import FiniteLattice, build_from_covers, is_meet_irreducible
from .modal import (
    Axiom,
    ModalPair,
    check_derived,
    check_gao,
    check_nmao_minus,
    check_nmao_plus,
    check_positivity_closure,
    check_side_conditions,
    enumerate_modal_pairs,
    enumerate_operators,
)
from .morphisms import Homomorphism, all_isomorphisms, find_isomorphism, verify_isomorphism
from .report import AxiomReport, AxiomResult
from .residuated import (
    ResiduatedAlgebra,
    check_godel,
    check_mtl,
    check_nm,
    check_nm_minus,
    check_nm_plus,
    classify,
    filters,
    is_directly_indecomposable,
    prime_filters,
)
from .rotation import (
    RotatedAlgebra,
    eta,
    gamma,
    lift_modal,
    lower_modal,
    rotate,
    skeleton,
)
