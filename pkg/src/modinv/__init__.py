"""Modular invariant rings over finite fields at desk scale.

Finite fields, polynomial rings with matrix-group actions, Steenrod reduced
powers, Dickson invariants, Cartan operators on localizations, and graded
local cohomology computed as a colimit of finite linear algebra.
"""

from .cartan_frac import CartanEvaluator, Fraction, map_to, q_r, verify_cartan_axiom
from .dickson import DicksonAlgebra, dickson_by_moore, dickson_by_roots, pstar_prime_chain
from .gf import FieldElement, FieldSpec
from .group_action import (
    Group,
    GroupElement,
    close,
    cyclic_transvection_group,
    general_linear_group,
    invariant_basis,
    trivial_group,
)
from .linalg import MatrixGF
from .localcoh import (
    GradedCohomologyWindow,
    IdealSpec,
    colimit_window,
    depth_probe,
    dickson_containment_probe,
    induced_q,
    koszul_cohomology,
    pstar_closure_check,
    window_annihilator,
)
from .poly import PolyRing, Polynomial
from .steenrod import is_pstar_invariant, total
from .steenrod import p as steenrod_power

__version__ = "0.1.0"
