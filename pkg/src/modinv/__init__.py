"""Exact invariants of modules over truncated polynomial algebras.

Core objects: finite fields (fields), multivariate polynomials with exact
gcd (mpoly), exact linear algebra over fields and polynomial rings (linalg),
Groebner bases and projective emptiness certificates (groebner), defining
systems of homogeneous morphisms (projmaps), module frames and the example
catalog (modrep), and the rank/degree/Jordan-type invariants (invariants).
"""

from .fields import GF, ExtField, PrimeField
from .groebner import (GroebnerBasis, Ideal, buchberger, normal_form,
                       projective_zero_empty, radical_membership)
from .invariants import (InvariantReport, JordanType, constant_jrank_certify,
                         eip_test, ekp_test, generic_jordan_type, generic_jrank,
                         generic_kernel, hom_space, invariant_report, jdegree,
                         jordan_type_at, rank_at_point, self_dual_test)
from .linalg import Mat, PolyMat, Subspace, generic_rank_of, minor, \
    pluecker_vector, theta, theta_power
from .modrep import (ModuleRep, PPoint, Submodule, change_of_generators,
                     direct_sum, dual_module, load_module, pullback_ppoint,
                     quotient_module, rad_quotient, regular_module,
                     save_module, series, socle_submodule, submodule_span,
                     trivial_module, zoo)
from .mpoly import MPoly, poly_divexact, poly_gcd
from .projmaps import (DefiningSystem, compose_systems, degree_of_morphism,
                       line_restrict, reduce_defining_system, veronese)

__version__ = "0.1.0"
