"""mackey-kit: exact computational algebra for Mackey functors.

Subpackages cover exact linear algebra over Z, Q, Z/m and Z_(p); finite
groups with their subgroup lattices; finite G-sets; Burnside rings and
tables of marks; Mackey functors with box products; categorical/geometric
fixed points and inflation; truncated pointed simplicial G-sets; the
explicit derived model for cyclic groups of prime order with Tate
complexes; and the truncated completed Burnside ring of the infinite
cyclic group with its Witt-vector comparison and p-typical idempotents.
"""

from .exactalg import (
    CoefficientRing, ZZ, QQ, integers_mod, p_local,
    Matrix, FPModule, ModuleMap, ChainComplex, ChainMap,
    smith_form, cokernel, kernel, homology, modules_isomorphic,
    mapping_cone, ExactAlgError,
)

__version__ = "0.1.0"
