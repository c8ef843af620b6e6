"""Delta-ring arithmetic on group rings over truncated p-adic and Witt coefficients."""

import types as _types

from .delta import (
    ArtinSchreierKernel,
    DeltaAxiomReport,
    RankOneVerdict,
    SquareZeroReport,
    TangentElement,
    TangentFixedPoints,
    artin_schreier_kernel,
    congruent_mod_J2,
    delta_hensel_lift,
    delta_on_square_zero,
    delta_p,
    frobenius_lift,
    is_rank_one_unit,
    psi,
    tangent_fixed_points,
    tangent_map,
    verify_delta_axioms,
)
from .descriptors import parse_descriptor, parse_group, parse_ring, render
from .errors import DeltaRingError, ResourceLimitError, ValidationError
from .group_rings import (
    GroupRingElement,
    IdempotentDecomposition,
    LocallyConstantFunction,
    augmentation,
    convolve,
    frobenius_lift_groupring,
    idempotent_decomposition,
    locally_constant_functions,
    pushforward_along_quotient,
    regular_rep_det,
)
from .groups import FgAbelianGroup, GroupElement, quotient_map, smith_normal_form
from .padic import PadicApprox, ring_arithmetic, teichmuller
from .rings import ZZ, PadicRing, ProductRing, product_ring, witt_ring
from .units import (
    BassUnitSpec,
    UnitSet,
    bass_cyclic_unit,
    enumerate_rank_one_reduced,
    enumerate_units,
    higman_torsion_check,
    integral_delta_unit_classify,
    tautological_units,
)
from .witt import WittElement, WittRingContext, construct_witt_ring, witt_frobenius, witt_teichmuller

__all__ = [n for n, v in dict(globals()).items() if not n.startswith("_") and not isinstance(v, _types.ModuleType)]
