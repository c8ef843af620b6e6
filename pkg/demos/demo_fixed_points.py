"""
Fixed points of Frobenius
=========================

The kernel of phi - 1 on A/p^r is free over Z/p^r with one generator per
connected component of A. Tangent fixed points reduce to the same kernels,
one per cyclic factor of M.
"""
from deltaring import (
    FgAbelianGroup,
    PadicRing,
    artin_schreier_kernel,
    idempotent_decomposition,
    locally_constant_functions,
    product_ring,
    tangent_fixed_points,
    witt_ring,
)

###############################################################################
# Components via idempotents
# --------------------------

for A in (PadicRing(3, 2), product_ring(PadicRing(3, 2), PadicRing(3, 2)), witt_ring(2, 2, 2)):
    dec = idempotent_decomposition(A)
    print(f"{A.descriptor}: {dec.components} component(s), idempotents {[A.render(e) for e in dec]}")

###############################################################################
# Artin-Schreier kernels
# ----------------------

for A in (PadicRing(2, 3), witt_ring(2, 2, 3), witt_ring(3, 2, 2),
          product_ring(witt_ring(2, 2, 2), witt_ring(2, 2, 2))):
    k = artin_schreier_kernel(A)
    print(f"{A.descriptor}: kernel size {k.size} = p^({k.precision}*{k.rank})")

###############################################################################
# Tangent fixed points against locally constant functions
# -------------------------------------------------------

A = product_ring(PadicRing(2, 2), PadicRing(2, 2))
for M in (FgAbelianGroup.cyclic(2), FgAbelianGroup.cyclic(4), FgAbelianGroup(0, (2, 2))):
    fixed = tangent_fixed_points(A, M)
    print(f"M = {M.descriptor}: fixed {fixed.size}, functions {len(locally_constant_functions(A, M))}")
