"""
Rank-one units of truncated group rings
=======================================

A unit u is rank one when delta(u) = 0. Over Z/p^r this can only be tested
up to precision, so the enumerator also asks that u lift a few digits
further while staying delta-stable. Watching the survivors shrink as the
depth grows shows where the answer stabilizes.
"""
from deltaring import (
    FgAbelianGroup,
    PadicRing,
    delta_hensel_lift,
    enumerate_rank_one_reduced,
    product_ring,
    tautological_units,
)

C2 = FgAbelianGroup.cyclic(2)
C3 = FgAbelianGroup.cyclic(3)

###############################################################################
# Survivors by depth
# ------------------
# With depth 0 some spurious solutions remain; they die once lifted.

R = PadicRing(2, 3)
for depth in range(3):
    s = enumerate_rank_one_reduced(R, C2, depth)
    print(f"depth {depth}: {[u.render() for u in s]}  counts={s.counts}")

###############################################################################
# One Hensel step
# ---------------
# 4 + 5[g] has delta = 0 mod 4 but no delta-stable lift to Z/16.

bad = next(u for u in enumerate_rank_one_reduced(R, C2, 0) if u.render() == "4+5[g]")
print("lifts of", bad.render(), "->", delta_hensel_lift(bad))

###############################################################################
# Several components
# -----------------
# Z/9 x Z/9 has two components, so a unit may use a different group element
# on each. The stable survivors are exactly these mixed units.

A = product_ring(PadicRing(3, 2), PadicRing(3, 2))
s = enumerate_rank_one_reduced(A, C3, 2)
taut = tautological_units(A, C3)
print(len(s), "survivors;", "same as the tautological units:", s.as_set() == taut.as_set())
for u in s:
    print("  ", u.render())
