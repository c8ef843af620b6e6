"""
Units of integral group rings
=============================

Z[C_n] has units that are not of the form +-[g]. A unit of the form [g] has
delta_p = 0 for every prime p. Any other unit fails at some prime.
"""
import itertools

from deltaring import (
    BassUnitSpec,
    FgAbelianGroup,
    bass_cyclic_unit,
    delta_p,
    higman_torsion_check,
    integral_delta_unit_classify,
    regular_rep_det,
)

###############################################################################
# Bass units
# ----------

for n, k in [(5, 2), (7, 2), (8, 3), (12, 5)]:
    spec = BassUnitSpec(n, k)
    u = bass_cyclic_unit(spec)
    verdict = integral_delta_unit_classify(u)
    print(f"n={n} k={k} m={spec.m}: det={regular_rep_det(u)}  {u.render()}")
    print(f"    rejected at p={verdict.prime}: delta = {verdict.witness.render()}")

###############################################################################
# Which primes see the Bass unit of order 5?
# -------------------------------------------

u = bass_cyclic_unit(BassUnitSpec(5, 2))
for p in (2, 3, 5, 7, 11, 13):
    print(p, delta_p(u, p).is_zero())

###############################################################################
# Torsion units in a box
# ----------------------
# A brute-force search of small coefficient boxes finds only the group
# elements themselves.

for n, bound in itertools.product((2, 3, 4), (1, 2)):
    rep = higman_torsion_check(FgAbelianGroup.cyclic(n), bound)
    print(f"C{n}, |coeff| <= {bound}: {rep.candidates} candidates,"
          f" {len(rep.units)} units, torsion {[t.render() for t in rep.torsion_units]}")
