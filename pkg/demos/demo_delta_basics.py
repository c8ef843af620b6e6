"""
Frobenius lifts and delta
=========================

Every ring used here carries a Frobenius lift phi, and delta measures how
far phi is from the p-th power map: delta(x) = (phi(x) - x^p)/p.
"""
import numpy as np

from deltaring import (
    ZZ,
    FgAbelianGroup,
    GroupRingElement,
    PadicRing,
    delta_p,
    frobenius_lift,
    psi,
    verify_delta_axioms,
    witt_ring,
    witt_teichmuller,
)

###############################################################################
# Integers and their truncations
# ------------------------------
# On Z the Frobenius lift is the identity, so delta is the Fermat quotient.

for n in (-1, 2, 3, 10):
    print(f"delta_2({n}) = {delta_p(n, 2)}")

# Over Z/8 each application of delta costs one 2-adic digit.
R = PadicRing(2, 3)
x = R.from_int(3)
d = delta_p(x)
print(f"delta({x}) = {d}  (now only known mod 2^{d.r})")

###############################################################################
# Witt vectors
# ------------
# W(F_4)/8 is Z/8[x]/(x^2 + x + 1). Teichmuller lifts are killed by delta.

W = witt_ring(2, 2, 3)
t = witt_teichmuller(W, [0, 1])
print("Teichmuller lift of the generator of F_4:", t)
print("its delta:", delta_p(t), " phi(t) = t^2:", frobenius_lift(t) == t * t)

###############################################################################
# Group rings
# -----------
# phi sends [m] to [pm], and psi(x) = x^p + p delta(x) reproduces it.

C3 = FgAbelianGroup.cyclic(3)
g = GroupRingElement.basis(ZZ, C3, [1])
x = 1 + g
print("x =", x.render())
print("delta_2(x) =", delta_p(x, 2).render())
print("psi_2(x)   =", psi(x, 2).render(), " phi_2(x) =", frobenius_lift(x, 2).render())

###############################################################################
# Checking the axioms in bulk
# ---------------------------
# verify_delta_axioms runs the sum and product rules over whole batches.

print(verify_delta_axioms(PadicRing(3, 3)))
rng = np.random.default_rng(0)
X = rng.integers(-20, 21, (5000, 6)).astype(object)
Y = rng.integers(-20, 21, (5000, 6)).astype(object)
print(verify_delta_axioms(ZZ, (X, Y), group=FgAbelianGroup.cyclic(6), p=3))
