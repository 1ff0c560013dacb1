"""The continuous regime: the two-point average on the Thoma simplex against
its hook-series expansion, the Whittaker kernel's one-point function, and the
scaling limit of the discrete kernel as xi -> 1."""
from fractions import Fraction

from giambelli import MixedZParams, ZParams
from giambelli.kernels import kernel_discrete, rho1_whittaker, two_point_avg_omega
from giambelli.oracle import hook_series_omega

zp = ZParams("1/2+1i", "1/2-1i")
print("<E(5)H(5)> closed form:", two_point_avg_omega(5, 5, zp))
print("<E(5)H(5)> hook series:", hook_series_omega(5, 5, zp).real)

print("\nrho_1 of the Whittaker kernel")
for x in (-3.0, -1.0, -0.2, 0.2, 1.0, 3.0):
    print(f"  x={x:5}: {rho1_whittaker(x, zp):.6f}")

# near xi = 1, lattice point X sits at x = (1 - xi) X and density rescales by 1/(1 - xi);
# the match is a few percent at x of order 1 and degrades near the origin
xi = Fraction(99, 100)
mp = MixedZParams(zp, xi)
print("\nscaling check at xi = 0.99")
for X in (Fraction(-101, 2), Fraction(-51, 2), Fraction(11, 2), Fraction(51, 2), Fraction(101, 2)):
    x = float((1 - xi) * X)
    print(f"  X={X}: {kernel_discrete(X, X, mp) / float(1 - xi):.5f} vs {rho1_whittaker(x, zp):.5f}")
