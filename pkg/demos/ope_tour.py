"""Orthogonal polynomial ensembles on a finite measure, all in exact
rationals: Schur averages as moment determinants, the Giambelli check, and
correlation functions three ways."""
from fractions import Fraction as F
from itertools import combinations

from giambelli.ope import (
    DiscreteMeasure,
    EnsembleSpec,
    avg_schur,
    avg_schur_enum,
    brute_rho,
    cd_kernel,
    giambelli_check_ope,
    residue_kernel,
    rho_det,
)
from giambelli.partition import from_parts

alpha = DiscreteMeasure((-2, F(-1, 2), 1, F(3, 2), 3), (1, 2, F(1, 2), 1, F(3, 4)))
spec = EnsembleSpec(alpha, 3)

lam = from_parts([2, 1])
print("<s_(2,1)> moment determinant:", avg_schur(lam, spec))
print("<s_(2,1)> by enumeration:    ", avg_schur_enum(lam, spec))
print("Giambelli residual (3,3,2):  ", giambelli_check_ope(from_parts([3, 3, 2]), spec))

print("\nrho_2 by brute force, CD kernel, residue kernel")
for pts in list(combinations(alpha.atoms, 2))[:5]:
    print(f"  {[str(p) for p in pts]}: {brute_rho(pts, spec)}  {rho_det(pts, spec, cd_kernel)}  {rho_det(pts, spec, residue_kernel)}")
