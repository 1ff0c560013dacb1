"""A walk through the mixed z-measure: exact weights, the closed-form
Frobenius-Schur averages, the Giambelli determinant, and a sampled check
of the one-point function against the kernel diagonal."""
from collections import Counter
from fractions import Fraction

from giambelli import from_parts, MixedZParams
from giambelli.kernels import kernel_discrete
from giambelli.partition import enumerate_partitions, lattice_config
from giambelli.zmeasure import expect_fs, giambelli_expectation_check, sample_many, weight_n

mp = MixedZParams.of("1/2", "1/2", "1/4")

print("M^(3) at z = z' = 1/2")
for lam in enumerate_partitions(3):
    print(f"  {str(lam.parts):12} {weight_n(lam, mp.base)}")

print("\n<Fs_mu> in closed form")
for parts in ([1], [2], [1, 1], [2, 1]):
    print(f"  mu={parts}: {expect_fs(from_parts(parts), mp)}")

# the average of s_lambda equals the determinant of hook averages
for parts in ([2, 2], [3, 2, 1], [4, 4, 3]):
    print(f"Giambelli residual for {parts}: {giambelli_expectation_check(from_parts(parts), mp)}")

draws = sample_many(mp, 20000, seed=1, workers=4)
hits = Counter()
for lam in draws:
    hits.update(lattice_config(lam))
print("\nrho_1: empirical vs kernel diagonal")
for x in (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)):
    print(f"  x={str(x):5} {hits[x] / len(draws):.4f}  {kernel_discrete(x, x, mp):.4f}")
