from fractions import Fraction as F

import numpy as np
from hypothesis import given, strategies as st

from giambelli.linalg import det, det_exact, solve_exact

small = st.fractions(-4, 4, max_denominator=6)


def test_small_cases():
    assert det([]) == 1
    assert det([[F(2, 3)]]) == F(2, 3)
    assert det([[1, 2], [3, 4]]) == -2
    assert det_exact([[0, 1], [1, 0]]) == -1


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_exact_matches_float(rows):
    d = det_exact(rows)
    assert isinstance(d, F)
    ref = np.linalg.det(np.array(rows, dtype=float)) if rows else 1.0
    assert abs(float(d) - ref) < 1e-9 * max(1, abs(ref))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(small, min_size=n, max_size=n))))
def test_solve_exact(args):
    a, b = args
    if det_exact(a) == 0:
        return
    x = solve_exact(a, b)
    for row, rhs in zip(a, b):
        assert sum(r * xi for r, xi in zip(row, x)) == rhs


def test_complex_det():
    m = [[1 + 1j, 2], [3, 4 - 2j]]
    assert abs(det(m) - ((1 + 1j) * (4 - 2j) - 6)) < 1e-14
