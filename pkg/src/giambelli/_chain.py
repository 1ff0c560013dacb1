"""Compiled inner loop of the harmonic growth chain.

One step adds a box of content c to a diagram with n boxes with probability

    (z+c)(z'+c)/(zz'+n) * T(c),

where T is the Kerov transition measure of the diagram: for addable contents
x_i and removable contents y_j, T(x_i) = Π_j (x_i - y_j) / Π_{k != i} (x_i - x_k).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def grow(n_steps, s, p, uniforms):
    """Run the chain from the empty diagram; return the row lengths.

    s = z + z', p = z z' (both real for admissible parameters).
    """
    rows = np.zeros(n_steps + 1, dtype=np.int64)
    length = 0
    add_x = np.empty(n_steps + 2, dtype=np.float64)
    add_row = np.empty(n_steps + 2, dtype=np.int64)
    rem_y = np.empty(n_steps + 2, dtype=np.float64)
    probs = np.empty(n_steps + 2, dtype=np.float64)
    for n in range(n_steps):
        na = 0
        nr = 0
        for i in range(length + 1):
            r = rows[i]
            if i == 0 or rows[i - 1] > r:
                add_x[na] = r - i
                add_row[na] = i
                na += 1
            if i < length and (i == length - 1 or rows[i + 1] < r):
                rem_y[nr] = r - 1 - i
                nr += 1
        total = 0.0
        for i in range(na):
            x = add_x[i]
            t = 1.0
            for j in range(nr):
                t *= x - rem_y[j]
            for k in range(na):
                if k != i:
                    t /= x - add_x[k]
            q = (x * x + s * x + p) / (p + n) * t
            if q < 0.0:
                q = 0.0
            probs[i] = q
            total += q
        target = uniforms[n] * total
        acc = 0.0
        pick = na - 1
        for i in range(na):
            acc += probs[i]
            if target < acc:
                pick = i
                break
        row = add_row[pick]
        rows[row] += 1
        if row == length:
            length += 1
    return rows[:length].copy()
