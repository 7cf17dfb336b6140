"""Matrix permanents."""

from __future__ import annotations

from itertools import permutations

import numpy as np


def permanent(a) -> complex:
    """Permanent of a square matrix by Ryser's formula over a Gray code.

    Consecutive subsets differ in one column, so each step updates the row
    sums in O(n) instead of recomputing them.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if n == 0:
        return 1.0 + 0j
    row_sums = np.zeros(n, dtype=complex)
    in_set = np.zeros(n, dtype=bool)
    total = 0.0 + 0j
    sign = -1.0 if n % 2 else 1.0  # (-1)^(n - |S|) at |S| = 0
    for g in range(1, 2**n):
        j = (g & -g).bit_length() - 1
        if in_set[j]:
            row_sums -= a[:, j]
        else:
            row_sums += a[:, j]
        in_set[j] = not in_set[j]
        sign = -sign
        total += sign * np.prod(row_sums)
    return complex(total)


def permanent_bruteforce(a) -> complex:
    """Sum over all permutations; only for tiny test matrices."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    rows = np.arange(n)
    return complex(sum(np.prod(a[rows, list(p)]) for p in permutations(range(n))))
