"""Koszul signs and exterior index bookkeeping.

Every module sorts index tuples through :func:`sort_sign`, so there is exactly
one sign convention in the package: the sign of the permutation that sorts a
concatenated tuple into increasing order.
"""
from __future__ import annotations

import itertools
from functools import lru_cache


@lru_cache(maxsize=None)
def sort_sign(seq: tuple):
    """Return ``(sign, sorted_tuple)``; sign is 0 if an index repeats."""
    n = len(seq)
    if n < 2:
        return 1, tuple(seq)
    if len(set(seq)) != n:
        return 0, None
    inversions = 0
    for a in range(n):
        sa = seq[a]
        for b in range(a + 1, n):
            if sa > seq[b]:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(seq))


def wedge_indices(left: tuple, right: tuple):
    """Sign and index set of e_left ^ e_right."""
    return sort_sign(tuple(left) + tuple(right))


@lru_cache(maxsize=None)
def subsets(r: int, p: int) -> tuple:
    """Strictly increasing p-tuples from range(r), in colex order."""
    if p < 0 or p > r:
        return ()
    combos = itertools.combinations(range(r), p)
    return tuple(sorted(combos, key=lambda t: tuple(reversed(t))))


def remove_position(seq: tuple, k: int) -> tuple:
    return seq[:k] + seq[k + 1:]


def right_derivative(index: tuple, l: int):
    """Right derivative of theta_index by theta_l: ``(sign, remaining)`` or
    ``(0, None)``."""
    if l not in index:
        return 0, None
    t = index.index(l)
    sign = -1 if (len(index) - 1 - t) & 1 else 1
    return sign, remove_position(index, t)
