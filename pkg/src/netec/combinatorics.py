"""Small enumeration helpers with deterministic orders."""

from itertools import combinations
from math import comb


def colex_subsets(n, k):
    """k-subsets of range(n) in colexicographic order (largest element slowest)."""
    if k == 0:
        yield ()
        return
    for last in range(k - 1, n):
        for head in colex_subsets(last, k - 1):
            yield head + (last,)


def subsets_by_size(items, max_size):
    """Subsets of ``items`` with size 0..max_size; by size, then lexicographic."""
    items = list(items)
    for k in range(min(max_size, len(items)) + 1):
        yield from combinations(items, k)


def ball_volume(n, radius, q):
    """sum_{i <= radius} C(n, i) (q-1)^i."""
    return sum(comb(n, i) * (q - 1) ** i for i in range(min(radius, n) + 1))
