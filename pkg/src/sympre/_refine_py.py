"""Pure-Python color refinement kernel.

Reference implementation of the kernel contract shared with the compiled
extension ``sympre._refine``: repeatedly replace every vertex color by the
lexicographic rank of the key (old color, sorted neighbor-color multiset)
until the number of color classes stops growing.
"""

from __future__ import annotations

from typing import Sequence


def refine_rounds(n: int, indptr: Sequence[int], indices: Sequence[int],
                  colors: Sequence[int]) -> tuple[list[int], int, int]:
    """Refine to the coarsest equitable partition; returns (colors, #colors, rounds)."""
    cur = list(colors)
    ncolors = len(set(cur))
    rounds = 0
    if n == 0:
        return cur, 0, 0
    while True:
        keys = []
        for v in range(n):
            nb = sorted(cur[indices[k]] for k in range(indptr[v], indptr[v + 1]))
            nb.insert(0, cur[v])
            keys.append(tuple(nb))
        rank = {key: i for i, key in enumerate(sorted(set(keys)))}
        cur = [rank[key] for key in keys]
        rounds += 1
        if len(rank) == ncolors:
            return cur, ncolors, rounds
        ncolors = len(rank)
