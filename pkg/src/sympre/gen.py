"""Deterministic benchmark formula generators."""

from __future__ import annotations

import random
from typing import NamedTuple

from .cnf import Formula


class PhpSpec(NamedTuple):
    pigeons: int
    holes: int


def gen_php(spec: PhpSpec) -> Formula:
    """The pigeonhole formula: every pigeon in some hole, no hole shared.

    Variable for pigeon i (0-based) in hole j is j + i*holes + 1.  The
    pairwise at-most-one encoding keeps the full pigeon-permutation times
    hole-permutation symmetry, of order pigeons! * holes!.
    """
    pigeons, holes = spec
    if pigeons < 1 or holes < 1:
        raise ValueError("need at least one pigeon and one hole")

    def var(i: int, j: int) -> int:
        return i * holes + j + 1

    clauses: list[list[int]] = []
    for i in range(pigeons):
        clauses.append([var(i, j) for j in range(holes)])
    for j in range(holes):
        for i1 in range(pigeons):
            for i2 in range(i1 + 1, pigeons):
                clauses.append([-var(i1, j), -var(i2, j)])
    return Formula(clauses, num_vars=pigeons * holes)


def gen_random(num_vars: int, num_clauses: int, width: int, seed: int) -> Formula:
    """A seeded random CNF with clause lengths drawn uniformly from 1..width.

    Canonicalization applies, so duplicate clauses may make the result
    shorter than requested.  Same seed, same formula, on any platform.
    """
    if num_vars < 1 or num_clauses < 0 or width < 1:
        raise ValueError("bad generator parameters")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        k = min(rng.randint(1, width), num_vars)
        chosen = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in chosen])
    return Formula(clauses, num_vars=num_vars)
