"""Exact graph automorphism detection by backtracking individualization-refinement.

The search refines, individualizes every member of the first target cell
(smallest non-singleton color class, lowest color id on ties) and recurses.
Along the base path all choices are explored with orbit pruning against the
generators found so far; off the base path the first automorphism found is
enough.  The generator set returned generates the full automorphism group.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .cnf import Formula, OracleLimitError
from .groups import PermGroup, schreier_sims
from .model_graph import ColoredGraph, build_model_graph, refine_colors
from .perms import (LitPermutation, enumerate_set_symmetries, is_syntactic_symmetry)


@dataclass
class SearchStats:
    nodes_explored: int = 0
    generators_found: int = 0
    refinements: int = 0


class IncompleteSearchError(RuntimeError):
    """Search budget exhausted; carries the partial generators found so far."""

    def __init__(self, message: str, generators: list[tuple[int, ...]], stats: SearchStats):
        super().__init__(message)
        self.generators = generators
        self.stats = stats


def _sizes_by_color(colors: list[int]) -> list[int]:
    sizes = [0] * (max(colors) + 1 if colors else 0)
    for c in colors:
        sizes[c] += 1
    return sizes


def _individualized(colors: list[int], v: int) -> list[int]:
    keys = [(c, 0) for c in colors]
    keys[v] = (colors[v], 1)
    rank = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [rank[k] for k in keys]


def find_automorphisms(g: ColoredGraph, node_limit: int = 1_000_000,
                       time_limit: float | None = None
                       ) -> tuple[list[tuple[int, ...]], SearchStats]:
    """All generators of the automorphism group of g (exact), with search stats.

    Raises IncompleteSearchError carrying the partial generator list when the
    node or time budget runs out.
    """
    stats = SearchStats()
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    gens: list[tuple[int, ...]] = []
    n = g.n

    def refine(colors: list[int]) -> list[int]:
        stats.refinements += 1
        out, _ = refine_colors(g, colors)
        return out

    def tick() -> None:
        stats.nodes_explored += 1
        if stats.nodes_explored > node_limit:
            raise IncompleteSearchError(
                f"node budget of {node_limit} exhausted", list(gens), stats)
        if deadline is not None and time.monotonic() > deadline:
            raise IncompleteSearchError("time budget exhausted", list(gens), stats)

    def target_color(colors: list[int]) -> int | None:
        best: tuple[int, int] | None = None
        for c, s in enumerate(_sizes_by_color(colors)):
            if s > 1 and (best is None or (s, c) < best):
                best = (s, c)
        return None if best is None else best[1]

    def extract(cl: list[int], cr: list[int]) -> tuple[int, ...]:
        pos = {c: v for v, c in enumerate(cr)}
        return tuple(pos[c] for c in cl)

    def is_automorphism(p: tuple[int, ...]) -> bool:
        return all(g.has_edge(p[u], p[v]) for (u, v) in g.edges())

    def search_match(cl: list[int], cr: list[int]) -> tuple[int, ...] | None:
        tick()
        tcol = target_color(cl)
        if tcol is None:
            p = extract(cl, cr)
            return p if is_automorphism(p) else None
        members_l = [v for v in range(n) if cl[v] == tcol]
        members_r = [v for v in range(n) if cr[v] == tcol]
        v = members_l[0]
        cl2 = refine(_individualized(cl, v))
        shape = _sizes_by_color(cl2)
        for u in members_r:
            cr2 = refine(_individualized(cr, u))
            if _sizes_by_color(cr2) != shape:
                continue
            got = search_match(cl2, cr2)
            if got is not None:
                return got
        return None

    def in_known_orbit(u: int, tried: list[int], prefix: list[int]) -> bool:
        fixing = [p for p in gens if all(p[x] == x for x in prefix)]
        if not fixing:
            return False
        orbit = set(tried)
        frontier = list(tried)
        while frontier:
            x = frontier.pop()
            for p in fixing:
                y = p[x]
                if y == u:
                    return True
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return False

    def search_base(colors: list[int], prefix: list[int]) -> None:
        tick()
        tcol = target_color(colors)
        if tcol is None:
            return
        members = [v for v in range(n) if colors[v] == tcol]
        v = members[0]
        refined_v = refine(_individualized(colors, v))
        shape = _sizes_by_color(refined_v)
        tried: list[int] = []
        for u in members:
            if u == v:
                search_base(refined_v, prefix + [v])
            else:
                if in_known_orbit(u, tried, prefix):
                    tried.append(u)
                    continue
                refined_u = refine(_individualized(colors, u))
                if _sizes_by_color(refined_u) == shape:
                    got = search_match(refined_v, refined_u)
                    if got is not None:
                        gens.append(got)
                        stats.generators_found += 1
            tried.append(u)

    if n > 0:
        root = refine(list(g.colors))
        search_base(root, [])
    else:
        stats.nodes_explored = 1
    return gens, stats


def project_to_literals(f: Formula, g: ColoredGraph,
                        vertex_perm: tuple[int, ...]) -> LitPermutation:
    """Restrict a model-graph automorphism to the literal vertices.

    Literal vertices can only map to literal vertices (initial colors differ
    from clause vertices), and the image of a negation edge fixes the image of
    the complementary literal; both are checked.
    """
    variables = sorted(f.variables())
    n = len(variables)
    images = {}
    for i, v in enumerate(variables):
        j = vertex_perm[i]
        if j >= 2 * n:
            raise ValueError("graph automorphism maps a literal vertex to a clause vertex")
        images[v] = variables[j] if j < n else -variables[j - n]
        mate = vertex_perm[n + i]
        expected = j + n if j < n else j - n
        if mate != expected:
            raise ValueError("graph automorphism is not negation-consistent")
    return LitPermutation(images)


def formula_automorphisms(f: Formula, node_limit: int = 1_000_000,
                          time_limit: float | None = None) -> PermGroup:
    """The syntactic symmetry group of a formula, through its model graph."""
    g = build_model_graph(f)
    vertex_perms, _stats = find_automorphisms(g, node_limit=node_limit,
                                              time_limit=time_limit)
    lit_gens = [project_to_literals(f, g, p) for p in vertex_perms]
    for phi in lit_gens:
        assert is_syntactic_symmetry(f, phi)
    return schreier_sims(lit_gens, domain_vars=f.variables())


def brute_force_automorphisms(f: Formula, max_vars: int = 7) -> PermGroup:
    """Independent oracle: exhaustive search over negation-equivariant bijections.

    Enumerates the bijections of the occurring literals that map the clause
    set onto itself, with every result re-verified from scratch.  No graphs,
    no color refinement anywhere on this path.
    """
    variables = sorted(f.variables())
    if len(variables) > max_vars:
        raise OracleLimitError(
            f"brute-force enumeration over {len(variables)} variables "
            f"exceeds the cap of {max_vars}")
    found = enumerate_set_symmetries(variables, f.clause_set())
    gens = []
    for phi in found:
        assert is_syntactic_symmetry(f, phi)
        if not phi.is_identity():
            gens.append(phi)
    return schreier_sims(gens, domain_vars=variables)
