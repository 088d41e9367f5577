"""Permutation groups over literal domains via base and strong generating sets.

The stabilizer chain is built with a deterministic Schreier-Sims procedure.
A preferred base prefix can be forced, which makes pointwise stabilizers of
that prefix readable directly off the chain: the levels whose base point lies
in the prefix are created first, so the chain suffix below them is exactly
the subgroup fixing the prefix pointwise.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .cnf import lit_key
from .perms import LitPermutation

DensePerm = tuple[int, ...]


def _mult(p: DensePerm, q: DensePerm) -> DensePerm:
    """Apply p, then q."""
    return tuple(q[x] for x in p)


def _inv(p: DensePerm) -> DensePerm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _is_identity(p: DensePerm) -> bool:
    return all(i == j for i, j in enumerate(p))


class _Level:
    __slots__ = ("point", "gens", "orbit")

    def __init__(self, point: int, identity: DensePerm):
        self.point = point
        self.gens: list[DensePerm] = []
        self.orbit: dict[int, DensePerm] = {point: identity}


class _Chain:
    """Stabilizer chain on the dense domain 0..n-1."""

    def __init__(self, n: int, base_rank: Sequence[int], forced_prefix: Sequence[int]):
        self.n = n
        self.identity: DensePerm = tuple(range(n))
        self.base_rank = base_rank
        self.levels: list[_Level] = [_Level(p, self.identity) for p in forced_prefix]

    def sift(self, g: DensePerm, start: int = 0) -> tuple[DensePerm, int]:
        """Reduce g through the chain; returns the residue and the level it stuck at."""
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            img = g[lvl.point]
            if img == lvl.point:
                continue
            u = lvl.orbit.get(img)
            if u is None:
                return g, j
            g = _mult(g, _inv(u))
        return g, len(self.levels)

    def _level_gens(self, i: int) -> list[DensePerm]:
        return [g for lvl in self.levels[i:] for g in lvl.gens]

    def _recompute_orbit(self, i: int) -> None:
        lvl = self.levels[i]
        gens = self._level_gens(i)
        orbit = {lvl.point: self.identity}
        queue = [lvl.point]
        while queue:
            p = queue.pop()
            u_p = orbit[p]
            for s in gens:
                q = s[p]
                if q not in orbit:
                    orbit[q] = _mult(u_p, s)
                    queue.append(q)
        lvl.orbit = orbit

    def _place(self, residue: DensePerm, j: int) -> int:
        """Install a sifted nonidentity residue as a strong generator at level j."""
        if j == len(self.levels):
            moved = [p for p in range(self.n) if residue[p] != p]
            point = min(moved, key=self.base_rank.__getitem__)
            self.levels.append(_Level(point, self.identity))
        self.levels[j].gens.append(residue)
        return j

    def _verify_level(self, i: int) -> int | None:
        """Check all Schreier generators of level i; returns a placement level or None."""
        self._recompute_orbit(i)
        lvl = self.levels[i]
        gens = self._level_gens(i)
        for p, u_p in lvl.orbit.items():
            for s in gens:
                q = s[p]
                sg = _mult(_mult(u_p, s), _inv(lvl.orbit[q]))
                if _is_identity(sg):
                    continue
                residue, j = self.sift(sg, i + 1)
                if not _is_identity(residue):
                    return self._place(residue, j)
        return None

    def build(self, gens: Iterable[DensePerm]) -> None:
        for g in gens:
            if _is_identity(g):
                continue
            residue, j = self.sift(g)
            if not _is_identity(residue):
                self._place(residue, j)
        for i in range(len(self.levels)):
            self._recompute_orbit(i)
        # Verify bottom-up; a placement at level j re-dirties the chain from j.
        i = len(self.levels) - 1
        while i >= 0:
            placed = self._verify_level(i)
            if placed is None:
                i -= 1
            else:
                i = placed

    def order(self) -> int:
        out = 1
        for lvl in self.levels:
            out *= len(lvl.orbit)
        return out

    def contains(self, g: DensePerm) -> bool:
        residue, _ = self.sift(g)
        return _is_identity(residue)


class PermGroup:
    """A group of literal permutations with an exact stabilizer-chain backbone."""

    def __init__(self, domain: Sequence[int], generators: Sequence[LitPermutation],
                 chain: _Chain):
        self.domain = tuple(domain)
        self.generators = list(generators)
        self._chain = chain
        self._index = {lit: i for i, lit in enumerate(self.domain)}

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(self.domain[lvl.point] for lvl in self._chain.levels)

    def strong_generators(self) -> list[list[LitPermutation]]:
        """Per-level strong generators; level-i entries fix base points 0..i-1."""
        return [[self._to_lit(g) for g in lvl.gens] for lvl in self._chain.levels]

    def order(self) -> int:
        return self._chain.order()

    def _to_dense(self, phi: LitPermutation) -> DensePerm:
        return tuple(self._index[phi.apply(lit)] for lit in self.domain)

    def _to_lit(self, g: DensePerm) -> LitPermutation:
        mapping = {self.domain[i]: self.domain[g[i]] for i in range(len(self.domain))}
        return LitPermutation.from_lit_mapping(mapping)

    def contains(self, phi: LitPermutation) -> bool:
        if set(phi.domain_vars) != {abs(l) for l in self.domain}:
            raise ValueError("membership test requires an equal domain")
        return self._chain.contains(self._to_dense(phi))

    def orbits(self) -> tuple[frozenset[int], ...]:
        """Orbit partition of the literal domain, in canonical order."""
        parent = list(range(len(self.domain)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for phi in self.generators:
            for i, lit in enumerate(self.domain):
                j = self._index[phi.apply(lit)]
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
        classes: dict[int, set[int]] = {}
        for i, lit in enumerate(self.domain):
            classes.setdefault(find(i), set()).add(lit)
        return tuple(sorted((frozenset(c) for c in classes.values()),
                            key=lambda c: lit_key(min(c, key=lit_key))))

    def var_orbits(self) -> tuple[frozenset[int], ...]:
        """Variable orbits: v1 ~ v2 when some element maps v1 to v2 or to -v2."""
        lit_orbit_of: dict[int, int] = {}
        for i, orb in enumerate(self.orbits()):
            for lit in orb:
                lit_orbit_of[lit] = i
        variables = sorted({abs(l) for l in self.domain})
        parent = {v: v for v in variables}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        by_orbit: dict[int, list[int]] = {}
        for v in variables:
            by_orbit.setdefault(lit_orbit_of[v], []).append(v)
            by_orbit.setdefault(lit_orbit_of[-v], []).append(v)
        for members in by_orbit.values():
            for v in members[1:]:
                ra, rb = find(members[0]), find(v)
                if ra != rb:
                    parent[rb] = ra
        classes: dict[int, set[int]] = {}
        for v in variables:
            classes.setdefault(find(v), set()).add(v)
        return tuple(sorted((frozenset(c) for c in classes.values()), key=min))

    def iter_elements(self, limit: int = 1_000_000) -> Iterator[LitPermutation]:
        """Enumerate all group elements (small groups only)."""
        if self.order() > limit:
            raise ValueError(f"group of order {self.order()} exceeds enumeration limit {limit}")
        transversals = [list(lvl.orbit.values()) for lvl in self._chain.levels]
        if not transversals:
            yield LitPermutation.identity(sorted({abs(l) for l in self.domain}))
            return
        for parts in itertools.product(*transversals):
            g = parts[-1]
            for u in reversed(parts[:-1]):
                g = _mult(g, u)
            yield self._to_lit(g)

    def __repr__(self) -> str:
        return f"PermGroup(order={self.order()}, domain={len(self.domain)} literals)"


def _canonical_domain(vars_: Iterable[int]) -> tuple[int, ...]:
    return tuple(l for v in sorted(set(vars_)) for l in (v, -v))


def schreier_sims(generators: Sequence[LitPermutation],
                  domain_vars: Iterable[int] | None = None,
                  preferred_base: Sequence[int] = ()) -> PermGroup:
    """Build a PermGroup with an exact order from literal permutation generators.

    All generators must share one domain.  Points of ``preferred_base``
    (literals) become the leading base points, in the given order, before any
    other point is used.
    """
    if generators:
        dv = set(generators[0].domain_vars)
        for g in generators[1:]:
            if set(g.domain_vars) != dv:
                raise ValueError("all generators must share a domain")
        if domain_vars is not None and set(domain_vars) != dv:
            raise ValueError("explicit domain does not match the generators")
        domain_vars = dv
    elif domain_vars is None:
        domain_vars = ()
    domain = _canonical_domain(domain_vars)
    index = {lit: i for i, lit in enumerate(domain)}

    seen = set()
    prefix = []
    for lit in preferred_base:
        if lit not in index:
            raise ValueError(f"preferred base point {lit} outside the domain")
        if index[lit] not in seen:
            prefix.append(index[lit])
            seen.add(index[lit])
    base_rank = [0] * len(domain)
    rank = 0
    for p in prefix:
        base_rank[p] = rank
        rank += 1
    for p in range(len(domain)):
        if p not in seen:
            base_rank[p] = rank
            rank += 1

    chain = _Chain(len(domain), base_rank, prefix)
    dense = [tuple(index[g.apply(lit)] for lit in domain) for g in generators]
    chain.build(dense)
    return PermGroup(domain, generators, chain)


def pointwise_stabilizer_order(group: PermGroup, fixed: Iterable[int]) -> int:
    """Order of the subgroup fixing every literal of ``fixed`` individually.

    Rebuilds the chain with the fixed points as the forced base prefix and
    takes the order of the chain suffix below them.
    """
    fixed_set = set(fixed)
    if not fixed_set <= set(group.domain):
        raise ValueError("fixed points must lie in the group domain")
    preferred = sorted(fixed_set, key=lit_key)
    rebuilt = schreier_sims(group.generators,
                            domain_vars={abs(l) for l in group.domain},
                            preferred_base=preferred)
    out = 1
    for lvl in rebuilt._chain.levels:
        if rebuilt.domain[lvl.point] not in fixed_set:
            out *= len(lvl.orbit)
    return out


def restrict_down(group: PermGroup, keep: Iterable[int]) -> tuple[PermGroup, bool]:
    """Restrict the group to a negation-closed literal subset.

    ``setwise_ok`` reports whether every generator maps the kept set onto
    itself, which decides exactly whether the whole group setwise-stabilizes
    it.  When some generator does not, the restriction of the stabilizing
    generators alone is returned, flagged False.
    """
    keep_set = set(keep)
    if not keep_set <= set(group.domain):
        raise ValueError("kept literals must lie in the group domain")
    if any(-l not in keep_set for l in keep_set):
        raise ValueError("kept literal set must be closed under negation")
    keep_vars = {abs(l) for l in keep_set}
    setwise_ok = True
    restricted = []
    for phi in group.generators:
        if phi.stabilizes_setwise(keep_set):
            restricted.append(phi.restricted(keep_vars))
        else:
            setwise_ok = False
    return schreier_sims(restricted, domain_vars=keep_vars), setwise_ok


def lift_up(group: PermGroup, super_lits: Iterable[int]) -> PermGroup:
    """Extend every generator by the identity onto a larger literal domain."""
    sup = set(super_lits)
    if not set(group.domain) <= sup:
        raise ValueError("target domain must contain the group domain")
    if any(-l not in sup for l in sup):
        raise ValueError("target literal set must be closed under negation")
    sup_vars = {abs(l) for l in sup}
    lifted = [phi.lifted(sup_vars) for phi in group.generators]
    return schreier_sims(lifted, domain_vars=sup_vars)


def trivial_group(domain_vars: Iterable[int] = ()) -> PermGroup:
    return schreier_sims([], domain_vars=domain_vars)
