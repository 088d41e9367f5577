"""Negation-equivariant literal permutations and symmetry membership checks.

A literal permutation is a bijection on a finite, negation-closed set of
literals with phi(-l) = -phi(l).  It is stored as one image per positive
variable, so negation-equivariance holds by construction.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .cnf import Clause, Formula, OracleLimitError, lit_key, make_clause, model_set


class GeneratorParseError(ValueError):
    """Raised on malformed cycle-notation permutation input."""


class LitPermutation:
    """A bijection on a negation-closed literal domain with phi(-l) = -phi(l)."""

    __slots__ = ("_images", "_inverse_images", "domain_vars")

    def __init__(self, images: Mapping[int, int]):
        """images maps every domain variable (positive int) to its image literal."""
        vars_ = tuple(sorted(images))
        if any(v <= 0 for v in vars_):
            raise ValueError("domain variables must be positive")
        img_vars = sorted(abs(l) for l in images.values())
        if list(vars_) != img_vars:
            raise ValueError("images do not form a bijection on the domain")
        self.domain_vars = vars_
        self._images = dict(images)
        self._inverse_images = {}
        for v, img in self._images.items():
            self._inverse_images[abs(img)] = v if img > 0 else -v

    @classmethod
    def identity(cls, domain_vars: Iterable[int]) -> "LitPermutation":
        return cls({v: v for v in domain_vars})

    @classmethod
    def from_lit_mapping(cls, mapping: Mapping[int, int]) -> "LitPermutation":
        """Build from a full literal-to-literal map, validating equivariance."""
        images = {}
        for lit, img in mapping.items():
            v = abs(lit)
            want = img if lit > 0 else -img
            if v in images:
                if images[v] != want:
                    raise ValueError(f"negation-inconsistent images for variable {v}")
            else:
                images[v] = want
        for lit, img in mapping.items():
            if -lit not in mapping or mapping[-lit] != -img:
                raise ValueError(f"mapping not closed under negation at literal {lit}")
        return cls(images)

    def apply(self, lit: int) -> int:
        img = self._images[abs(lit)]
        return img if lit > 0 else -img

    __call__ = apply

    def apply_inverse(self, lit: int) -> int:
        img = self._inverse_images[abs(lit)]
        return img if lit > 0 else -img

    def domain_literals(self) -> tuple[int, ...]:
        return tuple(l for v in self.domain_vars for l in (v, -v))

    def is_identity(self) -> bool:
        return all(img == v for v, img in self._images.items())

    def moved_literals(self) -> tuple[int, ...]:
        return tuple(l for l in self.domain_literals() if self.apply(l) != l)

    def inverse(self) -> "LitPermutation":
        return LitPermutation(dict(self._inverse_images))

    def restricted(self, keep_vars: Iterable[int]) -> "LitPermutation":
        """Restriction to a sub-domain; the sub-domain must be setwise stabilized."""
        keep = set(keep_vars)
        if not keep <= set(self.domain_vars):
            raise ValueError("keep set is not a subset of the domain")
        images = {}
        for v in keep:
            img = self._images[v]
            if abs(img) not in keep:
                raise ValueError(f"variable {v} maps outside the kept sub-domain")
            images[v] = img
        return LitPermutation(images)

    def lifted(self, super_vars: Iterable[int]) -> "LitPermutation":
        """Extension by the identity onto a larger domain."""
        sup = set(super_vars)
        if not set(self.domain_vars) <= sup:
            raise ValueError("super-domain does not contain the current domain")
        images = {v: self._images.get(v, v) for v in sup}
        return LitPermutation(images)

    def stabilizes_setwise(self, lits: Iterable[int]) -> bool:
        lset = set(lits)
        return all(self.apply(l) in lset for l in lset)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles over moved literals, each starting at its smallest element."""
        seen = set()
        out = []
        for start in sorted(self.domain_literals(), key=lit_key):
            if start in seen or self.apply(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            cur = self.apply(start)
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = self.apply(cur)
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LitPermutation):
            return NotImplemented
        return self._images == other._images

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._images.items())))

    def __repr__(self) -> str:
        return f"LitPermutation({format_permutation(self)!r} on {len(self.domain_vars)} vars)"


def compose(a: LitPermutation, b: LitPermutation) -> LitPermutation:
    """Left-to-right composition: compose(a, b)(l) = b(a(l))."""
    if a.domain_vars != b.domain_vars:
        raise ValueError("composition requires equal domains")
    return LitPermutation({v: b.apply(a.apply(v)) for v in a.domain_vars})


def apply_clause(phi: LitPermutation, clause: Iterable[int]) -> Clause:
    return make_clause(phi.apply(l) for l in clause)


def apply_formula(phi: LitPermutation, f: Formula) -> Formula:
    return Formula((apply_clause(phi, c) for c in f.clauses), num_vars=None)


def apply_model(phi: LitPermutation, model: frozenset[int]) -> frozenset[int]:
    return frozenset(phi.apply(l) for l in model)


def is_syntactic_symmetry(f: Formula, phi: LitPermutation) -> bool:
    """Whether phi maps the clause set of f onto itself."""
    if not f.variables() <= set(phi.domain_vars):
        raise ValueError("permutation domain does not cover the formula's literals")
    # phi is injective on clauses, so image-containment already forces equality.
    return all(apply_clause(phi, c) in f for c in f.clauses)


def is_semantic_symmetry(f: Formula, phi: LitPermutation, max_vars: int = 16) -> bool:
    """Whether phi maps the satisfying-assignment set of f onto itself.

    Decided by full enumeration of complete assignments over the occurring
    variables of f joined with phi's domain.
    """
    if not f.variables() <= set(phi.domain_vars):
        raise ValueError("permutation domain does not cover the formula's literals")
    variables = sorted(f.variables() | set(phi.domain_vars))
    if len(variables) > max_vars:
        raise OracleLimitError(
            f"semantic check over {len(variables)} variables exceeds the cap of {max_vars}")
    models = model_set(f, variables=variables, max_vars=max_vars)
    return frozenset(apply_model(phi, m) for m in models) == models


def has_negating_image(phi: LitPermutation) -> bool:
    """Whether some variable maps to a negated literal (excluded from SymV)."""
    return any(phi.apply(v) < 0 for v in phi.domain_vars)


def enumerate_set_symmetries(variables: Iterable[int],
                             sets: Iterable[frozenset[int]]) -> list[LitPermutation]:
    """All negation-equivariant bijections on ``variables`` mapping the set
    family onto itself.

    Works for clause sets (syntactic symmetries) and model sets (semantic
    symmetries) alike.  Exhaustive search; image candidates are narrowed by
    per-literal membership profiles and pairwise joint-membership counts,
    which every such symmetry must preserve, and every surviving complete
    assignment is verified against the family from scratch.  The caller is
    responsible for capping the domain size.
    """
    variables = sorted(set(variables))
    nvars = len(variables)
    family = frozenset(frozenset(s) for s in sets)
    if nvars == 0:
        return [LitPermutation.identity(())]

    literals = [l for v in variables for l in (v, -v)]
    sizes = {l: tuple(sorted(len(s) for s in family if l in s)) for l in literals}
    pair: dict[frozenset[int], int] = {}
    for s in family:
        members = sorted(s, key=lit_key)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                key = frozenset((members[i], members[j]))
                pair[key] = pair.get(key, 0) + 1

    def pcount(a: int, b: int) -> int:
        return pair.get(frozenset((a, b)), 0)

    candidates = {
        v: [l for l in sorted(literals, key=lit_key)
            if sizes[l] == sizes[v] and sizes[-l] == sizes[-v]]
        for v in variables}

    found: list[LitPermutation] = []
    images: dict[int, int] = {}
    used: set[int] = set()

    def verify() -> bool:
        full = {}
        for v, img in images.items():
            full[v] = img
            full[-v] = -img
        return all(frozenset(full[l] for l in s) in family for s in family)

    def backtrack(k: int) -> None:
        if k == nvars:
            if verify():
                found.append(LitPermutation(dict(images)))
            return
        v = variables[k]
        for img in candidates[v]:
            if abs(img) in used:
                continue
            ok = True
            for u in variables[:k]:
                iu = images[u]
                if (pcount(v, u) != pcount(img, iu)
                        or pcount(v, -u) != pcount(img, -iu)
                        or pcount(-v, u) != pcount(-img, iu)
                        or pcount(-v, -u) != pcount(-img, -iu)):
                    ok = False
                    break
            if not ok:
                continue
            images[v] = img
            used.add(abs(img))
            backtrack(k + 1)
            del images[v]
            used.discard(abs(img))

    backtrack(0)
    return found


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str) -> LitPermutation:
    """Parse one permutation in cycle notation over signed integers.

    Example: ``(1 2)(-1 -2)`` swaps variables 1 and 2.  ``()`` is the identity
    on an empty domain.  Negation-inconsistent or non-bijective input is
    rejected.
    """
    stripped = text.strip()
    if not stripped:
        raise GeneratorParseError("empty permutation text")
    rest = _CYCLE_RE.sub("", stripped).strip()
    if rest or stripped.count("(") != stripped.count(")"):
        raise GeneratorParseError(f"unbalanced or stray text in {text!r}")
    mapping: dict[int, int] = {}
    for m in _CYCLE_RE.finditer(stripped):
        body = m.group(1).replace(",", " ").split()
        try:
            cyc = [int(tok) for tok in body]
        except ValueError as exc:
            raise GeneratorParseError(f"non-integer cycle element in {text!r}") from exc
        if any(l == 0 for l in cyc):
            raise GeneratorParseError("literal 0 in cycle")
        if len(cyc) <= 1:
            continue
        if len(set(cyc)) != len(cyc):
            raise GeneratorParseError(f"repeated element within a cycle in {text!r}")
        for src, dst in zip(cyc, cyc[1:] + cyc[:1]):
            if src in mapping:
                raise GeneratorParseError(f"literal {src} appears in two cycles")
            mapping[src] = dst
    for lit, img in mapping.items():
        if mapping.get(-lit) != -img:
            raise GeneratorParseError(
                f"negation-inconsistent permutation: {lit} -> {img} without {-lit} -> {-img}")
    return LitPermutation.from_lit_mapping(mapping)


def format_permutation(phi: LitPermutation) -> str:
    """Canonical cycle notation: smallest-first cycles, ordered by first element."""
    cycles = phi.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(l) for l in cyc) + ")" for cyc in cycles)


def parse_generators(text: str) -> list[LitPermutation]:
    """Parse a generator file: one cycle-notation permutation per line.

    Blank lines and ``c``-prefixed comment lines are skipped.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        try:
            out.append(parse_permutation(line))
        except GeneratorParseError as exc:
            raise GeneratorParseError(f"line {lineno}: {exc}") from None
    return out


def write_generators(perms: Iterable[LitPermutation]) -> str:
    return "".join(format_permutation(p) + "\n" for p in perms)
