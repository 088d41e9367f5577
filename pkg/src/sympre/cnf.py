"""CNF formulas as canonical clause sets, plus DIMACS I/O and assignment semantics.

Variables are positive integers and a literal is a nonzero int whose sign
carries the polarity (``-v`` is the negation of ``v``).  Clauses and formulas
are kept in a single canonical sorted, duplicate-free form, so set equality
of clauses and formulas is plain value equality.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping


class DimacsParseError(ValueError):
    """Raised on malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OracleLimitError(ValueError):
    """Raised when an exhaustive-enumeration oracle would exceed its size cap."""


Clause = tuple[int, ...]


def lit_key(lit: int) -> tuple[int, int]:
    """Canonical literal order: by variable, positive polarity first."""
    return (abs(lit), lit < 0)


def make_clause(lits: Iterable[int]) -> Clause:
    """Canonical clause: duplicate-free, sorted by variable then polarity."""
    out = set()
    for lit in lits:
        lit = int(lit)
        if lit == 0:
            raise ValueError("literal 0 is not allowed in a clause")
        out.add(lit)
    return tuple(sorted(out, key=lit_key))


def is_tautology(clause: Iterable[int]) -> bool:
    cset = set(clause)
    return any(-lit in cset for lit in cset)


def clause_sort_key(clause: Clause) -> tuple[tuple[int, int], ...]:
    return tuple(lit_key(lit) for lit in clause)


class Formula:
    """An immutable CNF formula: a canonical set of clauses.

    ``num_vars`` is the declared variable universe (the DIMACS header value);
    it may exceed the largest variable actually occurring in a clause, so that
    reductions which remove variables can still refer to the original universe.
    Tautological clauses and duplicates are dropped on construction.  Equality
    and hashing consider the clause set only, not the declared universe.
    """

    __slots__ = ("clauses", "num_vars", "_clause_set", "_vars", "_occ")

    def __init__(self, clauses: Iterable[Iterable[int]] = (), num_vars: int | None = None):
        canon = {make_clause(c) for c in clauses}
        canon = {c for c in canon if not is_tautology(c)}
        self.clauses: tuple[Clause, ...] = tuple(sorted(canon, key=clause_sort_key))
        max_var = max((abs(l) for c in self.clauses for l in c), default=0)
        if num_vars is None:
            num_vars = max_var
        elif num_vars < max_var:
            raise ValueError(f"num_vars={num_vars} below largest occurring variable {max_var}")
        self.num_vars = num_vars
        self._clause_set = frozenset(self.clauses)
        self._vars: frozenset[int] | None = None
        self._occ: dict[int, tuple[Clause, ...]] | None = None

    def variables(self) -> frozenset[int]:
        """Variables occurring in at least one clause."""
        if self._vars is None:
            self._vars = frozenset(abs(l) for c in self.clauses for l in c)
        return self._vars

    def literals(self) -> frozenset[int]:
        """Occurring variables and their negations."""
        vs = self.variables()
        return frozenset(itertools.chain(vs, (-v for v in vs)))

    def occurrences(self, lit: int) -> tuple[Clause, ...]:
        """All clauses containing the literal ``lit``."""
        if self._occ is None:
            occ: dict[int, list[Clause]] = {}
            for c in self.clauses:
                for l in c:
                    occ.setdefault(l, []).append(c)
            self._occ = {l: tuple(cs) for l, cs in occ.items()}
        return self._occ.get(lit, ())

    def __contains__(self, clause: Iterable[int]) -> bool:
        return make_clause(clause) in self._clause_set

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self._clause_set == other._clause_set

    def __hash__(self) -> int:
        return hash(self._clause_set)

    def __repr__(self) -> str:
        return f"Formula({list(self.clauses)!r}, num_vars={self.num_vars})"

    def clause_set(self) -> frozenset[Clause]:
        return self._clause_set

    def replace_clauses(self, clauses: Iterable[Iterable[int]]) -> "Formula":
        """New formula over the same declared universe."""
        return Formula(clauses, num_vars=self.num_vars)


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse DIMACS CNF text into a canonical Formula.

    Duplicate literals in a clause are merged, tautological clauses dropped,
    duplicate clauses merged.  Raises DimacsParseError with a line number on
    malformed input.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")
    if not text.strip():
        raise DimacsParseError("empty input", line=1)

    num_vars: int | None = None
    clauses: list[list[int]] = []
    current: list[int] = []
    clause_open = False
    last_line = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError("duplicate header", line=lineno)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", line=lineno)
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                raise DimacsParseError(f"malformed header {line!r}", line=lineno) from None
            if num_vars < 0 or declared_clauses < 0:
                raise DimacsParseError("negative counts in header", line=lineno)
            continue
        if num_vars is None:
            raise DimacsParseError(f"clause data before header: {line!r}", line=lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"not an integer: {tok!r}", line=lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
                clause_open = False
            else:
                if abs(lit) > num_vars:
                    raise DimacsParseError(
                        f"literal {lit} exceeds declared variable count {num_vars}", line=lineno)
                current.append(lit)
                clause_open = True
    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header", line=last_line)
    if clause_open:
        raise DimacsParseError("unterminated clause at end of input", line=last_line)
    return Formula(clauses, num_vars=num_vars)


def write_dimacs(f: Formula) -> str:
    """Canonical DIMACS text; parse_dimacs(write_dimacs(f)) reproduces f."""
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def lit_value(assignment: Mapping[int, bool], lit: int) -> bool | None:
    """Truth value of a literal under a partial assignment, or None if unassigned."""
    val = assignment.get(abs(lit))
    if val is None:
        return None
    return val if lit > 0 else not val


def simplify(f: Formula, assignment: Mapping[int, bool]) -> Formula:
    """The residual formula under a (partial) assignment.

    Clauses with a satisfied literal are removed; falsified literals are
    deleted from the remaining clauses, which may leave the empty clause.
    """
    out: list[tuple[int, ...]] = []
    for clause in f.clauses:
        keep: list[int] = []
        satisfied = False
        for lit in clause:
            val = lit_value(assignment, lit)
            if val is True:
                satisfied = True
                break
            if val is None:
                keep.append(lit)
        if not satisfied:
            out.append(tuple(keep))
    return Formula(out, num_vars=f.num_vars)


def resolve(c1: Iterable[int], c2: Iterable[int], x: int) -> Clause:
    """The resolvent of c1 and c2 on variable x; may be tautological."""
    c1 = make_clause(c1)
    c2 = make_clause(c2)
    if x <= 0:
        raise ValueError("resolution pivot must be a positive variable")
    if x not in c1 or -x not in c2:
        raise ValueError(f"cannot resolve on {x}: need {x} in first clause and {-x} in second")
    return make_clause([l for l in c1 if l != x] + [l for l in c2 if l != -x])


def all_assignments(variables: Iterable[int]) -> Iterator[frozenset[int]]:
    """All complete assignments over the given variables, as sets of true literals."""
    vs = sorted(set(variables))
    for signs in itertools.product((1, -1), repeat=len(vs)):
        yield frozenset(s * v for s, v in zip(signs, vs))


def satisfies(f: Formula, model: frozenset[int]) -> bool:
    """Whether a complete assignment (set of true literals) satisfies every clause."""
    return all(any(l in model for l in clause) for clause in f.clauses)


def model_set(f: Formula, variables: Iterable[int] | None = None,
              max_vars: int = 16) -> frozenset[frozenset[int]]:
    """All satisfying complete assignments over the given variables.

    Defaults to the declared universe 1..num_vars.  Enumerates all 2^n
    candidates; refuses (OracleLimitError) rather than truncate when the
    variable count exceeds ``max_vars``.
    """
    if variables is None:
        variables = range(1, f.num_vars + 1)
    vs = sorted(set(variables))
    missing = f.variables() - set(vs)
    if missing:
        raise ValueError(f"model_set variables must cover the formula; missing {sorted(missing)}")
    if len(vs) > max_vars:
        raise OracleLimitError(
            f"model enumeration over {len(vs)} variables exceeds the cap of {max_vars}")
    return frozenset(m for m in all_assignments(vs) if satisfies(f, m))
