"""CNF transformations as deterministic, replayable rewrites with traces.

Every operation maps a Formula to a TransformResult whose trace replays the
input into the output step by step, and whose variable set never grows.  The
exhaustive rules (unit+conflict, pure, subsumption, blocked clauses) are
confluent: their outputs do not depend on processing order, which the
optional ``rng`` argument exists to exercise.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from .cnf import Clause, Formula, is_tautology, lit_key, make_clause, resolve, satisfies
from .model_graph import asymmetric_variables, build_model_graph, color_refinement


class ReplayError(ValueError):
    """Raised when a trace does not replay against the formula it claims to."""


@dataclass(frozen=True)
class UnitAssigned:
    lit: int


@dataclass(frozen=True)
class ConflictCollapsed:
    pass


@dataclass(frozen=True)
class PureAssigned:
    lit: int


@dataclass(frozen=True)
class Subsumed:
    victim: Clause
    witness: Clause


@dataclass(frozen=True)
class SelfSubsumed:
    clause: Clause
    removed_lit: int
    witness: Clause


@dataclass(frozen=True)
class BlockedRemoved:
    clause: Clause
    blocking_lit: int


@dataclass(frozen=True)
class VarEliminated:
    var: int
    pos_clauses: tuple[Clause, ...]
    neg_clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class LearnedAdded:
    clause: Clause
    pivot: int
    parents: tuple[Clause, Clause]


Step = Union[UnitAssigned, ConflictCollapsed, PureAssigned, Subsumed, SelfSubsumed,
             BlockedRemoved, VarEliminated, LearnedAdded]


@dataclass(frozen=True)
class TransformTrace:
    steps: tuple[Step, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class TransformResult:
    output: Formula
    trace: TransformTrace
    removed_lits: frozenset[int]


def _result(inp: Formula, out: Formula, steps: Sequence[Step]) -> TransformResult:
    assert out.variables() <= inp.variables(), "transformation introduced variables"
    return TransformResult(output=out, trace=TransformTrace(tuple(steps)),
                           removed_lits=inp.literals() - out.literals())


CONFLICT = (())


def conflict_formula(num_vars: int = 0) -> Formula:
    """The canonical conflicting formula {{}}."""
    return Formula([()], num_vars=num_vars)


def is_conflict(f: Formula) -> bool:
    return len(f.clauses) == 1 and f.clauses[0] == ()


def _maybe_shuffle(items: list, rng: random.Random | None) -> list:
    if rng is not None:
        rng.shuffle(items)
    return items


def unit_conflict_exhaustive(f: Formula, rng: random.Random | None = None) -> TransformResult:
    """Propagate unit clauses to fixpoint; collapse to {{}} if a conflict appears.

    The propagation order (randomizable through rng) does not affect the
    output: unit plus the conflict rule is confluent.
    """
    cur = f
    steps: list[Step] = []
    while True:
        if () in cur:
            if not is_conflict(cur):
                steps.append(ConflictCollapsed())
                cur = conflict_formula(cur.num_vars)
            break
        units = [c[0] for c in cur.clauses if len(c) == 1]
        if not units:
            break
        units = _maybe_shuffle(sorted(set(units), key=lit_key), rng)
        lit = units[0]
        steps.append(UnitAssigned(lit))
        cur = _assign_true(cur, lit)
    return _result(f, cur, steps)


def _assign_true(f: Formula, lit: int) -> Formula:
    out = []
    for clause in f.clauses:
        if lit in clause:
            continue
        if -lit in clause:
            out.append(tuple(l for l in clause if l != -lit))
        else:
            out.append(clause)
    return Formula(out, num_vars=f.num_vars)


def _pure_literals(f: Formula) -> list[int]:
    """Literals with clause occurrences whose negation occurs in no clause."""
    return sorted((l for v in f.variables() for l in (v, -v)
                   if f.occurrences(l) and not f.occurrences(-l)), key=lit_key)


def pure_exhaustive(f: Formula, rng: random.Random | None = None) -> TransformResult:
    """Assign pure literals true to fixpoint; the elimination order is immaterial."""
    cur = f
    steps: list[Step] = []
    while True:
        pures = _pure_literals(cur)
        if not pures:
            break
        lit = _maybe_shuffle(pures, rng)[0]
        steps.append(PureAssigned(lit))
        cur = _assign_true(cur, lit)
    return _result(f, cur, steps)


def _strictly_subsumed_by(clause: Clause, others: Iterable[Clause]) -> Clause | None:
    cset = set(clause)
    for other in others:
        if len(other) < len(cset) and set(other) < cset:
            return other
    return None


def subsumption_exhaustive(f: Formula, rng: random.Random | None = None) -> TransformResult:
    """Remove every clause strictly containing another clause of the formula.

    The surviving set (the subset-minimal clauses) is unique, so the scan
    order only affects the trace, not the output.
    """
    clauses = _maybe_shuffle(list(f.clauses), rng)
    minimal = [c for c in clauses if _strictly_subsumed_by(c, f.clauses) is None]
    steps: list[Step] = []
    for victim in clauses:
        witness = _strictly_subsumed_by(victim, minimal)
        if witness is not None:
            steps.append(Subsumed(victim=victim, witness=witness))
    out = Formula(minimal, num_vars=f.num_vars)
    return _result(f, out, steps)


def _removable_literals(f: Formula, clause: Clause) -> dict[int, Clause]:
    """Literals deletable from ``clause`` by self-subsuming resolution, with witnesses."""
    out: dict[int, Clause] = {}
    rest_all = set(clause)
    for r in clause:
        rest = rest_all - {r}
        for witness in f.occurrences(-r):
            wrest = set(witness) - {-r}
            if wrest < rest:
                out[r] = witness
                break
    return out


def self_subsume_naive(f: Formula, order: Sequence[int] | None = None) -> TransformResult:
    """Apply self-subsuming resolution step by step until fixpoint.

    ``order`` is an optional literal priority: among all applicable steps, the
    one whose removed literal ranks earliest is taken first (remaining ties
    resolved canonically).  The output is order-dependent by design; this is
    the rule whose exhaustive form is neither confluent nor symmetry-preserving.
    """
    rank = {lit: i for i, lit in enumerate(order)} if order else {}
    fallback = len(rank)
    cur = f
    steps: list[Step] = []
    while True:
        applicable = []
        for clause in cur.clauses:
            for r, witness in _removable_literals(cur, clause).items():
                applicable.append(
                    ((rank.get(r, fallback), tuple(lit_key(l) for l in clause), lit_key(r)),
                     clause, r, witness))
        if not applicable:
            break
        _, clause, r, witness = min(applicable, key=lambda t: t[0])
        steps.append(SelfSubsumed(clause=clause, removed_lit=r, witness=witness))
        shrunk = tuple(l for l in clause if l != r)
        cur = Formula([c for c in cur.clauses if c != clause] + [shrunk],
                      num_vars=cur.num_vars)
    return _result(f, cur, steps)


def simultaneous_self_subsumption_round(f: Formula) -> TransformResult:
    """One round of unique self-subsuming resolution, applied simultaneously.

    A clause changes only when exactly one of its literals is removable by
    self-subsuming resolution anywhere in the input; all decisions are taken
    against the unmodified input and then applied at once, which makes the
    round a deterministic function of the formula.
    """
    steps: list[Step] = []
    out: list[Clause] = []
    for clause in f.clauses:
        removable = _removable_literals(f, clause)
        if len(removable) == 1:
            (r, witness), = removable.items()
            steps.append(SelfSubsumed(clause=clause, removed_lit=r, witness=witness))
            out.append(tuple(l for l in clause if l != r))
        else:
            out.append(clause)
    return _result(f, Formula(out, num_vars=f.num_vars), steps)


def simultaneous_self_subsumption_fixpoint(f: Formula) -> TransformResult:
    """Iterate the simultaneous round until it is the identity."""
    cur = f
    steps: list[Step] = []
    while True:
        r = simultaneous_self_subsumption_round(cur)
        if r.output == cur:
            break
        steps.extend(r.trace.steps)
        cur = r.output
    return _result(f, cur, steps)


def add_resolvent(f: Formula, c1: Iterable[int], c2: Iterable[int], x: int) -> TransformResult:
    """Add one resolution-derived clause, unless tautological or already present."""
    c1 = make_clause(c1)
    c2 = make_clause(c2)
    if c1 not in f or c2 not in f:
        raise ValueError("both parent clauses must be present in the formula")
    resolvent = resolve(c1, c2, x)
    if is_tautology(resolvent) or resolvent in f:
        return _result(f, f, [])
    steps = [LearnedAdded(clause=resolvent, pivot=x, parents=(c1, c2))]
    out = Formula(list(f.clauses) + [resolvent], num_vars=f.num_vars)
    return _result(f, out, steps)


def _blocking_literal(f: Formula, clause: Clause) -> int | None:
    """The first literal (canonical order) all of whose resolvents are tautological."""
    for l in sorted(clause, key=lit_key):
        rest = set(clause) - {l}
        if all(any(-m in other for m in rest) for other in f.occurrences(-l)):
            return l
    return None


def bce_exhaustive(f: Formula, rng: random.Random | None = None) -> TransformResult:
    """Remove blocked clauses to fixpoint; removal order does not affect the output.

    A clause with a literal whose negation occurs nowhere counts as blocked
    (the vacuous case).
    """
    cur = f
    steps: list[Step] = []
    while True:
        scan = _maybe_shuffle(list(cur.clauses), rng)
        for clause in scan:
            l = _blocking_literal(cur, clause)
            if l is not None:
                steps.append(BlockedRemoved(clause=clause, blocking_lit=l))
                cur = Formula([c for c in cur.clauses if c != clause], num_vars=cur.num_vars)
                break
        else:
            break
    return _result(f, cur, steps)


def _elimination_parts(f: Formula, x: int) -> tuple[tuple[Clause, ...], tuple[Clause, ...], set[Clause]]:
    pos = f.occurrences(x)
    neg = f.occurrences(-x)
    resolvents = set()
    for c1 in pos:
        for c2 in neg:
            r = resolve(c1, c2, x)
            if not is_tautology(r):
                resolvents.add(r)
    return pos, neg, resolvents


def bve_eliminate(f: Formula, x: int) -> TransformResult:
    """Eliminate variable x: replace its clauses by their non-tautological resolvents."""
    if x not in f.variables():
        raise ValueError(f"variable {x} does not occur in the formula")
    pos, neg, resolvents = _elimination_parts(f, x)
    remaining = set(f.clauses) - set(pos) - set(neg)
    out = Formula(remaining | resolvents, num_vars=f.num_vars)
    steps = [VarEliminated(var=x, pos_clauses=pos, neg_clauses=neg)]
    return _result(f, out, steps)


def default_bound(old_clauses: int, new_clauses: int) -> bool:
    """The clause-count bound: eliminate only when the formula strictly shrinks."""
    return new_clauses < old_clauses


def bounded_ve(f: Formula, candidates: Iterable[int],
               bound: Callable[[int, int], bool] = default_bound) -> TransformResult:
    """Greedy bounded variable elimination over a candidate set.

    Candidates are processed in ascending variable order; after an
    elimination, candidate neighbors of the eliminated variable are queued
    again.  Each single elimination must satisfy the clause-count bound.
    """
    candidate_set = set(candidates)
    queue = sorted(candidate_set)
    heapq.heapify(queue)
    queued = set(queue)
    cur = f
    steps: list[Step] = []
    while queue:
        x = heapq.heappop(queue)
        queued.discard(x)
        if x not in cur.variables():
            continue
        pos, neg, resolvents = _elimination_parts(cur, x)
        remaining = set(cur.clauses) - set(pos) - set(neg)
        new_clauses = remaining | resolvents
        if not bound(len(cur.clauses), len(new_clauses)):
            continue
        steps.append(VarEliminated(var=x, pos_clauses=pos, neg_clauses=neg))
        cur = Formula(new_clauses, num_vars=cur.num_vars)
        neighbors = {abs(l) for c in pos + neg for l in c} - {x}
        for nb in sorted(neighbors & candidate_set):
            if nb not in queued:
                heapq.heappush(queue, nb)
                queued.add(nb)
    return _result(f, cur, steps)


def symmetric_bve(f: Formula, asym: Iterable[int],
                  bound: Callable[[int, int], bool] = default_bound) -> TransformResult:
    """Bounded variable elimination restricted to certified-asymmetric variables.

    Every candidate must come with a trivial-orbit certificate (singleton
    color classes from the model graph's refinement), so the eliminated set is
    a union of orbits and the step preserves the remaining symmetries.
    """
    return bounded_ve(f, set(asym) & f.variables(), bound)


@dataclass
class PipelineConfig:
    max_passes: int = 10
    ve_bound: Callable[[int, int], bool] = field(default=default_bound)


def preprocess_pipeline(f: Formula, config: PipelineConfig | None = None) -> TransformResult:
    """The symmetry-preserving preprocessing pipeline.

    Each pass runs exhaustive unit+conflict, pure, subsumption, the fixpoint
    of simultaneous self-subsumption and blocked clause elimination, then
    certifies asymmetric variables by color refinement and applies bounded
    elimination to those only.  Passes repeat until nothing changes or the
    pass cap is hit.  A collapse to the empty formula or to {{}} stops the
    pipeline immediately.
    """
    cfg = config or PipelineConfig()
    cur = f
    steps: list[Step] = []
    for _ in range(cfg.max_passes):
        before = cur
        r = unit_conflict_exhaustive(cur)
        steps.extend(r.trace.steps)
        cur = r.output
        if not cur.clauses or is_conflict(cur):
            break
        for op in (pure_exhaustive, subsumption_exhaustive,
                   simultaneous_self_subsumption_fixpoint, bce_exhaustive):
            r = op(cur)
            steps.extend(r.trace.steps)
            cur = r.output
        partition = color_refinement(build_model_graph(cur))
        asym = asymmetric_variables(cur, partition)
        r = symmetric_bve(cur, asym, cfg.ve_bound)
        steps.extend(r.trace.steps)
        cur = r.output
        if cur == before:
            break
    return _result(f, cur, steps)


# --- replay, model reconstruction and trace serialization ---------------------


def replay_trace(trace: TransformTrace, f: Formula) -> Formula:
    """Re-derive the output formula from the input by applying every step.

    Each step is validated against the current formula, so a trace that does
    not belong to the formula raises ReplayError.
    """
    cur = f
    for step in trace.steps:
        cur = _replay_step(cur, step)
    return cur


def _replay_step(cur: Formula, step: Step) -> Formula:
    if isinstance(step, UnitAssigned):
        if (step.lit,) not in cur:
            raise ReplayError(f"unit {step.lit} is not a unit clause of the formula")
        return _assign_true(cur, step.lit)
    if isinstance(step, ConflictCollapsed):
        if () not in cur:
            raise ReplayError("conflict step without an empty clause")
        return conflict_formula(cur.num_vars)
    if isinstance(step, PureAssigned):
        if not cur.occurrences(step.lit) or cur.occurrences(-step.lit):
            raise ReplayError(f"literal {step.lit} is not pure")
        return _assign_true(cur, step.lit)
    if isinstance(step, Subsumed):
        if step.victim not in cur or step.witness not in cur:
            raise ReplayError("subsumption step on absent clauses")
        if not set(step.witness) < set(step.victim):
            raise ReplayError("subsumption witness does not strictly contain the victim")
        return cur.replace_clauses(c for c in cur.clauses if c != step.victim)
    if isinstance(step, SelfSubsumed):
        if step.clause not in cur or step.witness not in cur:
            raise ReplayError("self-subsumption step on absent clauses")
        if -step.removed_lit not in step.witness:
            raise ReplayError("self-subsumption witness lacks the complementary literal")
        if not set(step.witness) - {-step.removed_lit} < set(step.clause) - {step.removed_lit}:
            raise ReplayError("self-subsumption side condition violated")
        shrunk = tuple(l for l in step.clause if l != step.removed_lit)
        return cur.replace_clauses(
            [c for c in cur.clauses if c != step.clause] + [shrunk])
    if isinstance(step, BlockedRemoved):
        if step.clause not in cur:
            raise ReplayError("blocked-clause step on an absent clause")
        l = step.blocking_lit
        rest = set(step.clause) - {l}
        if l not in step.clause or not all(
                any(-m in other for m in rest) for other in cur.occurrences(-l)):
            raise ReplayError(f"literal {l} does not block the clause")
        return cur.replace_clauses(c for c in cur.clauses if c != step.clause)
    if isinstance(step, VarEliminated):
        if set(step.pos_clauses) != set(cur.occurrences(step.var)) or \
                set(step.neg_clauses) != set(cur.occurrences(-step.var)):
            raise ReplayError(f"recorded occurrence lists for {step.var} do not match")
        resolvents = set()
        for c1 in step.pos_clauses:
            for c2 in step.neg_clauses:
                r = resolve(c1, c2, step.var)
                if not is_tautology(r):
                    resolvents.add(r)
        remaining = set(cur.clauses) - set(step.pos_clauses) - set(step.neg_clauses)
        return cur.replace_clauses(remaining | resolvents)
    if isinstance(step, LearnedAdded):
        if step.parents[0] not in cur or step.parents[1] not in cur:
            raise ReplayError("learned-clause parents are absent")
        if resolve(step.parents[0], step.parents[1], step.pivot) != step.clause:
            raise ReplayError("learned clause is not the recorded resolvent")
        return cur.replace_clauses(list(cur.clauses) + [step.clause])
    raise ReplayError(f"unknown step {step!r}")


def extend_model(result: TransformResult, model: Mapping[int, bool]) -> dict[int, bool]:
    """Turn a model of the output formula into a model of the input formula.

    Replays the trace in reverse: units and pures are forced, blocked clauses
    are fixed by flipping their blocking literal, eliminated variables are
    valued from their recorded clause sets.  Variables untouched by any rule
    default to false.
    """
    assignment = dict(model)
    as_lits = frozenset(v if val else -v for v, val in assignment.items())
    if not result.output.variables() <= set(assignment):
        raise ValueError("model does not assign every variable of the output formula")
    if not satisfies(result.output, as_lits):
        raise ValueError("model does not satisfy the output formula")

    def default(vars_: Iterable[int]) -> None:
        for v in vars_:
            assignment.setdefault(v, False)

    def lit_true(l: int) -> bool:
        return assignment[abs(l)] == (l > 0)

    for step in reversed(result.trace.steps):
        if isinstance(step, (UnitAssigned, PureAssigned)):
            assignment[abs(step.lit)] = step.lit > 0
        elif isinstance(step, BlockedRemoved):
            default(abs(l) for l in step.clause)
            if not any(lit_true(l) for l in step.clause):
                assignment[abs(step.blocking_lit)] = step.blocking_lit > 0
        elif isinstance(step, VarEliminated):
            clauses = step.pos_clauses + step.neg_clauses
            default(abs(l) for c in clauses for l in c if abs(l) != step.var)
            need_pos = any(
                all(not lit_true(l) for l in c if l != step.var)
                for c in step.pos_clauses)
            assignment[step.var] = need_pos
        elif isinstance(step, (Subsumed, SelfSubsumed, LearnedAdded, ConflictCollapsed)):
            continue
    return assignment


_STEP_NAMES = {
    UnitAssigned: "unit", ConflictCollapsed: "conflict", PureAssigned: "pure",
    Subsumed: "subsume", SelfSubsumed: "selfsub", BlockedRemoved: "blocked",
    VarEliminated: "elim", LearnedAdded: "learn",
}


def _clause_text(clause: Clause) -> str:
    return " ".join(str(l) for l in clause) + " 0" if clause else "0"


def serialize_trace(trace: TransformTrace) -> str:
    """Line-oriented trace text: one step per line, step kind plus integers."""
    lines = []
    for step in trace.steps:
        kind = _STEP_NAMES[type(step)]
        if isinstance(step, (UnitAssigned, PureAssigned)):
            lines.append(f"{kind} {step.lit}")
        elif isinstance(step, ConflictCollapsed):
            lines.append(kind)
        elif isinstance(step, Subsumed):
            lines.append(f"{kind} {_clause_text(step.victim)} {_clause_text(step.witness)}")
        elif isinstance(step, SelfSubsumed):
            lines.append(f"{kind} {step.removed_lit} {_clause_text(step.clause)} "
                         f"{_clause_text(step.witness)}")
        elif isinstance(step, BlockedRemoved):
            lines.append(f"{kind} {step.blocking_lit} {_clause_text(step.clause)}")
        elif isinstance(step, VarEliminated):
            parts = [kind, str(step.var), str(len(step.pos_clauses)), str(len(step.neg_clauses))]
            parts += [_clause_text(c) for c in step.pos_clauses + step.neg_clauses]
            lines.append(" ".join(parts))
        elif isinstance(step, LearnedAdded):
            lines.append(f"{kind} {step.pivot} {_clause_text(step.clause)} "
                         f"{_clause_text(step.parents[0])} {_clause_text(step.parents[1])}")
    return "".join(line + "\n" for line in lines)


def _take_clause(tokens: list[int]) -> Clause:
    try:
        cut = tokens.index(0)
    except ValueError:
        raise ReplayError("unterminated clause in trace") from None
    clause = make_clause(tokens[:cut])
    del tokens[:cut + 1]
    return clause


def parse_trace(text: str) -> TransformTrace:
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, *rest = line.split()
        try:
            tokens = [int(t) for t in rest]
        except ValueError:
            raise ReplayError(f"line {lineno}: non-integer token") from None
        try:
            if kind == "unit":
                steps.append(UnitAssigned(tokens.pop(0)))
            elif kind == "conflict":
                steps.append(ConflictCollapsed())
            elif kind == "pure":
                steps.append(PureAssigned(tokens.pop(0)))
            elif kind == "subsume":
                victim = _take_clause(tokens)
                witness = _take_clause(tokens)
                steps.append(Subsumed(victim=victim, witness=witness))
            elif kind == "selfsub":
                lit = tokens.pop(0)
                clause = _take_clause(tokens)
                witness = _take_clause(tokens)
                steps.append(SelfSubsumed(clause=clause, removed_lit=lit, witness=witness))
            elif kind == "blocked":
                lit = tokens.pop(0)
                clause = _take_clause(tokens)
                steps.append(BlockedRemoved(clause=clause, blocking_lit=lit))
            elif kind == "elim":
                var, npos, nneg = tokens.pop(0), tokens.pop(0), tokens.pop(0)
                pos = tuple(_take_clause(tokens) for _ in range(npos))
                neg = tuple(_take_clause(tokens) for _ in range(nneg))
                steps.append(VarEliminated(var=var, pos_clauses=pos, neg_clauses=neg))
            elif kind == "learn":
                pivot = tokens.pop(0)
                clause = _take_clause(tokens)
                p1 = _take_clause(tokens)
                p2 = _take_clause(tokens)
                steps.append(LearnedAdded(clause=clause, pivot=pivot, parents=(p1, p2)))
            else:
                raise ReplayError(f"unknown step kind {kind!r}")
        except (IndexError, ReplayError) as exc:
            raise ReplayError(f"line {lineno}: {exc}") from None
        if tokens:
            raise ReplayError(f"line {lineno}: trailing tokens")
    return TransformTrace(tuple(steps))
