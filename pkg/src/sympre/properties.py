"""Executable checkers for how transformations treat symmetry.

check_sp decides symmetry preservation exactly through the group's
generators: all generators setwise-fixing the surviving literal set decides
whole-group setwise stabilization, and syntactic membership of every
restricted generator decides the subgroup condition.  The semantic checkers
(WSP, SL, EQUIV) rest on complete assignment enumeration and are therefore
capped to small variable counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cnf import Formula, OracleLimitError, all_assignments, model_set, satisfies
from .groups import PermGroup
from .perms import (LitPermutation, enumerate_set_symmetries, format_permutation,
                    is_semantic_symmetry, is_syntactic_symmetry)
from .transforms import TransformResult


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    witness: tuple[LitPermutation | None, str] | None = None
    notes: str = ""

    def to_json(self) -> str:
        payload = {"property": self.property, "holds": self.holds,
                   "witness": None, "notes": self.notes}
        if self.witness is not None:
            phi, reason = self.witness
            payload["witness"] = {
                "generator": None if phi is None else format_permutation(phi),
                "reason": reason,
            }
        return json.dumps(payload)


def check_sp(f: Formula, fres: TransformResult, g_f: PermGroup) -> PropertyReport:
    """Symmetry preservation: the whole group setwise-fixes the surviving
    literals and every restricted generator is a syntactic symmetry of the
    output.  Both conditions are decided exactly at generator level."""
    kept = fres.output.literals()
    kept_vars = {abs(l) for l in kept}
    for phi in g_f.generators:
        if not phi.stabilizes_setwise(kept):
            return PropertyReport("SP", False,
                                  (phi, "maps a surviving literal onto a removed one"))
        restricted = phi.restricted(kept_vars)
        if not is_syntactic_symmetry(fres.output, restricted):
            return PropertyReport("SP", False,
                                  (phi, "restriction is not a syntactic symmetry of the output"))
    return PropertyReport("SP", True)


def check_wsp(f: Formula, fres: TransformResult, g_f: PermGroup,
              max_vars: int = 10) -> PropertyReport:
    """Weak symmetry preservation: restrictions of the setwise-stabilizing
    generators must be semantic symmetries of the output."""
    kept = fres.output.literals()
    kept_vars = {abs(l) for l in kept}
    skipped = 0
    for phi in g_f.generators:
        if not phi.stabilizes_setwise(kept):
            skipped += 1
            continue
        restricted = phi.restricted(kept_vars)
        if not is_semantic_symmetry(fres.output, restricted, max_vars=max_vars):
            return PropertyReport("WSP", False,
                                  (phi, "restriction is not a semantic symmetry of the output"))
    notes = ""
    if skipped:
        notes = (f"{skipped} generator(s) do not stabilize the surviving literals; "
                 "the checked subgroup may be smaller than the full setwise stabilizer")
    return PropertyReport("WSP", True, notes=notes)


def enumerate_semantic_symmetries(f: Formula, max_vars: int = 6) -> list[LitPermutation]:
    """All semantic symmetries of f over its occurring literals, by brute force.

    A negation-equivariant bijection is a semantic symmetry exactly when it
    maps the satisfying-assignment set onto itself, so this enumerates the
    symmetries of the model set viewed as a family of literal sets.
    """
    variables = sorted(f.variables())
    if len(variables) > max_vars:
        raise OracleLimitError(
            f"semantic symmetry enumeration over {len(variables)} variables "
            f"exceeds the cap of {max_vars}")
    models = model_set(f, variables=variables, max_vars=max_vars)
    return enumerate_set_symmetries(variables, models)


def check_sl(f: Formula, fres: TransformResult, max_vars: int = 8,
             candidates: list[LitPermutation] | None = None,
             enum_max_vars: int = 6) -> PropertyReport:
    """Symmetry lifting: semantic symmetries of the output, extended by the
    identity, must be semantic symmetries of the input.

    Without an explicit candidate list, the output's full semantic symmetry
    group is enumerated (small formulas only).
    """
    f_vars = f.variables()
    if len(f_vars) > max_vars:
        raise OracleLimitError(
            f"symmetry-lifting check over {len(f_vars)} variables exceeds the cap of {max_vars}")
    enum_vars = sorted(f_vars | fres.output.variables())
    models_f = model_set(f, variables=enum_vars, max_vars=max_vars)
    if candidates is None:
        out_vars = sorted(fres.output.variables())
        models_out = model_set(fres.output, variables=out_vars, max_vars=max_vars)
        if not models_out and not models_f:
            # Both unsatisfiable: every symmetry of the output is vacuously
            # semantic on the input; nothing to enumerate.
            return PropertyReport("SL", True, notes="both formulas unsatisfiable")
        if len(out_vars) > enum_max_vars:
            raise OracleLimitError(
                f"semantic symmetry enumeration over {len(out_vars)} variables "
                f"exceeds the cap of {enum_max_vars}")
        candidates = enumerate_set_symmetries(out_vars, models_out)
        notes = f"checked all {len(candidates)} semantic symmetries of the output"
    else:
        notes = f"checked {len(candidates)} supplied candidate(s)"
    for phi in candidates:
        full = {l: l for v in enum_vars for l in (v, -v)}
        for v in phi.domain_vars:
            img = phi.apply(v)
            full[v] = img
            full[-v] = -img
        if any(frozenset(full[l] for l in m) not in models_f for m in models_f):
            lifted = phi.lifted(set(enum_vars) | set(phi.domain_vars))
            return PropertyReport("SL", False,
                                  (lifted, "lifted symmetry is not semantic on the input"))
    return PropertyReport("SL", True, notes=notes)


def check_equiv(f: Formula, fres: TransformResult, max_vars: int = 10) -> PropertyReport:
    """Equivalence preservation: input and output agree on every complete
    assignment of the input's variables (removed variables unconstrained)."""
    variables = sorted(f.variables())
    if len(variables) > max_vars:
        raise OracleLimitError(
            f"equivalence check over {len(variables)} variables exceeds the cap of {max_vars}")
    for m in all_assignments(variables):
        if satisfies(f, m) != satisfies(fres.output, m):
            true_lits = sorted(m, key=abs)
            return PropertyReport(
                "EQUIV", False,
                (None, f"assignment {true_lits} satisfies exactly one side"))
    return PropertyReport("EQUIV", True)
