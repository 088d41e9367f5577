"""Reducible and hidden symmetry metrics for a formula/preprocessed-formula pair."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cnf import Formula
from .groups import PermGroup, pointwise_stabilizer_order


@dataclass(frozen=True)
class SymmetryMetrics:
    """Exact group orders and the two symmetry ratios.

    ``reducible`` is |Aut(F)| / |Aut(F) pointwise-stabilizing Lit(F*)|;
    ``hidden`` is |Aut(F*)| * |stabilizer| / |Aut(F)|.  Both are at least 1
    whenever the producing transformation preserved symmetry.
    """

    aut_f_order: int
    aut_fstar_order: int
    pointwise_stab_order: int
    reducible: Fraction
    hidden: Fraction

    def to_json_dict(self) -> dict[str, str]:
        return {
            "aut_f_order": str(self.aut_f_order),
            "aut_fstar_order": str(self.aut_fstar_order),
            "pointwise_stab_order": str(self.pointwise_stab_order),
            "reducible": str(self.reducible),
            "hidden": str(self.hidden),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def compute_metrics(f: Formula, fstar: Formula,
                    g_f: PermGroup, g_fstar: PermGroup) -> SymmetryMetrics:
    """Exact metrics from the two automorphism groups.

    Requires Lit(fstar) to be contained in Lit(f), as guaranteed by the
    transformation prototype.
    """
    kept = fstar.literals()
    if not kept <= f.literals():
        raise ValueError("preprocessed formula mentions literals outside the original")
    stab = pointwise_stabilizer_order(g_f, kept)
    aut_f = g_f.order()
    aut_fstar = g_fstar.order()
    return SymmetryMetrics(
        aut_f_order=aut_f,
        aut_fstar_order=aut_fstar,
        pointwise_stab_order=stab,
        reducible=Fraction(aut_f, stab),
        hidden=Fraction(aut_fstar * stab, aut_f),
    )
