"""CNF model graphs, color refinement, discrete-vertex pruning and asymmetry certificates.

The model graph has two literal vertices per occurring variable (joined by an
edge) and one vertex per clause (joined to its literal vertices).  Literal
vertices start with color 0, clause vertices with color 1.  No shortcut
encoding is used for binary clauses, so the literal-vertex restriction of the
graph automorphism group matches the formula's syntactic symmetries.

Color refinement runs on a compiled kernel when the ``sympre._refine``
extension is importable, otherwise on the pure-Python fallback with identical
output.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cnf import Formula

try:
    from . import _refine as _kernel
    KERNEL = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _refine_py as _kernel
    KERNEL = "python"

from . import _refine_py


class GraphFormatError(ValueError):
    """Raised on malformed graph-export input."""


class ColoredGraph:
    """An undirected vertex-colored graph with canonical adjacency lists.

    ``origin`` tags every vertex with ("pos", var), ("neg", var) or
    ("clause", index) for graphs built from formulas; synthetic graphs may
    leave it None.  Equality compares structure and colors, not origins.
    """

    __slots__ = ("n", "adjacency", "colors", "origin", "_indptr", "_indices", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 colors: Sequence[int], origin: Sequence[tuple] | None = None):
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u].add(v)
            adj[v].add(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adj)
        if len(colors) != n:
            raise ValueError("need one color per vertex")
        if n and sorted(set(colors)) != list(range(len(set(colors)))):
            raise ValueError("colors must form a contiguous range starting at 0")
        self.colors: tuple[int, ...] = tuple(colors)
        self.origin = tuple(origin) if origin is not None else None
        indptr = array("i", [0] * (n + 1))
        indices = array("i")
        for v in range(n):
            indices.extend(self.adjacency[v])
            indptr[v + 1] = indptr[v] + len(self.adjacency[v])
        self._indptr = indptr
        self._indices = indices
        self._edges = frozenset(
            (u, v) for u in range(n) for v in self.adjacency[u] if u < v)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edges if u < v else (v, u) in self._edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.n == other.n and self.adjacency == other.adjacency
                and self.colors == other.colors)

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency, self.colors))

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class StablePartition:
    """An equitable coloring: same-colored vertices see the same color multiset."""

    colors: tuple[int, ...]
    class_sizes: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    def is_singleton(self, vertex: int) -> bool:
        return self.class_sizes[self.colors[vertex]] == 1

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out


def build_model_graph(f: Formula) -> ColoredGraph:
    """The model graph of a formula, over its occurring variables.

    Vertex numbering: positive literals 0..n-1 (variables ascending), negative
    literals n..2n-1, then clause vertices in canonical clause order.
    """
    variables = sorted(f.variables())
    n = len(variables)
    index = {v: i for i, v in enumerate(variables)}
    total = 2 * n + len(f.clauses)
    edges: list[tuple[int, int]] = [(i, n + i) for i in range(n)]
    for j, clause in enumerate(f.clauses):
        cv = 2 * n + j
        for lit in clause:
            lv = index[lit] if lit > 0 else n + index[-lit]
            edges.append((lv, cv))
    if f.clauses and n:
        colors = [0] * (2 * n) + [1] * len(f.clauses)
    else:
        colors = [0] * total
    origin = ([("pos", v) for v in variables] + [("neg", v) for v in variables]
              + [("clause", j) for j in range(len(f.clauses))])
    return ColoredGraph(total, edges, colors, origin)


def graph_literal_of_vertex(g: ColoredGraph, vertex: int) -> int | None:
    """The literal a vertex stands for, or None for clause vertices."""
    if g.origin is None:
        raise ValueError("graph carries no origin tags")
    kind, payload = g.origin[vertex]
    if kind == "pos":
        return payload
    if kind == "neg":
        return -payload
    return None


def refine_colors(g: ColoredGraph, colors: Sequence[int] | None = None) -> tuple[list[int], int]:
    """Run the refinement kernel; returns (stable colors, class count)."""
    start = g.colors if colors is None else colors
    out, ncolors, _rounds = _kernel.refine_rounds(
        g.n, g._indptr, g._indices, array("i", start))
    return out, ncolors


def refine_colors_python(g: ColoredGraph, colors: Sequence[int] | None = None) -> tuple[list[int], int]:
    """Pure-Python kernel, for parity tests and benchmarks."""
    start = g.colors if colors is None else colors
    out, ncolors, _rounds = _refine_py.refine_rounds(
        g.n, g._indptr, g._indices, array("i", start))
    return out, ncolors


def color_refinement(g: ColoredGraph) -> StablePartition:
    """The coarsest equitable partition refining the graph's initial colors."""
    stable, ncolors = refine_colors(g)
    sizes = [0] * ncolors
    for c in stable:
        sizes[c] += 1
    return StablePartition(tuple(stable), tuple(sizes))


def is_equitable(g: ColoredGraph, colors: Sequence[int]) -> bool:
    """Check the equitability invariant directly from the definition."""
    profile: dict[int, tuple] = {}
    for v in range(g.n):
        key = tuple(sorted(colors[u] for u in g.adjacency[v]))
        if colors[v] in profile:
            if profile[colors[v]] != key:
                return False
        else:
            profile[colors[v]] = key
    return True


def asymmetric_variables(f: Formula, partition: StablePartition) -> frozenset[int]:
    """Variables whose two literal vertices both form singleton color classes.

    Such variables are fixed (neither moved nor negated) by every automorphism
    of the model graph, hence have a trivial orbit under the formula's
    syntactic symmetries.
    """
    variables = sorted(f.variables())
    n = len(variables)
    if len(partition.colors) != 2 * n + len(f.clauses):
        raise ValueError("partition does not match the formula's model graph")
    out = set()
    for i, v in enumerate(variables):
        if partition.is_singleton(i) and partition.is_singleton(n + i):
            out.add(v)
    return frozenset(out)


def prune_discrete(g: ColoredGraph, partition: StablePartition) -> ColoredGraph:
    """Drop vertices in singleton color classes; renumber and recolor densely."""
    if len(partition.colors) != g.n:
        raise ValueError("partition does not match the graph")
    keep = [v for v in range(g.n) if not partition.is_singleton(v)]
    remap = {v: i for i, v in enumerate(keep)}
    kept_colors = sorted({partition.colors[v] for v in keep})
    dense = {c: i for i, c in enumerate(kept_colors)}
    edges = [(remap[u], remap[v]) for (u, v) in g.edges() if u in remap and v in remap]
    colors = [dense[partition.colors[v]] for v in keep]
    origin = None if g.origin is None else [g.origin[v] for v in keep]
    return ColoredGraph(len(keep), edges, colors, origin)


def export_graph(g: ColoredGraph) -> str:
    """DIMACS-graph-like text: header, one vertex-color line and one edge line each."""
    lines = [f"p edge {g.n} {g.num_edges}"]
    for v in range(g.n):
        lines.append(f"n {v + 1} {g.colors[v]}")
    for u, v in sorted(g.edges()):
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredGraph:
    """Re-read the export format (round-trip harness; origin tags are not kept)."""
    n = None
    m = None
    colors: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            n, m = int(parts[2]), int(parts[3])
        elif parts[0] == "n":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed vertex line {line!r}")
            colors[int(parts[1]) - 1] = int(parts[2])
        elif parts[0] == "e":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {line!r}")
    if n is None:
        raise GraphFormatError("missing 'p edge' header")
    if m is not None and m != len(edges):
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    color_list = [colors.get(v, 0) for v in range(n)]
    return ColoredGraph(n, edges, color_list)
