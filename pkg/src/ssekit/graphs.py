"""Finite directed multigraphs, paths, integer edge functions, adjacency matrices.

Conventions, used consistently by every module in this package:

* an edge points from its source ``s(e)`` to its range ``r(e)``;
* a path ``e_1 ... e_n`` requires ``s(e_i) = r(e_{i+1})``, i.e. composition
  runs right to left: the path starts at ``s(e_n)`` and ends at ``r(e_1)``;
* a vertex is a *source* when it receives no edge (``r^{-1}(v)`` empty) and
  a *sink* when it emits none (``s^{-1}(v)`` empty);
* adjacency matrices count ``A(v, w) = #{e : r(e) = v, s(e) = w}`` -- rows
  index ranges, columns index sources -- so ``(A^n)(v, w)`` counts length-n
  paths from ``w`` to ``v`` and row-finiteness is a row condition.

Vertices and edges keep their input order; that order is the canonical
iteration order everywhere.  All values are immutable after construction and
every function here is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Structural problem in a graph, path, weight map, or matrix."""


class GraphFormatError(GraphError):
    """Malformed serialized input."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    rng: str


@dataclass(frozen=True)
class DirectedMultigraph:
    """A finite directed multigraph: vertex ids, edge records, and s/r maps.

    Ids are opaque strings, unique within their kind.  ``vertex_labels`` and
    ``edge_labels`` optionally carry display names (splits use them for
    barred copies); they take no part in equality or serialization.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    vertex_labels: Mapping[str, str] = field(default_factory=dict, compare=False)
    edge_labels: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        seen_v: set[str] = set()
        for v in self.vertices:
            if not isinstance(v, str):
                raise GraphError(f"vertex id {v!r} is not a string")
            if v in seen_v:
                raise GraphError(f"duplicate vertex id {v!r}")
            seen_v.add(v)
        by_id: dict[str, Edge] = {}
        incoming: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        outgoing: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            if e.id in by_id:
                raise GraphError(f"edges[{i}]: duplicate edge id {e.id!r}")
            if e.src not in seen_v:
                raise GraphError(f"edges[{i}] ({e.id!r}): unknown src {e.src!r}")
            if e.rng not in seen_v:
                raise GraphError(f"edges[{i}] ({e.id!r}): unknown rng {e.rng!r}")
            by_id[e.id] = e
            outgoing[e.src].append(e)
            incoming[e.rng].append(e)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_in", {v: tuple(es) for v, es in incoming.items()})
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in outgoing.items()})

    # -- accessors ---------------------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]  # type: ignore[attr-defined]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id  # type: ignore[attr-defined]

    def has_vertex(self, v: str) -> bool:
        return v in self._in  # type: ignore[attr-defined]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        """r^{-1}(v): edges received by v, in edge order."""
        try:
            return self._in[v]  # type: ignore[attr-defined]
        except KeyError:
            raise GraphError(f"unknown vertex id {v!r}") from None

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        """s^{-1}(v): edges emitted by v, in edge order."""
        try:
            return self._out[v]  # type: ignore[attr-defined]
        except KeyError:
            raise GraphError(f"unknown vertex id {v!r}") from None

    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def row_finite(self) -> bool:
        """Every vertex receives finitely many edges; vacuous for finite graphs."""
        return True


@dataclass(frozen=True)
class Path:
    """A finite path: an edge-id sequence, or a bare vertex (length 0).

    ``edge_ids`` lists ``e_1 ... e_n`` with ``s(e_i) = r(e_{i+1})``; the
    path's source is ``s(e_n)`` and its range ``r(e_1)``.
    """

    graph: DirectedMultigraph
    edge_ids: tuple[str, ...] = ()
    base: str | None = None

    def __post_init__(self) -> None:
        if self.edge_ids:
            if self.base is not None:
                raise GraphError("a path is either an edge sequence or a bare vertex")
            prev: Edge | None = None
            for eid in self.edge_ids:
                e = self.graph.edge(eid)
                if prev is not None and prev.src != e.rng:
                    raise GraphError(
                        f"edges {prev.id!r} and {eid!r} do not chain: "
                        f"s({prev.id})={prev.src!r} but r({eid})={e.rng!r}"
                    )
                prev = e
        else:
            if self.base is None:
                raise GraphError("a length-0 path needs a base vertex")
            if not self.graph.has_vertex(self.base):
                raise GraphError(f"unknown vertex id {self.base!r}")

    @property
    def length(self) -> int:
        return len(self.edge_ids)

    @property
    def source(self) -> str:
        if not self.edge_ids:
            return self.base  # type: ignore[return-value]
        return self.graph.edge(self.edge_ids[-1]).src

    @property
    def range(self) -> str:
        if not self.edge_ids:
            return self.base  # type: ignore[return-value]
        return self.graph.edge(self.edge_ids[0]).rng

    def concat(self, other: Path) -> Path:
        """Concatenation; defined when ``s(self) = r(other)``."""
        if self.graph != other.graph:
            raise GraphError("cannot concatenate paths of different graphs")
        if self.source != other.range:
            raise GraphError(
                f"paths do not compose: source {self.source!r} != range {other.range!r}"
            )
        if not self.edge_ids:
            return other
        if not other.edge_ids:
            return self
        return Path(self.graph, self.edge_ids + other.edge_ids)


@dataclass(frozen=True)
class EdgeFunction:
    """A total integer weight map on a graph's edges, additive on paths."""

    graph: DirectedMultigraph
    weights: Mapping[str, int]

    def __post_init__(self) -> None:
        domain = set(self.weights)
        edge_set = set(self.graph.edge_ids())
        missing = edge_set - domain
        extra = domain - edge_set
        if missing:
            raise GraphError(f"weight map misses edges: {sorted(missing)}")
        if extra:
            raise GraphError(f"weight map has unknown edges: {sorted(extra)}")
        for eid, wt in self.weights.items():
            if not isinstance(wt, int) or isinstance(wt, bool):
                raise GraphError(f"weight of edge {eid!r} is not an integer: {wt!r}")

    def __call__(self, edge_id: str) -> int:
        try:
            return self.weights[edge_id]
        except KeyError:
            raise GraphError(f"edge {edge_id!r} outside this function's domain") from None

    @classmethod
    def zero(cls, graph: DirectedMultigraph) -> EdgeFunction:
        return cls(graph, {eid: 0 for eid in graph.edge_ids()})


def path_weight(f: EdgeFunction, p: Path) -> int:
    """Additive extension of ``f`` to paths; vertex paths weigh 0."""
    if f.graph != p.graph:
        raise GraphError("path and edge function belong to different graphs")
    return sum(f(eid) for eid in p.edge_ids)


@dataclass(frozen=True)
class NonnegIntMatrix:
    """An integer matrix with nonnegative entries, indexed by explicit id lists."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise GraphError("matrix index lists must not repeat ids")
        if len(self.entries) != len(self.rows):
            raise GraphError(
                f"matrix has {len(self.entries)} entry rows for {len(self.rows)} row ids"
            )
        for i, row in enumerate(self.entries):
            if len(row) != len(self.cols):
                raise GraphError(f"entry row {i} has {len(row)} entries for {len(self.cols)} columns")
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise GraphError(f"entry ({i},{j}) is not an integer: {x!r}")
                if x < 0:
                    raise GraphError(f"entry ({i},{j}) is negative: {x}")
        object.__setattr__(self, "_ri", {v: i for i, v in enumerate(self.rows)})
        object.__setattr__(self, "_ci", {v: j for j, v in enumerate(self.cols)})

    @classmethod
    def from_entries(
        cls,
        entries: Sequence[Sequence[int]],
        rows: Sequence[str] | None = None,
        cols: Sequence[str] | None = None,
    ) -> NonnegIntMatrix:
        """Build a matrix, synthesizing string indices "0", "1", ... when absent."""
        n = len(entries)
        m = len(entries[0]) if entries else 0
        if rows is None:
            rows = [str(i) for i in range(n)]
        if cols is None:
            cols = [str(j) for j in range(m)]
        return cls(tuple(rows), tuple(cols), tuple(tuple(r) for r in entries))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @property
    def square(self) -> bool:
        return self.nrows == self.ncols

    def get(self, row_id: str, col_id: str) -> int:
        return self.entries[self._ri[row_id]][self._ci[col_id]]  # type: ignore[attr-defined]

    def matmul(self, other: NonnegIntMatrix) -> NonnegIntMatrix:
        """Positional matrix product; exact over Python ints."""
        if self.ncols != other.nrows:
            raise GraphError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = [tuple(other.entries[k][j] for k in range(other.nrows)) for j in range(other.ncols)]
        prod = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.entries
        )
        return NonnegIntMatrix(self.rows, other.cols, prod)

    def power(self, n: int) -> NonnegIntMatrix:
        if not self.square:
            raise GraphError("matrix power needs a square matrix")
        if n < 0:
            raise GraphError("matrix power needs n >= 0")
        result = NonnegIntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(1 if i == j else 0 for j in range(self.ncols)) for i in range(self.nrows)),
        )
        for _ in range(n):
            result = result.matmul(self)
        return result

    def trace(self) -> int:
        if not self.square:
            raise GraphError("trace needs a square matrix")
        return sum(self.entries[i][i] for i in range(self.nrows))

    def total(self) -> int:
        return sum(sum(row) for row in self.entries)

    def same_entries(self, other: NonnegIntMatrix) -> bool:
        """Entrywise equality by position, ignoring index ids."""
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def to_json_obj(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [list(row) for row in self.entries],
        }

    @classmethod
    def from_json_obj(cls, obj: object) -> NonnegIntMatrix:
        if not isinstance(obj, dict):
            raise GraphFormatError("matrix must be an object")
        if "entries" not in obj:
            raise GraphFormatError('matrix needs an "entries" key')
        entries = obj["entries"]
        if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
            raise GraphFormatError('"entries" must be a list of lists')
        rows = obj.get("rows")
        cols = obj.get("cols")
        if rows is not None and not (isinstance(rows, list) and all(isinstance(v, str) for v in rows)):
            raise GraphFormatError('"rows" must be a list of strings')
        if cols is not None and not (isinstance(cols, list) and all(isinstance(v, str) for v in cols)):
            raise GraphFormatError('"cols" must be a list of strings')
        try:
            return cls.from_entries(entries, rows, cols)
        except GraphError as exc:
            raise GraphFormatError(str(exc)) from None


# -- serialization ----------------------------------------------------------


def graph_to_json_obj(g: DirectedMultigraph, weights: EdgeFunction | None = None) -> dict:
    edges = []
    for e in g.edges:
        rec: dict = {"id": e.id, "src": e.src, "rng": e.rng}
        if weights is not None:
            rec["weight"] = weights(e.id)
        edges.append(rec)
    return {"vertices": list(g.vertices), "edges": edges}


def serialize_graph(g: DirectedMultigraph, weights: EdgeFunction | None = None) -> str:
    return json.dumps(graph_to_json_obj(g, weights), indent=2) + "\n"


def graph_from_json_obj(obj: object) -> tuple[DirectedMultigraph, EdgeFunction | None]:
    """Validate a deserialized graph object; returns the graph and, when every
    edge carries a "weight" field, the corresponding edge function."""
    if not isinstance(obj, dict):
        raise GraphFormatError("graph must be an object with vertices and edges")
    for key in ("vertices", "edges"):
        if key not in obj:
            raise GraphFormatError(f'graph needs a "{key}" key')
    vs = obj["vertices"]
    if not isinstance(vs, list) or not all(isinstance(v, str) for v in vs):
        raise GraphFormatError('"vertices" must be a list of strings')
    raw_edges = obj["edges"]
    if not isinstance(raw_edges, list):
        raise GraphFormatError('"edges" must be a list')
    edges: list[Edge] = []
    weight_map: dict[str, int] = {}
    weighted = 0
    for i, rec in enumerate(raw_edges):
        if not isinstance(rec, dict):
            raise GraphFormatError(f"edges[{i}]: must be an object")
        for key in ("id", "src", "rng"):
            if key not in rec or not isinstance(rec[key], str):
                raise GraphFormatError(f'edges[{i}]: needs a string "{key}"')
        edges.append(Edge(rec["id"], rec["src"], rec["rng"]))
        if "weight" in rec:
            wt = rec["weight"]
            if not isinstance(wt, int) or isinstance(wt, bool):
                raise GraphFormatError(f"edges[{i}]: weight must be an integer")
            weight_map[rec["id"]] = wt
            weighted += 1
    try:
        g = DirectedMultigraph(tuple(vs), tuple(edges))
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None
    if weighted == 0:
        return g, None
    if weighted != len(edges):
        raise GraphFormatError(
            f"{weighted} of {len(edges)} edges carry weights; weight either all edges or none"
        )
    return g, EdgeFunction(g, weight_map)


def parse_graph_with_weights(text: str) -> tuple[DirectedMultigraph, EdgeFunction | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    return graph_from_json_obj(obj)


def parse_graph(text: str) -> DirectedMultigraph:
    """Parse the structured-text graph format, ignoring any weight fields."""
    return parse_graph_with_weights(text)[0]


def canonical_text(g: DirectedMultigraph) -> str:
    """Order-insensitive serialization (sorted ids); the equality of record."""
    obj = {
        "vertices": sorted(g.vertices),
        "edges": sorted(
            ({"id": e.id, "src": e.src, "rng": e.rng} for e in g.edges),
            key=lambda r: r["id"],
        ),
    }
    return json.dumps(obj, sort_keys=True)


def same_graph(g1: DirectedMultigraph, g2: DirectedMultigraph) -> bool:
    """Same ids and structure, any vertex/edge order."""
    return canonical_text(g1) == canonical_text(g2)


def to_dot(
    g: DirectedMultigraph,
    weights: EdgeFunction | None = None,
    blue_edges: Iterable[str] = (),
    red_edges: Iterable[str] = (),
) -> str:
    """DOT export: one node per vertex, one arc per edge labeled "id(:weight)"."""
    blue = set(blue_edges)
    red = set(red_edges)
    lines = ["digraph {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for e in g.edges:
        label = e.id if weights is None else f"{e.id}:{weights(e.id)}"
        attrs = [f'label="{label}"']
        if e.id in blue:
            attrs.append("color=blue")
        elif e.id in red:
            attrs.append("color=red")
        lines.append(f'  "{e.src}" -> "{e.rng}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- core operations --------------------------------------------------------


def classify_vertices(g: DirectedMultigraph) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(sources, sinks) in vertex order: no incoming / no outgoing edges."""
    sources = tuple(v for v in g.vertices if not g.in_edges(v))
    sinks = tuple(v for v in g.vertices if not g.out_edges(v))
    return sources, sinks


def paths_between(
    g: DirectedMultigraph,
    length: int,
    from_vertices: Iterable[str] | None = None,
    to_vertices: Iterable[str] | None = None,
) -> list[Path]:
    """All paths of the given length with source in ``from_vertices`` and range
    in ``to_vertices`` (defaults: all vertices), sorted lexicographically by
    edge-id sequence; length 0 yields one vertex path per admissible vertex."""
    if length < 0:
        raise GraphError("path length must be nonnegative")
    frm = set(g.vertices if from_vertices is None else from_vertices)
    to = set(g.vertices if to_vertices is None else to_vertices)
    for v in sorted(frm | to):
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex id {v!r}")
    if length == 0:
        return [Path(g, base=v) for v in g.vertices if v in frm and v in to]

    results: list[tuple[str, ...]] = []

    def extend(seq: list[str], tail_src: str) -> None:
        # seq holds e_1 .. e_k; the next edge e_{k+1} must have r = s(e_k).
        if len(seq) == length:
            if tail_src in frm:
                results.append(tuple(seq))
            return
        for e in g.edges:
            if e.rng == tail_src:
                seq.append(e.id)
                extend(seq, e.src)
                seq.pop()

    for first in g.edges:
        if first.rng in to:
            extend([first.id], first.src)
    results.sort()
    return [Path(g, seq) for seq in results]


def adjacency_matrix(
    g: DirectedMultigraph,
    row_order: Sequence[str] | None = None,
    col_order: Sequence[str] | None = None,
) -> NonnegIntMatrix:
    """Edge-count matrix: entry (v, w) counts edges with range v and source w."""
    rows = tuple(g.vertices if row_order is None else row_order)
    cols = tuple(g.vertices if col_order is None else col_order)
    for v in sorted(set(rows) | set(cols)):
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex id {v!r}")
    counts: dict[tuple[str, str], int] = {}
    for e in g.edges:
        counts[(e.rng, e.src)] = counts.get((e.rng, e.src), 0) + 1
    entries = tuple(tuple(counts.get((v, w), 0) for w in cols) for v in rows)
    return NonnegIntMatrix(rows, cols, entries)


def graph_from_matrix(a: NonnegIntMatrix) -> DirectedMultigraph:
    """One vertex per index; A(v, w) parallel edges from w to v, ids "v:w:k"."""
    if a.rows != a.cols:
        raise GraphError("matrix-to-graph conversion needs identical row and column ids")
    edges: list[Edge] = []
    for v in a.rows:
        for w in a.cols:
            for k in range(1, a.get(v, w) + 1):
                edges.append(Edge(f"{v}:{w}:{k}", w, v))
    return DirectedMultigraph(a.rows, tuple(edges))


# -- isomorphism ------------------------------------------------------------


@dataclass(frozen=True)
class GraphIsomorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]


def _vertex_invariant(g: DirectedMultigraph, v: str) -> tuple:
    out_bundles = sorted(
        sum(1 for e in g.out_edges(v) if e.rng == w) for w in g.vertices if any(e.rng == w for e in g.out_edges(v))
    )
    in_bundles = sorted(
        sum(1 for e in g.in_edges(v) if e.src == w) for w in g.vertices if any(e.src == w for e in g.in_edges(v))
    )
    loops = sum(1 for e in g.out_edges(v) if e.rng == v)
    return (len(g.in_edges(v)), len(g.out_edges(v)), loops, tuple(in_bundles), tuple(out_bundles))


def _bundle_count(g: DirectedMultigraph, u: str, v: str) -> int:
    return sum(1 for e in g.out_edges(u) if e.rng == v)


def is_isomorphic(g1: DirectedMultigraph, g2: DirectedMultigraph) -> GraphIsomorphism | None:
    """First multigraph isomorphism in canonical search order, or None.

    Backtracks over vertex maps in g1 vertex order, pruning candidates whose
    in/out-degree invariants differ; the edge bijection pairs parallel edges
    id-sorted within each bundle.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    inv1 = {v: _vertex_invariant(g1, v) for v in g1.vertices}
    inv2 = {v: _vertex_invariant(g2, v) for v in g2.vertices}
    if sorted(inv1.values()) != sorted(inv2.values()):
        return None

    order = list(g1.vertices)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        for cand in g2.vertices:
            if cand in used or inv1[u] != inv2[cand]:
                continue
            ok = True
            for prev_u, prev_c in mapping.items():
                if _bundle_count(g1, u, prev_u) != _bundle_count(g2, cand, prev_c):
                    ok = False
                    break
                if _bundle_count(g1, prev_u, u) != _bundle_count(g2, prev_c, cand):
                    ok = False
                    break
            if not ok:
                continue
            if _bundle_count(g1, u, u) != _bundle_count(g2, cand, cand):
                continue
            mapping[u] = cand
            used.add(cand)
            if extend(k + 1):
                return True
            del mapping[u]
            used.remove(cand)
        return False

    if not extend(0):
        return None

    edge_map: dict[str, str] = {}
    bundles1: dict[tuple[str, str], list[str]] = {}
    bundles2: dict[tuple[str, str], list[str]] = {}
    for e in g1.edges:
        bundles1.setdefault((e.src, e.rng), []).append(e.id)
    for e in g2.edges:
        bundles2.setdefault((e.src, e.rng), []).append(e.id)
    for (u, v), ids in bundles1.items():
        targets = bundles2[(mapping[u], mapping[v])]
        for a, b in zip(sorted(ids), sorted(targets)):
            edge_map[a] = b
    return GraphIsomorphism(dict(mapping), edge_map)


def canonical_key(g: DirectedMultigraph) -> tuple:
    """An isomorphism-invariant key: the minimal layered flattening of the
    adjacency count matrix over all vertex orderings.

    Vertex k's layer lists its counts against vertices 0..k (row, then
    column); minimizing the concatenated layers by branch and bound gives a
    complete invariant for finite multigraphs, cheap at the small orders the
    chain search works with.
    """
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    m = [[0] * n for _ in range(n)]
    for e in g.edges:
        m[idx[e.src]][idx[e.rng]] += 1

    best: list[int] | None = None

    def layer_of(perm: list[int], v: int) -> list[int]:
        row = [m[v][u] for u in perm] + [m[v][v]]
        col = [m[u][v] for u in perm]
        return row + col

    def search(perm: list[int], flat: list[int], remaining: set[int]) -> None:
        nonlocal best
        if not remaining:
            if best is None or flat < best:
                best = list(flat)
            return
        scored = sorted((layer_of(perm, v), v) for v in remaining)
        for layer, v in scored:
            extended = flat + layer
            if best is not None and extended > best[: len(extended)]:
                break  # later candidates have larger layers, so they exceed too
            search(perm + [v], extended, remaining - {v})

    search([], [], set(range(n)))
    return (n, tuple(best or []))
