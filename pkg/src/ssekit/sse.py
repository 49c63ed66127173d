"""Strong shift equivalence: witnesses, the matrix formulation, chain search.

Two graphs are elementary SSE when a bipartite intermediate graph connects
them: its vertices split into two sides carrying copies of the two vertex
sets, every edge crosses sides, and the length-2 same-side paths biject with
the original edges source- and range-preservingly (theta1 for side 1, theta2
for side 2).  A fourth condition regulates sources of the intermediate graph:
each must emit exactly one edge, and that edge must be the only one into its
range.

The matrix counterpart: square nonnegative integer matrices A, B are
elementary SSE when A = R*S and S*R = B for rectangular nonnegative integer
R, S.  ``witness_from_essse`` realizes such a factorization as the bipartite
graph with S counting side1-to-side2 edges and R the reverse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .graphs import (
    DirectedMultigraph,
    Edge,
    GraphError,
    GraphFormatError,
    NonnegIntMatrix,
    Path,
    canonical_key,
    graph_from_json_obj,
    graph_from_matrix,
    graph_to_json_obj,
    paths_between,
)
from .invariants import periodic_point_profile, sse_invariant_filter


class WitnessReferenceError(GraphError):
    """A witness names vertices or edges outside the graphs it connects."""


class WitnessConstructionError(GraphError):
    """A construction produced data violating the witness conditions."""

    def __init__(self, message: str, vertex: str | None = None, bundle=None):
        super().__init__(message)
        self.vertex = vertex
        self.bundle = bundle


@dataclass(frozen=True)
class SseWitness:
    """Candidate data for one elementary SSE step.

    ``side1``/``side2`` partition e3's vertices; ``e21``/``e12`` its edges
    (source side 1 / source side 2 respectively); ``vmap1``/``vmap2`` embed
    the outer graphs' vertex ids into the sides; ``theta1``/``theta2`` send
    outer edges to length-2 path edge pairs, listed in path order (the first
    edge of the pair carries the path's range).

    Construction is permissive: broken witnesses are representable so that
    ``verify_sse_witness`` can report exactly which conditions fail.
    """

    e3: DirectedMultigraph
    side1: tuple[str, ...]
    side2: tuple[str, ...]
    e21: tuple[str, ...]
    e12: tuple[str, ...]
    vmap1: Mapping[str, str]
    vmap2: Mapping[str, str]
    theta1: Mapping[str, tuple[str, str]]
    theta2: Mapping[str, tuple[str, str]]

    def implied_graph1(self) -> DirectedMultigraph:
        """Reconstruct the side-1 outer graph from vmap1 and theta1."""
        return self._implied(self.vmap1, self.theta1)

    def implied_graph2(self) -> DirectedMultigraph:
        """Reconstruct the side-2 outer graph from vmap2 and theta2."""
        return self._implied(self.vmap2, self.theta2)

    def _implied(self, vmap: Mapping[str, str], theta: Mapping[str, tuple[str, str]]) -> DirectedMultigraph:
        back = {v3: v for v, v3 in vmap.items()}
        if len(back) != len(vmap):
            raise GraphError("vertex map is not injective; cannot reconstruct the outer graph")
        edges = []
        for eid, pair in theta.items():
            p = Path(self.e3, tuple(pair))
            try:
                edges.append(Edge(eid, back[p.source], back[p.range]))
            except KeyError as exc:
                raise GraphError(
                    f"theta path for edge {eid!r} ends at {exc.args[0]!r}, outside the mapped side"
                ) from None
        return DirectedMultigraph(tuple(vmap.keys()), tuple(edges))


@dataclass
class WitnessReport:
    """One flag per defining condition, with human-readable diagnostics."""

    vertex_partition_ok: bool
    edge_bipartition_ok: bool
    theta_bijections_ok: bool
    source_condition_ok: bool
    problems: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.vertex_partition_ok
            and self.edge_bipartition_ok
            and self.theta_bijections_ok
            and self.source_condition_ok
        )

    def to_json_obj(self) -> dict:
        return {
            "condition1": self.vertex_partition_ok,
            "condition2": self.edge_bipartition_ok,
            "condition3": self.theta_bijections_ok,
            "condition4": self.source_condition_ok,
            "passed": self.passed,
            "problems": self.problems,
        }


def _check_witness_references(e1: DirectedMultigraph, e2: DirectedMultigraph, w: SseWitness) -> None:
    for eid in w.theta1:
        if not e1.has_edge(eid):
            raise WitnessReferenceError(f"theta1 keyed by unknown side-1 edge {eid!r}")
    for eid in w.theta2:
        if not e2.has_edge(eid):
            raise WitnessReferenceError(f"theta2 keyed by unknown side-2 edge {eid!r}")
    for v in w.vmap1:
        if not e1.has_vertex(v):
            raise WitnessReferenceError(f"vmap1 keyed by unknown side-1 vertex {v!r}")
    for v in w.vmap2:
        if not e2.has_vertex(v):
            raise WitnessReferenceError(f"vmap2 keyed by unknown side-2 vertex {v!r}")


def _condition_vertex_partition(w: SseWitness, e1: DirectedMultigraph, e2: DirectedMultigraph) -> tuple[bool, list[str]]:
    problems: list[str] = []
    s1, s2 = set(w.side1), set(w.side2)
    if len(s1) != len(w.side1) or len(s2) != len(w.side2):
        problems.append("a side lists a vertex twice")
    overlap = s1 & s2
    if overlap:
        problems.append(f"sides overlap: {sorted(overlap)}")
    all_vertices = set(w.e3.vertices)
    stray = (s1 | s2) - all_vertices
    if stray:
        problems.append(f"side members missing from the intermediate graph: {sorted(stray)}")
    uncovered = all_vertices - (s1 | s2)
    if uncovered:
        problems.append(f"vertices on neither side: {sorted(uncovered)}")
    for name, vmap, side, outer in (("vmap1", w.vmap1, s1, e1), ("vmap2", w.vmap2, s2, e2)):
        missing = set(outer.vertices) - set(vmap)
        if missing:
            problems.append(f"{name} misses vertices: {sorted(missing)}")
        values = list(vmap.values())
        if len(set(values)) != len(values):
            problems.append(f"{name} is not injective")
        if set(values) != side:
            problems.append(f"{name} is not onto its side")
    return (not problems, problems)


def _condition_edge_bipartition(w: SseWitness) -> tuple[bool, list[str]]:
    problems: list[str] = []
    c21, c12 = set(w.e21), set(w.e12)
    if len(c21) != len(w.e21) or len(c12) != len(w.e12):
        problems.append("an edge class lists an edge twice")
    overlap = c21 & c12
    if overlap:
        problems.append(f"edge classes overlap: {sorted(overlap)}")
    all_edges = set(w.e3.edge_ids())
    stray = (c21 | c12) - all_edges
    if stray:
        problems.append(f"class members missing from the intermediate graph: {sorted(stray)}")
    uncovered = all_edges - (c21 | c12)
    if uncovered:
        problems.append(f"edges in neither class: {sorted(uncovered)}")
    s1, s2 = set(w.side1), set(w.side2)
    for eid in w.e21:
        if eid in all_edges:
            e = w.e3.edge(eid)
            if e.src not in s1 or e.rng not in s2:
                problems.append(f"e21 edge {eid!r} does not run side1 -> side2")
    for eid in w.e12:
        if eid in all_edges:
            e = w.e3.edge(eid)
            if e.src not in s2 or e.rng not in s1:
                problems.append(f"e12 edge {eid!r} does not run side2 -> side1")
    return (not problems, problems)


def _theta_check(
    label: str,
    outer: DirectedMultigraph,
    e3: DirectedMultigraph,
    side: Sequence[str],
    vmap: Mapping[str, str],
    theta: Mapping[str, tuple[str, str]],
) -> list[str]:
    problems: list[str] = []
    images: dict[tuple[str, str], str] = {}
    for e in outer.edges:
        pair = theta.get(e.id)
        if pair is None:
            problems.append(f"{label} undefined on edge {e.id!r}")
            continue
        if len(pair) != 2:
            problems.append(f"{label}({e.id!r}) is not a length-2 path")
            continue
        first, second = pair
        if not (e3.has_edge(first) and e3.has_edge(second)):
            problems.append(f"{label}({e.id!r}) dangles: missing edge in {pair!r}")
            continue
        if e3.edge(first).src != e3.edge(second).rng:
            problems.append(f"{label}({e.id!r}) edges do not chain: {pair!r}")
            continue
        path_source = e3.edge(second).src
        path_range = e3.edge(first).rng
        if vmap.get(e.src) != path_source:
            problems.append(
                f"{label}({e.id!r}) is not source-preserving: path starts at {path_source!r}"
            )
        if vmap.get(e.rng) != path_range:
            problems.append(
                f"{label}({e.id!r}) is not range-preserving: path ends at {path_range!r}"
            )
        key = (first, second)
        if key in images:
            problems.append(f"{label} repeats path {key!r} (also image of {images[key]!r})")
        images[key] = e.id
    members = [v for v in side if e3.has_vertex(v)]
    expected = {tuple(p.edge_ids) for p in paths_between(e3, 2, members, members)}
    missed = expected - set(images)
    if missed:
        problems.append(f"{label} misses length-2 paths: {sorted(missed)}")
    return problems


def _condition_source_regularity(e3: DirectedMultigraph) -> tuple[bool, list[str]]:
    problems: list[str] = []
    for v in e3.vertices:
        if e3.in_edges(v):
            continue
        out = e3.out_edges(v)
        if len(out) != 1:
            problems.append(f"source {v!r} emits {len(out)} edges instead of exactly one")
            continue
        eta = out[0]
        receivers = e3.in_edges(eta.rng)
        if len(receivers) != 1 or receivers[0].id != eta.id:
            problems.append(
                f"source {v!r}: its edge {eta.id!r} is not the only edge into {eta.rng!r}"
            )
    return (not problems, problems)


def verify_sse_witness(e1: DirectedMultigraph, e2: DirectedMultigraph, w: SseWitness) -> WitnessReport:
    """Check all four defining conditions of an elementary SSE witness.

    Ids named by the witness' outer-facing keys must belong to e1/e2 (raises
    otherwise); anything broken on the intermediate-graph side is reported as
    a failed condition instead of an error.
    """
    _check_witness_references(e1, e2, w)
    c1, p1 = _condition_vertex_partition(w, e1, e2)
    c2, p2 = _condition_edge_bipartition(w)
    p3 = _theta_check("theta1", e1, w.e3, w.side1, w.vmap1, w.theta1)
    p3 += _theta_check("theta2", e2, w.e3, w.side2, w.vmap2, w.theta2)
    c4, p4 = _condition_source_regularity(w.e3)
    return WitnessReport(
        c1,
        c2,
        not p3,
        c4,
        problems={"condition1": p1, "condition2": p2, "condition3": p3, "condition4": p4},
    )


def find_theta_bijections(
    e1: DirectedMultigraph,
    e2: DirectedMultigraph,
    e3: DirectedMultigraph,
    side1: Sequence[str],
    side2: Sequence[str],
    e21: Sequence[str],
    e12: Sequence[str],
    vmap1: Mapping[str, str],
    vmap2: Mapping[str, str],
) -> tuple[dict[str, tuple[str, str]], dict[str, tuple[str, str]]] | None:
    """Decide whether source- and range-preserving theta bijections exist and
    materialize the canonical ones.

    Existence reduces to fiber counting: for every ordered vertex pair the
    number of outer edges must equal the number of length-2 paths between the
    mapped vertices.  When all fibers match, both are paired in lexicographic
    order (edge ids against path edge-id sequences); any mismatch returns None.
    """
    probe = SseWitness(e3, tuple(side1), tuple(side2), tuple(e21), tuple(e12), dict(vmap1), dict(vmap2), {}, {})
    ok1, prob1 = _condition_vertex_partition(probe, e1, e2)
    ok2, prob2 = _condition_edge_bipartition(probe)
    if not (ok1 and ok2):
        raise GraphError("sides/classes do not satisfy the partition conditions: " + "; ".join(prob1 + prob2))

    def pair_side(outer: DirectedMultigraph, side: Sequence[str], vmap: Mapping[str, str]):
        fibers: dict[tuple[str, str], list[tuple[str, str]]] = {}
        for p in paths_between(e3, 2, side, side):
            fibers.setdefault((p.source, p.range), []).append(tuple(p.edge_ids))
        edges_by_pair: dict[tuple[str, str], list[str]] = {}
        for e in outer.edges:
            edges_by_pair.setdefault((vmap[e.src], vmap[e.rng]), []).append(e.id)
        if set(fibers) != set(edges_by_pair):
            return None
        theta: dict[str, tuple[str, str]] = {}
        for key in edges_by_pair:
            eids = sorted(edges_by_pair[key])
            paths = sorted(fibers[key])
            if len(eids) != len(paths):
                return None
            for eid, pth in zip(eids, paths):
                theta[eid] = pth
        return {e.id: theta[e.id] for e in outer.edges}

    theta1 = pair_side(e1, side1, vmap1)
    if theta1 is None:
        return None
    theta2 = pair_side(e2, side2, vmap2)
    if theta2 is None:
        return None
    return theta1, theta2


# -- witness serialization ---------------------------------------------------


def witness_to_json_obj(w: SseWitness) -> dict:
    return {
        "e3": graph_to_json_obj(w.e3),
        "side1": list(w.side1),
        "side2": list(w.side2),
        "e21": list(w.e21),
        "e12": list(w.e12),
        "vmap1": dict(w.vmap1),
        "vmap2": dict(w.vmap2),
        "theta1": {k: list(v) for k, v in w.theta1.items()},
        "theta2": {k: list(v) for k, v in w.theta2.items()},
    }


def witness_from_json_obj(obj: object) -> SseWitness:
    if not isinstance(obj, dict):
        raise GraphFormatError("witness must be an object")
    for key in ("e3", "side1", "side2", "e21", "e12", "vmap1", "vmap2", "theta1", "theta2"):
        if key not in obj:
            raise GraphFormatError(f'witness needs a "{key}" key')
    e3, _ = graph_from_json_obj(obj["e3"])

    def str_list(key: str) -> tuple[str, ...]:
        val = obj[key]
        if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
            raise GraphFormatError(f'"{key}" must be a list of strings')
        return tuple(val)

    def str_map(key: str) -> dict[str, str]:
        val = obj[key]
        if not isinstance(val, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in val.items()
        ):
            raise GraphFormatError(f'"{key}" must map strings to strings')
        return dict(val)

    def theta_map(key: str) -> dict[str, tuple[str, str]]:
        val = obj[key]
        if not isinstance(val, dict):
            raise GraphFormatError(f'"{key}" must be an object')
        out: dict[str, tuple[str, str]] = {}
        for k, v in val.items():
            if (
                not isinstance(k, str)
                or not isinstance(v, list)
                or len(v) != 2
                or not all(isinstance(x, str) for x in v)
            ):
                raise GraphFormatError(f'"{key}" values must be pairs of edge ids')
            out[k] = (v[0], v[1])
        return out

    return SseWitness(
        e3,
        str_list("side1"),
        str_list("side2"),
        str_list("e21"),
        str_list("e12"),
        str_map("vmap1"),
        str_map("vmap2"),
        theta_map("theta1"),
        theta_map("theta2"),
    )


def parse_witness(text: str) -> SseWitness:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    return witness_from_json_obj(obj)


# -- matrix formulation ------------------------------------------------------


@dataclass(frozen=True)
class EssePair:
    """A, B square and R, S rectangular with A = R*S, S*R = B as the claim."""

    a: NonnegIntMatrix
    b: NonnegIntMatrix
    r: NonnegIntMatrix
    s: NonnegIntMatrix

    def __post_init__(self) -> None:
        if not self.a.square or not self.b.square:
            raise GraphError("A and B must be square")
        if self.r.nrows != self.a.nrows or self.r.ncols != self.b.nrows:
            raise GraphError(
                f"R must be {self.a.nrows}x{self.b.nrows}, got {self.r.nrows}x{self.r.ncols}"
            )
        if self.s.nrows != self.b.nrows or self.s.ncols != self.a.nrows:
            raise GraphError(
                f"S must be {self.b.nrows}x{self.a.nrows}, got {self.s.nrows}x{self.s.ncols}"
            )


def matrix_essse_verify(pair: EssePair) -> bool:
    """True iff A = R*S and S*R = B hold entrywise."""
    return pair.r.matmul(pair.s).same_entries(pair.a) and pair.s.matmul(pair.r).same_entries(pair.b)


@dataclass(frozen=True)
class EsseWitnessBundle:
    e1: DirectedMultigraph
    e2: DirectedMultigraph
    e3: DirectedMultigraph
    witness: SseWitness


def _fresh_id(base: str, taken: set[str]) -> str:
    while base in taken:
        base = base + "'"
    return base


def witness_from_essse(pair: EssePair) -> EsseWitnessBundle:
    """Realize a verified matrix factorization as graphs and a witness.

    side1 carries A's indices and side2 B's; S(x, w) counts the parallel
    side1-to-side2 edges w -> x and R(v, x) the reverse.  The length-2 path
    fibers then match the outer edge fibers because (RS)(v, w) = A(v, w) and
    (SR)(y, x) = B(y, x), so the canonical theta pairing always exists.
    Conditions 1-3 hold by construction; the source condition is checked and
    a violation raises ``WitnessConstructionError`` naming the vertex.
    """
    if not matrix_essse_verify(pair):
        raise GraphError("matrices do not satisfy A = R*S and S*R = B")
    e1 = graph_from_matrix(pair.a)
    e2 = graph_from_matrix(pair.b)
    side1 = tuple(pair.a.rows)
    taken = set(side1)
    vmap2: dict[str, str] = {}
    for x in pair.b.rows:
        nid = _fresh_id(x, taken)
        vmap2[x] = nid
        taken.add(nid)
    side2 = tuple(vmap2[x] for x in pair.b.rows)
    vmap1 = {v: v for v in side1}

    edges: list[Edge] = []
    e21_ids: list[str] = []
    e12_ids: list[str] = []
    for wi, wv in enumerate(pair.a.rows):
        for xi, xv in enumerate(pair.b.rows):
            for k in range(1, pair.s.entries[xi][wi] + 1):
                eid = f"e21:{wv}:{xv}:{k}"
                edges.append(Edge(eid, wv, vmap2[xv]))
                e21_ids.append(eid)
    for xi, xv in enumerate(pair.b.rows):
        for vi, vv in enumerate(pair.a.rows):
            for k in range(1, pair.r.entries[vi][xi] + 1):
                eid = f"e12:{xv}:{vv}:{k}"
                edges.append(Edge(eid, vmap2[xv], vv))
                e12_ids.append(eid)
    e3 = DirectedMultigraph(side1 + side2, tuple(edges))

    thetas = find_theta_bijections(e1, e2, e3, side1, side2, e21_ids, e12_ids, vmap1, vmap2)
    if thetas is None:  # cannot happen for a verified pair; guard regardless
        raise WitnessConstructionError("theta fibers do not match the factorization")
    witness = SseWitness(
        e3, side1, side2, tuple(e21_ids), tuple(e12_ids), vmap1, vmap2, thetas[0], thetas[1]
    )
    bundle = EsseWitnessBundle(e1, e2, e3, witness)
    ok4, problems = _condition_source_regularity(e3)
    if not ok4:
        offender = problems[0].split("'")[1] if "'" in problems[0] else None
        raise WitnessConstructionError(
            "source condition fails: " + "; ".join(problems), vertex=offender, bundle=bundle
        )
    return bundle


def matrix_essse_search(
    a: NonnegIntMatrix, b: NonnegIntMatrix, entry_bound: int | None = None
) -> tuple[NonnegIntMatrix, NonnegIntMatrix] | None:
    """Exhaustive search for R, S with A = R*S, S*R = B and entries <= bound.

    The inner dimension is forced: S*R must be square of B's size, so R is
    dim(A) x dim(B) and S is dim(B) x dim(A).  Candidates are enumerated in
    row-major lexicographic order over the concatenated (R, S) entries and the
    first verifying pair is returned; pruning (partial product bounds, exact
    column/row completion) only ever discards non-solutions.  The default
    entry bound is the largest entry of A and B.
    """
    if not a.square or not b.square:
        raise GraphError("search needs square A and B")
    n = a.nrows
    k = b.nrows
    if entry_bound is None:
        entry_bound = max(a.total() and max(max(row) for row in a.entries) or 0,
                          b.total() and max(max(row) for row in b.entries) or 0)
    if entry_bound < 0:
        raise GraphError("entry bound must be nonnegative")
    m = entry_bound

    a_rows_max = [max(row) if row else 0 for row in a.entries]

    def plausible_r(r_flat: tuple[int, ...]) -> bool:
        for i in range(n):
            row = r_flat[i * k : (i + 1) * k]
            if sum(row) * m < a_rows_max[i]:
                return False
        return True

    def find_s(r_flat: tuple[int, ...]) -> list[list[int]] | None:
        r = [list(r_flat[i * k : (i + 1) * k]) for i in range(n)]
        s = [[0] * n for _ in range(k)]
        partial = [[0] * n for _ in range(n)]  # running R*S

        def place(pos: int) -> bool:
            if pos == k * n:
                return True
            t, j = divmod(pos, n)
            vmax = m
            for i in range(n):
                if r[i][t] > 0:
                    vmax = min(vmax, (a.entries[i][j] - partial[i][j]) // r[i][t])
            if vmax < 0:
                return False
            last_row_of_column = t == k - 1
            for val in range(vmax + 1):
                if last_row_of_column:
                    exact = all(
                        partial[i][j] + r[i][t] * val == a.entries[i][j] for i in range(n)
                    )
                    if not exact:
                        continue
                s[t][j] = val
                for i in range(n):
                    partial[i][j] += r[i][t] * val
                ok = True
                if j == n - 1:
                    # S row t complete: its S*R row is determined.
                    for u in range(k):
                        if sum(s[t][jj] * r[jj][u] for jj in range(n)) != b.entries[t][u]:
                            ok = False
                            break
                if ok and place(pos + 1):
                    return True
                for i in range(n):
                    partial[i][j] -= r[i][t] * val
                s[t][j] = 0
            return False

        return s if place(0) else None

    from itertools import product

    for r_flat in product(range(m + 1), repeat=n * k):
        if not plausible_r(r_flat):
            continue
        s_entries = find_s(r_flat)
        if s_entries is not None:
            r_mat = NonnegIntMatrix(
                a.rows, b.rows, tuple(tuple(r_flat[i * k : (i + 1) * k]) for i in range(n))
            )
            s_mat = NonnegIntMatrix(b.rows, a.rows, tuple(tuple(row) for row in s_entries))
            return r_mat, s_mat
    return None


# -- bounded chain search ----------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    move: str  # "insplit" | "outsplit"
    spec: object  # SplitSpec of the predecessor graph
    graph: DirectedMultigraph

    def to_json_obj(self) -> dict:
        return {
            "move": self.move,
            "spec": self.spec.to_json_obj(),  # type: ignore[attr-defined]
            "graph": graph_to_json_obj(self.graph),
        }


@dataclass
class ChainSearchResult:
    """Outcome of the bounded bidirectional split search.

    ``found``: both legs of split moves, applied forward from their endpoint,
    end in isomorphic graphs.  ``absent`` proves nothing beyond the bounds;
    ``reason`` separates an invariant refutation, a depth bound that stopped
    the search, and a fully exhausted reachable space.
    """

    status: str  # "found" | "absent"
    steps_from_e1: list[ChainStep] = field(default_factory=list)
    steps_from_e2: list[ChainStep] = field(default_factory=list)
    reason: str | None = None
    mismatch_period: int | None = None
    truncated_by_vertex_bound: bool = False

    @property
    def total_steps(self) -> int:
        return len(self.steps_from_e1) + len(self.steps_from_e2)

    def to_json_obj(self) -> dict:
        obj: dict = {"status": self.status}
        if self.status == "found":
            obj["total_steps"] = self.total_steps
            obj["from_e1"] = [s.to_json_obj() for s in self.steps_from_e1]
            obj["from_e2"] = [s.to_json_obj() for s in self.steps_from_e2]
        else:
            obj["reason"] = self.reason
            if self.mismatch_period is not None:
                obj["n"] = self.mismatch_period
        obj["truncated_by_vertex_bound"] = self.truncated_by_vertex_bound
        return obj


@dataclass
class _State:
    graph: DirectedMultigraph
    depth: int
    parent: tuple | None
    move: str | None
    spec: object | None


class _SearchSide:
    def __init__(self, root: DirectedMultigraph, opposite_profile, max_vertices: int, max_parts: int):
        self.max_vertices = max_vertices
        self.max_parts = max_parts
        self.opposite_profile = opposite_profile
        self.truncated = False
        root_key = canonical_key(root)
        self.states: dict[tuple, _State] = {root_key: _State(root, 0, None, None, None)}
        self.layers: list[list[tuple]] = [[root_key]]

    def expand_to(self, depth: int) -> None:
        from .splits import enumerate_split_specs, insplit_apply, outsplit_apply, split_vertex_count

        while len(self.layers) <= depth:
            frontier = self.layers[-1]
            new_layer: list[tuple] = []
            for key in frontier:
                g = self.states[key].graph
                for move, spec in enumerate_split_specs(g, self.max_parts):
                    if split_vertex_count(g, spec) > self.max_vertices:
                        self.truncated = True
                        continue
                    applied = insplit_apply(g, spec) if move == "insplit" else outsplit_apply(g, spec)
                    child = applied.graph
                    child_key = canonical_key(child)
                    if child_key in self.states:
                        continue
                    prof = periodic_point_profile(child, self.opposite_profile.n_max)
                    if prof != self.opposite_profile:
                        continue
                    self.states[child_key] = _State(child, len(self.layers), key, move, spec)
                    new_layer.append(child_key)
            self.layers.append(new_layer)

    def leg(self, key: tuple) -> list[ChainStep]:
        steps: list[ChainStep] = []
        state = self.states[key]
        while state.parent is not None:
            steps.append(ChainStep(state.move, state.spec, state.graph))  # type: ignore[arg-type]
            state = self.states[state.parent]
        steps.reverse()
        return steps


def sse_chain_search(
    e1: DirectedMultigraph,
    e2: DirectedMultigraph,
    max_steps: int = 3,
    max_vertices: int = 10,
    max_parts: int = 2,
) -> ChainSearchResult:
    """Bounded bidirectional probe for a chain of splits connecting e1 and e2.

    Both endpoints grow forward under all proper insplits and outsplits
    (classes per vertex capped by ``max_parts``, intermediate graphs by
    ``max_vertices``); frontiers are keyed by graph canonical form, so legs
    meet exactly when they reach isomorphic graphs.  States whose
    periodic-point profile up to period 4 disagrees with the opposite
    endpoint are pruned.  Absence within the bounds decides nothing.

    The bounds are the only throttle: the number of split specs per state is
    the product of per-vertex partition counts, so graphs with fat in/out
    bundles explode combinatorially -- tighten the bounds before probing
    dense graphs.  Depth pairs are explored balanced-first within each total
    step count, so one-sided deep expansion happens only when nothing
    shallower meets.
    """
    if max_steps < 0:
        raise GraphError("max_steps must be nonnegative")
    if max_vertices < 1 or max_parts < 1:
        raise GraphError("max_vertices and max_parts must be at least 1")

    inv = sse_invariant_filter(e1, e2, 4)
    if not inv.passed:
        return ChainSearchResult(
            "absent",
            reason="invariant-mismatch",
            mismatch_period=inv.first_mismatch,
        )

    side1 = _SearchSide(e1, inv.profile2, max_vertices, max_parts)
    side2 = _SearchSide(e2, inv.profile1, max_vertices, max_parts)

    for total in range(max_steps + 1):
        decompositions = sorted(
            ((d1, total - d1) for d1 in range(total + 1)),
            key=lambda pair: (max(pair), pair),
        )
        for d1, d2 in decompositions:
            side1.expand_to(d1)
            side2.expand_to(d2)
            common = sorted(set(side1.layers[d1]) & set(side2.layers[d2]))
            if common:
                meet = common[0]
                return ChainSearchResult(
                    "found",
                    steps_from_e1=side1.leg(meet),
                    steps_from_e2=side2.leg(meet),
                    truncated_by_vertex_bound=side1.truncated or side2.truncated,
                )

    truncated = side1.truncated or side2.truncated
    frontier_open = bool(side1.layers[-1]) or bool(side2.layers[-1])
    if frontier_open or truncated:
        reason = "depth-bound-reached"
    else:
        reason = "search-space-exhausted"
    return ChainSearchResult(
        "absent", reason=reason, truncated_by_vertex_bound=truncated
    )
