"""Insplits and outsplits: apply, witness, and carry weights across.

An insplit partitions each vertex's incoming edges; each class becomes a
vertex copy, and an edge gets one copy per class at its source.  An outsplit
dually partitions outgoing edges.  Id schemes are fixed so outputs are
reproducible byte for byte and recoverable from ids alone:

* insplit vertices ``v~i`` (or ``v~`` for unpartitioned vertices), edge
  copies ``e~j`` (or ``e~``);
* outsplit vertices ``v^i`` / ``v^``, edge copies ``e^j`` / ``e^``.

Class lists are 1-based and order-significant: a class's position in the
split spec is the copy index the construction uses.

Both splits are strong shift equivalences; the witness constructors build the
intermediate graph together with the canonical theta bijections and the
class bijections (phi1 on the new graph's vertices, phi2 on the original
edges) that drive weight transport.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .graphs import (
    DirectedMultigraph,
    Edge,
    EdgeFunction,
    GraphError,
    GraphFormatError,
)
from .sse import SseWitness
from .weights import weights_from_f_E12


@dataclass(frozen=True)
class SplitSpec:
    """Per-vertex ordered partition of incoming (insplit) or outgoing
    (outsplit) edges; vertices absent from ``parts`` have m(v) = 0."""

    kind: str
    parts: Mapping[str, tuple[tuple[str, ...], ...]]

    def __post_init__(self) -> None:
        if self.kind not in ("insplit", "outsplit"):
            raise GraphError(f'split kind must be "insplit" or "outsplit", not {self.kind!r}')

    def m(self, v: str) -> int:
        return len(self.parts.get(v, ()))

    def class_index(self) -> dict[str, int]:
        """edge id -> 1-based index of its class, over all mapped vertices."""
        idx: dict[str, int] = {}
        for classes in self.parts.values():
            for i, cls in enumerate(classes, 1):
                for eid in cls:
                    idx[eid] = i
        return idx

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "parts": {v: [list(c) for c in cs] for v, cs in self.parts.items()}}

    @classmethod
    def from_json_obj(cls, obj: object) -> SplitSpec:
        if not isinstance(obj, dict) or "kind" not in obj or "parts" not in obj:
            raise GraphFormatError('split spec needs "kind" and "parts"')
        kind = obj["kind"]
        parts = obj["parts"]
        if not isinstance(kind, str):
            raise GraphFormatError('"kind" must be a string')
        if not isinstance(parts, dict):
            raise GraphFormatError('"parts" must be an object')
        clean: dict[str, tuple[tuple[str, ...], ...]] = {}
        for v, classes in parts.items():
            if not isinstance(classes, list) or not all(
                isinstance(c, list) and all(isinstance(e, str) for e in c) for c in classes
            ):
                raise GraphFormatError(f"classes of vertex {v!r} must be lists of edge ids")
            clean[v] = tuple(tuple(c) for c in classes)
        try:
            return cls(kind, clean)
        except GraphError as exc:
            raise GraphFormatError(str(exc)) from None


def parse_split_spec(text: str) -> SplitSpec:
    import json

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    return SplitSpec.from_json_obj(obj)


@dataclass
class SplitReport:
    valid: bool
    violations: list[str]
    m: dict[str, int]
    proper: bool = True
    proper_reason: str = "finite graph"

    def to_json_obj(self) -> dict:
        return {
            "valid": self.valid,
            "violations": self.violations,
            "m": self.m,
            "proper": self.proper,
            "proper_reason": self.proper_reason,
        }


class SplitSpecError(GraphError):
    def __init__(self, report: SplitReport):
        super().__init__("invalid split spec: " + "; ".join(report.violations))
        self.report = report


def split_is_proper(g: DirectedMultigraph, spec: SplitSpec) -> tuple[bool, str]:
    """Properness constrains splits at infinite receivers; finite graphs
    satisfy it outright."""
    return True, "finite graph"


def validate_split_spec(g: DirectedMultigraph, spec: SplitSpec) -> SplitReport:
    """Check the partition conditions vertex by vertex.

    Insplit: exactly the vertices receiving edges are mapped, and their
    classes partition the incoming edges.  Outsplit: exactly the vertices
    that both receive and emit edges are mapped (sources stay whole by
    definition, sinks have nothing to partition), classes partition the
    outgoing edges.
    """
    violations: list[str] = []
    for v in spec.parts:
        if not g.has_vertex(v):
            violations.append(f"spec maps unknown vertex {v!r}")
    if spec.kind == "insplit":
        fiber = {v: tuple(e.id for e in g.in_edges(v)) for v in g.vertices}
        required = {v for v in g.vertices if fiber[v]}
        forbidden_reason = "a source (receives no edges)"
    else:
        fiber = {v: tuple(e.id for e in g.out_edges(v)) for v in g.vertices}
        required = {
            v for v in g.vertices if fiber[v] and g.in_edges(v)
        }
        forbidden_reason = "a source or a sink"
    for v in g.vertices:
        mapped = v in spec.parts
        if mapped and v not in required:
            violations.append(f"vertex {v!r} must stay unpartitioned: it is {forbidden_reason}")
        if not mapped and v in required:
            violations.append(f"vertex {v!r} must be partitioned")
        if not mapped or v not in required:
            continue
        classes = spec.parts[v]
        seen: dict[str, int] = {}
        for i, cls in enumerate(classes, 1):
            if not cls:
                violations.append(f"vertex {v!r}: class {i} is empty")
            for eid in cls:
                if eid in seen:
                    violations.append(
                        f"vertex {v!r}: edge {eid!r} appears in classes {seen[eid]} and {i}"
                    )
                seen[eid] = i
        missing = set(fiber[v]) - set(seen)
        extra = set(seen) - set(fiber[v])
        if missing:
            violations.append(f"vertex {v!r}: classes miss edges {sorted(missing)}")
        if extra:
            violations.append(f"vertex {v!r}: classes contain foreign edges {sorted(extra)}")
    proper, reason = split_is_proper(g, spec)
    m = {v: spec.m(v) for v in g.vertices}
    return SplitReport(not violations, violations, m, proper, reason)


def _require(g: DirectedMultigraph, spec: SplitSpec, kind: str) -> None:
    if spec.kind != kind:
        raise GraphError(f"expected an {kind} spec, got {spec.kind!r}")
    report = validate_split_spec(g, spec)
    if not report.valid:
        raise SplitSpecError(report)


@dataclass(frozen=True)
class SplitApplication:
    graph: DirectedMultigraph
    vertex_origin: Mapping[str, tuple[str, int | None]]
    edge_origin: Mapping[str, tuple[str, int | None]]

    def to_json_obj(self) -> dict:
        from .graphs import graph_to_json_obj

        return {
            "graph": graph_to_json_obj(self.graph),
            "vertex_origin": {k: [v, i] for k, (v, i) in self.vertex_origin.items()},
            "edge_origin": {k: [e, i] for k, (e, i) in self.edge_origin.items()},
        }


def _copy_vertices(
    g: DirectedMultigraph, spec: SplitSpec, marker: str
) -> tuple[list[str], dict[str, tuple[str, int | None]], dict[str, str]]:
    vertices: list[str] = []
    origin: dict[str, tuple[str, int | None]] = {}
    labels: dict[str, str] = {}
    sub = "_" if marker == "~" else "^"
    for v in g.vertices:
        mv = spec.m(v)
        if mv == 0:
            nid = f"{v}{marker}"
            vertices.append(nid)
            origin[nid] = (v, None)
            labels[nid] = f"{v}‾"
        else:
            for i in range(1, mv + 1):
                nid = f"{v}{marker}{i}"
                vertices.append(nid)
                origin[nid] = (v, i)
                labels[nid] = f"{v}‾{sub}{i}"
    return vertices, origin, labels


def insplit_apply(g: DirectedMultigraph, spec: SplitSpec) -> SplitApplication:
    """Form the insplit graph: one vertex per incoming-edge class, one edge
    copy per class at the edge's source; the copy's range is the class of the
    original edge."""
    _require(g, spec, "insplit")
    cls_idx = spec.class_index()
    vertices, vertex_origin, vlabels = _copy_vertices(g, spec, "~")
    edges: list[Edge] = []
    edge_origin: dict[str, tuple[str, int | None]] = {}
    elabels: dict[str, str] = {}
    for e in g.edges:
        rng_copy = f"{e.rng}~{cls_idx[e.id]}"
        ms = spec.m(e.src)
        if ms == 0:
            nid = f"{e.id}~"
            edges.append(Edge(nid, f"{e.src}~", rng_copy))
            edge_origin[nid] = (e.id, None)
            elabels[nid] = f"{e.id}‾"
        else:
            for j in range(1, ms + 1):
                nid = f"{e.id}~{j}"
                edges.append(Edge(nid, f"{e.src}~{j}", rng_copy))
                edge_origin[nid] = (e.id, j)
                elabels[nid] = f"{e.id}‾_{j}"
    graph = DirectedMultigraph(tuple(vertices), tuple(edges), vlabels, elabels)
    return SplitApplication(graph, vertex_origin, edge_origin)


def outsplit_apply(g: DirectedMultigraph, spec: SplitSpec) -> SplitApplication:
    """Form the outsplit graph: one vertex per outgoing-edge class, one edge
    copy per class at the edge's range; the copy's source is the class of the
    original edge (sources keep their whole out-bundle on the unindexed copy)."""
    _require(g, spec, "outsplit")
    cls_idx = spec.class_index()
    vertices, vertex_origin, vlabels = _copy_vertices(g, spec, "^")
    edges: list[Edge] = []
    edge_origin: dict[str, tuple[str, int | None]] = {}
    elabels: dict[str, str] = {}
    for e in g.edges:
        si = cls_idx.get(e.id)
        src_copy = f"{e.src}^{si}" if si is not None else f"{e.src}^"
        mr = spec.m(e.rng)
        if mr == 0:
            nid = f"{e.id}^"
            edges.append(Edge(nid, src_copy, f"{e.rng}^"))
            edge_origin[nid] = (e.id, None)
            elabels[nid] = f"{e.id}‾"
        else:
            for j in range(1, mr + 1):
                nid = f"{e.id}^{j}"
                edges.append(Edge(nid, src_copy, f"{e.rng}^{j}"))
                edge_origin[nid] = (e.id, j)
                elabels[nid] = f"{e.id}‾^{j}"
    graph = DirectedMultigraph(tuple(vertices), tuple(edges), vlabels, elabels)
    return SplitApplication(graph, vertex_origin, edge_origin)


@dataclass(frozen=True)
class SplitWitnessBundle:
    e2: DirectedMultigraph
    e3: DirectedMultigraph
    witness: SseWitness
    phi1: Mapping[str, str]  # split-graph vertices -> witness edges
    phi2: Mapping[str, str]  # original edges -> witness edges
    application: SplitApplication


def _fresh_id(base: str, taken: set[str]) -> str:
    while base in taken:
        base = base + "'"
    return base


def insplit_witness(g: DirectedMultigraph, spec: SplitSpec) -> SplitWitnessBundle:
    """The intermediate graph of an insplit: one side2-to-side1 edge per new
    vertex (phi1) and one side1-to-side2 edge per original edge, landing in
    the copy of its class (phi2); theta1 = phi1 after phi2, theta2 reads the
    copy's source off phi1."""
    app = insplit_apply(g, spec)
    e2 = app.graph
    cls_idx = spec.class_index()

    side1 = tuple(g.vertices)
    taken = set(side1)
    vmap2: dict[str, str] = {}
    for v2 in e2.vertices:
        nid = _fresh_id(v2, taken)
        vmap2[v2] = nid
        taken.add(nid)
    side2 = tuple(vmap2[v2] for v2 in e2.vertices)

    phi2: dict[str, str] = {}
    e21_edges: list[Edge] = []
    for e in g.edges:
        eta = f"e21:{e.id}"
        phi2[e.id] = eta
        e21_edges.append(Edge(eta, e.src, vmap2[f"{e.rng}~{cls_idx[e.id]}"]))
    phi1: dict[str, str] = {}
    e12_edges: list[Edge] = []
    for v2 in e2.vertices:
        eta = f"e12:{v2}"
        phi1[v2] = eta
        e12_edges.append(Edge(eta, vmap2[v2], app.vertex_origin[v2][0]))

    e3 = DirectedMultigraph(side1 + side2, tuple(e21_edges) + tuple(e12_edges))
    theta1 = {e.id: (phi1[f"{e.rng}~{cls_idx[e.id]}"], phi2[e.id]) for e in g.edges}
    theta2 = {
        e2e.id: (phi2[app.edge_origin[e2e.id][0]], phi1[e2e.src]) for e2e in e2.edges
    }
    witness = SseWitness(
        e3,
        side1,
        side2,
        tuple(e.id for e in e21_edges),
        tuple(e.id for e in e12_edges),
        {v: v for v in g.vertices},
        vmap2,
        theta1,
        theta2,
    )
    return SplitWitnessBundle(e2, e3, witness, phi1, phi2, app)


def outsplit_witness(g: DirectedMultigraph, spec: SplitSpec) -> SplitWitnessBundle:
    """The intermediate graph of an outsplit: one side1-to-side2 edge per new
    vertex (phi1) and one side2-to-side1 edge per original edge, leaving from
    the copy of its class (phi2); theta1 = phi2 after phi1, theta2 reads the
    copy's range off phi1."""
    app = outsplit_apply(g, spec)
    e2 = app.graph
    cls_idx = spec.class_index()

    side1 = tuple(g.vertices)
    taken = set(side1)
    vmap2: dict[str, str] = {}
    for v2 in e2.vertices:
        nid = _fresh_id(v2, taken)
        vmap2[v2] = nid
        taken.add(nid)
    side2 = tuple(vmap2[v2] for v2 in e2.vertices)

    phi1: dict[str, str] = {}
    e21_edges: list[Edge] = []
    for v2 in e2.vertices:
        eta = f"e21:{v2}"
        phi1[v2] = eta
        e21_edges.append(Edge(eta, app.vertex_origin[v2][0], vmap2[v2]))
    phi2: dict[str, str] = {}
    e12_edges: list[Edge] = []
    for e in g.edges:
        si = cls_idx.get(e.id)
        src_copy = f"{e.src}^{si}" if si is not None else f"{e.src}^"
        eta = f"e12:{e.id}"
        phi2[e.id] = eta
        e12_edges.append(Edge(eta, vmap2[src_copy], e.rng))

    e3 = DirectedMultigraph(side1 + side2, tuple(e21_edges) + tuple(e12_edges))
    theta1: dict[str, tuple[str, str]] = {}
    for e in g.edges:
        si = cls_idx.get(e.id)
        src_copy = f"{e.src}^{si}" if si is not None else f"{e.src}^"
        theta1[e.id] = (phi2[e.id], phi1[src_copy])
    theta2 = {
        e2e.id: (phi1[e2e.rng], phi2[app.edge_origin[e2e.id][0]]) for e2e in e2.edges
    }
    witness = SseWitness(
        e3,
        side1,
        side2,
        tuple(e.id for e in e21_edges),
        tuple(e.id for e in e12_edges),
        {v: v for v in g.vertices},
        vmap2,
        theta1,
        theta2,
    )
    return SplitWitnessBundle(e2, e3, witness, phi1, phi2, app)


def insplit_transport_f(g: DirectedMultigraph, spec: SplitSpec, f: EdgeFunction) -> EdgeFunction:
    """Push a weighting through an insplit: every copy inherits its original's
    weight, which makes the witness' theta maps weight-preserving."""
    if f.graph != g:
        raise GraphError("f is not a weight map on the graph being split")
    app = insplit_apply(g, spec)
    return EdgeFunction(
        app.graph, {ne: f(app.edge_origin[ne][0]) for ne in app.graph.edge_ids()}
    )


@dataclass
class ReverseTransportResult:
    f: EdgeFunction | None
    obstructions: list[tuple[str, dict[str, int]]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.f is not None

    def to_json_obj(self) -> dict:
        if self.f is not None:
            return {"status": "found", "f": {eid: self.f(eid) for eid in self.f.graph.edge_ids()}}
        return {
            "status": "absent",
            "obstructions": [
                {"edge": e, "copy_weights": dict(cw)} for e, cw in self.obstructions
            ],
        }


def insplit_reverse_transport(
    g: DirectedMultigraph, spec: SplitSpec, g2: EdgeFunction
) -> ReverseTransportResult:
    """Pull a weighting back through an insplit, when possible.

    A generator-level preimage exists exactly when the weighting is constant
    across the copies of each original edge; otherwise the differing copies
    are the obstruction, reported per edge.
    """
    app = insplit_apply(g, spec)
    if g2.graph != app.graph:
        raise GraphError("g2 is not a weight map on the insplit of this graph")
    by_origin: dict[str, dict[str, int]] = {}
    for ne in app.graph.edge_ids():
        origin = app.edge_origin[ne][0]
        by_origin.setdefault(origin, {})[ne] = g2(ne)
    obstructions = [
        (e.id, by_origin[e.id])
        for e in g.edges
        if len(set(by_origin[e.id].values())) > 1
    ]
    if obstructions:
        return ReverseTransportResult(None, obstructions)
    f = EdgeFunction(g, {e.id: next(iter(by_origin[e.id].values())) for e in g.edges})
    return ReverseTransportResult(f)


def outsplit_transport_f(
    g: DirectedMultigraph, spec: SplitSpec, f: EdgeFunction
) -> tuple[EdgeFunction, EdgeFunction]:
    """Push a weighting through an outsplit; returns (g2, h).

    Every copy inherits its original's weight; h keeps f's values on the
    side2-to-side1 witness edges and zeroes the rest, making both theta maps
    weight-preserving.
    """
    if f.graph != g:
        raise GraphError("f is not a weight map on the graph being split")
    bundle = outsplit_witness(g, spec)
    h, g_implied = weights_from_f_E12(bundle.witness, f, bundle.phi2)
    g2 = EdgeFunction(bundle.e2, dict(g_implied.weights))
    return g2, h


# -- enumeration for the chain search ----------------------------------------


def _set_partitions(items: Sequence[str], max_parts: int) -> list[tuple[tuple[str, ...], ...]]:
    """All partitions into at most max_parts nonempty classes, classes ordered
    by first occurrence (restricted growth strings)."""
    n = len(items)
    out: list[tuple[tuple[str, ...], ...]] = []

    def rec(i: int, assignment: list[int], nblocks: int) -> None:
        if i == n:
            blocks: list[list[str]] = [[] for _ in range(nblocks)]
            for j, b in enumerate(assignment):
                blocks[b].append(items[j])
            out.append(tuple(tuple(b) for b in blocks))
            return
        for b in range(nblocks):
            assignment.append(b)
            rec(i + 1, assignment, nblocks)
            assignment.pop()
        if nblocks < max_parts:
            assignment.append(nblocks)
            rec(i + 1, assignment, nblocks + 1)
            assignment.pop()

    rec(0, [], 0)
    return out


def enumerate_split_specs(g: DirectedMultigraph, max_parts: int) -> Iterator[tuple[str, SplitSpec]]:
    """Every valid insplit spec, then every valid outsplit spec, in the
    deterministic product order of per-vertex partitions."""
    in_mapped = [v for v in g.vertices if g.in_edges(v)]
    in_choices = [_set_partitions([e.id for e in g.in_edges(v)], max_parts) for v in in_mapped]
    for combo in itertools.product(*in_choices):
        yield "insplit", SplitSpec("insplit", dict(zip(in_mapped, combo)))
    out_mapped = [v for v in g.vertices if g.in_edges(v) and g.out_edges(v)]
    out_choices = [_set_partitions([e.id for e in g.out_edges(v)], max_parts) for v in out_mapped]
    for combo in itertools.product(*out_choices):
        yield "outsplit", SplitSpec("outsplit", dict(zip(out_mapped, combo)))


def split_vertex_count(g: DirectedMultigraph, spec: SplitSpec) -> int:
    """Vertex count of the split graph: sum of max(m(v), 1)."""
    return sum(max(spec.m(v), 1) for v in g.vertices)
