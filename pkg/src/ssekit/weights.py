"""Integer edge weights across an SSE witness: checks, transport, lifting.

A theta bijection is *weight-preserving* when the intermediate graph's
weighting gives every length-2 path the weight of the outer edge it
represents: h(theta1(e)) = f(e) on side 1, h(theta2(e)) = g(e) on side 2.
Checks, constructions, and the lifting solver all work at this
generator level; nothing else is modelled.

Weights given on side 1 always push forward: zero the witness edges on one
class, copy f onto the other through a compatible bijection, and transport to
side 2 along theta2.  Weights given on side 2 need not pull back; feasibility
of the defining linear system is decided exactly, with an explicit
inconsistent cycle as the certificate when it fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graphs import EdgeFunction, GraphError, Path, path_weight
from .sse import SseWitness


class TransportError(GraphError):
    """A weight-construction hypothesis (bijection compatibility) fails."""


def _check_against_witness(
    fn: EdgeFunction, theta: Mapping[str, tuple[str, str]], vmap: Mapping[str, str], label: str
) -> None:
    if set(fn.graph.edge_ids()) != set(theta):
        raise GraphError(f"{label} is not a weight map on the witness' side graph (edge sets differ)")
    if set(fn.graph.vertices) != set(vmap):
        raise GraphError(f"{label} is not a weight map on the witness' side graph (vertex sets differ)")


@dataclass(frozen=True)
class WeightTriple:
    """Edge functions f (side 1), g (side 2), h (intermediate) over one witness."""

    witness: SseWitness
    f: EdgeFunction | None = None
    g: EdgeFunction | None = None
    h: EdgeFunction | None = None

    def __post_init__(self) -> None:
        if self.h is not None and self.h.graph != self.witness.e3:
            raise GraphError("h is not a weight map on the witness' intermediate graph")
        if self.f is not None:
            _check_against_witness(self.f, self.witness.theta1, self.witness.vmap1, "f")
        if self.g is not None:
            _check_against_witness(self.g, self.witness.theta2, self.witness.vmap2, "g")


def check_weight_preserving(t: WeightTriple) -> tuple[bool, bool]:
    """(theta1 weight-preserving, theta2 weight-preserving); a side with no
    outer function present counts as preserved."""
    if t.h is None:
        raise GraphError("check needs the intermediate weighting h")
    if t.f is None and t.g is None:
        raise GraphError("check needs f or g")
    w = t.witness

    def side_ok(fn: EdgeFunction | None, theta: Mapping[str, tuple[str, str]]) -> bool:
        if fn is None:
            return True
        for eid, pair in theta.items():
            if path_weight(t.h, Path(w.e3, pair)) != fn(eid):
                return False
        return True

    return side_ok(t.f, w.theta1), side_ok(t.g, w.theta2)


def transport_g_from_h(w: SseWitness, h: EdgeFunction) -> EdgeFunction:
    """Push an intermediate weighting to side 2: g(e) = h(theta2(e)).

    The resulting triple is theta2-weight-preserving by construction.
    """
    if h.graph != w.e3:
        raise GraphError("h is not a weight map on the witness' intermediate graph")
    e2 = w.implied_graph2()
    return EdgeFunction(e2, {eid: path_weight(h, Path(w.e3, pair)) for eid, pair in w.theta2.items()})


def _weights_via_phi(
    w: SseWitness,
    f: EdgeFunction,
    phi: Mapping[str, str],
    target_class: tuple[str, ...],
    theta_slot: int,
    slot_name: str,
) -> tuple[EdgeFunction, EdgeFunction]:
    _check_against_witness(f, w.theta1, w.vmap1, "f")
    if set(phi) != set(w.theta1):
        raise TransportError("phi must be defined exactly on the side-1 edges")
    values = list(phi.values())
    if len(set(values)) != len(values) or set(values) != set(target_class):
        raise TransportError("phi is not a bijection onto the required witness edge class")
    for eid, pair in w.theta1.items():
        if pair[theta_slot] != phi[eid]:
            raise TransportError(
                f"phi({eid!r}) = {phi[eid]!r} is not the {slot_name} edge of its theta1 path {pair!r}"
            )
    weights = {eta: 0 for eta in w.e3.edge_ids()}
    for eid, eta in phi.items():
        weights[eta] = f(eid)
    h = EdgeFunction(w.e3, weights)
    return h, transport_g_from_h(w, h)


def weights_from_f_E12(
    w: SseWitness, f: EdgeFunction, phi: Mapping[str, str]
) -> tuple[EdgeFunction, EdgeFunction]:
    """Construct (h, g) from f via a bijection phi onto the e12 class.

    phi must send each side-1 edge to the first edge of its theta1 path.  h
    copies f onto the e12 edges and zeroes the e21 edges; g is the theta2
    transport.  Both theta maps come out weight-preserving.
    """
    return _weights_via_phi(w, f, phi, w.e12, 0, "first")


def weights_from_f_E21(
    w: SseWitness, f: EdgeFunction, phi: Mapping[str, str]
) -> tuple[EdgeFunction, EdgeFunction]:
    """As ``weights_from_f_E12`` with phi onto the e21 class (second path edge)."""
    return _weights_via_phi(w, f, phi, w.e21, 1, "second")


# -- lifting a side-2 weighting to the intermediate graph --------------------


@dataclass(frozen=True)
class LiftEquation:
    ref: str  # "theta2:<edge>" or "theta1:<edge>"
    first: str  # intermediate edge carrying the path's range
    second: str
    constant: int


@dataclass
class LiftOutcome:
    """Result of solving h(first) + h(second) = constant over the integers.

    Feasible: ``solution`` satisfies every equation, with one free parameter
    per connected component of the constraint graph zeroed out.  Infeasible:
    ``certificate`` lists equation refs forming a cycle (the violated equation
    first) whose alternating sum is the nonzero contradiction.
    """

    status: str  # "feasible" | "infeasible"
    solution: EdgeFunction | None
    certificate: list[str] | None
    alternating_sum: int | None
    free_parameters: int
    equations: list[LiftEquation]

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json_obj(self) -> dict:
        obj: dict = {"status": self.status}
        if self.solution is not None:
            obj["h"] = {eid: self.solution(eid) for eid in self.solution.graph.edge_ids()}
        if self.certificate is not None:
            obj["certificate"] = list(self.certificate)
            obj["alternating_sum"] = self.alternating_sum
        obj["free_parameters"] = self.free_parameters
        return obj


def lift_edge_function(
    w: SseWitness, g: EdgeFunction, f: EdgeFunction | None = None
) -> LiftOutcome:
    """Solve for an intermediate weighting h with h(theta2(e)) = g(e) for all
    side-2 edges, and h(theta1(e)) = f(e) too when f is given.

    Every equation couples one e21 edge with one e12 edge (theta paths
    alternate sides), so the constraint graph is bipartite: breadth-first
    labeling per connected component either assigns h outright (free parameter
    set to 0) or exposes a cycle of equations whose alternating constant sum
    is nonzero.  Bipartiteness also rules out half-integer forcing, so
    rational and integer feasibility coincide.  Infeasibility is a result,
    not an error.
    """
    _check_against_witness(g, w.theta2, w.vmap2, "g")
    if f is not None:
        _check_against_witness(f, w.theta1, w.vmap1, "f")

    c21, c12 = set(w.e21), set(w.e12)
    equations: list[LiftEquation] = []

    def add_equations(fn: EdgeFunction, theta: Mapping[str, tuple[str, str]], tag: str) -> None:
        for e in fn.graph.edges:
            first, second = theta[e.id]
            in21 = (first in c21) + (second in c21)
            in12 = (first in c12) + (second in c12)
            if in21 != 1 or in12 != 1:
                raise GraphError(
                    f"{tag}:{e.id}: theta path {theta[e.id]!r} does not alternate witness sides"
                )
            equations.append(LiftEquation(f"{tag}:{e.id}", first, second, fn(e.id)))

    add_equations(g, w.theta2, "theta2")
    if f is not None:
        add_equations(f, w.theta1, "theta1")

    adjacency: dict[str, list[int]] = {eta: [] for eta in w.e3.edge_ids()}
    for i, eq in enumerate(equations):
        adjacency[eq.first].append(i)
        adjacency[eq.second].append(i)

    values: dict[str, int] = {}
    parent: dict[str, tuple[str, int] | None] = {}
    components = 0

    def certificate_for(u: str, v: str, closing: int) -> tuple[list[str], int]:
        def chain(x: str) -> list[str]:
            out = [x]
            while parent[out[-1]] is not None:
                out.append(parent[out[-1]][0])  # type: ignore[index]
            return out

        anc_u = chain(u)
        anc_v_set = set(chain(v))
        lca = next(x for x in anc_u if x in anc_v_set)
        refs: list[str] = [equations[closing].ref]
        x = u
        while x != lca:
            p, eq_i = parent[x]  # type: ignore[misc]
            refs.append(equations[eq_i].ref)
            x = p
        down: list[str] = []
        x = v
        while x != lca:
            p, eq_i = parent[x]  # type: ignore[misc]
            down.append(equations[eq_i].ref)
            x = p
        refs.extend(reversed(down))
        by_ref = {eq.ref: eq.constant for eq in equations}
        alt = sum((-1) ** j * by_ref[ref] for j, ref in enumerate(refs))
        return refs, alt

    for root in w.e3.edge_ids():
        if root in values:
            continue
        components += 1
        values[root] = 0
        parent[root] = None
        queue = [root]
        while queue:
            u = queue.pop(0)
            for eq_i in adjacency[u]:
                eq = equations[eq_i]
                other = eq.second if eq.first == u else eq.first
                if other not in values:
                    values[other] = eq.constant - values[u]
                    parent[other] = (u, eq_i)
                    queue.append(other)
                elif values[u] + values[other] != eq.constant:
                    refs, alt = certificate_for(u, other, eq_i)
                    return LiftOutcome("infeasible", None, refs, alt, 0, equations)

    solution = EdgeFunction(w.e3, values)
    return LiftOutcome("feasible", solution, None, None, components, equations)
