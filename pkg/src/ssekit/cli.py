"""Command-line surface over the file formats.

Exit codes: 0 success, 1 negative mathematical result (failed verification,
infeasible lift, nothing found within bounds), 2 usage or input error.
Negative results always come with a machine-readable reason on stdout;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .corpus import random_graph
from .graphs import (
    DirectedMultigraph,
    EdgeFunction,
    GraphError,
    GraphFormatError,
    NonnegIntMatrix,
    classify_vertices,
    graph_to_json_obj,
    parse_graph_with_weights,
    to_dot,
)
from .invariants import periodic_point_profile, sse_invariant_filter
from .splits import (
    insplit_transport_f,
    insplit_witness,
    outsplit_transport_f,
    outsplit_witness,
    parse_split_spec,
)
from .sse import (
    EssePair,
    find_theta_bijections,
    matrix_essse_search,
    matrix_essse_verify,
    parse_witness,
    sse_chain_search,
    verify_sse_witness,
    witness_to_json_obj,
)
from .weights import (
    lift_edge_function,
    transport_g_from_h,
    weights_from_f_E12,
    weights_from_f_E21,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from None


def _load_json(path: str) -> object:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON: {exc}") from None


def _load_graph(path: str) -> tuple[DirectedMultigraph, EdgeFunction | None]:
    try:
        return parse_graph_with_weights(_read(path))
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from None


def _load_matrix(path: str) -> NonnegIntMatrix:
    return NonnegIntMatrix.from_json_obj(_load_json(path))


def _load_weight_map(path: str, graph: DirectedMultigraph) -> EdgeFunction:
    """A weight file is either a graph file with weights on every edge or a
    bare {"weights": {edge-id: int}} map bound to the expected graph."""
    obj = _load_json(path)
    if isinstance(obj, dict) and "weights" in obj and "edges" not in obj:
        wmap = obj["weights"]
        if not isinstance(wmap, dict):
            raise GraphFormatError(f'{path}: "weights" must be an object')
        return EdgeFunction(graph, {k: v for k, v in wmap.items()})
    g, fn = _load_graph(path)
    if fn is None:
        raise GraphFormatError(f"{path}: no weights present")
    return fn


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _weight_obj(fn: EdgeFunction) -> dict:
    return {eid: fn(eid) for eid in fn.graph.edge_ids()}


# -- subcommands -------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    g, fn = _load_graph(args.graph)
    _emit(
        {
            "valid": True,
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "row_finite": g.row_finite,
            "weighted": fn is not None,
        }
    )
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    g, _ = _load_graph(args.graph)
    sources, sinks = classify_vertices(g)
    _emit({"sources": list(sources), "sinks": list(sinks)})
    return EXIT_OK


def _cmd_split(args: argparse.Namespace, kind: str) -> int:
    g, _ = _load_graph(args.graph)
    spec = parse_split_spec(_read(args.spec))
    if spec.kind != kind:
        raise GraphFormatError(f"{args.spec}: expected an {kind} spec, found {spec.kind!r}")
    f = _load_weight_map(args.weights, g) if args.weights else None
    bundle = insplit_witness(g, spec) if kind == "insplit" else outsplit_witness(g, spec)
    if f is not None:
        if kind == "insplit":
            g2 = insplit_transport_f(g, spec, f)
            h, _ = weights_from_f_E21(bundle.witness, f, bundle.phi2)
        else:
            g2, h = outsplit_transport_f(g, spec, f)
    out: dict = {
        "e2": graph_to_json_obj(bundle.e2, g2 if f is not None else None),
        "vertex_origin": {k: list(v) for k, v in bundle.application.vertex_origin.items()},
        "edge_origin": {k: list(v) for k, v in bundle.application.edge_origin.items()},
    }
    if args.witness:
        out["e3"] = graph_to_json_obj(bundle.e3)
        out["witness"] = witness_to_json_obj(bundle.witness)
        out["phi1"] = dict(bundle.phi1)
        out["phi2"] = dict(bundle.phi2)
        if f is not None:
            out["h"] = _weight_obj(h)
    _emit(out)
    return EXIT_OK


def cmd_insplit(args: argparse.Namespace) -> int:
    return _cmd_split(args, "insplit")


def cmd_outsplit(args: argparse.Namespace) -> int:
    return _cmd_split(args, "outsplit")


def cmd_sse_verify(args: argparse.Namespace) -> int:
    e1, _ = _load_graph(args.e1)
    e2, _ = _load_graph(args.e2)
    w = parse_witness(_read(args.witness))
    report = verify_sse_witness(e1, e2, w)
    _emit(report.to_json_obj())
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_theta_search(args: argparse.Namespace) -> int:
    e1, _ = _load_graph(args.e1)
    e2, _ = _load_graph(args.e2)
    e3, _ = _load_graph(args.e3)
    obj = _load_json(args.sides)
    if not isinstance(obj, dict):
        raise GraphFormatError(f"{args.sides}: sides file must be an object")
    for key in ("side1", "side2", "e21", "e12"):
        if not isinstance(obj.get(key), list):
            raise GraphFormatError(f'{args.sides}: "{key}" must be a list')
    for key in ("vmap1", "vmap2"):
        if not isinstance(obj.get(key), dict):
            raise GraphFormatError(f'{args.sides}: "{key}" must be an object')
    result = find_theta_bijections(
        e1,
        e2,
        e3,
        obj["side1"],
        obj["side2"],
        obj["e21"],
        obj["e12"],
        obj["vmap1"],
        obj["vmap2"],
    )
    if result is None:
        _emit({"status": "absent", "reason": "fiber counts differ"})
        return EXIT_NEGATIVE
    theta1, theta2 = result
    _emit(
        {
            "status": "found",
            "theta1": {k: list(v) for k, v in theta1.items()},
            "theta2": {k: list(v) for k, v in theta2.items()},
        }
    )
    return EXIT_OK


def cmd_lift(args: argparse.Namespace) -> int:
    w = parse_witness(_read(args.witness))
    g = _load_weight_map(args.g, w.implied_graph2())
    f = _load_weight_map(args.f, w.implied_graph1()) if args.f else None
    outcome = lift_edge_function(w, g, f)
    _emit(outcome.to_json_obj())
    return EXIT_OK if outcome.feasible else EXIT_NEGATIVE


def cmd_transport(args: argparse.Namespace) -> int:
    w = parse_witness(_read(args.witness))
    if args.h:
        h = _load_weight_map(args.h, w.e3)
        g = transport_g_from_h(w, h)
        _emit({"g": _weight_obj(g)})
        return EXIT_OK
    f = _load_weight_map(args.f, w.implied_graph1())
    slot = 0 if args.phi_side == "e12" else 1
    phi = {eid: pair[slot] for eid, pair in w.theta1.items()}
    builder = weights_from_f_E12 if args.phi_side == "e12" else weights_from_f_E21
    h, g = builder(w, f, phi)
    _emit({"h": _weight_obj(h), "g": _weight_obj(g)})
    return EXIT_OK


def cmd_matrix_verify(args: argparse.Namespace) -> int:
    pair = EssePair(
        _load_matrix(args.a), _load_matrix(args.b), _load_matrix(args.r), _load_matrix(args.s)
    )
    ok = matrix_essse_verify(pair)
    _emit({"equivalent": ok})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_matrix_search(args: argparse.Namespace) -> int:
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    found = matrix_essse_search(a, b, args.bound)
    if found is None:
        _emit({"status": "absent", "entry_bound": args.bound})
        return EXIT_NEGATIVE
    r, s = found
    _emit({"status": "found", "r": r.to_json_obj(), "s": s.to_json_obj()})
    return EXIT_OK


def cmd_chain_search(args: argparse.Namespace) -> int:
    e1, _ = _load_graph(args.e1)
    e2, _ = _load_graph(args.e2)
    result = sse_chain_search(
        e1,
        e2,
        max_steps=args.max_steps,
        max_vertices=args.max_vertices,
        max_parts=args.max_parts,
    )
    _emit(result.to_json_obj())
    return EXIT_OK if result.status == "found" else EXIT_NEGATIVE


def cmd_invariants(args: argparse.Namespace) -> int:
    g1, _ = _load_graph(args.g1)
    if args.g2 is None:
        _emit(periodic_point_profile(g1, args.n).to_json_obj())
        return EXIT_OK
    g2, _ = _load_graph(args.g2)
    result = sse_invariant_filter(g1, g2, args.n)
    _emit(result.to_json_obj())
    return EXIT_OK if result.passed else EXIT_NEGATIVE


def cmd_export(args: argparse.Namespace) -> int:
    obj = _load_json(args.graph)
    if isinstance(obj, dict) and "e3" in obj:
        w = parse_witness(_read(args.graph))
        sys.stdout.write(to_dot(w.e3, blue_edges=w.e21, red_edges=w.e12))
        return EXIT_OK
    g, fn = _load_graph(args.graph)
    sys.stdout.write(to_dot(g, weights=fn))
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    graphs = [
        random_graph(rng, max_vertices=args.max_vertices, max_edges=args.max_edges)
        for _ in range(args.count)
    ]
    _emit({"seed": args.seed, "graphs": [graph_to_json_obj(g) for g in graphs]})
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssekit",
        description="Strong shift equivalence toolkit for finite directed multigraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a graph file")
    p.add_argument("graph")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="list sources and sinks")
    p.add_argument("graph")
    p.set_defaults(func=cmd_classify)

    for kind, fn in (("insplit", cmd_insplit), ("outsplit", cmd_outsplit)):
        p = sub.add_parser(kind, help=f"apply an {kind} and optionally emit its witness")
        p.add_argument("graph")
        p.add_argument("--spec", required=True, help="split spec file")
        p.add_argument("--witness", action="store_true", help="include the intermediate graph and witness")
        p.add_argument("--weights", help="weight file to transport through the split")
        p.set_defaults(func=fn)

    p = sub.add_parser("sse-verify", help="check the four witness conditions")
    p.add_argument("e1")
    p.add_argument("e2")
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_sse_verify)

    p = sub.add_parser("theta-search", help="find canonical theta bijections from sides/classes")
    p.add_argument("e1")
    p.add_argument("e2")
    p.add_argument("e3")
    p.add_argument("--sides", required=True, help="file with side1/side2/e21/e12/vmap1/vmap2")
    p.set_defaults(func=cmd_theta_search)

    p = sub.add_parser("lift", help="solve for an intermediate weighting matching g (and f)")
    p.add_argument("--witness", required=True)
    p.add_argument("--g", required=True, help="side-2 weight file")
    p.add_argument("--f", help="side-1 weight file")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("transport", help="construct weightings across a witness")
    p.add_argument("--witness", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", help="intermediate weight file; emits g = h(theta2(.))")
    group.add_argument("--f", help="side-1 weight file; emits (h, g) via --phi-side")
    p.add_argument("--phi-side", choices=("e12", "e21"), help="witness class phi maps onto")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("matrix-verify", help="check A = R*S and S*R = B")
    for name in ("a", "b", "r", "s"):
        p.add_argument(name, metavar=name.upper())
    p.set_defaults(func=cmd_matrix_verify)

    p = sub.add_parser("matrix-search", help="search for R, S with bounded entries")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    p.add_argument("--bound", type=int, default=None, help="entry bound (default: max entry of A, B)")
    p.set_defaults(func=cmd_matrix_search)

    p = sub.add_parser("chain-search", help="bounded bidirectional split-chain search")
    p.add_argument("e1")
    p.add_argument("e2")
    p.add_argument("--max-steps", type=int, default=3)
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--max-parts", type=int, default=2)
    p.set_defaults(func=cmd_chain_search)

    p = sub.add_parser("invariants", help="periodic-point profile, or compare two graphs")
    p.add_argument("g1")
    p.add_argument("g2", nargs="?", default=None)
    p.add_argument("--n", type=int, default=6, help="largest period")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("export", help="DOT export of a graph or a witness file")
    p.add_argument("graph")
    p.add_argument("--dot", action="store_true", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("corpus", help="emit a seeded random graph corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--max-edges", type=int, default=12)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if getattr(args, "command", None) == "transport" and args.f and not args.phi_side:
        sys.stderr.write("error: --f needs --phi-side\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except GraphError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
