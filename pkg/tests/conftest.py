"""Shared fixtures: the four worked examples every suite leans on.

* fork: a 4-vertex graph w -> x -> {y, z} and its 5-vertex sibling obtained
  by doubling the middle vertex, with the hand-built intermediate witness.
* loop_feed: a loop at v fed by w, insplit at v (weights 1 and 2).
* fan: a loop at w feeding x which fans out to y and z, outsplit at x
  (weights 1..4).
* two_loops: a single vertex with two loops against the complete 2-vertex
  graph, with the hand-built witness whose lifting system is the canonical
  infeasible example.
"""

from __future__ import annotations

import pytest

from ssekit import DirectedMultigraph, Edge, EdgeFunction, SplitSpec, SseWitness


@pytest.fixture(scope="session")
def fork():
    e1 = DirectedMultigraph(
        ("w", "x", "y", "z"),
        (Edge("e", "w", "x"), Edge("f", "x", "y"), Edge("g", "x", "z")),
    )
    e2 = DirectedMultigraph(
        ("W", "X1", "X2", "Y", "Z"),
        (
            Edge("e1", "W", "X1"),
            Edge("e2", "W", "X2"),
            Edge("fb", "X1", "Y"),
            Edge("gb", "X2", "Z"),
        ),
    )
    e3 = DirectedMultigraph(
        ("w", "x", "y", "z", "W", "X1", "X2", "Y", "Z"),
        (
            Edge("w>W", "w", "W"),
            Edge("x>X1", "x", "X1"),
            Edge("x>X2", "x", "X2"),
            Edge("y>Y", "y", "Y"),
            Edge("z>Z", "z", "Z"),
            Edge("W>x", "W", "x"),
            Edge("X1>y", "X1", "y"),
            Edge("X2>z", "X2", "z"),
        ),
    )
    witness = SseWitness(
        e3,
        side1=("w", "x", "y", "z"),
        side2=("W", "X1", "X2", "Y", "Z"),
        e21=("w>W", "x>X1", "x>X2", "y>Y", "z>Z"),
        e12=("W>x", "X1>y", "X2>z"),
        vmap1={"w": "w", "x": "x", "y": "y", "z": "z"},
        vmap2={"W": "W", "X1": "X1", "X2": "X2", "Y": "Y", "Z": "Z"},
        theta1={"e": ("W>x", "w>W"), "f": ("X1>y", "x>X1"), "g": ("X2>z", "x>X2")},
        theta2={
            "e1": ("x>X1", "W>x"),
            "e2": ("x>X2", "W>x"),
            "fb": ("y>Y", "X1>y"),
            "gb": ("z>Z", "X2>z"),
        },
    )
    return e1, e2, e3, witness


@pytest.fixture(scope="session")
def loop_feed():
    g = DirectedMultigraph(("v", "w"), (Edge("a", "v", "v"), Edge("b", "w", "v")))
    f = EdgeFunction(g, {"a": 1, "b": 2})
    spec = SplitSpec("insplit", {"v": (("a",), ("b",))})
    return g, f, spec


@pytest.fixture(scope="session")
def fan():
    g = DirectedMultigraph(
        ("w", "x", "y", "z"),
        (Edge("a", "w", "w"), Edge("b", "w", "x"), Edge("c", "x", "y"), Edge("d", "x", "z")),
    )
    f = EdgeFunction(g, {"a": 1, "b": 2, "c": 3, "d": 4})
    spec = SplitSpec("outsplit", {"w": (("a", "b"),), "x": (("c",), ("d",))})
    return g, f, spec


@pytest.fixture(scope="session")
def two_loops():
    e1 = DirectedMultigraph(("v",), (Edge("p", "v", "v"), Edge("q", "v", "v")))
    e2 = DirectedMultigraph(
        ("V1", "V2"),
        (
            Edge("l1", "V1", "V1"),
            Edge("m12", "V1", "V2"),
            Edge("m21", "V2", "V1"),
            Edge("l2", "V2", "V2"),
        ),
    )
    e3 = DirectedMultigraph(
        ("v", "V1", "V2"),
        (Edge("a", "v", "V1"), Edge("b", "v", "V2"), Edge("c", "V1", "v"), Edge("d", "V2", "v")),
    )
    witness = SseWitness(
        e3,
        side1=("v",),
        side2=("V1", "V2"),
        e21=("a", "b"),
        e12=("c", "d"),
        vmap1={"v": "v"},
        vmap2={"V1": "V1", "V2": "V2"},
        theta1={"p": ("c", "a"), "q": ("d", "b")},
        theta2={"l1": ("a", "c"), "m12": ("b", "c"), "m21": ("a", "d"), "l2": ("b", "d")},
    )
    g_bad = EdgeFunction(e2, {"l1": 1, "m12": 2, "m21": 3, "l2": 5})
    g_good = EdgeFunction(e2, {"l1": 1, "m12": 2, "m21": 3, "l2": 4})
    return e1, e2, e3, witness, g_bad, g_good


@pytest.fixture(scope="session")
def funnel():
    """Two sources into y, then y -> z: the insplit whose weightings do not
    pull back (the copies of e land on distinct new vertices)."""
    g = DirectedMultigraph(
        ("w", "x", "y", "z"),
        (Edge("wy", "w", "y"), Edge("xy", "x", "y"), Edge("e", "y", "z")),
    )
    spec = SplitSpec("insplit", {"y": (("wy",), ("xy",)), "z": (("e",),)})
    return g, spec
