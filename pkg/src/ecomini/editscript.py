"""Graph edit scripts: one operation per line.

    AV          add a vertex (ids are assigned 0, 1, 2, ... and never reused)
    DV id       delete a vertex and its incident edges
    AE u v      add an edge, returning the next edge id
    DE id       delete an edge

``#`` starts a comment. :class:`GraphModel` replays a script host-side with
the same id assignment as the library's Graph class, which lets a generator
emit only valid operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple

_ARITY = {"AV": 0, "DV": 1, "AE": 2, "DE": 1}


class Op(NamedTuple):
    kind: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.args)])


def parse(text: str) -> list[Op]:
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        kind, rest = line[0], line[1:]
        if kind not in _ARITY or len(rest) != _ARITY[kind]:
            raise ValueError(f"line {lineno}: malformed operation {raw.strip()!r}")
        try:
            ops.append(Op(kind, tuple(int(a) for a in rest)))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer id in {raw.strip()!r}") from None
    return ops


def format_script(ops: list[Op]) -> str:
    return "".join(f"{op}\n" for op in ops)


@dataclass
class GraphModel:
    vertices: list[int] = field(default_factory=list)
    edges: dict[int, tuple[int, int]] = field(default_factory=dict)
    next_vertex: int = 0
    next_edge: int = 0

    def apply(self, op: Op) -> None:
        if op.kind == "AV":
            self.vertices.append(self.next_vertex)
            self.next_vertex += 1
        elif op.kind == "DV":
            (v,) = op.args
            self.vertices.remove(v)
            self.edges = {e: uv for e, uv in self.edges.items() if v not in uv}
        elif op.kind == "AE":
            u, v = op.args
            if u == v or u not in self.vertices or v not in self.vertices:
                raise ValueError(f"invalid edge {u}-{v}")
            self.edges[self.next_edge] = (u, v)
            self.next_edge += 1
        else:
            del self.edges[op.args[0]]


def generate(seed: int, length: int = 200, max_vertices: int = 15) -> list[Op]:
    """A random valid script that never holds more than ``max_vertices`` vertices."""
    rng = random.Random(seed)
    model = GraphModel()
    ops = []
    while len(ops) < length:
        n = len(model.vertices)
        choices = []
        if n < max_vertices:
            choices += ["AV"] * (4 if n < 4 else 2)
        if n:
            choices += ["DV"]
        if n >= 2:
            choices += ["AE"] * 4
        if model.edges:
            choices += ["DE"] * 3
        kind = rng.choice(choices)
        if kind == "AV":
            op = Op("AV")
        elif kind == "DV":
            op = Op("DV", (rng.choice(model.vertices),))
        elif kind == "AE":
            op = Op("AE", tuple(rng.sample(model.vertices, 2)))
        else:
            op = Op("DE", (rng.choice(sorted(model.edges)),))
        model.apply(op)
        ops.append(op)
    return ops


def apply_to_graph(interp, graph, op: Op):
    """Run ``op`` on an interpreted Graph through the host API."""
    name = {"AV": "AddVertex", "DV": "DeleteVertex", "AE": "AddEdge", "DE": "DeleteEdge"}[op.kind]
    return interp.call_method(graph, name, list(op.args))
