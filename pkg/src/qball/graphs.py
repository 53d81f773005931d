"""Directed graphs, quantum double suspension and path bookkeeping.

The ball graphs ``E_n`` have vertices ``v0 .. vn`` (``v0`` is the sink) and one
edge ``e_ij`` from ``v_i`` to ``v_j`` whenever ``i >= j`` and ``i != 0``.  Every
finite path ending at a fixed vertex is a strictly descending vertex chain
with a loop exponent at each chain vertex, which is what
:class:`LoopEncodedPath` stores.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "GraphError",
    "Edge",
    "DirectedGraph",
    "Path",
    "LoopEncodedPath",
    "PathClass",
    "SHORT_LABELS",
    "vertex_id",
    "edge_id",
    "vertex_index",
    "point_graph",
    "double_suspension",
    "ball_graph",
    "hereditary_saturated_sets",
    "quotient_graph",
    "enumerate_paths",
    "path_classes",
    "basis_size",
]


class GraphError(ValueError):
    """Raised for malformed graphs or violated graph preconditions."""


# Letter names used for the small balls: E_1 (quantum disc) and E_2 (4-ball).
SHORT_LABELS: dict[int, dict[str, str]] = {
    1: {"b": "e11", "e": "e10", "v": "v1", "w": "v0"},
    2: {"a": "e22", "b": "e11", "c": "e21", "d": "e20", "e": "e10",
        "u": "v2", "v": "v1", "w": "v0"},
}

_VERTEX_RE = re.compile(r"^v(\d+)$")


def vertex_id(i: int) -> str:
    return f"v{i}"


def edge_id(i: int, j: int) -> str:
    if i < 10 and j < 10:
        return f"e{i}{j}"
    return f"e{i}_{j}"


def vertex_index(v: str) -> int:
    m = _VERTEX_RE.match(v)
    if m is None:
        raise GraphError(f"vertex {v!r} is not of the form v<i>")
    return int(m.group(1))


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """A finite path; ``edges`` is empty for the vertex path at ``source``."""

    edges: tuple[str, ...]
    source: str
    range: str

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge ids")
        vs = set(self.vertices)
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.id} has an endpoint outside the vertex set")

    # -- lookups -----------------------------------------------------------

    @cached_property
    def _edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _vertex_pos(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def _edge_pos(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @cached_property
    def _in(self) -> dict[str, tuple[Edge, ...]]:
        into: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            into[e.dst].append(e)
        return {v: tuple(es) for v, es in into.items()}

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_map[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_pos

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_map

    def vertex_position(self, v: str) -> int:
        return self._vertex_pos[v]

    def edge_position(self, eid: str) -> int:
        return self._edge_pos[eid]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[v]

    def is_sink(self, v: str) -> bool:
        return not self._out[v]

    def reachable(self, v: str) -> frozenset[str]:
        """All ``w`` with ``v >= w``: there is a path (possibly empty) from v to w."""
        seen = {v}
        stack = [v]
        while stack:
            for e in self._out[stack.pop()]:
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return frozenset(seen)

    # -- paths -------------------------------------------------------------

    def vertex_path(self, v: str) -> Path:
        if v not in self._vertex_pos:
            raise GraphError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, edges: Sequence[str]) -> Path:
        edges = tuple(edges)
        if not edges:
            raise GraphError("use vertex_path for zero-length paths")
        es = [self.edge(x) for x in edges]
        for a, b in zip(es, es[1:]):
            if a.dst != b.src:
                raise GraphError(f"edges {a.id}, {b.id} do not compose")
        return Path(edges, es[0].src, es[-1].dst)

    # -- hereditary / saturated -------------------------------------------

    def is_hereditary(self, h: Iterable[str]) -> bool:
        h = set(h)
        return all(self.reachable(w) <= h for w in h)

    def is_saturated(self, h: Iterable[str]) -> bool:
        h = set(h)
        for v in self.vertices:
            if v in h or self.is_sink(v):
                continue
            if all(e.dst in h for e in self._out[v]):
                return False
        return True

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> DirectedGraph:
        try:
            return cls(
                tuple(data["vertices"]),
                tuple(Edge(e["id"], e["src"], e["dst"]) for e in data["edges"]),
            )
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from None

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> DirectedGraph:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# construction


def point_graph() -> DirectedGraph:
    """The single-vertex graph, whose algebra is C."""
    return DirectedGraph((vertex_id(0),), ())


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def double_suspension(g: DirectedGraph) -> DirectedGraph:
    """Add a top vertex with one edge to every vertex, itself included.

    The new vertex is named ``v<k>`` with ``k`` the old vertex count, and the
    edge to the vertex at position ``j`` is ``e_kj``; on ``E_{n-1}`` this
    yields exactly ``E_n``.
    """
    k = len(g.vertices)
    top = _fresh(vertex_id(k), set(g.vertices))
    vertices = g.vertices + (top,)
    taken = {e.id for e in g.edges}
    new_edges = []
    for j, target in enumerate(vertices):
        eid = _fresh(edge_id(k, j), taken)
        taken.add(eid)
        new_edges.append(Edge(eid, top, target))
    # keep e_kk first among the new edges, matching ball_graph's ordering
    new_edges.insert(0, new_edges.pop())
    return DirectedGraph(vertices, g.edges + tuple(new_edges))


def ball_graph(n: int) -> DirectedGraph:
    """The graph E_n of the quantum 2n-ball."""
    if n < 1:
        raise GraphError("ball_graph needs n >= 1; the point graph is point_graph()")
    vertices = tuple(vertex_id(i) for i in range(n + 1))
    edges = []
    for i in range(1, n + 1):
        edges.append(Edge(edge_id(i, i), vertex_id(i), vertex_id(i)))
        for j in range(i):
            edges.append(Edge(edge_id(i, j), vertex_id(i), vertex_id(j)))
    return DirectedGraph(vertices, tuple(edges))


def hereditary_saturated_sets(g: DirectedGraph) -> list[frozenset[str]]:
    """Every vertex subset that is both hereditary and saturated (brute force)."""
    out = []
    for r in range(len(g.vertices) + 1):
        for combo in itertools.combinations(g.vertices, r):
            if g.is_hereditary(combo) and g.is_saturated(combo):
                out.append(frozenset(combo))
    return out


def quotient_graph(g: DirectedGraph, h: Iterable[str]) -> DirectedGraph:
    """Remove ``h`` and every edge touching it."""
    h = frozenset(h)
    if not h <= set(g.vertices):
        raise GraphError("quotient set contains unknown vertices")
    if not (g.is_hereditary(h) and g.is_saturated(h)):
        raise GraphError(f"{sorted(h)} is not hereditary and saturated")
    return DirectedGraph(
        tuple(v for v in g.vertices if v not in h),
        tuple(e for e in g.edges if e.src not in h and e.dst not in h),
    )


# ---------------------------------------------------------------------------
# loop-encoded paths


@dataclass(frozen=True)
class LoopEncodedPath:
    """A path ``e_{i1 i1}^{m1} e_{i1 i2} e_{i2 i2}^{m2} ... e_{it end}``.

    ``chain`` holds the pairs ``(i_t, m_t)`` in strictly decreasing vertex
    order; the end vertex carries no exponent.  Canonical basis order is
    given by :meth:`sort_key`.
    """

    chain: tuple[tuple[int, int], ...]
    end: int

    def __post_init__(self) -> None:
        idx = [i for i, _ in self.chain] + [self.end]
        if any(a <= b for a, b in zip(idx, idx[1:])):
            raise GraphError(f"chain {self.chain} -> v{self.end} is not strictly descending")
        if any(m < 0 for _, m in self.chain):
            raise GraphError("loop exponents must be nonnegative")

    @property
    def vertex_chain(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.chain)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.chain)

    @property
    def source(self) -> int:
        return self.chain[0][0] if self.chain else self.end

    def exponent(self, i: int) -> int | None:
        for j, m in self.chain:
            if j == i:
                return m
        return None

    def sort_key(self) -> tuple:
        return (self.vertex_chain, self.exponents)

    def max_exponent(self) -> int:
        return max(self.exponents, default=0)

    def edge_ids(self) -> tuple[str, ...]:
        idx = self.vertex_chain + (self.end,)
        out: list[str] = []
        for t, (i, m) in enumerate(self.chain):
            out.extend([edge_id(i, i)] * m)
            out.append(edge_id(i, idx[t + 1]))
        return tuple(out)

    def to_path(self, g: DirectedGraph) -> Path:
        edges = self.edge_ids()
        if not edges:
            return g.vertex_path(vertex_id(self.end))
        return g.path(edges)

    @classmethod
    def from_path(cls, g: DirectedGraph, p: Path) -> LoopEncodedPath:
        chain: list[tuple[int, int]] = []
        loops = 0
        for eid in p.edges:
            e = g.edge(eid)
            i, j = vertex_index(e.src), vertex_index(e.dst)
            if i == j:
                loops += 1
            else:
                chain.append((i, loops))
                loops = 0
        if loops:
            raise GraphError("path ends with loops at its range vertex; not loop-encodable")
        return cls(tuple(chain), vertex_index(p.range))

    def label(self, labels: Mapping[str, str] | None = None) -> str:
        """Render as e.g. ``e22^2 e21 e11^0 e10`` (or ``a^2 c b^0 e``)."""
        if not self.chain:
            return vertex_id(self.end)
        names = {v: k for k, v in (labels or {}).items()}
        idx = self.vertex_chain + (self.end,)
        parts = []
        for t, (i, m) in enumerate(self.chain):
            loop = names.get(edge_id(i, i), edge_id(i, i))
            parts.append(f"{loop}^{m}")
            parts.append(names.get(edge_id(i, idx[t + 1]), edge_id(i, idx[t + 1])))
        return " ".join(parts)


def _ball_structure(g: DirectedGraph) -> dict[int, dict[int, str]]:
    """Map ``i -> {j: edge id}`` after checking the graph is E_n-shaped."""
    down: dict[int, dict[int, str]] = {vertex_index(v): {} for v in g.vertices}
    for e in g.edges:
        i, j = vertex_index(e.src), vertex_index(e.dst)
        if j > i:
            raise GraphError(f"edge {e.id} climbs from v{i} to v{j}")
        if j in down[i]:
            raise GraphError(f"two edges from v{i} to v{j}")
        down[i][j] = e.id
    return down


def enumerate_paths(g: DirectedGraph, end_vertex: str, cutoff: int) -> list[LoopEncodedPath]:
    """All paths ending at ``end_vertex`` with every loop exponent <= cutoff.

    Paths carry no loops at the end vertex itself (for the sink this is
    automatic).  Output is in canonical order: by vertex chain, then by
    exponent tuple.
    """
    if cutoff < 0:
        raise GraphError("cutoff must be >= 0")
    if not g.has_vertex(end_vertex):
        raise GraphError(f"unknown vertex {end_vertex!r}")
    down = _ball_structure(g)
    end = vertex_index(end_vertex)

    chains: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...]) -> None:
        chains.append(chain)
        head = chain[0] if chain else end
        for i in sorted(down):
            if i > head and head in down[i]:
                extend((i,) + chain)

    extend(())
    out = []
    for chain in chains:
        ranges = [range(cutoff + 1) if i in down[i] else range(1) for i in chain]
        for ms in itertools.product(*ranges):
            out.append(LoopEncodedPath(tuple(zip(chain, ms)), end))
    out.sort(key=LoopEncodedPath.sort_key)
    return out


@dataclass(frozen=True)
class PathClass:
    """Paths equal up to loop counts: a vertex chain with loop slots."""

    chain: tuple[int, ...]
    end: int
    slots: int

    def label(self, labels: Mapping[str, str] | None = None) -> str:
        if not self.chain:
            return vertex_id(self.end)
        names = {v: k for k, v in (labels or {}).items()}
        idx = self.chain + (self.end,)
        parts = []
        for t, i in enumerate(self.chain):
            parts.append(names.get(edge_id(i, i), edge_id(i, i)) + "*")
            parts.append(names.get(edge_id(i, idx[t + 1]), edge_id(i, idx[t + 1])))
        return " ".join(parts)


def path_classes(g: DirectedGraph, end_vertex: str | None = None) -> list[PathClass]:
    """Loop-equivalence classes of paths ending at ``end_vertex`` (default: v0)."""
    end_vertex = end_vertex or vertex_id(0)
    down = _ball_structure(g)
    seen: dict[tuple[int, ...], PathClass] = {}
    for p in enumerate_paths(g, end_vertex, 0):
        ch = p.vertex_chain
        seen[ch] = PathClass(ch, p.end, sum(1 for i in ch if i in down[i]))
    return list(seen.values())


def basis_size(g: DirectedGraph, end_vertex: str, cutoff: int) -> int:
    """Class-sum formula: sum over classes of (cutoff + 1) ** slots."""
    return sum((cutoff + 1) ** c.slots for c in path_classes(g, end_vertex))
