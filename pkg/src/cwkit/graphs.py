"""Immutable graphs, colourings, partitions, and metric helpers.

Vertex ids are opaque sortable values (strings in practice, small ints for
tree nodes).  Every iteration order below derives from their total order, so
identical inputs give byte-identical outputs everywhere in the library.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Mapping

from .errors import ContractError, InputError

#: Distance value for vertex pairs with no connecting path.  Kept as a
#: distinguished float so finite distances stay plain ints.
INFINITE: float = math.inf


class Graph:
    """A finite simple undirected graph with sorted adjacency."""

    __slots__ = ("_vertices", "_adj", "_edges", "_hash")

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        vs = sorted(set(vertices))
        vset = set(vs)
        adj = {v: set() for v in vs}
        for e in edges:
            u, v = e
            if u == v:
                raise InputError(f"loop at vertex {u!r}")
            if u not in vset or v not in vset:
                raise InputError(f"edge ({u!r}, {v!r}) has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = tuple(vs)
        self._adj = {v: tuple(sorted(adj[v])) for v in vs}
        self._edges = tuple(sorted((u, w) for u in vs for w in adj[u] if u < w))
        self._hash = None

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple:
        """Edges as (u, v) pairs with u < v, sorted."""
        return self._edges

    def neighbors(self, v) -> tuple:
        try:
            return self._adj[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def closed_neighborhood(self, v) -> frozenset:
        return frozenset(self.neighbors(v)) | {v}

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def has_edge(self, u, v) -> bool:
        return v in set(self.neighbors(u))

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def num_edges(self) -> int:
        return len(self._edges)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({len(self)} vertices, {len(self._edges)} edges)"


def bfs_distances(g: Graph, sources: Iterable) -> dict:
    """Multi-source BFS; returns distances for reached vertices only."""
    dist = {}
    queue = deque()
    for s in sources:
        if not g.has_vertex(s):
            raise InputError(f"unknown vertex {s!r}")
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        d = dist[u] + 1
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = d
                queue.append(w)
    return dist


def distance(g: Graph, u, v):
    """Shortest-path distance between u and v, INFINITE if disconnected."""
    if not g.has_vertex(v):
        raise InputError(f"unknown vertex {v!r}")
    return bfs_distances(g, [u]).get(v, INFINITE)


def set_distance(g: Graph, s: Iterable, t: Iterable):
    """min over a in s, b in t of distance(a, b); 0 when the sets meet."""
    s = set(s)
    t = set(t)
    if not s or not t:
        raise InputError("set_distance needs two nonempty sets")
    dist = bfs_distances(g, s)
    found = [dist[v] for v in t if v in dist]
    return min(found) if found else INFINITE


def weak_diameter(g: Graph, s: Iterable):
    """max over pairs in s of their distance measured in the whole graph."""
    s = sorted(set(s))
    if not s:
        raise InputError("weak_diameter of an empty set")
    worst = 0
    for a in s:
        dist = bfs_distances(g, [a])
        for b in s:
            d = dist.get(b, INFINITE)
            if d > worst:
                worst = d
    return worst


def closed_r_neighborhood(g: Graph, s: Iterable, r) -> frozenset:
    """All vertices at distance <= r from the set s (closed ball)."""
    if r < 0:
        raise InputError("neighborhood radius must be nonnegative")
    dist = bfs_distances(g, s)
    return frozenset(v for v, d in dist.items() if d <= r)


def connected_components(g: Graph) -> tuple:
    """Vertex sets of the components, sorted by their smallest vertex."""
    seen = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = frozenset(bfs_distances(g, [v]))
        seen |= comp
        comps.append(comp)
    return tuple(comps)


def is_connected(g: Graph) -> bool:
    return len(g) <= 1 or len(bfs_distances(g, [g.vertices[0]])) == len(g)


def is_dominated(g: Graph, s: Iterable) -> tuple:
    """Whether some vertex w has s inside its closed neighborhood.

    Returns (True, w) with the smallest such witness, or (False, None).
    """
    s = frozenset(s)
    if not s:
        raise InputError("is_dominated of an empty set")
    for v in s:
        if not g.has_vertex(v):
            raise InputError(f"unknown vertex {v!r}")
    for w in g.vertices:
        if s <= g.closed_neighborhood(w):
            return True, w
    return False, None


class ColoredGraph:
    """A graph together with a total colouring into 1..k."""

    __slots__ = ("graph", "k", "_colors")

    def __init__(self, graph: Graph, k: int, colors: Mapping):
        if k < 1:
            raise InputError("palette size k must be >= 1")
        colors = dict(colors)
        if set(colors) != set(graph.vertices):
            raise InputError("colouring must assign every vertex exactly once")
        for v, c in colors.items():
            if not isinstance(c, int) or not 1 <= c <= k:
                raise InputError(f"vertex {v!r} has colour {c!r}, outside 1..{k}")
        self.graph = graph
        self.k = k
        self._colors = colors

    @property
    def colors(self) -> dict:
        return self._colors

    def color_of(self, v) -> int:
        try:
            return self._colors[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def used_colors(self) -> frozenset:
        return frozenset(self._colors.values())

    def color_class(self, color: int) -> tuple:
        return tuple(v for v in self.graph.vertices if self._colors[v] == color)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.graph == other.graph and self.k == other.k
                and self._colors == other._colors)

    def __hash__(self) -> int:
        return hash((self.graph, self.k, tuple(sorted(self._colors.items()))))

    def __repr__(self) -> str:
        return f"ColoredGraph(k={self.k}, {self.graph!r})"


class Partition:
    """A named partition: part ids mapped to disjoint nonempty vertex sets."""

    __slots__ = ("_parts", "_vertex_to_part")

    def __init__(self, parts):
        if isinstance(parts, Mapping):
            items = parts.items()
        else:
            items = list(parts)
        store = {}
        v2p = {}
        for pid, members in items:
            members = frozenset(members)
            if not members:
                raise InputError(f"part {pid!r} is empty")
            if pid in store:
                raise InputError(f"duplicate part id {pid!r}")
            for v in members:
                if v in v2p:
                    raise InputError(f"vertex {v!r} appears in parts {v2p[v]!r} and {pid!r}")
                v2p[v] = pid
            store[pid] = members
        if not store:
            raise InputError("partition must have at least one part")
        self._parts = {pid: store[pid] for pid in sorted(store)}
        self._vertex_to_part = v2p

    @property
    def ids(self) -> tuple:
        return tuple(self._parts)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self._vertex_to_part)

    def part(self, pid) -> frozenset:
        try:
            return self._parts[pid]
        except KeyError:
            raise InputError(f"unknown part id {pid!r}") from None

    def part_of(self, v):
        try:
            return self._vertex_to_part[v]
        except KeyError:
            raise InputError(f"vertex {v!r} is in no part") from None

    def items(self) -> tuple:
        return tuple(self._parts.items())

    def as_dict(self) -> dict:
        return dict(self._parts)

    def __iter__(self):
        return iter(self._parts.items())

    def __len__(self) -> int:
        return len(self._parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self) -> int:
        return hash(tuple(self._parts.items()))

    def __repr__(self) -> str:
        return f"Partition({len(self._parts)} parts over {len(self._vertex_to_part)} vertices)"


def singleton_partition(g: Graph) -> Partition:
    """Each vertex its own part, part id = vertex id."""
    return Partition({v: {v} for v in g.vertices})


def quotient(g: Graph, p: Partition) -> tuple:
    """Contract each part to one vertex; returns (graph, vertex -> part id map).

    Quotient vertices are the part ids; two parts are adjacent when any edge
    of g runs between them.  No loops, no multiplicities.
    """
    if p.vertices != set(g.vertices):
        raise InputError("partition does not cover exactly the graph's vertices")
    proj = {v: p.part_of(v) for v in g.vertices}
    qedges = set()
    for u, v in g.edges:
        pu, pv = proj[u], proj[v]
        if pu != pv:
            qedges.add((pu, pv) if pu < pv else (pv, pu))
    return Graph(p.ids, qedges), proj


def is_monochromatic(cg: ColoredGraph, p: Partition) -> bool:
    """Whether every part of p is single-coloured under cg."""
    for _, members in p:
        colors = {cg.color_of(v) for v in members}
        if len(colors) > 1:
            return False
    return True


def induced_coloring(cg: ColoredGraph, p: Partition) -> dict:
    """The colour each part inherits; contract error if a part is mixed."""
    out = {}
    for pid, members in p:
        colors = {cg.color_of(v) for v in members}
        if len(colors) != 1:
            raise ContractError(f"part {pid!r} is not monochromatic: colours {sorted(colors)}")
        out[pid] = next(iter(colors))
    return out


def graph_to_json_dict(g: Graph, colors: Mapping | None = None) -> dict:
    """Canonical interchange form: sorted vertices, sorted (min,max) edges."""
    obj = {
        "vertices": list(g.vertices),
        "edges": [[u, v] for u, v in g.edges],
    }
    if colors is not None:
        obj["colors"] = {str(v): colors[v] for v in g.vertices}
    return obj


def graph_from_json_dict(obj: Mapping) -> tuple:
    """Inverse of graph_to_json_dict; returns (graph, colors or None)."""
    try:
        vertices = obj["vertices"]
        edges = [tuple(e) for e in obj["edges"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph object: {exc}") from None
    g = Graph(vertices, edges)
    colors = obj.get("colors")
    if colors is not None:
        colors = {v: int(c) for v, c in colors.items()}
    return g, colors


def _dot_quote(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: Graph, colors: Mapping | None = None, name: str = "G") -> str:
    """GraphViz text for the graph; colour shown in the vertex label."""
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        label = f"{v}:{colors[v]}" if colors is not None else str(v)
        lines.append(f"  {_dot_quote(v)} [label={_dot_quote(label)}];")
    for u, v in g.edges:
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
