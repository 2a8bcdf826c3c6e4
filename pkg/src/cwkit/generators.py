"""Constructive witnesses: low-palette expressions for paths, spiders, and
subdivided cliques, plus minor models pulled through a quasi-isometric
embedding.

The expression builders follow one inductive scheme: grow a path from its
far end with a temporary colour, join, then retire the temporary colour
into the interior colour.  At boundary lengths the verbatim scheme emits a
recolor whose target colour is not in use yet, so every builder finishes by
running normalize(), which realizes that step as a colour swap instead and
leaves the evaluated graph untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Mapping

from .errors import ContractError, InputError
from .expressions import CwExpr, Join, Leaf, Recolor, Union, normalize
from .graphs import Graph, closed_r_neighborhood, set_distance
from .quasiiso import QiMap, check_qi


# ------------------------------------------------------------ subdivisions

@dataclass(frozen=True)
class SubdivisionSpec:
    """A base graph plus a per-edge subdivision count."""

    base: Graph
    times: Mapping

    def __post_init__(self):
        canon = {}
        base_edges = set(self.base.edges)
        for e, count in dict(self.times).items():
            u, v = e
            key = (u, v) if u < v else (v, u)
            if key not in base_edges:
                raise InputError(f"subdivision count for non-edge {key!r}")
            if not isinstance(count, int) or count < 0:
                raise InputError(f"subdivision count for {key!r} must be an int >= 0")
            canon[key] = count
        for key in base_edges:
            canon.setdefault(key, 0)
        object.__setattr__(self, "times", canon)

    def count(self, u, v) -> int:
        return self.times[(u, v) if u < v else (v, u)]


def subdivision_path(a, b, count: int) -> list:
    """Vertex sequence from a to b once the edge is subdivided count times.

    Fresh vertices are named "<u>-<v>.<m>" with u the smaller endpoint and
    m counting from u's side, so both directions name the same vertices.
    """
    u, v = (a, b) if a < b else (b, a)
    names = [f"{u}-{v}.{m}" for m in range(1, count + 1)]
    return [a] + (names if a == u else names[::-1]) + [b]


def subdivide(spec: SubdivisionSpec) -> Graph:
    """Replace every edge of the base by a path, one per recorded count."""
    vertices = list(spec.base.vertices)
    edges = []
    for u, v in spec.base.edges:
        seq = subdivision_path(u, v, spec.count(u, v))
        for w in seq[1:-1]:
            if spec.base.has_vertex(w):
                raise InputError(f"subdivision vertex name {w!r} collides with the base")
        vertices.extend(seq[1:-1])
        edges.extend(zip(seq, seq[1:]))
    return Graph(vertices, edges)


def uniform_subdivision(base: Graph, count: int) -> SubdivisionSpec:
    return SubdivisionSpec(base, {e: count for e in base.edges})


def complete_graph(n: int) -> Graph:
    """K_n on vertices named "1".."n"."""
    names = [str(i) for i in range(1, n + 1)]
    return Graph(names, [(a, b) for i, a in enumerate(names) for b in names[i + 1:]])


# ------------------------------------------------------------------ paths

def _spare_color(palette: int, *taken) -> int:
    free = sorted(set(range(1, palette + 1)) - set(taken))
    if not free:
        raise ContractError(f"no spare colour in palette {palette} outside {sorted(set(taken))}")
    return free[0]


def _path_node(seq, x_color: int, y_color: int, inner_color: int, palette: int):
    """Unnormalized expression for the path along seq.

    seq[0] ends with x_color, seq[-1] with y_color, everything between with
    inner_color.  Temporary far-end colours alternate between two spares.
    """
    length = len(seq) - 1
    temp = [None] * (length + 1)
    temp[length] = y_color
    for m in range(length - 1, 0, -1):
        temp[m] = _spare_color(palette, x_color, temp[m + 1], inner_color)
    node = Join(x_color, temp[1], Union(Leaf(seq[0], x_color), Leaf(seq[1], temp[1])))
    for m in range(2, length + 1):
        node = Join(temp[m], temp[m - 1], Union(node, Leaf(seq[m], temp[m])))
        node = Recolor(temp[m - 1], inner_color, node)
    return node


def gen_path(x, y, length: int, palette: int, x_color: int, y_color: int,
             inner_color: int, interior_names=None) -> CwExpr:
    """Express the path of the given length from x to y on a small palette.

    Needs palette >= 3, y's colour distinct from both others, and a fourth
    colour left over; x's colour may equal the interior colour.  Interior
    vertices default to the subdivision naming of the edge xy.
    """
    if length < 1:
        raise InputError("path length must be >= 1")
    if palette < 3:
        raise InputError("palette must have at least 3 colours")
    for c in (x_color, y_color, inner_color):
        if not 1 <= c <= palette:
            raise InputError(f"colour {c} out of range 1..{palette}")
    if y_color in (x_color, inner_color):
        raise InputError("the far endpoint colour must differ from the near and interior colours")
    if not set(range(1, palette + 1)) - {x_color, y_color, inner_color}:
        raise InputError("no spare colour: the palette must keep one colour unused by the endpoints "
                         "and interior")
    if x == y:
        raise InputError("path endpoints must differ")
    if interior_names is None:
        seq = subdivision_path(x, y, length - 1)
    else:
        interior_names = list(interior_names)
        if len(interior_names) != length - 1:
            raise InputError(f"need {length - 1} interior names, got {len(interior_names)}")
        seq = [x] + interior_names + [y]
    if len(set(seq)) != len(seq):
        raise InputError("path vertex names must be distinct")
    return normalize(CwExpr(palette, _path_node(seq, x_color, y_color, inner_color, palette)))


# ----------------------------------------------------------------- spiders

def _spider_root(center, legs, t: int):
    """Unnormalized spider expression.

    legs[i] is the vertex list of leg i+1 from the centre outward, ending
    at the leaf.  Leaf of leg i gets colour i, every other vertex ends with
    colour t+1; colours t+2 and t+3 are scratch.
    """
    parts = [Leaf(center, t + 3)]
    for ell, leg in enumerate(legs, start=1):
        leaf = leg[-1]
        if len(leg) == 1:
            parts.append(Leaf(leaf, ell))
        else:
            toward_center = list(reversed(leg))  # leaf first, centre neighbor last
            parts.append(_path_node(toward_center, ell, t + 2, t + 1, t + 2))
    node = parts[0]
    for p in parts[1:]:
        node = Union(node, p)
    node = Join(t + 3, t + 2, node)
    for ell, leg in enumerate(legs, start=1):
        if len(leg) == 1:
            node = Join(t + 3, ell, node)
    node = Recolor(t + 3, t + 1, node)
    node = Recolor(t + 2, t + 1, node)
    return node


def gen_spider(t: int, leg_lengths) -> CwExpr:
    """A spider with t legs of the given lengths on palette t+3.

    The centre is named "c", the leaf of leg i is named "<i>" and carries
    colour i, interior vertices of leg i are named "<i>.<m>" counting from
    the centre and end up coloured t+1.
    """
    if t < 3:
        raise InputError("a spider needs at least 3 legs")
    leg_lengths = list(leg_lengths)
    if len(leg_lengths) != t:
        raise InputError(f"expected {t} leg lengths, got {len(leg_lengths)}")
    if any(not isinstance(n, int) or n < 1 for n in leg_lengths):
        raise InputError("leg lengths must be ints >= 1")
    legs = []
    for ell, n in enumerate(leg_lengths, start=1):
        legs.append([f"{ell}.{m}" for m in range(1, n)] + [str(ell)])
    return normalize(CwExpr(t + 3, _spider_root("c", legs, t)))


def spider_graph(t: int, leg_lengths) -> Graph:
    """The graph gen_spider's output evaluates to (same naming scheme)."""
    leg_lengths = list(leg_lengths)
    if t < 3 or len(leg_lengths) != t:
        raise InputError("bad spider shape")
    vertices = ["c"]
    edges = []
    for ell, n in enumerate(leg_lengths, start=1):
        seq = ["c"] + [f"{ell}.{m}" for m in range(1, n)] + [str(ell)]
        vertices.extend(seq[1:])
        edges.extend(zip(seq, seq[1:]))
    return Graph(vertices, edges)


# ------------------------------------------------------- subdivided cliques

def gen_subdivided_clique(n: int, times) -> CwExpr:
    """An expression for a subdivision of K_n on palette n+2.

    times is either one count for every edge or a map from int pairs (i, j)
    with 1 <= i < j <= n.  Branch vertex i is named "<i>" and coloured i;
    subdivision vertices use the "<u>-<v>.<m>" naming and end coloured n.

    Builds the star at vertex n first (a spider with n-1 legs), then adds
    the remaining subdivided edges one at a time with two scratch colours.
    """
    if n < 4:
        raise InputError("need n >= 4 branch vertices")
    pairs = [(i, j) for j in range(2, n + 1) for i in range(1, j)]
    if isinstance(times, int):
        counts = {p: times for p in pairs}
    else:
        counts = {}
        for key, val in dict(times).items():
            i, j = key
            if not (1 <= i < j <= n):
                raise InputError(f"bad edge key {key!r}, need 1 <= i < j <= {n}")
            counts[(i, j)] = val
        for p in pairs:
            counts.setdefault(p, 0)
    if any(not isinstance(v, int) or v < 0 for v in counts.values()):
        raise InputError("subdivision counts must be ints >= 0")

    t = n - 1  # spider legs; t+1 == n, t+2 == n+1, t+3 == n+2
    center = str(n)
    legs = []
    for ell in range(1, n):
        seq = subdivision_path(center, str(ell), counts[(ell, n)])
        legs.append(seq[1:])
    node = _spider_root(center, legs, t)

    for j in range(2, n):
        for i in range(1, j):
            count = counts[(i, j)]
            seq = subdivision_path(str(i), str(j), count)
            interiors = seq[1:-1]
            if count == 0:
                node = Join(i, j, node)
            elif count == 1:
                node = Union(node, Leaf(interiors[0], n + 1))
                node = Join(i, n + 1, node)
                node = Join(j, n + 1, node)
                node = Recolor(n + 1, n, node)
            else:
                path = _path_node(interiors, n + 1, n + 2, n, n + 2)
                node = Union(node, path)
                node = Join(i, n + 1, node)
                node = Join(j, n + 2, node)
                node = Recolor(n + 1, n, node)
                node = Recolor(n + 2, n, node)
    return normalize(CwExpr(n + 2, node))


# ------------------------------------------------------------ minor models

@dataclass(frozen=True)
class MinorModel:
    """Disjoint connected branch sets plus one connecting set per edge."""

    branch_sets: Mapping   # pattern vertex -> frozenset of host vertices
    edge_paths: Mapping    # (u, v) with u < v -> frozenset of host vertices

    def __post_init__(self):
        object.__setattr__(self, "branch_sets",
                           {v: frozenset(s) for v, s in dict(self.branch_sets).items()})
        object.__setattr__(self, "edge_paths",
                           {tuple(e): frozenset(s) for e, s in dict(self.edge_paths).items()})


def _subdivision_structure(source: Graph, pattern: Graph) -> dict:
    """Recognize source as a subdivision of pattern; map each edge to its path.

    Branch vertices must exist by name with matching degrees, every other
    vertex must be an interior vertex of degree two, and following the
    paths must realize each pattern edge exactly once.
    """
    branch = set(pattern.vertices)
    for v in branch:
        if not source.has_vertex(v):
            raise InputError(f"branch vertex {v!r} missing from the subdivision")
        if source.degree(v) != pattern.degree(v):
            raise InputError(f"branch vertex {v!r} has degree {source.degree(v)}, "
                             f"pattern needs {pattern.degree(v)}")
    for v in source.vertices:
        if v not in branch and source.degree(v) != 2:
            raise InputError(f"interior vertex {v!r} has degree {source.degree(v)}, expected 2")

    paths = {}
    for u in sorted(branch):
        for first in source.neighbors(u):
            prev, cur = u, first
            seq = [u]
            while cur not in branch:
                seq.append(cur)
                nxt = [w for w in source.neighbors(cur) if w != prev]
                if len(nxt) != 1:
                    raise InputError(f"interior vertex {cur!r} does not continue a path")
                prev, cur = cur, nxt[0]
            seq.append(cur)
            if cur == u:
                raise InputError(f"subdivided loop at {u!r}")
            key = (u, cur) if u < cur else (cur, u)
            if u < cur:
                if key in paths:
                    raise InputError(f"two parallel paths between {key[0]!r} and {key[1]!r}")
                paths[key] = seq
    pattern_edges = set(pattern.edges)
    if set(paths) != pattern_edges:
        raise InputError("subdivision paths do not realize exactly the pattern's edges")
    interior_total = sum(len(p) - 2 for p in paths.values())
    if len(source) != len(pattern) + interior_total:
        raise InputError("subdivision has vertices belonging to no path")
    return paths


def build_minor_model(h: Graph, g: Graph, f: QiMap, c: float) -> MinorModel:
    """Pull a model of h through the embedding f of a deep subdivision of h.

    f must run from a (4c(c+1)-1)-or-deeper subdivision of h into g and
    satisfy the distance bounds at parameter c.  Around every branch vertex
    a ball of radius c(c+1) is taken; the middle stretch of every
    subdivision path connects two balls.  Images of those sets, fattened by
    radius c in g, form the model.  Every separation and incidence fact the
    construction relies on is asserted numerically and a contract error
    names the first violated pair.
    """
    if c < 1:
        raise InputError("parameter c must be >= 1")
    if f.target != g:
        raise InputError("f must map into g")
    if f.c != c:
        raise InputError(f"f claims parameter {f.c}, expected {c}")
    source = f.source
    paths = _subdivision_structure(source, h)
    need = 4 * c * (c + 1)
    need_text = int(need) if need == int(need) else need
    for (u, v), seq in sorted(paths.items()):
        if len(seq) - 1 < need:
            raise InputError(f"subdivision too shallow: path {u!r}..{v!r} has length "
                             f"{len(seq) - 1}, need >= {need_text}")
    rep = check_qi(f)
    if not rep.bounds_ok:
        raise InputError(f"map violates the distance bounds at c={c}: {rep.bounds_witness}")

    z = c * (c + 1)
    cut = int(z)  # floor; z is integral for integral c
    balls = {v: closed_r_neighborhood(source, [v], z) for v in h.vertices}
    stretches = {}
    for e, seq in paths.items():
        last = len(seq) - 1
        stretches[e] = frozenset(seq[m] for m in range(cut, last - cut + 1))

    def apart(a, b, label_a, label_b):
        d = set_distance(source, a, b)
        if d < 2 * z:
            raise ContractError(f"{label_a} and {label_b} are at distance {d}, "
                                f"need >= {2 * z}")

    hv = sorted(h.vertices)
    for i, v in enumerate(hv):
        for w in hv[i + 1:]:
            apart(balls[v], balls[w], f"ball({v!r})", f"ball({w!r})")
    he = sorted(paths)
    for i, e in enumerate(he):
        for e2 in he[i + 1:]:
            apart(stretches[e], stretches[e2], f"stretch{e!r}", f"stretch{e2!r}")
    for e in he:
        for v in hv:
            if v in e:
                if stretches[e].isdisjoint(balls[v]):
                    raise ContractError(f"stretch{e!r} misses ball({v!r})")
            else:
                apart(stretches[e], balls[v], f"stretch{e!r}", f"ball({v!r})")

    def fatten(s):
        return closed_r_neighborhood(g, {f(v) for v in s}, c)

    branch_sets = {v: fatten(balls[v]) for v in hv}
    edge_paths = {e: fatten(stretches[e]) for e in he}

    def connected(s, label):
        inside = set(s)
        start = next(iter(inside))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w in inside and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(inside):
            raise ContractError(f"{label} is disconnected in the host")

    for v in hv:
        connected(branch_sets[v], f"model set of {v!r}")
    for e in he:
        connected(edge_paths[e], f"model path of {e!r}")
    for i, v in enumerate(hv):
        for w in hv[i + 1:]:
            if not branch_sets[v].isdisjoint(branch_sets[w]):
                raise ContractError(f"model sets of {v!r} and {w!r} intersect")
    for i, e in enumerate(he):
        for e2 in he[i + 1:]:
            if not edge_paths[e].isdisjoint(edge_paths[e2]):
                raise ContractError(f"model paths of {e!r} and {e2!r} intersect")
    for e in he:
        for v in hv:
            meets = not edge_paths[e].isdisjoint(branch_sets[v])
            if v in e and not meets:
                raise ContractError(f"model path of {e!r} misses the set of endpoint {v!r}")
            if v not in e and meets:
                raise ContractError(f"model path of {e!r} touches non-endpoint {v!r}")

    return MinorModel(branch_sets, edge_paths)


def model_to_json_dict(model: MinorModel) -> dict:
    return {
        "branch_sets": {str(v): sorted(s) for v, s in sorted(model.branch_sets.items())},
        "edge_paths": {f"{u}--{v}": sorted(s)
                       for (u, v), s in sorted(model.edge_paths.items())},
    }
