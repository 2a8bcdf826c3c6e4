"""Self-contained oracles for the tests.

Everything here is implemented from scratch against the definitions, on
purpose: expected values come from these, never from the code under test.
"""

import itertools


def adjacency(vertices, edges):
    adj = {v: set() for v in vertices}
    for u, w in edges:
        adj[u].add(w)
        adj[w].add(u)
    return adj


def floyd_warshall(vertices, edges):
    """All-pairs distances; missing key means unreachable."""
    dist = {v: {v: 0} for v in vertices}
    for u, w in edges:
        dist[u][w] = 1
        dist[w][u] = 1
    for mid in vertices:
        dmid = dist[mid]
        for a in vertices:
            da = dist[a]
            if mid not in da:
                continue
            through = da[mid]
            for b, rest in dmid.items():
                cand = through + rest
                if cand < da.get(b, float("inf")):
                    da[b] = cand
    return dist


def perm_treewidth(vertices, edges):
    """Exact treewidth by trying every elimination order.  Tiny graphs only."""
    vertices = list(vertices)
    best = len(vertices)
    for order in itertools.permutations(vertices):
        adj = adjacency(vertices, edges)
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                adj[a].discard(v)
                adj[a].update(nb - {a})
        best = min(best, width)
    return best


def naive_dominated(vertices, edges, members):
    """Is some closed neighborhood a superset of members?"""
    adj = adjacency(vertices, edges)
    members = set(members)
    return any(members <= (adj[w] | {w}) for w in vertices)


def naive_td_ok(graph_vertices, graph_edges, tree_edges, bags):
    """Both tree decomposition properties, checked directly on raw data."""
    for v in graph_vertices:
        holding = {t for t, b in bags.items() if v in b}
        if not holding:
            return False
        seen = {next(iter(holding))}
        grew = True
        while grew:
            grew = False
            for a, b in tree_edges:
                if a in seen and b in holding and b not in seen:
                    seen.add(b)
                    grew = True
                if b in seen and a in holding and a not in seen:
                    seen.add(a)
                    grew = True
        if seen != holding:
            return False
    for u, w in graph_edges:
        if not any(u in b and w in b for b in bags.values()):
            return False
    return True


# ---------------------------------------------------------- graph builders

def path_data(n, prefix="p"):
    vs = [f"{prefix}{i}" for i in range(n)]
    return vs, [(vs[i], vs[i + 1]) for i in range(n - 1)]


def cycle_data(n, prefix="c"):
    vs = [f"{prefix}{i}" for i in range(n)]
    return vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)]


def clique_data(n, prefix="k"):
    vs = [f"{prefix}{i}" for i in range(n)]
    return vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]


def star_data(leaves):
    vs = ["s"] + [f"l{i}" for i in range(leaves)]
    return vs, [("s", f"l{i}") for i in range(leaves)]


def grid_data(rows, cols):
    vs = [f"g{i}.{j}" for i in range(rows) for j in range(cols)]
    es = []
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows:
                es.append((f"g{i}.{j}", f"g{i + 1}.{j}"))
            if j + 1 < cols:
                es.append((f"g{i}.{j}", f"g{i}.{j + 1}"))
    return vs, es
