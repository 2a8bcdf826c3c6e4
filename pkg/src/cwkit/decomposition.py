"""From a strict expression to a dominated monochromatic partition.

decompose() runs one structural recursion over the expression and maintains,
for every subexpression, a partition of its vertices into single-coloured
dominated parts plus a tree decomposition of the quotient.  Two invariants
carry the induction: a distinguished "rainbow" node whose bag holds a part
of every colour in use, and, per colour, connectedness of the tree nodes
whose bags meet that colour.

verify_result() re-derives every claimed property from the evaluated graph
alone, so tests can mutate results and watch the right check fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections.abc import Mapping

from .errors import ContractError, InputError
from .expressions import (CwExpr, Join, Leaf, Recolor, Union, fold_postorder,
                          validate_strict)
from .graphs import (ColoredGraph, Graph, Partition, is_dominated, quotient)
from .treedecomp import TreeDecomposition, is_tree, td_from_json_dict, td_to_dot, td_to_json_dict

# Why each strictness rule matters to the construction below; quoted in the
# error raised on non-strict input.
_RULE_WHY = {
    "DUP_VERTEX": "parts are keyed by leaf vertex ids, which must be unique",
    "COLOR_RANGE": "bag size is bounded by the palette, so colours must stay in 1..k",
    "OP2_I_UNUSED": "a recolor must change something or the recursion makes no progress",
    "OP2_J_UNUSED": "the rainbow bag must already hold a part of the target colour",
    "OP3_NO_NEW_EDGE": "a join must add an edge so both colour classes are nonempty "
                       "and each merged part gains a domination witness",
    "EMPTY_OPERAND": "every operand must contribute at least one part",
}


@dataclass(frozen=True)
class DecompositionResult:
    """Partition, induced part colours, quotient tree decomposition, rainbow node."""

    partition: Partition
    part_colors: Mapping
    tree: TreeDecomposition
    rainbow_node: int


class _State:
    __slots__ = ("parts", "colors", "nodes", "edges", "bags", "rainbow")

    def __init__(self, parts, colors, nodes, edges, bags, rainbow):
        self.parts = parts      # pid -> frozenset of vertices
        self.colors = colors    # pid -> colour
        self.nodes = nodes      # list of tree node ids (ints)
        self.edges = edges      # list of (node, node)
        self.bags = bags        # node -> frozenset of pids
        self.rainbow = rainbow  # node id


def decompose(e: CwExpr) -> DecompositionResult:
    """The partition plus quotient tree decomposition for a strict expression.

    Deterministic: tree nodes are numbered in creation order, merged parts
    are named merge(<colour>,<counter>), and the rainbow bag prefers parts
    from the left operand's bag and then the smallest part id.
    """
    report = validate_strict(e)
    if not report.strict_valid:
        v = report.first()
        why = _RULE_WHY.get(v.rule, "required by the construction")
        raise ContractError(f"expression is not strict: {v} ({why})")

    node_counter = itertools.count()
    merge_counter = itertools.count()

    def step(node, child_states):
        if isinstance(node, Leaf):
            t = next(node_counter)
            pid = node.vertex
            return _State({pid: frozenset([pid])}, {pid: node.color},
                          [t], [], {t: frozenset([pid])}, t)
        if isinstance(node, Union):
            left, right = child_states
            parts = dict(left.parts)
            parts.update(right.parts)
            colors = dict(left.colors)
            colors.update(right.colors)
            if len(parts) != len(left.parts) + len(right.parts):
                raise ContractError("part id collision across union operands")
            q = next(node_counter)
            nodes = left.nodes + right.nodes + [q]
            edges = left.edges + right.edges + [(q, left.rainbow), (q, right.rainbow)]
            bags = dict(left.bags)
            bags.update(right.bags)
            chosen = []
            left_bag = left.bags[left.rainbow]
            right_bag = right.bags[right.rainbow]
            for color in sorted(set(colors.values())):
                cands = sorted(p for p in left_bag if colors[p] == color)
                if not cands:
                    cands = sorted(p for p in right_bag if colors[p] == color)
                chosen.append(cands[0])
            bags[q] = frozenset(chosen)
            return _State(parts, colors, nodes, edges, bags, q)
        st = child_states[0]
        if isinstance(node, Recolor):
            colors = {p: (node.new_color if c == node.old_color else c)
                      for p, c in st.colors.items()}
            return _State(st.parts, colors, st.nodes, st.edges, st.bags, st.rainbow)
        # Join: fuse each of the two colour classes into a single part.
        rewrite = {}
        parts = dict(st.parts)
        colors = dict(st.colors)
        for color in (node.color_a, node.color_b):
            members = sorted(p for p, c in st.colors.items() if c == color)
            if not members:
                raise ContractError(f"join colour {color} has no parts; strictness should "
                                    "have guaranteed a nonempty class")
            if len(members) == 1:
                continue
            merged_id = f"merge({color},{next(merge_counter)})"
            merged = frozenset().union(*(st.parts[p] for p in members))
            for p in members:
                del parts[p]
                del colors[p]
                rewrite[p] = merged_id
            parts[merged_id] = merged
            colors[merged_id] = color
        rb = st.bags[st.rainbow]
        for color in (node.color_a, node.color_b):
            if not any(st.colors[p] == color for p in rb):
                raise ContractError(f"rainbow bag lost colour {color} before a join")
        if rewrite:
            bags = {t: frozenset(rewrite.get(p, p) for p in b) for t, b in st.bags.items()}
        else:
            bags = st.bags
        return _State(parts, colors, st.nodes, st.edges, bags, st.rainbow)

    final = fold_postorder(e.root, step)
    tree = Graph(final.nodes, final.edges)
    return DecompositionResult(Partition(final.parts), dict(final.colors),
                               TreeDecomposition(tree, final.bags), final.rainbow)


# ------------------------------------------------------------ verification

@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    witness: str | None = None


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> tuple:
        return tuple(c for c in self.checks if not c.ok)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise InputError(f"no check named {name!r}")

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "witness": c.witness}
                       for c in self.checks],
        }


def verify_result(g: ColoredGraph, result: DecompositionResult) -> VerificationReport:
    """Re-check every property of a decomposition against the graph itself.

    Nothing from the constructor is trusted: part colours are recomputed,
    the quotient is rebuilt, and the two tree decomposition properties, the
    width bound, the rainbow bag, and per-colour subtree connectivity are
    all established from scratch.  Each failed check carries a witness.
    """
    checks = []
    p = result.partition
    td = result.tree

    covered = p.vertices == set(g.graph.vertices)
    wit = None
    if not covered:
        missing = sorted(set(g.graph.vertices) - p.vertices)
        extra = sorted(p.vertices - set(g.graph.vertices))
        wit = f"missing={missing[:3]} extra={extra[:3]}"
    checks.append(CheckResult("partition_covers", covered, wit))

    actual_colors = {}
    mono_ok, wit = True, None
    for pid, members in p:
        cols = sorted({g.color_of(v) for v in members if g.graph.has_vertex(v)})
        actual_colors[pid] = cols[0] if len(cols) == 1 else None
        if len(cols) != 1 and mono_ok:
            mono_ok, wit = False, f"part {pid!r} has colours {cols}"
    checks.append(CheckResult("parts_monochromatic", mono_ok, wit))

    labels_ok, wit = True, None
    if set(result.part_colors) != set(p.ids):
        labels_ok = False
        wit = "part_colors keys do not match the partition"
    else:
        for pid in p.ids:
            if actual_colors.get(pid) != result.part_colors[pid]:
                labels_ok = False
                wit = (f"part {pid!r} labelled {result.part_colors[pid]} but its "
                       f"vertices are coloured {actual_colors.get(pid)}")
                break
    checks.append(CheckResult("part_colors_match", labels_ok, wit))

    dom_ok, wit = True, None
    for pid, members in p:
        if not all(g.graph.has_vertex(v) for v in members):
            dom_ok, wit = False, f"part {pid!r} has vertices outside the graph"
            break
        ok, _ = is_dominated(g.graph, members)
        if not ok:
            dom_ok, wit = False, f"part {pid!r} fits in no closed neighborhood"
            break
    checks.append(CheckResult("parts_dominated", dom_ok, wit))

    tree_ok, wit = True, None
    if not is_tree(td.tree):
        tree_ok = False
        wit = f"not a tree: {len(td.tree)} nodes, {td.tree.num_edges()} edges"
    else:
        stray = sorted({pid for b in td.bags.values() for pid in b} - set(p.ids))
        if stray:
            tree_ok, wit = False, f"bags mention unknown part ids {stray[:3]}"
    checks.append(CheckResult("tree_valid", tree_ok, wit))

    if tree_ok and covered:
        q_graph, _ = quotient(g.graph, p)

        td1_ok, wit = True, None
        for pid in p.ids:
            nodes = {t for t, b in td.bags.items() if pid in b}
            if not nodes:
                td1_ok, wit = False, f"part {pid!r} appears in no bag"
                break
            if not _connected_in(td, nodes):
                td1_ok, wit = False, f"bags holding part {pid!r} are disconnected"
                break
        checks.append(CheckResult("bag_subtrees", td1_ok, wit))

        td2_ok, wit = True, None
        for u, v in q_graph.edges:
            if not any(u in b and v in b for b in td.bags.values()):
                td2_ok, wit = False, f"quotient edge ({u!r}, {v!r}) in no bag"
                break
        checks.append(CheckResult("edges_covered", td2_ok, wit))

        big = max(len(b) for b in td.bags.values())
        width_ok = big <= g.k
        checks.append(CheckResult(
            "width_bound", width_ok,
            None if width_ok else f"bag of {big} parts exceeds palette {g.k}"))

        used = sorted(g.used_colors())
        rb_ok, wit = True, None
        if result.rainbow_node not in td.bags:
            rb_ok, wit = False, f"rainbow node {result.rainbow_node!r} not in the tree"
        else:
            bag = td.bags[result.rainbow_node]
            for color in used:
                if not any(actual_colors.get(pid) == color for pid in bag):
                    rb_ok, wit = False, f"rainbow bag holds no part of colour {color}"
                    break
        checks.append(CheckResult("rainbow_bag", rb_ok, wit))

        cs_ok, wit = True, None
        for color in used:
            nodes = {t for t, b in td.bags.items()
                     if any(actual_colors.get(pid) == color for pid in b)}
            if not nodes:
                cs_ok, wit = False, f"no bag holds a part of colour {color}"
                break
            if not _connected_in(td, nodes):
                cs_ok, wit = False, f"bags holding colour {color} are disconnected"
                break
        checks.append(CheckResult("color_subtrees", cs_ok, wit))
    else:
        why = "not evaluated: tree or partition invalid"
        for name in ("bag_subtrees", "edges_covered", "width_bound",
                     "rainbow_bag", "color_subtrees"):
            checks.append(CheckResult(name, False, why))

    return VerificationReport(tuple(checks))


def _connected_in(td: TreeDecomposition, nodes: set) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for s in td.tree.neighbors(t):
            if s in nodes and s not in seen:
                seen.add(s)
                stack.append(s)
    return len(seen) == len(nodes)


# ---------------------------------------------------------------- interop

def result_to_json_dict(result: DecompositionResult) -> dict:
    return {
        "parts": {str(pid): sorted(members) for pid, members in result.partition},
        "part_colors": {str(pid): result.part_colors[pid] for pid in result.partition.ids},
        "tree": td_to_json_dict(result.tree),
        "rainbow_node": result.rainbow_node,
    }


def result_from_json_dict(obj: Mapping) -> DecompositionResult:
    try:
        parts = {pid: members for pid, members in obj["parts"].items()}
        part_colors = {pid: int(c) for pid, c in obj["part_colors"].items()}
        td = td_from_json_dict(obj["tree"])
        rainbow = obj["rainbow_node"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed decomposition object: {exc}") from None
    return DecompositionResult(Partition(parts), part_colors, td, rainbow)


def result_to_dot(result: DecompositionResult) -> str:
    return td_to_dot(result.tree)
