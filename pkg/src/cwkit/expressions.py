"""Clique-width expression ASTs, the .cwx text format, and their semantics.

Grammar (parenthesized prefix form, whitespace-insensitive):

    file    := header expr
    header  := "cw k=" INT
    expr    := leaf | union | recolor | join
    leaf    := "(v" ID INT ")"
    union   := "(union" expr expr ")"
    recolor := "(recolor" INT INT expr ")"
    join    := "(join" INT INT expr ")"

Vertex ids match [A-Za-z0-9_.-]+.  The canonical printer writes one node per
line with two-space indentation and parse(format_expr(e)) == e holds exactly.

Strict validity adds the side conditions the decomposition algorithm leans
on: leaf vertex ids globally distinct, every colour within 1..k, both
recolor colours present in the child's colouring, and every join adding at
least one new edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from collections.abc import Mapping

from .errors import InputError, ParseError
from .graphs import ColoredGraph, Graph

# Rule ids reported by validate_strict.
RULE_DUP_VERTEX = "DUP_VERTEX"
RULE_COLOR_RANGE = "COLOR_RANGE"
RULE_OP2_I_UNUSED = "OP2_I_UNUSED"
RULE_OP2_J_UNUSED = "OP2_J_UNUSED"
RULE_OP3_NO_NEW_EDGE = "OP3_NO_NEW_EDGE"
RULE_EMPTY_OPERAND = "EMPTY_OPERAND"

_ID_RE = re.compile(r"[A-Za-z0-9_.-]+")


@dataclass(frozen=True)
class Leaf:
    vertex: str
    color: int

    def __post_init__(self):
        if not isinstance(self.color, int) or self.color < 1:
            raise InputError(f"leaf colour must be a positive int, got {self.color!r}")
        if not _ID_RE.fullmatch(str(self.vertex)):
            raise InputError(f"invalid vertex id {self.vertex!r}")


@dataclass(frozen=True)
class Union:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Recolor:
    old_color: int
    new_color: int
    child: "Node"

    def __post_init__(self):
        if self.old_color == self.new_color:
            raise InputError("recolor colours must differ")
        if min(self.old_color, self.new_color) < 1:
            raise InputError("recolor colours must be positive")


@dataclass(frozen=True)
class Join:
    color_a: int
    color_b: int
    child: "Node"

    def __post_init__(self):
        if self.color_a == self.color_b:
            raise InputError("join colours must differ")
        if min(self.color_a, self.color_b) < 1:
            raise InputError("join colours must be positive")


Node = Leaf | Union | Recolor | Join


@dataclass(frozen=True)
class CwExpr:
    """An expression together with its palette size k."""

    k: int
    root: Node

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InputError(f"palette size must be a positive int, got {self.k!r}")


def _children(node: Node) -> tuple:
    if isinstance(node, Leaf):
        return ()
    if isinstance(node, Union):
        return (node.left, node.right)
    return (node.child,)


def _rebuild(node: Node, children: tuple) -> Node:
    if isinstance(node, Leaf):
        return node
    if isinstance(node, Union):
        return Union(*children)
    if isinstance(node, Recolor):
        return Recolor(node.old_color, node.new_color, children[0])
    return Join(node.color_a, node.color_b, children[0])


def fold_postorder(root: Node, fn):
    """fn(node, child_values) folded bottom-up with an explicit stack.

    Deep expressions (long paths give linearly deep ASTs) must not hit the
    interpreter recursion limit, so no recursion anywhere in this module.
    """
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(_children(node))
    memo = {}
    for node in reversed(order):
        memo[id(node)] = fn(node, tuple(memo[id(c)] for c in _children(node)))
    return memo[id(root)]


def walk_with_paths(root: Node):
    """Yield (path, node) preorder; path is a tuple of child indices."""
    stack = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        kids = _children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((path + (i,), kids[i]))


def render_path(path: tuple) -> str:
    return "root" + "".join(f"[{i}]" for i in path)


# ---------------------------------------------------------------- parsing

_HEADER_RE = re.compile(r"^\s*cw\s+k\s*=\s*(\d+)\s*$")


def _tokenize(text: str, first_line: int):
    tokens = []
    line, col = first_line, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch in "()":
            tokens.append((ch, None, line, col))
            col += 1
            i += 1
        else:
            m = _ID_RE.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", line, col)
            tokens.append(("atom", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
    return tokens


def _want_int(value, what, k, line, col, check_range=True):
    if not re.fullmatch(r"\d+", value):
        raise ParseError(f"{what} must be an integer, got {value!r}", line, col)
    n = int(value)
    if check_range and not 1 <= n <= k:
        raise ParseError(f"{what} {n} out of range 1..{k}", line, col)
    return n


def _is_node(x) -> bool:
    return isinstance(x, (Leaf, Union, Recolor, Join))


def _finish_frame(frame, k) -> Node:
    kind, line, col, args = frame
    if kind == "v":
        if len(args) != 2 or _is_node(args[0]) or _is_node(args[1]):
            raise ParseError("leaf takes a vertex id and a colour", line, col)
        (_, vval, _, _), (_, cval, cline, ccol) = args
        color = _want_int(cval, "leaf colour", k, cline, ccol)
        return Leaf(vval, color)
    if kind == "union":
        if len(args) != 2 or not all(_is_node(a) for a in args):
            raise ParseError("union takes exactly two subexpressions", line, col)
        return Union(args[0], args[1])
    # recolor / join: two colour atoms then one subexpression
    if (len(args) != 3 or _is_node(args[0]) or _is_node(args[1])
            or not _is_node(args[2])):
        raise ParseError(f"{kind} takes two colours and one subexpression", line, col)
    (_, ival, iline, icol), (_, jval, jline, jcol) = args[0], args[1]
    ci = _want_int(ival, f"{kind} colour", k, iline, icol)
    cj = _want_int(jval, f"{kind} colour", k, jline, jcol)
    if ci == cj:
        raise ParseError(f"{kind} colours must differ, both are {ci}", jline, jcol)
    if kind == "recolor":
        return Recolor(ci, cj, args[2])
    return Join(ci, cj, args[2])


def parse(text: str) -> CwExpr:
    """Parse a .cwx document (header line plus one expression)."""
    lines = text.split("\n")
    header_idx = None
    for idx, raw in enumerate(lines):
        if raw.strip():
            header_idx = idx
            break
    if header_idx is None:
        raise ParseError("empty input, expected a 'cw k=<int>' header", 1, 1)
    m = _HEADER_RE.match(lines[header_idx])
    if not m:
        raise ParseError("expected header 'cw k=<int>'", header_idx + 1, 1)
    k = int(m.group(1))
    if k < 1:
        raise ParseError("palette size k must be >= 1", header_idx + 1, 1)

    body = "\n".join(lines[header_idx + 1:])
    tokens = _tokenize(body, header_idx + 2)
    if not tokens:
        raise ParseError("missing expression after header", header_idx + 1, 1)

    frames = []  # [kind, line, col, args]
    root = None
    pos = 0
    while pos < len(tokens):
        tok, val, line, col = tokens[pos]
        pos += 1
        if root is not None:
            raise ParseError("unexpected trailing input after expression", line, col)
        if tok == "(":
            if pos >= len(tokens) or tokens[pos][0] != "atom":
                raise ParseError("expected an operator after '('", line, col)
            _, kw, kline, kcol = tokens[pos]
            pos += 1
            if kw not in ("v", "union", "recolor", "join"):
                raise ParseError(f"unknown operator {kw!r}", kline, kcol)
            frames.append([kw, kline, kcol, []])
        elif tok == ")":
            if not frames:
                raise ParseError("unmatched ')'", line, col)
            node = _finish_frame(frames.pop(), k)
            if frames:
                frames[-1][3].append(node)
            else:
                root = node
        else:  # atom
            if not frames:
                raise ParseError(f"unexpected atom {val!r} outside an expression", line, col)
            frames[-1][3].append((tok, val, line, col))
    if root is None:
        last = tokens[-1]
        raise ParseError("unexpected end of input, unclosed '('", last[2], last[3])
    return CwExpr(k, root)


# --------------------------------------------------------------- printing

def format_expr(e: CwExpr) -> str:
    """Canonical text: header, one node per line, two-space indent."""

    def fmt(node, child_lines):
        if isinstance(node, Leaf):
            return [f"(v {node.vertex} {node.color})"]
        if isinstance(node, Union):
            head = "(union"
        elif isinstance(node, Recolor):
            head = f"(recolor {node.old_color} {node.new_color}"
        else:
            head = f"(join {node.color_a} {node.color_b}"
        lines = [head]
        for kid in child_lines:
            lines.extend("  " + ln for ln in kid)
        lines[-1] += ")"
        return lines

    body = fold_postorder(e.root, fmt)
    return f"cw k={e.k}\n" + "\n".join(body) + "\n"


def read_cwx(path) -> CwExpr:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def write_cwx(path, e: CwExpr) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_expr(e))


# ------------------------------------------------------------- evaluation

def _eval_step(node, child_states, strict_union=True):
    """States are (colors dict, edge set of (u,v) u<v pairs)."""
    if isinstance(node, Leaf):
        return {node.vertex: node.color}, frozenset()
    if isinstance(node, Union):
        (lc, le), (rc, re_) = child_states
        if strict_union:
            shared = set(lc) & set(rc)
            if shared:
                raise InputError(f"duplicate vertex id {sorted(shared)[0]!r} across union operands")
        colors = dict(lc)
        colors.update(rc)
        return colors, le | re_
    (colors, edges) = child_states[0]
    if isinstance(node, Recolor):
        out = {v: (node.new_color if c == node.old_color else c) for v, c in colors.items()}
        return out, edges
    # Join
    cls_a = [v for v, c in colors.items() if c == node.color_a]
    cls_b = [v for v, c in colors.items() if c == node.color_b]
    new = set()
    for u in cls_a:
        for w in cls_b:
            e = (u, w) if u < w else (w, u)
            if e not in edges:
                new.add(e)
    return colors, edges | frozenset(new)


def evaluate(e: CwExpr) -> ColoredGraph:
    """The coloured graph an expression denotes.

    Raises InputError on duplicate leaf vertex ids or colours outside 1..k;
    strictness side conditions are validate_strict's business, not ours.
    """
    colors, edges = fold_postorder(e.root, _eval_step)
    return ColoredGraph(Graph(colors, edges), e.k, colors)


# ------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    path: tuple
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {render_path(self.path)}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def strict_valid(self) -> bool:
        return not self.violations

    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def to_json_dict(self) -> dict:
        return {
            "strict_valid": self.strict_valid,
            "violations": [
                {"path": render_path(v.path), "rule": v.rule, "message": v.message}
                for v in self.violations
            ],
        }


def validate_strict(e: CwExpr) -> ValidationReport:
    """Check every structural rule; reports all violations, raises nothing."""
    states = {}

    def step(node, child_states):
        st = _eval_step(node, child_states, strict_union=False)
        states[id(node)] = st
        return st

    fold_postorder(e.root, step)

    violations = []
    seen_leaves = {}
    for path, node in walk_with_paths(e.root):
        if isinstance(node, Leaf):
            if not 1 <= node.color <= e.k:
                violations.append(Violation(path, RULE_COLOR_RANGE,
                                            f"leaf colour {node.color} outside 1..{e.k}"))
            if node.vertex in seen_leaves:
                violations.append(Violation(path, RULE_DUP_VERTEX,
                                            f"vertex id {node.vertex!r} already introduced at "
                                            f"{render_path(seen_leaves[node.vertex])}"))
            else:
                seen_leaves[node.vertex] = path
        elif isinstance(node, Union):
            for idx, kid in enumerate(_children(node)):
                if not states[id(kid)][0]:
                    violations.append(Violation(path + (idx,), RULE_EMPTY_OPERAND,
                                                "union operand denotes the empty graph"))
        elif isinstance(node, Recolor):
            for c in (node.old_color, node.new_color):
                if not 1 <= c <= e.k:
                    violations.append(Violation(path, RULE_COLOR_RANGE,
                                                f"recolor colour {c} outside 1..{e.k}"))
            child_colors = set(states[id(node.child)][0].values())
            if node.old_color not in child_colors:
                violations.append(Violation(path, RULE_OP2_I_UNUSED,
                                            f"recolor source colour {node.old_color} unused below"))
            if node.new_color not in child_colors:
                violations.append(Violation(path, RULE_OP2_J_UNUSED,
                                            f"recolor target colour {node.new_color} unused below"))
        else:  # Join
            for c in (node.color_a, node.color_b):
                if not 1 <= c <= e.k:
                    violations.append(Violation(path, RULE_COLOR_RANGE,
                                                f"join colour {c} outside 1..{e.k}"))
            before = states[id(node.child)][1]
            after = states[id(node)][1]
            if after == before:
                violations.append(Violation(path, RULE_OP3_NO_NEW_EDGE,
                                            f"join of colours {node.color_a},{node.color_b} "
                                            "adds no new edge"))
    return ValidationReport(tuple(violations))


# ---------------------------------------------------------- normalization

def permute_colors(e: CwExpr, mapping: Mapping) -> CwExpr:
    """Apply a colour permutation to every colour occurrence in e."""
    if len(set(mapping.values())) != len(mapping):
        raise InputError("colour permutation must be injective")
    for c in mapping.values():
        if not 1 <= c <= e.k:
            raise InputError(f"permuted colour {c} outside 1..{e.k}")
    return CwExpr(e.k, _permute_node(e.root, mapping))


def _permute_node(root: Node, mapping: Mapping) -> Node:
    def step(node, kids):
        if isinstance(node, Leaf):
            return Leaf(node.vertex, mapping.get(node.color, node.color))
        if isinstance(node, Union):
            return Union(*kids)
        if isinstance(node, Recolor):
            return Recolor(mapping.get(node.old_color, node.old_color),
                           mapping.get(node.new_color, node.new_color), kids[0])
        return Join(mapping.get(node.color_a, node.color_a),
                    mapping.get(node.color_b, node.color_b), kids[0])

    return fold_postorder(root, step)


def normalize(e: CwExpr) -> CwExpr:
    """Rewrite to an equivalent strict-valid expression.

    Bottom-up: joins that add no edge are dropped; recolors whose source
    colour is unused are dropped; recolors whose target colour is unused are
    pure renamings and are realized by swapping the two colours inside the
    subtree instead.  The result evaluates to the same coloured graph, and
    normalize(normalize(e)) == normalize(e).

    The input must evaluate successfully and keep colours within 1..k.
    """
    def step(node, kids):
        # Each folded value is (rewritten node, (colors, edges) state).
        if isinstance(node, Leaf):
            if not 1 <= node.color <= e.k:
                raise InputError(f"leaf colour {node.color} outside 1..{e.k}")
            return node, _eval_step(node, ())
        if isinstance(node, Union):
            (ln, ls), (rn, rs) = kids
            return Union(ln, rn), _eval_step(node, (ls, rs))
        (cn, cs) = kids[0]
        if isinstance(node, Recolor):
            if not (1 <= node.old_color <= e.k and 1 <= node.new_color <= e.k):
                raise InputError("recolor colour outside the palette")
            used = set(cs[0].values())
            if node.old_color not in used:
                return cn, cs
            if node.new_color not in used:
                swap = {node.old_color: node.new_color, node.new_color: node.old_color}
                pn = _permute_node(cn, swap)
                pcolors = {v: swap.get(c, c) for v, c in cs[0].items()}
                return pn, (pcolors, cs[1])
            new = Recolor(node.old_color, node.new_color, cn)
            return new, _eval_step(new, (cs,))
        # Join
        if not (1 <= node.color_a <= e.k and 1 <= node.color_b <= e.k):
            raise InputError("join colour outside the palette")
        new = Join(node.color_a, node.color_b, cn)
        st = _eval_step(new, (cs,))
        if st[1] == cs[1]:
            return cn, cs
        return new, st

    root, _ = fold_postorder(e.root, step)
    return CwExpr(e.k, root)
