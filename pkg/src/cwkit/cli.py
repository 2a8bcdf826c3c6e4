"""Command line front end.

Every subcommand reads files, runs the library, emits JSON (or DOT, or a
short human summary with --pretty) and exits 0 on success, 2 on malformed
input files, 3 on violated preconditions or failed verification, 4 when an
exact oracle refuses to run above its size cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import generate_corpus
from .covers import (ControlDilation, CoverFamily, cover_by_components,
                     cover_from_json_dict, cover_to_json_dict, pullback_cover,
                     validate_cover)
from .decomposition import (decompose, result_to_dot, result_to_json_dict,
                            verify_result)
from .errors import ContractError, InputError, ParseError, SizeCapError
from .expressions import (evaluate, format_expr, normalize, read_cwx,
                          validate_strict, write_cwx)
from .generators import (build_minor_model, complete_graph, gen_path,
                         gen_spider, gen_subdivided_clique, model_to_json_dict,
                         subdivide, uniform_subdivision)
from .graphs import (graph_from_json_dict, graph_to_dot, graph_to_json_dict,
                     quotient, weak_diameter)
from .quasiiso import (QiMap, check_partqi_tight, check_qi, projection_map,
                       qimap_from_json_dict)
from .treedecomp import brute_treewidth, has_minor, width


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, obj, lines) -> None:
    if getattr(args, "pretty", False):
        _write("".join(f"{line}\n" for line in lines), getattr(args, "out", None))
    else:
        _write(_dump(obj), getattr(args, "out", None))


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _load_graph(path):
    """A (graph, colors-or-None) pair from a .cwx or a graph JSON file."""
    if str(path).endswith(".cwx"):
        cg = evaluate(read_cwx(path))
        return cg.graph, cg.colors
    return graph_from_json_dict(_load_json(path))


# ------------------------------------------------------------- subcommands

def cmd_eval(args) -> int:
    e = read_cwx(args.file)
    report = validate_strict(e)
    cg = evaluate(e)
    if args.dot:
        _write(graph_to_dot(cg.graph, cg.colors), args.out)
        return 0
    obj = {"k": e.k,
           "graph": graph_to_json_dict(cg.graph, cg.colors),
           "validation": report.to_json_dict()}
    _emit(args, obj, [f"k = {e.k}",
                      f"vertices = {len(cg.graph)}",
                      f"edges = {cg.graph.num_edges()}",
                      f"strict = {report.strict_valid}"])
    return 0


def cmd_decompose(args) -> int:
    e = read_cwx(args.file)
    if args.normalize:
        e = normalize(e)
    result = decompose(e)
    cg = evaluate(e)
    report = verify_result(cg, result)
    if args.dot:
        _write(result_to_dot(result), args.out)
        return 0 if report.ok else 3
    obj = {"result": result_to_json_dict(result),
           "verification": report.to_json_dict()}
    lines = [f"parts = {len(result.partition)}",
             f"tree nodes = {len(result.tree.tree)}",
             f"width = {width(result.tree)}",
             f"verification = {'pass' if report.ok else 'FAIL'}"]
    if args.oracle:
        q, _ = quotient(cg.graph, result.partition)
        try:
            tw = brute_treewidth(q, cap=args.cap)
            obj["quotient_treewidth"] = tw
            lines.append(f"quotient treewidth = {tw}")
        except SizeCapError:
            bound = 0
            for m in (4, 3, 2):
                if len(q) >= m and has_minor(q, complete_graph(m)):
                    bound = m - 1
                    break
            obj["quotient_treewidth_lower_bound"] = bound
            obj["oracle_note"] = ("exact oracle above its size cap; "
                                  "bound certified by a complete minor")
            lines.append(f"quotient treewidth >= {bound} (minor bound)")
    _emit(args, obj, lines)
    return 0 if report.ok else 3


def _parse_leg_lengths(text: str):
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise InputError(f"bad leg list {text!r}: {exc}") from exc


def cmd_generate(args) -> int:
    if args.kind == "path":
        e = gen_path(args.x, args.y, args.length, args.palette,
                     args.x_color, args.y_color, args.inner_color)
    elif args.kind == "spider":
        legs = _parse_leg_lengths(args.legs)
        t = args.t if args.t is not None else len(legs)
        e = gen_spider(t, legs)
    else:
        e = gen_subdivided_clique(args.n, args.times)
    _write(format_expr(e), args.out)
    return 0


def cmd_corpus(args) -> int:
    exprs = generate_corpus(args.seed, args.count, args.max_k, args.max_leaves)
    os.makedirs(args.out_dir, exist_ok=True)
    instances = []
    all_pass = True
    for i, e in enumerate(exprs):
        name = f"expr_{i:04d}.cwx"
        write_cwx(os.path.join(args.out_dir, name), e)
        cg = evaluate(e)
        result = decompose(e)
        report = verify_result(cg, result)
        tight = check_partqi_tight(cg.graph, result.partition)
        qi3 = check_qi(projection_map(cg.graph, result.partition).with_c(3))
        ok = report.ok and tight.ok and qi3.ok
        failed = [c.name for c in report.failed()]
        if not tight.ok:
            failed.append("tight_projection_bounds")
        if not qi3.ok:
            failed.append("qi_at_3")
        all_pass = all_pass and ok
        instances.append({"file": name, "k": e.k, "vertices": len(cg.graph),
                          "edges": cg.graph.num_edges(), "pass": ok,
                          "failed": failed})
    summary = {"seed": args.seed, "count": args.count, "max_k": args.max_k,
               "max_leaves": args.max_leaves, "all_pass": all_pass,
               "instances": instances}
    with open(os.path.join(args.out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(_dump(summary))
    passed = sum(1 for item in instances if item["pass"])
    _emit(args, summary, [f"{passed}/{len(instances)} instances pass",
                          f"written to {args.out_dir}"])
    return 0 if all_pass else 3


def cmd_qi_check(args) -> int:
    if args.map:
        if not (args.source and args.target):
            raise InputError("--map needs --source and --target graphs")
        src, _ = _load_graph(args.source)
        tgt, _ = _load_graph(args.target)
        m = qimap_from_json_dict(_load_json(args.map), src, tgt)
        if args.c is not None:
            m = m.with_c(args.c)
        rep = check_qi(m)
        obj = {"c": m.c, "qi": rep.to_json_dict()}
        _emit(args, obj, [f"c = {m.c}", f"qi = {'pass' if rep.ok else 'FAIL'}"])
        return 0 if rep.ok else 3
    if not args.file:
        raise InputError("give an expression file, or --map with --source/--target")
    e = read_cwx(args.file)
    cg = evaluate(e)
    result = decompose(e)
    m = projection_map(cg.graph, result.partition)
    if args.c is not None:
        m = m.with_c(args.c)
    rep = check_qi(m)
    tight = check_partqi_tight(cg.graph, result.partition)
    obj = {"c": m.c, "qi": rep.to_json_dict(),
           "tight_projection_bounds": tight.to_json_dict()}
    _emit(args, obj, [f"c = {m.c}",
                      f"qi = {'pass' if rep.ok else 'FAIL'}",
                      f"tight bounds = {'pass' if tight.ok else 'FAIL'}"])
    return 0 if rep.ok and tight.ok else 3


def cmd_minor_model(args) -> int:
    h = complete_graph(args.n)
    host = subdivide(uniform_subdivision(h, args.times))
    f = QiMap(host, host, {v: v for v in host.vertices}, float(args.c))
    model = build_minor_model(h, host, f, float(args.c))
    obj = model_to_json_dict(model)
    lines = [f"pattern = K_{args.n}, {args.times}-subdivision "
             f"({len(host)} vertices)",
             f"branch sets = {len(model.branch_sets)}",
             f"edge paths = {len(model.edge_paths)}"]
    if args.oracle:
        confirmed = has_minor(host, h)
        obj = {"model": obj, "oracle_minor": confirmed}
        lines.append(f"oracle minor check = {'pass' if confirmed else 'FAIL'}")
        if not confirmed:
            _emit(args, obj, lines)
            return 3
    _emit(args, obj, lines)
    return 0


def cmd_cover_pullback(args) -> int:
    e = read_cwx(args.file)
    cg = evaluate(e)
    result = decompose(e)
    m = projection_map(cg.graph, result.partition)
    r_target = m.c * args.r + m.c
    if args.cover:
        target_cover = cover_from_json_dict(_load_json(args.cover))
    else:
        target_cover = cover_by_components(m.target, r_target)
    if args.slope is not None:
        slope = args.slope
    else:
        worst = max((weak_diameter(m.target, s) for s in target_cover.all_sets()),
                    default=0)
        slope = max(1.0, worst / r_target)
    dilation = ControlDilation(slope)
    pulled = pullback_cover(m, target_cover, args.r, dilation)
    revalidation = validate_cover(
        cg.graph, CoverFamily(pulled.collections, pulled.r, pulled.diameter_bound))
    obj = {"c": m.c, "scale": args.r, "target_scale": r_target, "slope": slope,
           "cover": cover_to_json_dict(pulled),
           "validation": revalidation.to_json_dict()}
    _emit(args, obj, [f"c = {m.c}",
                      f"collections = {len(pulled.collections)}",
                      f"bound = {pulled.diameter_bound}",
                      f"validation = {'pass' if revalidation.ok else 'FAIL'}"])
    return 0 if revalidation.ok else 3


def cmd_treewidth(args) -> int:
    g, _ = _load_graph(args.file)
    if args.quotient:
        if not str(args.file).endswith(".cwx"):
            raise InputError("--quotient needs a .cwx input")
        result = decompose(read_cwx(args.file))
        g, _ = quotient(g, result.partition)
    tw = brute_treewidth(g, cap=args.cap)
    _emit(args, {"treewidth": tw, "vertices": len(g)},
          [f"treewidth = {tw}", f"vertices = {len(g)}"])
    return 0


def cmd_export_dot(args) -> int:
    kind = args.kind
    if kind is None:
        kind = "expr" if str(args.file).endswith(".cwx") else "graph"
    if kind == "decomposition":
        result = decompose(read_cwx(args.file))
        text = result_to_dot(result)
    elif kind == "expr":
        cg = evaluate(read_cwx(args.file))
        text = graph_to_dot(cg.graph, cg.colors)
    else:
        g, colors = _load_graph(args.file)
        text = graph_to_dot(g, colors)
    _write(text, args.out)
    return 0


# ------------------------------------------------------------------ parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwkit",
        description="Build, verify, and export structures derived from "
                    "clique-width expressions.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--pretty", action="store_true",
                        help="human summary instead of JSON")

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate an expression file to a coloured graph")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("decompose", parents=[common],
                       help="partition, quotient tree decomposition, verification")
    p.add_argument("file")
    p.add_argument("--normalize", action="store_true",
                   help="repair a non-strict expression first")
    p.add_argument("--oracle", action="store_true",
                   help="also compute the quotient's exact treewidth")
    p.add_argument("--cap", type=int, default=None, help="oracle size cap override")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", parents=[common],
                       help="write a constructive witness expression")
    p.add_argument("kind", choices=("path", "spider", "subdivided-clique"))
    p.add_argument("--x", default="x", help="path: first endpoint name")
    p.add_argument("--y", default="y", help="path: last endpoint name")
    p.add_argument("--length", type=int, default=3, help="path: edge count")
    p.add_argument("--palette", type=int, default=3, help="path: colour count")
    p.add_argument("--x-color", type=int, default=1)
    p.add_argument("--y-color", type=int, default=2)
    p.add_argument("--inner-color", type=int, default=1)
    p.add_argument("--legs", default="1,1,1", help="spider: comma-separated leg lengths")
    p.add_argument("--t", type=int, default=None, help="spider: leg count")
    p.add_argument("--n", type=int, default=4, help="clique: branch vertex count")
    p.add_argument("--times", type=int, default=7, help="clique: subdivisions per edge")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("corpus", parents=[common],
                       help="seeded random expressions plus batch verification")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-k", type=int, default=5)
    p.add_argument("--max-leaves", type=int, default=30)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("qi-check", parents=[common],
                       help="check the quasi-isometry conditions")
    p.add_argument("file", nargs="?", help="expression file (projection pipeline)")
    p.add_argument("--c", type=float, default=None, help="parameter override")
    p.add_argument("--map", help="map JSON (needs --source and --target)")
    p.add_argument("--source", help="source graph for --map")
    p.add_argument("--target", help="target graph for --map")
    p.set_defaults(func=cmd_qi_check)

    p = sub.add_parser("minor-model", parents=[common],
                       help="pull a clique minor model through an embedding")
    p.add_argument("--n", type=int, default=4, help="pattern clique size")
    p.add_argument("--times", type=int, default=7, help="subdivisions per edge")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the exact minor oracle")
    p.set_defaults(func=cmd_minor_model)

    p = sub.add_parser("cover-pullback", parents=[common],
                       help="pull a cover of the quotient back to the graph")
    p.add_argument("file")
    p.add_argument("--r", type=float, default=1.0, help="source scale (>= 1)")
    p.add_argument("--slope", type=float, default=None,
                   help="target dilation slope (default: smallest adequate)")
    p.add_argument("--cover", help="target cover JSON (default: by components)")
    p.set_defaults(func=cmd_cover_pullback)

    p = sub.add_parser("treewidth", parents=[common],
                       help="exact treewidth of a small graph")
    p.add_argument("file", help="graph JSON or .cwx file")
    p.add_argument("--quotient", action="store_true",
                   help="use the decomposer's quotient of a .cwx input")
    p.add_argument("--cap", type=int, default=None, help="size cap override")
    p.set_defaults(func=cmd_treewidth)

    p = sub.add_parser("export-dot", parents=[common],
                       help="DOT rendering of a graph, expression, or decomposition")
    p.add_argument("file")
    p.add_argument("--kind", choices=("graph", "expr", "decomposition"),
                   default=None)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InputError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        # unreadable input or unwritable --out target
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
