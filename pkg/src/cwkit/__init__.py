"""Clique-width expressions and the geometry they induce.

Parse and evaluate width-k expressions, split the resulting graph into a
dominated monochromatic partition whose quotient carries a width-(k-1)
tree decomposition, certify the projection as a quasi-isometry, build
low-palette witness expressions and minor models, and pull scaled covers
back through distance-respecting maps.  Small exact oracles (treewidth,
minor containment) double-check everything within configurable size caps.
"""

from .corpus import generate_corpus, random_strict_expr
from .covers import (ControlDilation, CoverFamily, cover_by_components,
                     cover_from_json_dict, cover_to_json_dict, pullback_cover,
                     validate_cover)
from .decomposition import (CheckResult, DecompositionResult,
                            VerificationReport, decompose,
                            result_from_json_dict, result_to_dot,
                            result_to_json_dict, verify_result)
from .errors import (ContractError, CwkitError, InputError, ParseError,
                     SizeCapError)
from .expressions import (CwExpr, Join, Leaf, Recolor, Union,
                          ValidationReport, Violation, evaluate, format_expr,
                          normalize, parse, permute_colors, read_cwx,
                          validate_strict, write_cwx)
from .generators import (MinorModel, SubdivisionSpec, build_minor_model,
                         complete_graph, gen_path, gen_spider,
                         gen_subdivided_clique, model_to_json_dict,
                         spider_graph, subdivide, subdivision_path,
                         uniform_subdivision)
from .graphs import (INFINITE, ColoredGraph, Graph, Partition, bfs_distances,
                     closed_r_neighborhood, connected_components, distance,
                     graph_from_json_dict, graph_to_dot, graph_to_json_dict,
                     induced_coloring, is_connected, is_dominated,
                     is_monochromatic, quotient, set_distance,
                     singleton_partition, weak_diameter)
from .quasiiso import (PartitionQiReport, QiMap, QiReport, check_partqi_tight,
                       check_qi, projection_map, qimap_from_json_dict,
                       qimap_to_json_dict)
from .treedecomp import (TdReport, TreeDecomposition, brute_treewidth,
                         has_minor, is_tree, td_from_json_dict, td_to_dot,
                         td_to_json_dict, validate_td, width)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
