"""Scaled covers and their transport along a quasi-isometric embedding.

A cover family at scale r groups subsets of a graph's vertices into
collections; sets in one collection must sit strictly more than r apart,
and every set must have small weak diameter.  Pulling such a family back
through a distance-respecting map yields a family of the same shape at a
linearly rescaled scale and diameter bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .decomposition import CheckResult, VerificationReport
from .errors import ContractError, InputError
from .graphs import (INFINITE, Graph, connected_components, set_distance,
                     weak_diameter)
from .quasiiso import QiMap, check_qi


@dataclass(frozen=True)
class ControlDilation:
    """Linear control function r -> slope * r, increasing from zero."""

    slope: float

    def __post_init__(self):
        if self.slope <= 0:
            raise InputError("dilation needs slope > 0")

    def __call__(self, r):
        return self.slope * r


@dataclass(frozen=True)
class CoverFamily:
    """Collections of vertex sets, with the scale and bound they claim."""

    collections: tuple
    r: float
    diameter_bound: float

    def __post_init__(self):
        canon = tuple(tuple(sorted((frozenset(s) for s in coll), key=sorted))
                      for coll in self.collections)
        for coll in canon:
            for s in coll:
                if not s:
                    raise InputError("cover sets must be nonempty")
        object.__setattr__(self, "collections", canon)
        if self.r < 0:
            raise InputError("cover scale must be >= 0")

    @property
    def n(self) -> int:
        return len(self.collections) - 1

    def all_sets(self):
        for coll in self.collections:
            yield from coll


def validate_cover(g: Graph, cf: CoverFamily) -> VerificationReport:
    """Check coverage, strict separation at scale r, and the diameter bound."""
    covered = set()
    for s in cf.all_sets():
        for v in s:
            if not g.has_vertex(v):
                raise InputError(f"cover mentions unknown vertex {v!r}")
        covered |= s
    missing = sorted(set(g.vertices) - covered)
    coverage = CheckResult("coverage", not missing,
                           None if not missing else f"uncovered vertices {missing[:5]}")

    sep_ok, sep_wit = True, None
    for idx, coll in enumerate(cf.collections):
        for i, a in enumerate(coll):
            for b in coll[i + 1:]:
                if not a.isdisjoint(b):
                    sep_ok, sep_wit = False, f"collection {idx} has overlapping sets"
                    break
                if set_distance(g, a, b) <= cf.r:
                    sep_ok = False
                    sep_wit = (f"collection {idx}: sets at distance "
                               f"{set_distance(g, a, b)} <= scale {cf.r}")
                    break
            if not sep_ok:
                break
        if not sep_ok:
            break
    separation = CheckResult("separation", sep_ok, sep_wit)

    diam_ok, diam_wit = True, None
    for idx, coll in enumerate(cf.collections):
        for s in coll:
            d = weak_diameter(g, s)
            if d > cf.diameter_bound:
                diam_ok = False
                diam_wit = (f"collection {idx}: set of size {len(s)} has weak "
                            f"diameter {d} > bound {cf.diameter_bound}")
                break
        if not diam_ok:
            break
    diameter = CheckResult("diameter", diam_ok, diam_wit)

    return VerificationReport((coverage, separation, diameter))


def cover_by_components(g: Graph, r) -> CoverFamily:
    """The one-collection cover by connected components, at scale r."""
    comps = connected_components(g)
    bound = 0
    for comp in comps:
        bound = max(bound, weak_diameter(g, comp))
    return CoverFamily((tuple(comps),), r, bound)


def pullback_cover(f: QiMap, cover: CoverFamily, r, dilation) -> CoverFamily:
    """Pull a cover of f's target back to f's source at scale r.

    The given collections must cover the target at scale c*r + c with every
    set's weak diameter at most dilation(c*r + c).  Preimages of the sets
    (empty ones dropped) then cover the source at scale r.  The returned
    bound is c*dilation(2*c*r) + c*c*r; the construction is checked against
    the sharper value c*dilation(c*r + c) + c*c before returning.
    """
    if r < 1:
        raise InputError("pullback scale must be >= 1")
    c = f.c
    rep = check_qi(f)
    if not rep.bounds_ok:
        raise InputError(f"map violates the distance bounds at c={c}: {rep.bounds_witness}")
    r_target = c * r + c
    target_report = validate_cover(
        f.target, CoverFamily(cover.collections, r_target, dilation(r_target)))
    if not target_report.ok:
        bad = target_report.failed()[0]
        raise InputError(f"cover fails on the target at scale {r_target}: "
                         f"{bad.name}: {bad.witness}")

    pulled = []
    for coll in cover.collections:
        new_coll = []
        for s in coll:
            pre = frozenset(x for x in f.source.vertices if f(x) in s)
            if pre:
                new_coll.append(pre)
        pulled.append(tuple(new_coll))

    bound_tight = c * dilation(r_target) + c * c
    bound_claim = c * dilation(2 * c * r) + c * c * r
    if bound_tight > bound_claim:
        raise ContractError(f"dilation is not monotone enough: tight bound {bound_tight} "
                            f"exceeds claimed bound {bound_claim}")
    source_report = validate_cover(f.source, CoverFamily(tuple(pulled), r, bound_tight))
    if not source_report.ok:
        bad = source_report.failed()[0]
        raise ContractError(f"pullback violates {bad.name} on the source: {bad.witness}")
    return CoverFamily(tuple(pulled), r, bound_claim)


def _num_to_json(x):
    if isinstance(x, float) and math.isinf(x):
        return "infinite"
    return x


def _num_from_json(x):
    if x == "infinite":
        return INFINITE
    return x


def cover_to_json_dict(cf: CoverFamily) -> dict:
    return {
        "n": cf.n,
        "r": _num_to_json(cf.r),
        "bound": _num_to_json(cf.diameter_bound),
        "collections": [[sorted(s) for s in coll] for coll in cf.collections],
    }


def cover_from_json_dict(obj) -> CoverFamily:
    try:
        collections = tuple(tuple(frozenset(s) for s in coll)
                            for coll in obj["collections"])
        return CoverFamily(collections, _num_from_json(obj["r"]),
                           _num_from_json(obj["bound"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed cover object: {exc}") from exc
