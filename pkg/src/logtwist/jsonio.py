"""JSON reading and writing for graphs, structures, involutions and monoids.

Parse errors carry a JSON pointer to the offending field.  Every integer is
checked against the 53-bit range so documents survive any JSON reader.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .hyper import HypSignature
from .minmonoid import MinimalMonoid
from .stablegraph import GraphError, GraphInvolution, StableGraph
from .twist import Orientation, TwistedStructure, default_degeneracy

INT_BOUND = 2**53 - 1


class InputError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _get(obj, key, ptr, default=...):
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected an object")
    if key not in obj:
        if default is ...:
            raise InputError(f"{ptr}/{key}", "missing field")
        return default
    return obj[key]


def _list(obj, ptr) -> list:
    if not isinstance(obj, list):
        raise InputError(ptr, "expected an array")
    return obj


def _int(x, ptr, lo: Optional[int] = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(ptr, "expected an integer")
    if abs(x) > INT_BOUND:
        raise InputError(ptr, "integer exceeds the 53-bit bound")
    if lo is not None and x < lo:
        raise InputError(ptr, f"must be >= {lo}")
    return x


def _ints(obj, ptr, lo=None) -> list[int]:
    return [_int(x, f"{ptr}/{i}", lo) for i, x in enumerate(_list(obj, ptr))]


def _bool(x, ptr) -> bool:
    if not isinstance(x, bool):
        raise InputError(ptr, "expected true or false")
    return x


def parse_graph(obj, ptr="/graph") -> StableGraph:
    vertices = _list(_get(obj, "vertices", ptr), f"{ptr}/vertices")
    genera, vnames = [], []
    for i, v in enumerate(vertices):
        p = f"{ptr}/vertices/{i}"
        genera.append(_int(_get(v, "genus", p), f"{p}/genus", 0))
        name = _get(v, "name", p, None)
        if name is not None and not isinstance(name, str):
            raise InputError(f"{p}/name", "expected a string")
        vnames.append(name if name is not None else f"v{i}")
    edges = []
    for k, e in enumerate(_list(_get(obj, "edges", ptr, []), f"{ptr}/edges")):
        p = f"{ptr}/edges/{k}"
        pair = _ints(e, p)
        if len(pair) != 2:
            raise InputError(p, "an edge is a pair of vertex indices")
        for s, a in enumerate(pair):
            if not 0 <= a < len(genera):
                raise InputError(f"{p}/{s}", "no such vertex")
        edges.append(tuple(pair))
    enames = _get(obj, "edge_names", ptr, None)
    if enames is not None:
        enames = _list(enames, f"{ptr}/edge_names")
        if len(enames) != len(edges) or not all(isinstance(n, str) for n in enames):
            raise InputError(f"{ptr}/edge_names", "need one string per edge")
    legs = []
    for j, leg in enumerate(_list(_get(obj, "legs", ptr, []), f"{ptr}/legs")):
        p = f"{ptr}/legs/{j}"
        m = _int(_get(leg, "marking", p), f"{p}/marking", 1)
        v = _int(_get(leg, "vertex", p), f"{p}/vertex", 0)
        if v >= len(genera):
            raise InputError(f"{p}/vertex", "no such vertex")
        legs.append((m, v))
    try:
        return StableGraph(tuple(genera), tuple(edges), tuple(sorted(legs)), tuple(vnames),
                           tuple(enames) if enames is not None else None)
    except GraphError as exc:
        raise InputError(ptr, str(exc)) from None


def parse_structure(obj, G: StableGraph, ptr="/structure") -> TwistedStructure:
    contact = _ints(_get(obj, "contact", ptr), f"{ptr}/contact", 0)
    orient = []
    for k, o in enumerate(_list(_get(obj, "orientation", ptr), f"{ptr}/orientation")):
        try:
            orient.append(Orientation.parse(o))
        except (ValueError, TypeError):
            raise InputError(f"{ptr}/orientation/{k}", "expected forward, backward or none") from None
    if len(contact) != G.num_edges or len(orient) != G.num_edges:
        raise InputError(ptr, f"need one contact order and orientation per edge ({G.num_edges})")
    deg = _get(obj, "degenerate", ptr, None)
    if deg is None:
        flags = default_degeneracy(G, contact, orient)
    else:
        flags = [_bool(x, f"{ptr}/degenerate/{i}") for i, x in enumerate(_list(deg, f"{ptr}/degenerate"))]
        if len(flags) != G.num_vertices:
            raise InputError(f"{ptr}/degenerate", "need one flag per vertex")
    try:
        return TwistedStructure(tuple(contact), tuple(orient), tuple(flags))
    except ValueError as exc:
        raise InputError(ptr, str(exc)) from None


def parse_involution(obj, G: StableGraph, ptr="/involution") -> GraphInvolution:
    vmap = _ints(_get(obj, "vertices", ptr), f"{ptr}/vertices", 0)
    emap = _ints(_get(obj, "edges", ptr, list(range(G.num_edges))), f"{ptr}/edges", 0)
    mmap = _ints(_get(obj, "markings", ptr, list(range(1, G.num_markings + 1))), f"{ptr}/markings", 1)
    if len(vmap) != G.num_vertices or any(v >= G.num_vertices for v in vmap):
        raise InputError(f"{ptr}/vertices", "need a vertex permutation")
    if len(emap) != G.num_edges or any(k >= G.num_edges for k in emap):
        raise InputError(f"{ptr}/edges", "need an edge permutation")
    if len(mmap) != G.num_markings:
        raise InputError(f"{ptr}/markings", "need one image per marking")
    flips = _get(obj, "flips", ptr, None)
    if flips is None:
        return GraphInvolution.build(G, vmap, emap, mmap)
    flips = [_bool(x, f"{ptr}/flips/{i}") for i, x in enumerate(_list(flips, f"{ptr}/flips"))]
    if len(flips) != G.num_edges:
        raise InputError(f"{ptr}/flips", "need one flag per edge")
    return GraphInvolution(tuple(vmap), tuple(emap), tuple(mmap), tuple(flips))


def parse_signs(obj, ptr="/signs") -> list[int]:
    """Signs as an array of +1/-1 or a comma separated string such as ``"+,-"``."""
    if isinstance(obj, str):
        out = []
        for i, tok in enumerate(t.strip() for t in obj.split(",") if t.strip()):
            if tok in ("+", "+1", "1"):
                out.append(1)
            elif tok in ("-", "-1"):
                out.append(-1)
            else:
                raise InputError(f"{ptr}/{i}", f"bad sign {tok!r}")
        return out
    out = _ints(obj, ptr)
    for i, s in enumerate(out):
        if s not in (1, -1):
            raise InputError(f"{ptr}/{i}", "sign must be 1 or -1")
    return out


def parse_hyp_signature(obj, ptr="/hyp_signature") -> HypSignature:
    return HypSignature(tuple(_ints(_get(obj, "fixed", ptr), f"{ptr}/fixed")),
                        tuple(_ints(_get(obj, "pairs", ptr, []), f"{ptr}/pairs")))


@dataclass
class Job:
    graph: Optional[StableGraph] = None
    signature: Optional[tuple[int, ...]] = None
    structure: Optional[TwistedStructure] = None
    involution: Optional[GraphInvolution] = None
    signs: Optional[list[int]] = None
    hyp_signature: Optional[HypSignature] = None


def parse_job(doc: Any) -> Job:
    if not isinstance(doc, dict):
        raise InputError("", "expected a JSON object")
    job = Job()
    if "graph" in doc:
        job.graph = parse_graph(doc["graph"])
        sig = _get(doc, "signature", "", [])
        job.signature = tuple(_ints(sig, "/signature"))
        if len(job.signature) != job.graph.num_markings:
            raise InputError("/signature", f"need one entry per marking ({job.graph.num_markings})")
        if "structure" in doc:
            job.structure = parse_structure(doc["structure"], job.graph)
        if "involution" in doc:
            job.involution = parse_involution(doc["involution"], job.graph)
    if "signs" in doc:
        job.signs = parse_signs(doc["signs"])
    if "hyp_signature" in doc:
        job.hyp_signature = parse_hyp_signature(doc["hyp_signature"])
    return job


def graph_to_json(G: StableGraph) -> dict:
    out = {
        "vertices": [{"genus": g, "name": G.vertex_name(v)} for v, g in enumerate(G.genera)],
        "edges": [list(e) for e in G.edges],
    }
    if G.edge_names is not None:
        out["edge_names"] = list(G.edge_names)
    out["legs"] = [{"marking": i, "vertex": v} for i, v in sorted(G.legs)]
    return out


def structure_to_json(T: TwistedStructure) -> dict:
    return {
        "contact": list(T.contact),
        "orientation": [o.label for o in T.orientation],
        "degenerate": list(T.degenerate),
    }


def involution_to_json(inv: GraphInvolution) -> dict:
    return {
        "vertices": list(inv.vertex_map),
        "edges": list(inv.edge_map),
        "markings": list(inv.marking_map),
        "flips": list(inv.edge_flips),
    }


def monoid_to_json(M: MinimalMonoid) -> dict:
    from .intlat import is_sharp

    return {
        "rank": M.rank,
        "sharp": is_sharp(M.monoid),
        "hilbert_basis": [list(h) for h in M.monoid.hilbert_basis],
        "images": {s: list(M.images[s]) for s in M.symbols},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
