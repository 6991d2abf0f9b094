"""Twisted structures on a stable graph: contact orders, orientations, degeneracy.

A :class:`TwistedStructure` decorates each edge with a contact order and an
orientation (from the bigger vertex to the smaller one under the minimal
partial ordering) and each vertex with a degeneracy flag.  Together with the
graph and the signature this is the weighted graph of a log twisted
differential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

from .stablegraph import GraphError, StableGraph, validate


class Orientation(IntEnum):
    BACKWARD = -1
    NONE = 0
    FORWARD = 1

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "Orientation":
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown orientation {value!r}") from None
        return cls(int(value))


@dataclass(frozen=True)
class TwistedStructure:
    contact: tuple[int, ...]
    orientation: tuple[Orientation, ...]
    degenerate: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "contact", tuple(int(c) for c in self.contact))
        object.__setattr__(self, "orientation", tuple(Orientation.parse(o) for o in self.orientation))
        object.__setattr__(self, "degenerate", tuple(bool(d) for d in self.degenerate))
        if len(self.contact) != len(self.orientation):
            raise ValueError("contact and orientation must have one entry per edge")
        for k, (c, o) in enumerate(zip(self.contact, self.orientation)):
            if c < 0:
                raise ValueError(f"edge {k}: negative contact order")
            if (c == 0) != (o == Orientation.NONE):
                raise ValueError(f"edge {k}: orientation must be none exactly when the contact order is 0")

    def source_target(self, G: StableGraph, k: int) -> tuple[int, int]:
        """(higher, lower) endpoints of an oriented edge."""
        a, b = G.edges[k]
        return (a, b) if self.orientation[k] == Orientation.FORWARD else (b, a)


@dataclass(frozen=True)
class WeightedGraph:
    graph: StableGraph
    signature: tuple[int, ...]
    structure: TwistedStructure

    def __post_init__(self):
        object.__setattr__(self, "signature", tuple(int(m) for m in self.signature))
        _check_shape(self.graph, self.signature, self.structure)


def _check_shape(G: StableGraph, mu: Sequence[int], T: TwistedStructure) -> None:
    if len(T.contact) != G.num_edges:
        raise GraphError(f"structure has {len(T.contact)} edges, graph has {G.num_edges}")
    if len(T.degenerate) != G.num_vertices:
        raise GraphError(f"structure has {len(T.degenerate)} vertex flags, graph has {G.num_vertices}")
    if len(mu) != G.num_markings:
        raise GraphError(f"signature has {len(mu)} entries for {G.num_markings} markings")
    for k in range(G.num_edges):
        if G.is_loop(k) and T.contact[k] != 0:
            raise GraphError(f"loop {G.edge_name(k)} must have contact order 0")


def half_edge_order(T: TwistedStructure, k: int, side: int) -> int:
    """Zero/pole order of the induced differential at half-edge ``(k, side)``."""
    o, c = T.orientation[k], T.contact[k]
    if o == Orientation.NONE:
        return -1
    outgoing = (o == Orientation.FORWARD) == (side == 0)
    return c - 1 if outgoing else -(c + 1)


def degree_residual(G: StableGraph, mu: Sequence[int], T: TwistedStructure) -> dict[int, int]:
    """Per-vertex excess of the induced order divisor over ``2 g_v - 2``.

    A structure satisfies the degree conditions iff every residual is 0.
    """
    _check_shape(G, mu, T)
    res = {v: -(2 * g - 2) for v, g in enumerate(G.genera)}
    for i, v in G.legs:
        res[v] += mu[i - 1]
    for k, e in enumerate(G.edges):
        for side in (0, 1):
            res[e[side]] += half_edge_order(T, k, side)
    return res


def strict_edges_acyclic(G: StableGraph, T: TwistedStructure) -> bool:
    """True iff the edges with positive contact order form no directed cycle."""
    succ = {v: [] for v in range(G.num_vertices)}
    indeg = [0] * G.num_vertices
    for k in range(G.num_edges):
        if T.orientation[k] != Orientation.NONE:
            s, t = T.source_target(G, k)
            succ[s].append(t)
            indeg[t] += 1
    stack = [v for v in range(G.num_vertices) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == G.num_vertices


def default_degeneracy(G: StableGraph, contact: Sequence[int], orientation: Sequence[Orientation]) -> tuple[bool, ...]:
    """Flag a vertex degenerate iff some strictly oriented edge points into it."""
    flags = [False] * G.num_vertices
    for k, (a, b) in enumerate(G.edges):
        if orientation[k] == Orientation.FORWARD:
            flags[b] = True
        elif orientation[k] == Orientation.BACKWARD:
            flags[a] = True
    return tuple(flags)


def is_consistent(G: StableGraph, mu: Sequence[int], T: TwistedStructure) -> bool:
    """Check that the minimal monoid realises ``T``.

    The minimal monoid must be sharp, every smoothing element ``e_l`` must
    be nonzero, and ``e_v`` must be nonzero exactly on degenerate vertices.
    """
    from .minmonoid import minimal_monoid
    from .intlat import is_sharp

    W = WeightedGraph(G, tuple(mu), T)
    M = minimal_monoid(W)
    if not is_sharp(M.monoid):
        return False
    for k in range(G.num_edges):
        if not any(M.edge_image(k)):
            return False
    return all(bool(any(M.vertex_image(v))) == T.degenerate[v] for v in range(G.num_vertices))


def _edge_options(G: StableGraph, k: int, max_contact: int):
    yield 0, Orientation.NONE
    if G.is_loop(k):
        return
    for c in range(1, max_contact + 1):
        yield c, Orientation.FORWARD
        yield c, Orientation.BACKWARD


def enumerate_structures(G: StableGraph, mu: Sequence[int], max_contact: int,
                         require_consistent: bool = False) -> list[TwistedStructure]:
    """All twisted structures with zero degree residuals and contact orders ``<= max_contact``.

    The positively oriented edges must form no directed cycle.  By default
    each admissible choice of contacts and orientations is reported once,
    with :func:`default_degeneracy` flags.  With ``require_consistent`` the
    flags are instead searched over all assignments with at least one
    nondegenerate vertex, keeping those accepted by :func:`is_consistent`.
    Output order is deterministic.
    """
    problem = validate(G, mu)
    if problem is not None:
        raise GraphError(problem)
    if max_contact < 0:
        raise ValueError("max_contact must be nonnegative")

    nv, ne = G.num_vertices, G.num_edges
    base = [-(2 * g - 2) for g in G.genera]
    for i, v in G.legs:
        base[v] += mu[i - 1]
    last_edge = [-1] * nv
    for k, (a, b) in enumerate(G.edges):
        last_edge[a] = max(last_edge[a], k)
        last_edge[b] = max(last_edge[b], k)
    if any(base[v] != 0 for v in range(nv) if last_edge[v] < 0):
        return []
    closing = [[v for v in range(nv) if last_edge[v] == k] for k in range(ne)]
    options = [list(_edge_options(G, k, max_contact)) for k in range(ne)]

    found = []
    res = list(base)
    contact = [0] * ne
    orient = [Orientation.NONE] * ne

    def place(k):
        if k == ne:
            found.append((tuple(contact), tuple(orient)))
            return
        a, b = G.edges[k]
        for c, o in options[k]:
            if o == Orientation.NONE:
                da, db = -1, -1
            elif o == Orientation.FORWARD:
                da, db = c - 1, -(c + 1)
            else:
                da, db = -(c + 1), c - 1
            res[a] += da
            res[b] += db
            if all(res[v] == 0 for v in closing[k]):
                contact[k], orient[k] = c, o
                place(k + 1)
            res[a] -= da
            res[b] -= db

    place(0)

    out = []
    for c, o in found:
        probe = TwistedStructure(c, o, (False,) * nv)
        if not strict_edges_acyclic(G, probe):
            continue
        if not require_consistent:
            out.append(TwistedStructure(c, o, default_degeneracy(G, c, o)))
            continue
        for flags in itertools.product((False, True), repeat=nv):
            if all(flags):
                continue
            T = TwistedStructure(c, o, flags)
            if is_consistent(G, mu, T):
                out.append(T)
    return out
