"""Dual graphs of marked nodal curves.

Edges are pairs of half-edges.  Edge ``k`` owns the half-edges ``(k, 0)``
and ``(k, 1)``; ``edges[k] == (a, b)`` means half-edge ``(k, 0)`` sits on
vertex ``a`` and ``(k, 1)`` on vertex ``b``.  Loops are edges with ``a == b``.
Legs carry global marking indices ``1..n``; a signature is positional, so
``signature[i - 1]`` is the contact order at marking ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from .twist import TwistedStructure


class GraphError(ValueError):
    """Raised for structurally malformed graph data."""


@dataclass(frozen=True)
class StableGraph:
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()
    legs: tuple[tuple[int, int], ...] = ()   # (marking, vertex)
    vertex_names: Optional[tuple[str, ...]] = None
    edge_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        nv = len(self.genera)
        object.__setattr__(self, "genera", tuple(int(g) for g in self.genera))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "legs", tuple((int(i), int(v)) for i, v in self.legs))
        for k, (a, b) in enumerate(self.edges):
            if not (0 <= a < nv and 0 <= b < nv):
                raise GraphError(f"edge {k} references a missing vertex")
        for i, v in self.legs:
            if not 0 <= v < nv:
                raise GraphError(f"leg {i} references a missing vertex")
        if self.vertex_names is not None:
            object.__setattr__(self, "vertex_names", tuple(self.vertex_names))
            if len(self.vertex_names) != nv or len(set(self.vertex_names)) != nv:
                raise GraphError("vertex_names must be distinct, one per vertex")
        if self.edge_names is not None:
            object.__setattr__(self, "edge_names", tuple(self.edge_names))
            if len(self.edge_names) != len(self.edges) or len(set(self.edge_names)) != len(self.edges):
                raise GraphError("edge_names must be distinct, one per edge")

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_markings(self) -> int:
        return len(self.legs)

    def vertex_name(self, v: int) -> str:
        return self.vertex_names[v] if self.vertex_names else f"v{v}"

    def edge_name(self, k: int) -> str:
        return self.edge_names[k] if self.edge_names else f"l{k}"

    def half_edge_vertex(self, k: int, side: int) -> int:
        return self.edges[k][side]

    def half_edges_at(self, v: int) -> list[tuple[int, int]]:
        return [(k, s) for k, e in enumerate(self.edges) for s in (0, 1) if e[s] == v]

    def legs_at(self, v: int) -> list[int]:
        return sorted(i for i, w in self.legs if w == v)

    def leg_vertex(self, marking: int) -> int:
        for i, v in self.legs:
            if i == marking:
                return v
        raise KeyError(marking)

    def is_loop(self, k: int) -> bool:
        a, b = self.edges[k]
        return a == b

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def components(self, edges: Optional[Sequence[int]] = None) -> list[list[int]]:
        """Connected components (sorted vertex lists) using only ``edges``."""
        use = range(self.num_edges) if edges is None else edges
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in use:
            a, b = self.edges[k]
            parent[find(a)] = find(b)
        comps: dict[int, list[int]] = {}
        for v in range(self.num_vertices):
            comps.setdefault(find(v), []).append(v)
        return sorted(comps.values())

    def relabel(self, vperm: Sequence[int], eperm: Sequence[int], flips: Sequence[bool] = ()) -> "StableGraph":
        """Copy with vertex ``v`` renamed ``vperm[v]`` and edge ``k`` moved to ``eperm[k]``."""
        flips = list(flips) or [False] * self.num_edges
        genera = [0] * self.num_vertices
        for v, g in enumerate(self.genera):
            genera[vperm[v]] = g
        edges = [None] * self.num_edges
        enames = [None] * self.num_edges
        for k, (a, b) in enumerate(self.edges):
            e = (vperm[a], vperm[b])
            edges[eperm[k]] = e[::-1] if flips[k] else e
            enames[eperm[k]] = self.edge_name(k)
        vnames = [None] * self.num_vertices
        for v in range(self.num_vertices):
            vnames[vperm[v]] = self.vertex_name(v)
        return StableGraph(
            tuple(genera),
            tuple(edges),
            tuple(sorted((i, vperm[v]) for i, v in self.legs)),
            tuple(vnames),
            tuple(enames),
        )


def genus(G: StableGraph) -> int:
    """Arithmetic genus: sum of vertex genera plus the first Betti number."""
    return sum(G.genera) + G.num_edges - G.num_vertices + len(G.components())


def validate(G: StableGraph, signature: Optional[Sequence[int]] = None) -> Optional[str]:
    """Return ``None`` if ``G`` (and ``signature``) are valid, else the first violated rule."""
    if G.num_vertices == 0:
        return "graph has no vertices"
    if any(g < 0 for g in G.genera):
        return "negative vertex genus"
    if not G.is_connected():
        return "not connected"
    marks = sorted(i for i, _ in G.legs)
    if marks != list(range(1, len(marks) + 1)):
        return f"markings {marks} are not exactly 1..{len(marks)}"
    g = genus(G)
    if g < 0:
        return "negative genus"
    if signature is not None:
        if len(signature) != len(marks):
            return f"signature has {len(signature)} entries for {len(marks)} markings"
        if any(m < 0 for m in signature):
            return "negative signature entry"
        total = sum(signature)
        if total != 2 * g - 2:
            return f"degree mismatch {total} ≠ {2 * g - 2}"
    return None


@dataclass(frozen=True)
class GraphInvolution:
    """Action of an involution on vertices, edges and markings.

    ``edge_flips[k]`` says whether half-edge ``(k, 0)`` goes to
    ``(edge_map[k], 1)`` instead of ``(edge_map[k], 0)``.
    """

    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    marking_map: tuple[int, ...]   # marking_map[i - 1] is the image of marking i
    edge_flips: tuple[bool, ...]

    @classmethod
    def identity(cls, G: StableGraph) -> "GraphInvolution":
        return cls(
            tuple(range(G.num_vertices)),
            tuple(range(G.num_edges)),
            tuple(range(1, G.num_markings + 1)),
            (False,) * G.num_edges,
        )

    @classmethod
    def build(cls, G: StableGraph, vertex_map: Sequence[int], edge_map: Sequence[int],
              marking_map: Optional[Sequence[int]] = None,
              loop_flips: Sequence[int] = ()) -> "GraphInvolution":
        """Infer half-edge flips from the vertex map.

        Only loops are ambiguous; list the loops whose branches are swapped
        in ``loop_flips``.
        """
        if marking_map is None:
            marking_map = range(1, G.num_markings + 1)
        flips = []
        for k, (a, b) in enumerate(G.edges):
            if a == b:
                flips.append(k in loop_flips)
                continue
            ta, tb = G.edges[edge_map[k]]
            flips.append((vertex_map[a], vertex_map[b]) == (tb, ta) and ta != tb)
        return cls(tuple(vertex_map), tuple(edge_map), tuple(marking_map), tuple(flips))

    def half_edge(self, k: int, side: int) -> tuple[int, int]:
        return self.edge_map[k], side ^ int(self.edge_flips[k])

    def marking(self, i: int) -> int:
        return self.marking_map[i - 1]


def check_involution(G: StableGraph, inv: GraphInvolution) -> bool:
    """True iff ``inv`` squares to the identity and preserves incidence and genus."""
    nv, ne, nm = G.num_vertices, G.num_edges, G.num_markings
    if (len(inv.vertex_map), len(inv.edge_map), len(inv.edge_flips), len(inv.marking_map)) != (nv, ne, ne, nm):
        return False
    if sorted(inv.vertex_map) != list(range(nv)) or sorted(inv.edge_map) != list(range(ne)):
        return False
    if sorted(inv.marking_map) != list(range(1, nm + 1)):
        return False
    if any(inv.vertex_map[inv.vertex_map[v]] != v for v in range(nv)):
        return False
    if any(inv.edge_map[inv.edge_map[k]] != k for k in range(ne)):
        return False
    if any(inv.marking(inv.marking(i)) != i for i in range(1, nm + 1)):
        return False
    if any(inv.edge_flips[k] != inv.edge_flips[inv.edge_map[k]] for k in range(ne)):
        return False
    if any(G.genera[inv.vertex_map[v]] != g for v, g in enumerate(G.genera)):
        return False
    for k in range(ne):
        for s in (0, 1):
            tk, ts = inv.half_edge(k, s)
            if G.edges[tk][ts] != inv.vertex_map[G.edges[k][s]]:
                return False
    for i, v in G.legs:
        if G.leg_vertex(inv.marking(i)) != inv.vertex_map[v]:
            return False
    return True


def compose(G: StableGraph, a: GraphInvolution, b: GraphInvolution) -> GraphInvolution:
    """The map ``a ∘ b`` (apply ``b`` first)."""
    return GraphInvolution(
        tuple(a.vertex_map[b.vertex_map[v]] for v in range(G.num_vertices)),
        tuple(a.edge_map[b.edge_map[k]] for k in range(G.num_edges)),
        tuple(a.marking(b.marking(i)) for i in range(1, G.num_markings + 1)),
        tuple(b.edge_flips[k] != a.edge_flips[b.edge_map[k]] for k in range(G.num_edges)),
    )


def _dot_id(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def to_dot(G: StableGraph, structure: Optional["TwistedStructure"] = None) -> str:
    """Graphviz DOT text for ``G``.

    Without a structure the output is an undirected graph.  With one, edges
    point from the higher to the lower vertex and carry ``c=<contact>``;
    unoriented edges are drawn without arrowheads.
    """
    directed = structure is not None
    arrow = " -> " if directed else " -- "
    lines = [("digraph" if directed else "graph") + " G {"]
    for v in range(G.num_vertices):
        lines.append(f"  {_dot_id(G.vertex_name(v))} [label=\"{G.vertex_name(v)} (g={G.genera[v]})\"];")
    for i, v in sorted(G.legs):
        lines.append(f"  {_dot_id(f'm{i}')} [shape=plaintext, label=\"{i}\"];")
        lines.append(f"  {_dot_id(G.vertex_name(v))}{arrow}{_dot_id(f'm{i}')} [style=dashed, arrowhead=none];"
                     if directed else
                     f"  {_dot_id(G.vertex_name(v))}{arrow}{_dot_id(f'm{i}')} [style=dashed];")
    for k, (a, b) in enumerate(G.edges):
        attrs = [f"label=\"{G.edge_name(k)}\""]
        if structure is not None:
            o = structure.orientation[k]
            if o < 0:
                a, b = b, a
            attrs = [f"label=\"c={structure.contact[k]}\"", f"id=\"{G.edge_name(k)}\""]
            if o == 0:
                attrs.append("dir=none")
        lines.append(f"  {_dot_id(G.vertex_name(a))}{arrow}{_dot_id(G.vertex_name(b))} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
