"""Hyperelliptic layer: involution compatibility, double-cover checks and signatures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .stablegraph import GraphInvolution, StableGraph, check_involution
from .twist import Orientation, WeightedGraph


@dataclass(frozen=True)
class HypSignature:
    """Orders at the involution-fixed markings and at each swapped marking pair."""

    fixed: tuple[int, ...]
    pairs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fixed", tuple(int(m) for m in self.fixed))
        object.__setattr__(self, "pairs", tuple(int(c) for c in self.pairs))

    @property
    def genus(self) -> Optional[int]:
        """Genus forced by ``2g + 2`` fixed markings, or None if the count is odd."""
        n1 = len(self.fixed)
        return (n1 - 2) // 2 if n1 % 2 == 0 and n1 >= 2 else None


def _check_entries(mu: HypSignature) -> None:
    for i, m in enumerate(mu.fixed):
        if m < 0 or m % 2:
            raise ValueError(f"fixed entry {i} = {m} must be even and nonnegative")
    for j, c in enumerate(mu.pairs):
        if c <= 0:
            raise ValueError(f"pair entry {j} = {c} must be positive")


def check_nonempty(mu: HypSignature) -> bool:
    _check_entries(mu)
    return len(mu.fixed) - 4 == sum(mu.fixed) + 2 * sum(mu.pairs)


def quadratic_pushforward(mu: HypSignature) -> tuple[int, ...]:
    """Signature of the square of the differential on the rational quotient."""
    if not mu.fixed and not mu.pairs:
        raise ValueError("empty signature")
    if not check_nonempty(mu):
        raise ValueError("signature violates the non-emptiness condition")
    out = mu.fixed + tuple(2 * c for c in mu.pairs)
    if sum(out) != len(mu.fixed) - 4:
        raise AssertionError("pushforward broke the non-emptiness condition")
    return out


@dataclass(frozen=True)
class EdgeOrbitSplit:
    fixed: tuple[int, ...]
    swapped: tuple[int, ...]

    def pairs(self, inv: GraphInvolution) -> list[tuple[int, int]]:
        return [(k, inv.edge_map[k]) for k in self.swapped if k < inv.edge_map[k]]


def edge_orbit_split(G: StableGraph, inv: GraphInvolution) -> EdgeOrbitSplit:
    fixed = tuple(k for k in range(G.num_edges) if inv.edge_map[k] == k)
    swapped = tuple(k for k in range(G.num_edges) if inv.edge_map[k] != k)
    return EdgeOrbitSplit(fixed, swapped)


def check_involution_compat(W: WeightedGraph, inv: GraphInvolution) -> bool:
    """Degeneracy, marking orders, contact orders and edge directions all preserved."""
    G, T = W.graph, W.structure
    if not check_involution(G, inv):
        return False
    if any(T.degenerate[v] != T.degenerate[inv.vertex_map[v]] for v in range(G.num_vertices)):
        return False
    if any(W.signature[i - 1] != W.signature[inv.marking(i) - 1] for i in range(1, G.num_markings + 1)):
        return False
    for k in range(G.num_edges):
        t = inv.edge_map[k]
        if T.contact[k] != T.contact[t]:
            return False
        if T.orientation[k] == Orientation.NONE:
            continue
        src, _ = T.source_target(G, k)
        if T.source_target(G, t)[0] != inv.vertex_map[src]:
            return False
    return True


def quotient_cover_check(G: StableGraph, inv: GraphInvolution) -> Optional[str]:
    """None if ``G -> G/ι`` passes the double-cover checks, else the first failure."""
    if not check_involution(G, inv):
        return "not a graph involution"
    for k in range(G.num_edges):
        if inv.edge_map[k] == k and inv.edge_flips[k]:
            return f"edge {G.edge_name(k)} is fixed with its branches exchanged"
    for v in range(G.num_vertices):
        if inv.vertex_map[v] != v and G.genera[v] != 0:
            return f"swapped component {G.vertex_name(v)} must be rational"
    nv_q = len({min(v, inv.vertex_map[v]) for v in range(G.num_vertices)})
    ne_q = len({min(k, inv.edge_map[k]) for k in range(G.num_edges)})
    if ne_q - nv_q + 1 != 0:
        return "quotient not a tree"
    for v in range(G.num_vertices):
        if inv.vertex_map[v] != v:
            continue
        fixed = sum(1 for i in G.legs_at(v) if inv.marking(i) == i)
        fixed += sum(1 for k, s in G.half_edges_at(v) if inv.half_edge(k, s) == (k, s))
        want = 2 * G.genera[v] + 2
        if fixed != want:
            return f"component {G.vertex_name(v)} has {fixed} fixed special points, expected {want}"
    return None


def hyperelliptic_signature(W: WeightedGraph, inv: GraphInvolution) -> HypSignature:
    """Split the signature of ``W`` into fixed markings and swapped pairs."""
    fixed, pairs = [], []
    for i in range(1, W.graph.num_markings + 1):
        j = inv.marking(i)
        if j == i:
            fixed.append(W.signature[i - 1])
        elif i < j:
            pairs.append(W.signature[i - 1])
    return HypSignature(tuple(fixed), tuple(pairs))
