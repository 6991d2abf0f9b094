"""Spin parity of even-signature structures on all-rational graphs.

Pipeline: even-signature check, orbifold bookkeeping at odd-contact nodes,
base change making half of every degenerate ``e_v`` available, spin degrees
per component, then an exact ``h0`` count on each piece left after cutting
the odd-contact nodes.

On a rational component of spin degree ``d`` the sections are modelled by
polynomials of degree ``<= d`` in a fixed affine coordinate.  Each node
branch sits at an integer coordinate and an even-contact node with sign
``s`` imposes ``f(b1) = s * f(b2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .diffdata import half_edge_point, leg_point
from .intlat import rank_mod_p, rank_q
from .minmonoid import MinimalMonoid, minimal_monoid, refine_for_halving, vertex_symbol
from .stablegraph import GraphError
from .twist import Orientation, WeightedGraph, degree_residual

PRIME = 2**61 - 1


class UnsupportedRegime(Exception):
    """Input lies outside the regime where parity is certified (a vertex of positive genus)."""


def check_even_signature(mu: Sequence[int]) -> bool:
    return all(m % 2 == 0 for m in mu)


@dataclass(frozen=True)
class OrbifoldLift:
    multipliers: tuple[int, ...]     # per edge: 1 for even contact, 2 for odd
    even_edges: tuple[int, ...]
    odd_edges: tuple[int, ...]

    @property
    def orbifold_nodes(self) -> int:
        return len(self.odd_edges)

    def chart(self, k: int) -> str:
        """Local coordinate map at node ``k``."""
        return "(x, y) -> (x^2, y^2)" if self.multipliers[k] == 2 else "(x, y) -> (x, y)"


def orbifold_lift_map(W: WeightedGraph) -> OrbifoldLift:
    c = W.structure.contact
    mult = tuple(2 if ck % 2 else 1 for ck in c)
    return OrbifoldLift(
        mult,
        tuple(k for k, m in enumerate(mult) if m == 1),
        tuple(k for k, m in enumerate(mult) if m == 2),
    )


def divisibility_base_change(W: WeightedGraph, M: Optional[MinimalMonoid] = None) -> tuple[MinimalMonoid, int]:
    M = M or minimal_monoid(W)
    targets = [vertex_symbol(W, v) for v in range(W.graph.num_vertices) if W.structure.degenerate[v]]
    return refine_for_halving(M, targets)


@dataclass(frozen=True)
class SpinDegrees:
    degrees: tuple[int, ...]                  # per vertex index
    divisor: dict[str, dict[str, int]]       # vertex name -> point -> coefficient

    def total(self) -> int:
        return sum(self.degrees)


def _half_edge_spin(W: WeightedGraph, k: int, side: int) -> int:
    T = W.structure
    o, c = T.orientation[k], T.contact[k]
    if o == Orientation.NONE:
        return 0
    outgoing = (o == Orientation.FORWARD) == (side == 0)
    if c % 2 == 0:
        return c // 2 if outgoing else -(c // 2)
    # odd contact: sections vanish at the orbifold point, round the half-degree down
    return (c - 1) // 2 if outgoing else -(c + 1) // 2


def spin_degrees(W: WeightedGraph) -> SpinDegrees:
    G = W.graph
    if not check_even_signature(W.signature):
        raise ValueError("signature has an odd entry")
    res = degree_residual(G, W.signature, W.structure)
    if any(res.values()):
        raise GraphError("structure does not satisfy the degree conditions")
    divisor = {G.vertex_name(v): {} for v in range(G.num_vertices)}
    degrees = [0] * G.num_vertices
    for i, v in sorted(G.legs):
        divisor[G.vertex_name(v)][leg_point(i)] = W.signature[i - 1] // 2
        degrees[v] += W.signature[i - 1] // 2
    for k, e in enumerate(G.edges):
        for side in (0, 1):
            x = _half_edge_spin(W, k, side)
            divisor[G.vertex_name(e[side])][half_edge_point(G, k, side)] = x
            degrees[e[side]] += x
    return SpinDegrees(tuple(degrees), divisor)


@dataclass(frozen=True)
class RationalPiece:
    """Connected union of rational components glued at even-contact nodes.

    ``nodes`` lists ``(vertex_a, vertex_b, sign)`` with indices local to the
    piece; a loop has ``vertex_a == vertex_b``.
    """

    degrees: tuple[int, ...]
    nodes: tuple[tuple[int, int, int], ...]

    def branches(self) -> list[list[tuple[int, int]]]:
        """Per vertex, the ``(node, side)`` branches in node order."""
        out = [[] for _ in self.degrees]
        for z, (a, b, _) in enumerate(self.nodes):
            out[a].append((z, 0))
            out[b].append((z, 1))
        return out


def default_placement(piece: RationalPiece) -> dict[tuple[int, int], int]:
    """Branches on each vertex at 0, 1, 2, ... in node order."""
    return {br: j for brs in piece.branches() for j, br in enumerate(brs)}


def random_placement(piece: RationalPiece, rng: random.Random, spread: int = 1000) -> dict[tuple[int, int], int]:
    out = {}
    for brs in piece.branches():
        for br, x in zip(brs, rng.sample(range(-spread, spread + 1), len(brs))):
            out[br] = x
    return out


def _gluing_matrix(piece: RationalPiece, placement) -> tuple[list[list[int]], int]:
    offsets, n = [], 0
    for d in piece.degrees:
        offsets.append(n)
        n += max(d + 1, 0)
    rows = []
    for z, (a, b, s) in enumerate(piece.nodes):
        row = [0] * n
        for v, side, coef in ((a, 0, 1), (b, 1, -s)):
            x = placement[(z, side)]
            for j in range(max(piece.degrees[v] + 1, 0)):
                row[offsets[v] + j] += coef * x**j
        rows.append(row)
    return rows, n


def h0_parity(piece: RationalPiece, placement=None) -> tuple[int, str]:
    """Exact ``h0`` of the glued spin bundle on ``piece`` and its parity."""
    if any(s not in (1, -1) for _, _, s in piece.nodes):
        raise ValueError("gluing signs must be +1 or -1")
    placement = placement or default_placement(piece)
    for brs in piece.branches():
        xs = [placement[br] for br in brs]
        if len(set(xs)) != len(xs):
            raise ValueError("branch points on a component must be distinct")
    rows, n = _gluing_matrix(piece, placement)
    r = rank_q(rows, n) if rows else 0
    if rows and r != rank_mod_p(rows, n, PRIME):
        # guards the exact elimination; a genuine drop mod p needs p to divide every maximal minor
        raise ArithmeticError("rational and modular ranks disagree")
    h0 = n - r
    return h0, "odd" if h0 % 2 else "even"


@dataclass(frozen=True)
class SpinInput:
    weighted: WeightedGraph
    signs: tuple[Optional[int], ...]     # per edge; None on odd-contact edges

    @classmethod
    def build(cls, W: WeightedGraph, signs: Union[Sequence[int], Mapping[int, int]]) -> "SpinInput":
        """Accept one sign per even-contact edge (edge order) or a mapping edge index -> sign."""
        lift = orbifold_lift_map(W)
        if isinstance(signs, Mapping):
            if set(signs) != set(lift.even_edges):
                raise ValueError("signs must be given exactly on the even-contact edges")
            full = [signs.get(k) for k in range(W.graph.num_edges)]
        else:
            signs = list(signs)
            if len(signs) != len(lift.even_edges):
                raise ValueError(f"expected {len(lift.even_edges)} signs, got {len(signs)}")
            full = [None] * W.graph.num_edges
            for k, s in zip(lift.even_edges, signs):
                full[k] = s
        for s in full:
            if s is not None and s not in (1, -1):
                raise ValueError("signs must be +1 or -1")
        return cls(W, tuple(full))


def spin_pieces(W: WeightedGraph, signs: Sequence[Optional[int]], degrees: SpinDegrees) -> list[tuple[list[int], RationalPiece]]:
    """Pieces left after cutting odd-contact nodes, each with its global vertex list."""
    G = W.graph
    lift = orbifold_lift_map(W)
    out = []
    for comp in G.components(lift.even_edges):
        local = {v: i for i, v in enumerate(comp)}
        nodes = tuple(
            (local[G.edges[k][0]], local[G.edges[k][1]], signs[k])
            for k in lift.even_edges if G.edges[k][0] in local
        )
        out.append((comp, RationalPiece(tuple(degrees.degrees[v] for v in comp), nodes)))
    return out


def _require_rational(W: WeightedGraph) -> None:
    G = W.graph
    for v, g in enumerate(G.genera):
        if g:
            raise UnsupportedRegime(f"vertex {G.vertex_name(v)} has genus {g}; only rational components are supported")


def spin_report(inp: SpinInput, placement_seed: Optional[int] = None) -> dict:
    """Run the full pipeline and return every intermediate quantity."""
    W = inp.weighted
    if not check_even_signature(W.signature):
        raise ValueError("signature has an odd entry")
    _require_rational(W)
    lift = orbifold_lift_map(W)
    _, index = divisibility_base_change(W)
    degrees = spin_degrees(W)
    rng = random.Random(placement_seed) if placement_seed is not None else None
    pieces = []
    total = 0
    for comp, piece in spin_pieces(W, inp.signs, degrees):
        placement = random_placement(piece, rng) if rng else None
        h0, _ = h0_parity(piece, placement)
        total += h0
        pieces.append({"vertices": [W.graph.vertex_name(v) for v in comp], "h0": h0})
    return {
        "multipliers": list(lift.multipliers),
        "orbifold_nodes": lift.orbifold_nodes,
        "base_change_index": index,
        "spin_degrees": {W.graph.vertex_name(v): d for v, d in enumerate(degrees.degrees)},
        "pieces": pieces,
        "h0": total,
        "parity": "odd" if total % 2 else "even",
    }


def spin_parity(inp: SpinInput) -> str:
    return spin_report(inp)["parity"]
