"""Zero and pole orders of the differential induced on each component.

Points are named ``m<i>`` for the leg carrying marking ``i`` and
``<edge>[<side>]`` for a half-edge.  Orders depend only on the weighted
graph, so rescaling a chart by a unit changes nothing but provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .stablegraph import GraphError, StableGraph
from .twist import WeightedGraph, degree_residual, half_edge_order


def leg_point(i: int) -> str:
    return f"m{i}"


def half_edge_point(G: StableGraph, k: int, side: int) -> str:
    return f"{G.edge_name(k)}[{side}]"


@dataclass(frozen=True)
class OrderAssignment:
    orders: dict[str, dict[str, int]]
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def total(self, vertex: str) -> int:
        return sum(self.orders[vertex].values())

    def to_json(self) -> dict:
        return {v: dict(sorted(pts.items())) for v, pts in self.orders.items()}


def induced_orders(W: WeightedGraph) -> OrderAssignment:
    G, T = W.graph, W.structure
    res = degree_residual(G, W.signature, T)
    bad = [v for v in range(G.num_vertices) if res[v]]
    if bad:
        v = bad[0]
        raise GraphError(f"vertex {G.vertex_name(v)} has degree residual {res[v]}")
    orders = {G.vertex_name(v): {} for v in range(G.num_vertices)}
    for i, v in sorted(G.legs):
        orders[G.vertex_name(v)][leg_point(i)] = W.signature[i - 1]
    for k, e in enumerate(G.edges):
        for side in (0, 1):
            orders[G.vertex_name(e[side])][half_edge_point(G, k, side)] = half_edge_order(T, k, side)
    return OrderAssignment(orders)


def rescale_class(W: WeightedGraph, vertex: int, unit: str, base: OrderAssignment = None) -> OrderAssignment:
    """Orders after rescaling the chart at ``vertex`` by ``unit``: unchanged, with the unit logged."""
    if not 0 <= vertex < W.graph.num_vertices:
        raise IndexError(vertex)
    base = base or induced_orders(W)
    note = f"{W.graph.vertex_name(vertex)}*{unit}"
    return OrderAssignment(base.orders, base.provenance + (note,))
