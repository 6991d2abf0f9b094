"""Minimal monoids of weighted graphs and their hyperelliptic quotients.

The minimal monoid is built from the free abelian group on the symbols
``e_v`` (vertices) and ``e_l`` (edges) by imposing ``e_v = 0`` on
nondegenerate vertices and ``e_{v1} + c_l e_l = e_{v2}`` along every edge,
passing to the torsion-free quotient and saturating the submonoid generated
by the images.

Two independent constructions of the hyperelliptic monoid are provided:
:func:`hyperelliptic_monoid_quotient` identifies ``e_l`` with ``e_{ι(l)}`` on
swapped edges only, while :func:`hyperelliptic_monoid_coequalizer` quotients
by ``x - φ(x)`` for the full induced lattice automorphism ``φ``.
:func:`monoids_equal` compares them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .intlat import (
    AffineMonoid,
    IntMatrix,
    Lattice,
    Vector,
    contains,
    hermite_normal_form,
    integer_right_inverse,
    saturate,
    solve_rows_q,
    torsion_free_quotient,
)
from .stablegraph import GraphInvolution
from .twist import Orientation, WeightedGraph


class IncompatibleInvolution(ValueError):
    """The involution does not act on the weighted graph."""


@dataclass(frozen=True)
class MinimalMonoid:
    monoid: AffineMonoid
    vertex_symbols: tuple[str, ...]
    edge_symbols: tuple[str, ...]
    images: dict[str, Vector]

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.vertex_symbols + self.edge_symbols

    @property
    def rank(self) -> int:
        return self.monoid.ambient.rank

    def image(self, symbol: str) -> Vector:
        return self.images[symbol]

    def vertex_image(self, v: int) -> Vector:
        return self.images[self.vertex_symbols[v]]

    def edge_image(self, k: int) -> Vector:
        return self.images[self.edge_symbols[k]]


def vertex_symbol(W: WeightedGraph, v: int) -> str:
    return "e_{" + W.graph.vertex_name(v) + "}"


def edge_symbol(W: WeightedGraph, k: int) -> str:
    return "e_{" + W.graph.edge_name(k) + "}"


def _from_image_matrix(vsyms, esyms, P: IntMatrix) -> MinimalMonoid:
    """Canonical monoid whose symbol images are the columns of a surjective ``P``."""
    H, _ = hermite_normal_form(P)
    H = IntMatrix.from_rows([r for r in H.entries if any(r)], P.cols)
    k = H.rows
    ambient = Lattice.standard(k)
    symbols = tuple(vsyms) + tuple(esyms)
    images = {s: H.column(j) for j, s in enumerate(symbols)}
    monoid = saturate([images[s] for s in symbols], ambient, labels=symbols)
    return MinimalMonoid(monoid, tuple(vsyms), tuple(esyms), images)


def relation_rows(W: WeightedGraph) -> list[list[int]]:
    """Non-degeneracy and edge relations, one row per relation."""
    G, T = W.graph, W.structure
    nv, ne = G.num_vertices, G.num_edges
    rows = []
    for v in range(nv):
        if not T.degenerate[v]:
            r = [0] * (nv + ne)
            r[v] = 1
            rows.append(r)
    for k in range(ne):
        if T.orientation[k] == Orientation.NONE:
            hi, lo = G.edges[k]
        else:
            hi, lo = T.source_target(G, k)
        r = [0] * (nv + ne)
        r[hi] += 1
        r[lo] -= 1
        r[nv + k] += T.contact[k]
        if any(r):
            rows.append(r)
    return rows


def minimal_monoid(W: WeightedGraph) -> MinimalMonoid:
    """The minimal monoid of ``W`` with the images of all ``e_v`` and ``e_l``."""
    G = W.graph
    n = G.num_vertices + G.num_edges
    _, proj = torsion_free_quotient(n, IntMatrix.from_rows(relation_rows(W), n))
    vsyms = [vertex_symbol(W, v) for v in range(G.num_vertices)]
    esyms = [edge_symbol(W, k) for k in range(G.num_edges)]
    return _from_image_matrix(vsyms, esyms, proj)


def _image_matrix(M: MinimalMonoid, symbols: Sequence[str]) -> IntMatrix:
    return IntMatrix.from_rows(zip(*(M.images[s] for s in symbols)) if M.rank else [], len(symbols))


def _require_compatible(W: WeightedGraph, inv: GraphInvolution) -> None:
    from .hyper import check_involution_compat

    if not check_involution_compat(W, inv):
        raise IncompatibleInvolution("involution is not compatible with the weighted graph")


def _symbol_permutation(W: WeightedGraph, inv: GraphInvolution) -> list[int]:
    nv = W.graph.num_vertices
    return list(inv.vertex_map) + [nv + k for k in inv.edge_map]


def hyperelliptic_monoid_quotient(W: WeightedGraph, inv: GraphInvolution) -> MinimalMonoid:
    """Torsion-free quotient by ``e_l = e_{ι(l)}`` on swapped edges, then saturation."""
    _require_compatible(W, inv)
    M = minimal_monoid(W)
    k = M.rank
    rels = []
    for e in range(W.graph.num_edges):
        f = inv.edge_map[e]
        if f != e:
            rels.append([a - b for a, b in zip(M.edge_image(e), M.edge_image(f))])
    _, proj = torsion_free_quotient(k, IntMatrix.from_rows(rels, k))
    P = _image_matrix(M, M.symbols)
    return _from_image_matrix(M.vertex_symbols, M.edge_symbols, proj @ P)


def induced_automorphism(W: WeightedGraph, inv: GraphInvolution, M: Optional[MinimalMonoid] = None) -> IntMatrix:
    """Matrix of the lattice map sending each symbol image to the image of its ι-partner."""
    M = M or minimal_monoid(W)
    syms = M.symbols
    perm = _symbol_permutation(W, inv)
    P = _image_matrix(M, syms)
    P_inv = _image_matrix(M, [syms[j] for j in perm])
    if M.rank == 0:
        return IntMatrix.zeros(0, 0)
    phi = P_inv @ integer_right_inverse(P)
    if phi @ P != P_inv:
        raise IncompatibleInvolution("involution does not induce a lattice map on the minimal monoid")
    return phi


def hyperelliptic_monoid_coequalizer(W: WeightedGraph, inv: GraphInvolution) -> MinimalMonoid:
    """Coequalizer of ``φ`` and the identity: quotient by ``x - φ(x)``, torsion-free part, saturation."""
    _require_compatible(W, inv)
    M = minimal_monoid(W)
    k = M.rank
    phi = induced_automorphism(W, inv, M)
    rels = [[int(i == j) - phi[j, i] for j in range(k)] for i in range(k)]
    _, proj = torsion_free_quotient(k, IntMatrix.from_rows(rels, k))
    hb_images = [proj.apply(h) for h in M.monoid.hilbert_basis]
    P = proj @ _image_matrix(M, M.symbols)
    out = _from_image_matrix(M.vertex_symbols, M.edge_symbols, P)
    # the image of the Hilbert basis must generate the same saturation as the symbols
    assert saturate(hb_images, Lattice.standard(proj.rows)).hilbert_basis == \
        saturate(list(P.transpose().entries), Lattice.standard(proj.rows)).hilbert_basis
    return out


def _transfer(src: IntMatrix, dst: IntMatrix) -> Optional[IntMatrix]:
    """Integer ``T`` with ``T @ src == dst``, or None."""
    rows = list(src.entries)
    out = []
    for r in dst.entries:
        y = solve_rows_q(rows, r)
        if y is None or any(x.denominator != 1 for x in y):
            return None
        out.append([int(x) for x in y])
    T = IntMatrix.from_rows(out, src.rows)
    return T if T @ src == dst else None


def monoids_equal(A: MinimalMonoid, B: MinimalMonoid) -> bool:
    """True iff ``e ↦ e`` extends to inverse lattice isomorphisms matching the Hilbert bases."""
    if A.symbols != B.symbols or A.rank != B.rank:
        return False
    syms = A.symbols
    PA = IntMatrix.from_rows(
        zip(*(A.monoid.ambient.coordinates(A.images[s]) for s in syms)) if A.rank else [], len(syms))
    PB = IntMatrix.from_rows(
        zip(*(B.monoid.ambient.coordinates(B.images[s]) for s in syms)) if B.rank else [], len(syms))
    if A.rank == 0:
        return not A.monoid.hilbert_basis and not B.monoid.hilbert_basis
    T = _transfer(PA, PB)
    Tb = _transfer(PB, PA)
    if T is None or Tb is None:
        return False
    if T @ Tb != IntMatrix.identity(A.rank) or Tb @ T != IntMatrix.identity(A.rank):
        return False
    hbA = {T.apply(A.monoid.ambient.coordinates(h)) for h in A.monoid.hilbert_basis}
    hbB = {B.monoid.ambient.coordinates(h) for h in B.monoid.hilbert_basis}
    return hbA == hbB


def hyperelliptic_properties(W: WeightedGraph, inv: GraphInvolution, M: MinimalMonoid) -> list[str]:
    """Violations of the expected properties of a hyperelliptic monoid (empty if none)."""
    G, T = W.graph, W.structure
    problems = []
    for v in range(G.num_vertices):
        if T.degenerate[v] and not any(M.vertex_image(v)):
            problems.append(f"{M.vertex_symbols[v]} is trivial")
        if M.vertex_image(v) != M.vertex_image(inv.vertex_map[v]):
            problems.append(f"{M.vertex_symbols[v]} differs from its involution partner")
    for k in range(G.num_edges):
        if not any(M.edge_image(k)):
            problems.append(f"{M.edge_symbols[k]} is trivial")
        if M.edge_image(k) != M.edge_image(inv.edge_map[k]):
            problems.append(f"{M.edge_symbols[k]} differs from its involution partner")
    return problems


def _resolve(M: MinimalMonoid, x: Union[str, Sequence[int]]) -> Vector:
    return M.images[x] if isinstance(x, str) else tuple(int(a) for a in x)


def halve(M: MinimalMonoid, x: Union[str, Sequence[int]]) -> Optional[Vector]:
    """``y`` with ``2y = x`` and ``y`` in the monoid, or None."""
    v = _resolve(M, x)
    if any(a % 2 for a in v):
        return None
    y = tuple(a // 2 for a in v)
    return y if contains(M.monoid, y) else None


def refine_for_halving(M: MinimalMonoid, targets: Iterable[str]) -> tuple[MinimalMonoid, int]:
    """Smallest refinement of the ambient lattice in which every target becomes divisible by 2.

    Targets are processed in symbol order; each non-divisible target has
    half of it adjoined to the lattice and the monoid is re-saturated.
    Returns the refined monoid (in new coordinates) and the index of the old
    lattice in the new one.
    """
    wanted = set(targets)
    unknown = wanted - set(M.symbols)
    if unknown:
        raise KeyError(f"unknown symbols {sorted(unknown)}")
    index = 1
    images = dict(M.images)
    gens = [M.monoid.ambient.coordinates(h) for h in M.monoid.hilbert_basis]
    images = {s: M.monoid.ambient.coordinates(v) for s, v in images.items()}
    k = M.rank
    current = M
    for s in M.symbols:
        if s not in wanted or halve(current, images[s]) is not None:
            continue
        x = images[s]
        H, _ = hermite_normal_form(
            IntMatrix.from_rows([[2 * int(i == j) for j in range(k)] for i in range(k)] + [list(x)], k))
        basis = [r for r in H.entries if any(r)]
        step = 2 ** k // abs(IntMatrix.from_rows(basis, k).det())
        index *= step

        def recoord(v):
            y = solve_rows_q(basis, [2 * a for a in v])
            return tuple(int(a) for a in y)

        images = {t: recoord(v) for t, v in images.items()}
        half = tuple(int(a) for a in solve_rows_q(basis, list(x)))
        gens = [recoord(g) for g in gens] + [half]
        ambient = Lattice.standard(k)
        monoid = saturate(gens, ambient)
        current = MinimalMonoid(monoid, M.vertex_symbols, M.edge_symbols, images)
        gens = list(monoid.hilbert_basis)
    return current, index
