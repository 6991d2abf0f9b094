"""Exact integer lattice and affine monoid algebra.

Everything here works over Python integers and :class:`fractions.Fraction`;
there is no floating point anywhere in the module.  The main entry points are

* :func:`smith_normal_form` and :func:`hermite_normal_form`,
* :func:`torsion_free_quotient` (torsion-free part of ``Z^n / rowspan(R)``),
* :func:`saturate`, which returns the saturation ``cone(M) ∩ L`` of a
  finitely generated monoid inside an explicit ambient lattice ``L``
  together with its Hilbert basis,
* :func:`is_sharp` and :func:`contains`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix in row-major order."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError(f"row {r!r} does not have {self.cols} entries")
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"matrix entries must be int, got {x!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
        )

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def transpose(self) -> "IntMatrix":
        if self.rows == 0:
            return IntMatrix.zeros(self.cols, 0)
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)


def _as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)


# -- normal forms -----------------------------------------------------------


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ A @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with nonnegative
    entries ``s1 | s2 | ...``.  The pivot choice is deterministic (smallest
    absolute value, then lowest row, then lowest column).
    """
    A = _as_matrix(A)
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if S[i][j] != 0 and (best is None or abs(S[i][j]) < best[0]):
                        best = (abs(S[i][j]), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    add_row(i, t, -q)
                if S[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    add_col(j, t, -q)
                if S[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]

    return (
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(S, n),
        IntMatrix.from_rows(V, n),
    )


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, W)`` with ``W`` unimodular and ``W @ A == H``.  ``H`` is in
    row echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows are at the bottom.  The form is unique for
    a given row space.
    """
    A = _as_matrix(A)
    m, n = A.rows, A.cols
    H = [list(r) for r in A.entries]
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][j] != 0]
            if not nz:
                break
            k = min(nz, key=lambda i: (abs(H[i][j]), i))
            H[r], H[k] = H[k], H[r]
            W[r], W[k] = W[k], W[r]
            done = True
            for i in range(r + 1, m):
                q = H[i][j] // H[r][j]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    W[i] = [a - q * b for a, b in zip(W[i], W[r])]
                if H[i][j]:
                    done = False
            if done:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            W[r] = [-x for x in W[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                W[i] = [a - q * b for a, b in zip(W[i], W[r])]
        r += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(W, m)


def inverse_unimodular(A) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    A = _as_matrix(A)
    inv = inverse_q(A.entries)
    if inv is None or any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in r] for r in inv], A.rows)


def integer_right_inverse(P) -> IntMatrix:
    """Integer matrix ``R`` with ``P @ R == I`` for a surjective ``P: Z^n -> Z^k``."""
    P = _as_matrix(P)
    U, S, V = smith_normal_form(P)
    k = P.rows
    if any(S[i, i] != 1 for i in range(k)):
        raise ValueError("map is not surjective onto the integer lattice")
    Vk = IntMatrix.from_rows([r[:k] for r in V.entries], k)
    return Vk @ U


# -- rational linear algebra -----------------------------------------------


def _rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for j in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][j] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        p = a[r][j]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank_q(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    """Rank over the rationals."""
    if not rows:
        return 0
    return len(_rref(rows, ncols if ncols is not None else len(rows[0]))[1])


def nullspace_q(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` over the rationals."""
    red, pivots = _rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(red, pivots):
            x[p] = -r[f]
        basis.append(x)
    return basis


def solve_rows_q(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list[Fraction]]:
    """Solve ``y @ basis == v`` for linearly independent ``basis`` rows."""
    k = len(basis)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    n = len(v)
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    red, pivots = _rref(aug, k + 1)
    if k in pivots:
        return None
    y = [Fraction(0)] * k
    for r, p in zip(red, pivots):
        y[p] = r[k]
    return y


def inverse_q(rows: Sequence[Sequence]) -> Optional[list[list[Fraction]]]:
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        return None
    return [r[n:] for r in red]


def rank_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p``."""
    a = [[x % p for x in r] for r in rows]
    r = 0
    for j in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][j]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = pow(a[r][j], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def saturated_span_basis(vectors: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Lattice basis of ``span_Q(vectors) ∩ Z^n``."""
    if not vectors:
        return []
    _, S, V = smith_normal_form(IntMatrix.from_rows(vectors, n))
    t = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)
    Vinv = inverse_unimodular(V)
    return [Vinv.entries[i] for i in range(t)]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


# -- lattices and quotients -------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """A lattice of rank ``len(basis)`` embedded in ``Z^dim`` by a row basis.

    Elements are integer vectors of length ``dim``.  The default lattice of
    rank ``n`` is ``Z^n`` with the standard basis.
    """

    dim: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("lattice dimension must be nonnegative")
        if any(len(b) != self.dim for b in self.basis):
            raise ValueError("basis vectors must have length dim")
        if rank_q(self.basis, self.dim) != len(self.basis):
            raise ValueError("lattice basis is not linearly independent")

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def spanned_by(cls, vectors: Sequence[Sequence[int]], dim: int) -> "Lattice":
        """The sublattice of ``Z^dim`` generated by ``vectors`` (HNF basis)."""
        if not vectors:
            return cls(dim, ())
        H, _ = hermite_normal_form(IntMatrix.from_rows(vectors, dim))
        return cls(dim, tuple(r for r in H.entries if any(r)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_standard(self) -> bool:
        return self.rank == self.dim and all(
            b[j] == int(i == j) for i, b in enumerate(self.basis) for j in range(self.dim)
        )

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """Integer coordinates of ``v`` in the basis, or ``None`` if ``v`` is not in the lattice."""
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        if self.is_standard:
            return tuple(int(x) for x in v)
        y = solve_rows_q(self.basis, v)
        if y is None or any(x.denominator != 1 for x in y):
            return None
        return tuple(int(x) for x in y)

    def embed(self, coords: Sequence[int]) -> Vector:
        return tuple(sum(c * b[j] for c, b in zip(coords, self.basis)) for j in range(self.dim))

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None


def torsion_free_quotient(rank: int, relations) -> tuple[Lattice, IntMatrix]:
    """Torsion-free part of ``Z^rank / rowspan(relations)``.

    Returns ``(target, proj)`` where ``proj`` is a ``k x rank`` integer matrix
    mapping ``Z^rank`` onto ``Z^k = target``.  ``proj`` kills every relation
    row, and a vector is killed iff some positive multiple lies in the row
    span.  ``proj`` is put in Hermite normal form, so the result depends only
    on the subgroup, not on how the relations were written down.
    """
    rel = relations if isinstance(relations, IntMatrix) else IntMatrix.from_rows(relations, rank)
    if rel.cols != rank:
        raise ValueError(f"relations have {rel.cols} columns, expected {rank}")
    _, S, V = smith_normal_form(rel)
    t = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i] != 0)
    k = rank - t
    if k == 0:
        return Lattice.standard(0), IntMatrix.zeros(0, rank)
    proj = IntMatrix.from_rows([V.column(j) for j in range(t, rank)], rank)
    H, _ = hermite_normal_form(proj)
    return Lattice.standard(k), H


# -- cones and Hilbert bases ------------------------------------------------


def _facets(gens: Sequence[Vector], t: int) -> list[Vector]:
    """Inward facet normals of the full-dimensional cone spanned by ``gens`` in ``Q^t``."""
    normals = set()
    for sub in itertools.combinations(gens, t - 1):
        if rank_q(sub, t) != t - 1:
            continue
        ns = nullspace_q(sub, t)
        n = primitive(ns[0])
        signs = {(_dot(n, g) > 0) - (_dot(n, g) < 0) for g in gens}
        if -1 not in signs:
            normals.add(n)
        elif 1 not in signs:
            normals.add(tuple(-x for x in n))
    return sorted(normals)


def _parallelepiped_points(rays: Sequence[Vector], t: int) -> list[Vector]:
    """Lattice points of ``{sum λ_i r_i : 0 <= λ_i < 1}`` for ``t`` independent rays."""
    R = IntMatrix.from_rows(rays, t)
    _, S, V = smith_normal_form(R)
    Vinv = inverse_unimodular(V)
    Rinv = inverse_q(R.entries)
    out = []
    for y in itertools.product(*(range(S[i, i]) for i in range(t))):
        x = [sum(y[i] * Vinv[i, j] for i in range(t)) for j in range(t)]
        lam = [sum(x[i] * Rinv[i][j] for i in range(t)) for j in range(t)]
        fl = [l.numerator // l.denominator for l in lam]
        out.append(tuple(x[j] - sum(fl[i] * rays[i][j] for i in range(t)) for j in range(t)))
    return out


def _pointed_hilbert_basis(gens: Sequence[Vector], facets: Sequence[Vector], t: int) -> list[Vector]:
    rays = sorted(
        {
            g
            for g in gens
            if rank_q([n for n in facets if _dot(n, g) == 0] or [[0] * t], t) == t - 1
        }
    )
    candidates = set(rays)
    for sub in itertools.combinations(rays, t):
        if rank_q(sub, t) == t:
            candidates.update(p for p in _parallelepiped_points(sub, t) if any(p))

    def in_cone(x):
        return all(_dot(n, x) >= 0 for n in facets)

    cands = sorted(candidates)
    basis = []
    for x in cands:
        reducible = any(
            h != x and in_cone(tuple(a - b for a, b in zip(x, h))) for h in cands
        )
        if not reducible:
            basis.append(x)
    return basis


@dataclass(frozen=True)
class _ConeData:
    span: tuple[Vector, ...]       # basis of span(M) ∩ ambient, in ambient coordinates
    facets: tuple[Vector, ...]     # inward normals, in span coordinates
    pointed: bool


def _cone_hilbert_basis(coords: Sequence[Vector], r: int) -> tuple[list[Vector], _ConeData]:
    """Hilbert basis (ambient coordinates) of ``cone(coords) ∩ Z^r``."""
    nz = sorted({primitive(c) for c in coords if any(c)})
    if not nz:
        return [], _ConeData((), (), True)
    span = saturated_span_basis(nz, r)
    t = len(span)
    ys = sorted({tuple(int(x) for x in solve_rows_q(span, g)) for g in nz})
    facets = _facets(ys, t)
    pointed = rank_q(facets, t) == t if facets else False
    if pointed:
        hb = _pointed_hilbert_basis(ys, facets, t)
    else:
        lineality = nullspace_q(facets, t) if facets else [
            [Fraction(int(i == j)) for j in range(t)] for i in range(t)
        ]
        lin = saturated_span_basis([primitive(v) for v in lineality], t)
        target, proj = torsion_free_quotient(t, lin)
        lifted = []
        if target.rank:
            img = [proj.apply(y) for y in ys]
            sub_hb, _ = _cone_hilbert_basis(img, target.rank)
            right = integer_right_inverse(proj)
            lifted = [right.apply(h) for h in sub_hb]
        hb = sorted(set(lin) | {tuple(-x for x in v) for v in lin} | set(lifted))
    to_ambient = IntMatrix.from_rows(span, r).transpose()
    hb_amb = sorted(to_ambient.apply(h) for h in hb)
    return hb_amb, _ConeData(tuple(span), tuple(facets), pointed)


@dataclass(frozen=True)
class AffineMonoid:
    """A saturated affine monoid inside an explicit ambient lattice.

    ``generators`` and ``hilbert_basis`` are vectors in the ambient lattice's
    embedding coordinates.  For non-sharp monoids the Hilbert basis is a
    generating set made of a lattice basis of the unit group (with both
    signs) plus lifts of the Hilbert basis of the sharp quotient; it is not
    canonical in that case.
    """

    ambient: Lattice
    generators: tuple[Vector, ...]
    hilbert_basis: tuple[Vector, ...]
    labels: Optional[tuple[str, ...]] = None
    _cone: _ConeData = field(default=_ConeData((), (), True), repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.ambient.rank

    def __contains__(self, x) -> bool:
        return contains(self, x)


def saturate(generators: Iterable[Sequence[int]], ambient: Lattice,
             labels: Optional[Sequence[str]] = None) -> AffineMonoid:
    """Saturation of the monoid generated by ``generators`` inside ``ambient``.

    This is ``{x in ambient : n x in M for some n >= 1} = cone(M) ∩ ambient``.
    The Hilbert basis is sorted lexicographically.

    >>> saturate([(2, 0), (1, 1), (0, 2)], Lattice.standard(2)).hilbert_basis
    ((0, 1), (1, 0))
    """
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    coords = []
    for g in gens:
        c = ambient.coordinates(g)
        if c is None:
            raise ValueError(f"generator {g} is not in the ambient lattice")
        coords.append(c)
    hb, cone = _cone_hilbert_basis(coords, ambient.rank)
    hilbert = tuple(sorted(ambient.embed(h) for h in hb))
    return AffineMonoid(
        ambient=ambient,
        generators=gens,
        hilbert_basis=hilbert,
        labels=tuple(labels) if labels is not None else None,
        _cone=cone,
    )


def is_sharp(M: AffineMonoid) -> bool:
    """True iff the only unit of ``M`` is 0, i.e. the cone contains no line."""
    return M._cone.pointed


def contains(M: AffineMonoid, x: Sequence[int]) -> bool:
    """Membership in the saturated monoid ``M``.

    Raises ``ValueError`` when ``x`` has the wrong length; vectors outside
    the ambient lattice are simply not members.
    """
    if len(x) != M.ambient.dim:
        raise ValueError(f"vector of length {len(x)} for a monoid in dimension {M.ambient.dim}")
    c = M.ambient.coordinates(x)
    if c is None:
        return False
    if not M._cone.span:
        return not any(c)
    y = solve_rows_q(M._cone.span, c)
    if y is None:
        return False
    return all(_dot(n, y) >= 0 for n in M._cone.facets)
