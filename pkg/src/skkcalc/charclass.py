"""Mod 2 cohomology rings, Steenrod squares, Wu and Stiefel-Whitney classes.

Cochains are bitsets over the simplices of one degree of a
:class:`~skkcalc.simplicial.DeltaComplex`.  Cup-i products use the subset
formula: on an ``n``-simplex, ``a cup_i b`` sums over subsets ``U`` of the
vertex positions with ``|U| = n - i``; ``U`` splits into the positions whose
value has the same parity as their rank in ``U`` (deleted from the front
factor) and the rest (deleted from the back factor).  ``i = 0`` recovers the
Alexander-Whitney cup product.

``Sq^k x = x cup_{p-k} x`` for ``x`` of degree ``p``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from itertools import combinations

from .linalg import F2Basis, bits_to_indices, f2_nullspace, f2_solve
from .simplicial import ComplexError, DeltaComplex, HasDelta


def _delta_of(x: HasDelta) -> DeltaComplex:
    return x.delta()


@dataclass(frozen=True)
class CocycleF2:
    """A mod 2 cochain of the given degree; ``support`` is a bitset of simplices."""

    complex: DeltaComplex
    degree: int
    support: int

    def __add__(self, other: "CocycleF2") -> "CocycleF2":
        if other.complex is not self.complex or other.degree != self.degree:
            raise ValueError("cochains live on different complexes or degrees")
        return CocycleF2(self.complex, self.degree, self.support ^ other.support)

    def is_cocycle(self) -> bool:
        return coboundary(self).support == 0

    def evaluate(self) -> int:
        """Pairing with the mod 2 fundamental class (sum of top simplices)."""
        if self.degree != self.complex.dimension:
            return 0
        return bin(self.support).count("1") & 1

    def is_zero_class(self) -> bool:
        return not any(ring(self.complex).basis(self.degree).coordinates(self))


def coboundary(x: CocycleF2) -> CocycleF2:
    d = x.complex
    out = 0
    imgs = ring(d).coboundaries(x.degree)
    for j in bits_to_indices(x.support):
        out ^= imgs[j]
    return CocycleF2(d, x.degree + 1, out)


class CohomologyBasisF2:
    """Cocycle representatives of a basis of ``H^k`` with coordinate lookup."""

    def __init__(self, d: DeltaComplex, k: int, coboundaries: list[list[int]]) -> None:
        self.complex = d
        self.degree = k
        lower = coboundaries[k - 1] if k >= 1 else []
        self._reducer = F2Basis(track=True)
        for img in lower:
            self._reducer.add(img, 0)
        kernel = f2_nullspace(coboundaries[k]) if d.count(k) else []
        reps = []
        for z in kernel:
            v, _ = self._reducer.add(z, 1 << len(reps))
            if v:
                reps.append(z)
        self.representatives = [CocycleF2(d, k, z) for z in reps]

    def __len__(self) -> int:
        return len(self.representatives)

    def coordinates(self, x: CocycleF2) -> list[int]:
        """Coefficients of the class of cocycle ``x`` in this basis."""
        v, combo = self._reducer.reduce(x.support)
        if v:
            raise ValueError("cochain is not a cocycle")
        return [combo >> i & 1 for i in range(len(self.representatives))]

    def from_coordinates(self, coords: list[int]) -> CocycleF2:
        out = 0
        for c, r in zip(coords, self.representatives):
            if c:
                out ^= r.support
        return CocycleF2(self.complex, self.degree, out)


class CohomologyRingF2:
    """Cached chain-level data for one complex."""

    def __init__(self, d: DeltaComplex) -> None:
        self.complex = d
        self._cob = [d.coboundary_bits(k) for k in range(d.dimension + 1)]
        self._bases: dict[int, CohomologyBasisF2] = {}

    def coboundaries(self, k: int) -> list[int]:
        return self._cob[k]

    def basis(self, k: int) -> CohomologyBasisF2:
        if k not in self._bases:
            self._bases[k] = CohomologyBasisF2(self.complex, k, self._cob)
        return self._bases[k]

    def unit(self) -> CocycleF2:
        return CocycleF2(self.complex, 0, (1 << self.complex.count(0)) - 1)


_RINGS: "weakref.WeakKeyDictionary[DeltaComplex, CohomologyRingF2]" = weakref.WeakKeyDictionary()


def ring(x: HasDelta) -> CohomologyRingF2:
    d = _delta_of(x)
    r = _RINGS.get(d)
    if r is None:
        r = _RINGS[d] = CohomologyRingF2(d)
    return r


def cohomology_basis(x: HasDelta, k: int) -> CohomologyBasisF2:
    return ring(x).basis(k)


# ---------------------------------------------------------------------------
# products


def _splits(n: int, i: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """``(front_keep, back_keep)`` vertex positions for every term of cup_i on an n-simplex."""
    out = []
    for u in combinations(range(n + 1), n - i):
        u0 = {x for r, x in enumerate(u, 1) if x % 2 == r % 2}
        u1 = set(u) - u0
        front = tuple(x for x in range(n + 1) if x not in u0)
        back = tuple(x for x in range(n + 1) if x not in u1)
        out.append((front, back))
    return out


def cup_i(a: CocycleF2, b: CocycleF2, i: int) -> CocycleF2:
    """Steenrod's cup-i product of two F_2 cochains."""
    if a.complex is not b.complex:
        raise ValueError("cochains live on different complexes")
    d = a.complex
    n = a.degree + b.degree - i
    if i < 0 or n < 0 or n > d.dimension or n - i < 0:
        return CocycleF2(d, max(n, 0), 0)
    terms = [(f, bk) for f, bk in _splits(n, i) if len(f) == a.degree + 1 and len(bk) == b.degree + 1]
    sa, sb = a.support, b.support
    out = 0
    for j in range(d.count(n)):
        bit = 0
        for front, back in terms:
            if sa >> d.subface(n, j, front) & 1 and sb >> d.subface(n, j, back) & 1:
                bit ^= 1
        if bit:
            out |= 1 << j
    return CocycleF2(d, n, out)


def cup(a: CocycleF2, b: CocycleF2) -> CocycleF2:
    return cup_i(a, b, 0)


def steenrod_sq(k: int, x: CocycleF2) -> CocycleF2:
    """``Sq^k`` at cochain level; zero when ``k`` exceeds the degree."""
    p = x.degree
    if k < 0 or k > p:
        return CocycleF2(x.complex, min(p + k, x.complex.dimension) if k >= 0 else p, 0)
    return cup_i(x, x, p - k)


# ---------------------------------------------------------------------------
# characteristic classes


def _require_closed(d: DeltaComplex) -> None:
    n = d.dimension
    incidence = [0] * d.count(n - 1)
    for fs in d.faces[n]:
        for f in fs:
            incidence[f] += 1
    if any(c != 2 for c in incidence):
        raise ComplexError("needs a closed pseudomanifold (each ridge in two top simplices)")


def _pairing_matrix(xs: list[CocycleF2], ys: list[CocycleF2]) -> list[list[int]]:
    return [[cup(x, y).evaluate() for y in ys] for x in xs]


def wu_classes(m: HasDelta) -> dict[int, CocycleF2]:
    """Wu classes ``v_k``, characterised by ``<x v_k, [M]> = <Sq^k x, [M]>``.

    Returned for ``0 <= k <= n``; ``v_k`` vanishes for ``k > n/2``.
    """
    d = _delta_of(m)
    _require_closed(d)
    n = d.dimension
    r = ring(d)
    out: dict[int, CocycleF2] = {0: r.unit()}
    for k in range(1, n + 1):
        if 2 * k > n:
            out[k] = CocycleF2(d, k, 0)
            continue
        xs = r.basis(n - k).representatives
        ys = r.basis(k).representatives
        pair = _pairing_matrix(xs, ys)
        rhs = [steenrod_sq(k, x).evaluate() for x in xs]
        # solve pair * c = rhs; columns of pair are images of basis vectors of H^k
        cols = [sum(pair[i][j] << i for i in range(len(xs))) for j in range(len(ys))]
        target = sum(b << i for i, b in enumerate(rhs))
        sol = f2_solve(cols, target)
        if sol is None:
            raise ComplexError(f"Poincare pairing is degenerate in degree {k}; not a closed manifold")
        support = 0
        for j in bits_to_indices(sol):
            support ^= ys[j].support
        out[k] = CocycleF2(d, k, support)
    return out


def total_square(x: CocycleF2) -> dict[int, CocycleF2]:
    """``Sq(x)`` by degree."""
    n = x.complex.dimension
    return {x.degree + j: steenrod_sq(j, x) for j in range(0, min(x.degree, n - x.degree) + 1)}


def stiefel_whitney(m: HasDelta) -> dict[int, CocycleF2]:
    """``w = Sq(v)``, returned as cocycle representatives ``w_0..w_n``."""
    d = _delta_of(m)
    v = wu_classes(d)
    n = d.dimension
    w = {k: CocycleF2(d, k, 0) for k in range(n + 1)}
    for i, vi in v.items():
        if vi.support == 0:
            continue
        for deg, piece in total_square(vi).items():
            w[deg] = w[deg] + piece
    return w


def top_sw_number(m: HasDelta) -> int:
    """``<w_n, [M]>``."""
    d = _delta_of(m)
    return stiefel_whitney(d)[d.dimension].evaluate()


@dataclass(frozen=True)
class BilinearFormF2:
    matrix: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def rank(self) -> int:
        basis = F2Basis()
        for row in self.matrix:
            basis.add(sum(b << i for i, b in enumerate(row)))
        return basis.rank

    @property
    def is_even(self) -> bool:
        return all(self.matrix[i][i] == 0 for i in range(self.size))


def intersection_form_mid(m: HasDelta) -> BilinearFormF2:
    """Cup-product pairing on ``H^{n/2}`` of a closed even-dimensional manifold."""
    d = _delta_of(m)
    _require_closed(d)
    n = d.dimension
    if n % 2:
        raise ComplexError("middle intersection form needs even dimension")
    xs = ring(d).basis(n // 2).representatives
    return BilinearFormF2(tuple(tuple(row) for row in _pairing_matrix(xs, xs)))


def class_coordinates(x: CocycleF2) -> list[int]:
    return ring(x.complex).basis(x.degree).coordinates(x)


def power(x: CocycleF2, k: int) -> CocycleF2:
    out = ring(x.complex).unit()
    for _ in range(k):
        out = cup(out, x)
    return out
