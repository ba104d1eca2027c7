"""Rank and nullspace computations over F_2, F_p and Q.

F_2 vectors are Python ints used as bitsets.  Over other fields a vector is a
``dict`` from index to nonzero coefficient.  Rational ranks are computed
modulo two large primes; simplicial boundary matrices only see tiny torsion
primes, so the larger of the two ranks is the rational rank.
"""

from __future__ import annotations

from typing import Iterable, Sequence

RATIONAL_PRIMES = (2_147_483_647, 2_305_843_009_213_693_951)

SparseVec = dict[int, int]


class F2Basis:
    """Incremental echelon basis over F_2 keyed by leading bit.

    With ``track=True`` every stored vector remembers which inputs it is a
    combination of, so reductions to zero yield dependency relations.
    """

    def __init__(self, track: bool = False) -> None:
        self.pivots: dict[int, int] = {}
        self.combos: dict[int, int] = {}
        self.track = track
        self.count = 0

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                break
            v ^= p
            if self.track:
                combo ^= self.combos[top]
        return v, combo

    def add(self, v: int, combo: int = 0) -> tuple[int, int]:
        """Insert ``v``; returns the reduced vector (0 if dependent) and its combination."""
        v, combo = self.reduce(v, combo)
        if v:
            top = v.bit_length() - 1
            self.pivots[top] = v
            if self.track:
                self.combos[top] = combo
            self.count += 1
        return v, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    @property
    def rank(self) -> int:
        return self.count


def f2_rank(vectors: Iterable[int]) -> int:
    basis = F2Basis()
    for v in vectors:
        basis.add(v)
    return basis.rank


def f2_nullspace(images: Sequence[int]) -> list[int]:
    """Kernel of the linear map sending basis vector ``j`` to ``images[j]``."""
    basis = F2Basis(track=True)
    out = []
    for j, img in enumerate(images):
        v, combo = basis.add(img, 1 << j)
        if not v:
            out.append(combo)
    return out


def f2_solve(images: Sequence[int], target: int) -> int | None:
    """Some ``x`` (as bitset over inputs) with ``sum_j x_j images[j] = target``."""
    basis = F2Basis(track=True)
    for j, img in enumerate(images):
        basis.add(img, 1 << j)
    v, combo = basis.reduce(target)
    return combo if v == 0 else None


def modp_rank(vectors: Iterable[SparseVec], p: int) -> int:
    """Rank of sparse integer vectors modulo the prime ``p``."""
    pivots: dict[int, SparseVec] = {}
    for vec in vectors:
        v = {k: c % p for k, c in vec.items() if c % p}
        while v:
            lead = max(v)
            row = pivots.get(lead)
            if row is None:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {k: c * inv % p for k, c in v.items()}
                break
            factor = v[lead]
            for k, c in row.items():
                x = (v.get(k, 0) - factor * c) % p
                if x:
                    v[k] = x
                else:
                    v.pop(k, None)
    return len(pivots)


def rank_over(vectors: Sequence[SparseVec], characteristic: int) -> int:
    """Rank over F_2 (2), F_p (p) or Q (0) of sparse integer vectors."""
    if characteristic == 2:
        return f2_rank(sparse_to_bits(v) for v in vectors)
    if characteristic == 0:
        return max(modp_rank(vectors, q) for q in RATIONAL_PRIMES)
    return modp_rank(vectors, characteristic)


def sparse_to_bits(v: SparseVec) -> int:
    out = 0
    for k, c in v.items():
        if c & 1:
            out ^= 1 << k
    return out


def bits_to_indices(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def indices_to_bits(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out ^= 1 << i
    return out
