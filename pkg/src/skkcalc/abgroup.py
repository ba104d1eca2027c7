"""Finitely generated abelian groups in invariant-factor form.

Groups are stored as ``Z^r x Z/d_1 x ... x Z/d_m`` with ``d_i | d_{i+1}``.
Elements are integer vectors on the canonical generators, free coordinates
first, then torsion coordinates reduced modulo their orders.  Homomorphisms
are integer matrices acting on column vectors.

All arithmetic is exact and uses Python integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import factorint

IntMatrix = list[list[int]]


class GroupLiteralError(ValueError):
    """Raised when a group literal does not follow the grammar."""


# ---------------------------------------------------------------------------
# matrix helpers


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def matmul(a: IntMatrix, b: IntMatrix, inner: int | None = None) -> IntMatrix:
    """Product of integer matrices; ``inner`` is needed when ``a`` has no rows."""
    if inner is None:
        inner = len(a[0]) if a else len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        acc = out[i]
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += x * bk[j]
    return out


def transpose(m: IntMatrix, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    rows = len(m) if rows is None else rows
    cols = (len(m[0]) if m else 0) if cols is None else cols
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``u * m * v == d`` with ``u``, ``v`` unimodular and ``d`` diagonal."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        n = min(len(self.d), len(self.d[0]) if self.d else 0)
        return [self.d[i][i] for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def smith_normal_form(m: Sequence[Sequence[int]], cols: int | None = None) -> SmithForm:
    """Diagonalise ``m`` by unimodular row and column operations.

    The pivot at each stage is an entry of minimal absolute value in the
    remaining block.  Diagonal entries come out non-negative with each one
    dividing the next.  ``cols`` fixes the width when ``m`` has no rows.
    """
    rows = len(m)
    cols = (len(m[0]) if rows else 0) if cols is None else cols
    d = [list(map(int, r)) for r in m]
    u, u_inv = identity(rows), identity(rows)
    v, v_inv = identity(cols), identity(cols)

    def add_row(src: int, dst: int, q: int) -> None:
        # row_dst += q * row_src
        if not q:
            return
        rs, rd = d[src], d[dst]
        for j in range(cols):
            if rs[j]:
                rd[j] += q * rs[j]
        us, ud = u[src], u[dst]
        for j in range(rows):
            if us[j]:
                ud[j] += q * us[j]
        for r in u_inv:
            if r[dst]:
                r[src] -= q * r[dst]

    def add_col(src: int, dst: int, q: int) -> None:
        # col_dst += q * col_src
        if not q:
            return
        for r in d:
            if r[src]:
                r[dst] += q * r[src]
        for r in v:
            if r[src]:
                r[dst] += q * r[src]
        vs, vd = v_inv[src], v_inv[dst]
        for j in range(cols):
            if vd[j]:
                vs[j] -= q * vd[j]

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]
            for r in u_inv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for r in d:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def negate_row(i: int) -> None:
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for r in u_inv:
            r[i] = -r[i]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            swap_rows(t, best[1])
            swap_cols(t, best[2])
            p = d[t][t]
            clean = True
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    clean &= d[i][t] == 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    clean &= d[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) if any(d[i][j] % p for j in range(t + 1, cols))),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < rows and d[t][t] < 0:
            negate_row(t)
    return SmithForm(u, d, v, u_inv, v_inv)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True, order=True)
class FgAbelianGroup:
    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        tf = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", tf)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(tf, tf[1:]):
            if b % a:
                raise ValueError(f"invariant factors must divide each other: {tf}")
        if any(x < 2 for x in tf):
            raise ValueError(f"invariant factors must exceed 1: {tf}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgAbelianGroup":
        """Classify a direct sum of cyclic groups; 0 stands for Z."""
        return _classify_diag(list(orders))

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for free ones."""
        return (0,) * self.free_rank + self.invariant_factors

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def order(self) -> int | None:
        return None if self.free_rank else self.torsion_order

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_torsion_free(self) -> bool:
        return not self.invariant_factors

    def torsion_subgroup(self) -> "FgAbelianGroup":
        return FgAbelianGroup(0, self.invariant_factors)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(a) % o if o else int(a) for a, o in zip(x, self.orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def direct_sum(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return _classify_diag(self.orders + other.orders)

    def __str__(self) -> str:
        return format_group(self)

    def primary_decomposition(self) -> dict[int, list[int]]:
        """Prime-power cyclic factors grouped by prime; key 0 holds the free rank."""
        out: dict[int, list[int]] = {}
        if self.free_rank:
            out[0] = [self.free_rank]
        for d in self.invariant_factors:
            for p, e in factorint(d).items():
                out.setdefault(p, []).append(p**e)
        return {p: sorted(v) for p, v in sorted(out.items())}


TRIVIAL = FgAbelianGroup()
Z = FgAbelianGroup(1)
Z2 = FgAbelianGroup(0, (2,))


def cyclic(d: int) -> FgAbelianGroup:
    """``Z/d`` for ``d >= 1``, ``Z`` for ``d == 0``."""
    return _classify_diag([d])


@dataclass(frozen=True)
class Presentation:
    """A classified quotient ``Z^n / L`` with explicit generator bookkeeping.

    ``to_canon`` (group.ngens x n) sends an ambient vector to canonical
    coordinates; ``gens`` (n x group.ngens) holds lifts of the canonical
    generators.
    """

    group: FgAbelianGroup
    to_canon: IntMatrix
    gens: IntMatrix


def cokernel(relations: IntMatrix, n: int) -> Presentation:
    """Classify ``Z^n`` modulo the span of the *columns* of ``relations``."""
    if n == 0:
        return Presentation(TRIVIAL, [], [])
    k = len(relations[0]) if relations else 0
    rel = relations if relations else [[] for _ in range(n)]
    snf = smith_normal_form(rel, cols=k)
    diag = snf.diagonal + [0] * (n - min(n, k))
    free_idx = [i for i in range(n) if diag[i] == 0]
    tors_idx = [i for i in range(n) if abs(diag[i]) > 1]
    order = free_idx + tors_idx
    group = FgAbelianGroup(len(free_idx), tuple(abs(diag[i]) for i in tors_idx))
    to_canon = [list(snf.u[i]) for i in order]
    gens = [[snf.u_inv[r][i] for i in order] for r in range(n)]
    for row, o in zip(to_canon, group.orders):
        if o:
            row[:] = [x % o for x in row]
    return Presentation(group, to_canon, gens)


def _relations_of(orders: Sequence[int]) -> IntMatrix:
    n = len(orders)
    tors = [i for i, o in enumerate(orders) if o]
    return [[orders[i] if i == j else 0 for j in tors] for i in range(n)]


def _classify_diag(orders: Sequence[int]) -> FgAbelianGroup:
    return cokernel(_relations_of(orders), len(orders)).group


def classify(presentation: Sequence[Sequence[int]], cols: int | None = None) -> FgAbelianGroup:
    """Cokernel of a relation matrix: rows are relations on the column generators.

    >>> str(classify([[2, 0], [0, 0]]))
    'Z x Z/2'
    """
    rows = [list(map(int, r)) for r in presentation]
    n = (len(rows[0]) if rows else 0) if cols is None else cols
    return cokernel(transpose(rows, len(rows), n), n).group


# ---------------------------------------------------------------------------
# literals

_TOKEN = re.compile(r"^(?:Z(?:\^(\d+))?|Z/(\d+)|\(Z/(\d+)\)\^(\d+)|Z/(\d+)\^(\d+))$")
_CHAR_TOKEN = re.compile(r"^C\*(?:\^(\d+))?$")


def _parse_factors(text: str, allow_circle: bool) -> tuple[int, list[int]]:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise GroupLiteralError("empty group literal")
    if s == "0":
        return 0, []
    circles = 0
    orders: list[int] = []
    for tok in s.split("x"):
        m = _CHAR_TOKEN.match(tok) if allow_circle else None
        if m:
            circles += int(m.group(1) or 1)
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise GroupLiteralError(f"bad factor {tok!r} in {text!r}")
        if tok.startswith("Z/") or tok.startswith("("):
            d = int(m.group(2) or m.group(3) or m.group(5))
            reps = int(m.group(4) or m.group(6) or 1)
            if d < 1:
                raise GroupLiteralError(f"bad modulus in {text!r}")
            orders += [d] * reps
        else:
            orders += [0] * int(m.group(1) or 1)
    return circles, orders


def parse_group(text: str) -> FgAbelianGroup:
    """Parse ``0``, ``Z``, ``Z^k``, ``Z/d`` joined by ``x``.

    >>> parse_group("Z x Z/4") == FgAbelianGroup(1, (4,))
    True
    """
    _, orders = _parse_factors(text, allow_circle=False)
    return _classify_diag(orders)


def format_group(g: FgAbelianGroup) -> str:
    parts = []
    if g.free_rank == 1:
        parts.append("Z")
    elif g.free_rank > 1:
        parts.append(f"Z^{g.free_rank}")
    parts += [f"Z/{d}" for d in g.invariant_factors]
    return " x ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# homomorphisms


class HomomorphismError(ValueError):
    pass


@dataclass(frozen=True)
class GroupHom:
    """``codomain.ngens x domain.ngens`` integer matrix on canonical generators."""

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        rows, cols = self.codomain.ngens, self.domain.ngens
        m = [list(r) for r in self.matrix] if self.matrix else zeros(rows, cols)
        if len(m) != rows or any(len(r) != cols for r in m):
            raise HomomorphismError(f"matrix shape must be {rows}x{cols}")
        for i, co in enumerate(self.codomain.orders):
            if co:
                m[i] = [x % co for x in m[i]]
        for j, do in enumerate(self.domain.orders):
            if not do:
                continue
            for i, co in enumerate(self.codomain.orders):
                if (do * m[i][j]) % co if co else do * m[i][j]:
                    raise HomomorphismError(
                        f"generator {j} of order {do} cannot map with coefficient "
                        f"{m[i][j]} into a factor of order {co or 'infinity'}"
                    )
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in m))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        out = [sum(a * b for a, b in zip(row, x)) for row in self.matrix]
        return self.codomain.reduce(out)

    @property
    def rows(self) -> IntMatrix:
        return [list(r) for r in self.matrix]

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        if inner.codomain != self.domain:
            raise HomomorphismError("composition mismatch")
        if self.domain.ngens and inner.domain.ngens:
            m = matmul(self.rows, inner.rows, self.domain.ngens)
        else:
            m = zeros(self.codomain.ngens, inner.domain.ngens)
        return GroupHom(inner.domain, self.codomain, tuple(map(tuple, m)))

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        m = [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return GroupHom(self.domain, self.codomain, tuple(map(tuple, m)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    def kernel(self) -> "Subgroup":
        return kernel(self)

    def is_surjective(self) -> bool:
        # the image together with the codomain relations must span everything
        rel = _relations_of(self.codomain.orders)
        full = [list(r) + x for r, x in zip(self.matrix, rel)]
        return cokernel(full, self.codomain.ngens).group.is_trivial()

    def is_injective(self) -> bool:
        return kernel(self).group.is_trivial()


def mod_reduction(k: int) -> GroupHom:
    """``Z -> Z/k``, reduction modulo ``k``."""
    return GroupHom(Z, cyclic(k), ((1,),))


def hom_from_rows(domain: FgAbelianGroup, codomain: FgAbelianGroup, rows: Sequence[Sequence[int]]) -> GroupHom:
    return GroupHom(domain, codomain, tuple(tuple(int(x) for x in r) for r in rows))


def zero_hom(domain: FgAbelianGroup, codomain: FgAbelianGroup) -> GroupHom:
    return GroupHom(domain, codomain, tuple(map(tuple, zeros(codomain.ngens, domain.ngens))))


# ---------------------------------------------------------------------------
# kernels and fiber products


def integer_kernel(m: IntMatrix, cols: int) -> IntMatrix:
    """Basis (as columns, ``cols`` x k) of ``{x in Z^cols : m x = 0}``."""
    snf = smith_normal_form(m, cols=cols)
    r = snf.rank
    return [[snf.v[i][j] for j in range(r, cols)] for i in range(cols)]


def solve_integer(b_mat: IntMatrix, rhs: IntMatrix, cols: int) -> IntMatrix:
    """Integer ``c`` with ``b_mat c = rhs`` (``rhs`` given as columns); raises if none."""
    rows = len(b_mat)
    snf = smith_normal_form(b_mat, cols=cols)
    diag = snf.diagonal
    r = snf.rank
    urhs = matmul(snf.u, rhs, rows) if rows else []
    k = len(rhs[0]) if rhs else 0
    z = zeros(cols, k)
    for i in range(rows):
        for j in range(k):
            x = urhs[i][j]
            if i < r:
                if x % diag[i]:
                    raise ValueError("no integer solution")
                z[i][j] = x // diag[i]
            elif x:
                raise ValueError("no solution")
    return matmul(snf.v, z, cols)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``ambient_orders`` (a product of cyclic groups) in canonical form.

    ``inclusion`` (ambient x group.ngens) gives the canonical generators as
    ambient vectors.  ``basis`` is a lattice basis of the preimage in the free
    cover, used to read ambient elements back in canonical coordinates.
    """

    group: FgAbelianGroup
    ambient_orders: tuple[int, ...]
    inclusion: IntMatrix
    basis: IntMatrix
    to_canon: IntMatrix

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of an ambient element lying in the subgroup."""
        n = len(self.ambient_orders)
        l = len(self.basis[0]) if self.basis else 0
        c = solve_integer(self.basis, [[int(a)] for a in x], l) if l else []
        if not l:
            if any(int(a) % o if o else int(a) for a, o in zip(x, self.ambient_orders)):
                raise ValueError("element not in subgroup")
            return self.group.zero()
        y = matmul(self.to_canon, c, l) if self.to_canon else []
        return self.group.reduce([row[0] for row in y])


def _subgroup_from_lattice(basis: IntMatrix, orders: Sequence[int]) -> Subgroup:
    # basis: n x l matrix whose columns span a lattice containing the relations
    n = len(orders)
    l = len(basis[0]) if basis else 0
    rel = _relations_of(orders)
    t = len(rel[0]) if rel else 0
    if l:
        q = solve_integer(basis, rel, l) if t else [[] for _ in range(l)]
        pres = cokernel(q, l)
        inc = matmul(basis, pres.gens, l) if pres.gens and pres.gens[0] else [[] for _ in range(n)]
    else:
        pres = Presentation(TRIVIAL, [], [])
        inc = [[] for _ in range(n)]
    for i, o in enumerate(orders):
        if o:
            inc[i] = [x % o for x in inc[i]]
    return Subgroup(pres.group, tuple(orders), inc, basis, pres.to_canon)


def kernel_of(matrix: IntMatrix, dom_orders: Sequence[int], cod_orders: Sequence[int]) -> Subgroup:
    """Kernel of the map of cyclic products given by ``matrix`` (cod x dom)."""
    nd, nc = len(dom_orders), len(cod_orders)
    if nd == 0:
        return Subgroup(TRIVIAL, (), [], [], [])
    rel_c = _relations_of(cod_orders)
    t = len(rel_c[0]) if rel_c else 0
    block = [list(matrix[i]) + [-x for x in rel_c[i]] for i in range(nc)]
    ker = integer_kernel(block, nd + t)
    basis = [ker[i] for i in range(nd)]
    return _subgroup_from_lattice(basis, dom_orders)


def kernel(f: GroupHom) -> Subgroup:
    return kernel_of(f.rows, f.domain.orders, f.codomain.orders)


@dataclass(frozen=True)
class FiberProduct:
    """``{(a, b) : f(a) = g(b)}`` with its two projections."""

    group: FgAbelianGroup
    left: GroupHom
    right: GroupHom
    subgroup: Subgroup

    def element(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the pair ``(a, b)``."""
        return self.subgroup.coordinates(list(a) + list(b))


def fiber_product(f: GroupHom, g: GroupHom) -> FiberProduct:
    """Pullback of ``A --f--> C <--g-- B`` as the kernel of ``(f, -g)`` on ``A + B``.

    >>> str(fiber_product(mod_reduction(2), mod_reduction(2)).group)
    'Z^2'
    """
    if f.codomain != g.codomain:
        raise HomomorphismError("fiber product needs a common codomain")
    a, b = f.domain, g.domain
    orders = a.orders + b.orders
    cod = f.codomain
    block = [list(fr) + [-x for x in gr] for fr, gr in zip(f.matrix, g.matrix)]
    if not cod.ngens:
        block = []
    sub = kernel_of(block, orders, cod.orders)
    inc = sub.inclusion
    left = GroupHom(sub.group, a, tuple(tuple(inc[i]) for i in range(a.ngens)))
    right = GroupHom(sub.group, b, tuple(tuple(inc[a.ngens + i]) for i in range(b.ngens)))
    return FiberProduct(sub.group, left, right, sub)


def torsion_elements_parity_cover(chi: GroupHom) -> bool:
    """Whether some torsion element of the domain has nonzero image.

    The torsion subgroup is generated by the torsion canonical generators, so
    it suffices to test those columns.
    """
    g = chi.domain
    return any(chi.matrix[i][j] for j in range(g.free_rank, g.ngens) for i in range(chi.codomain.ngens))


def surjections_to_z2(g: FgAbelianGroup) -> list[GroupHom]:
    """Every surjective homomorphism ``g -> Z/2``."""
    even = [j for j, o in enumerate(g.orders) if o == 0 or o % 2 == 0]
    out = []
    for mask in range(1, 2 ** len(even)):
        row = [0] * g.ngens
        for k, j in enumerate(even):
            if mask >> k & 1:
                row[j] = 1
        out.append(GroupHom(g, Z2, (tuple(row),)))
    return out


def homs_to_z2(g: FgAbelianGroup) -> list[GroupHom]:
    return [zero_hom(g, Z2)] + surjections_to_z2(g)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterGroup:
    """``Hom(G, C^x)`` recorded as circle rank and a finite torsion part."""

    circle_rank: int = 0
    torsion: FgAbelianGroup = TRIVIAL

    def __str__(self) -> str:
        parts = []
        if self.circle_rank == 1:
            parts.append("C*")
        elif self.circle_rank > 1:
            parts.append(f"C*^{self.circle_rank}")
        parts += [f"Z/{d}" for d in self.torsion.invariant_factors]
        return " x ".join(parts) if parts else "0"

    def direct_product(self, other: "CharacterGroup") -> "CharacterGroup":
        return CharacterGroup(self.circle_rank + other.circle_rank, self.torsion.direct_sum(other.torsion))


def parse_character_group(text: str) -> CharacterGroup:
    circles, orders = _parse_factors(text, allow_circle=True)
    if any(o == 0 for o in orders):
        raise GroupLiteralError(f"character groups have no free Z factors: {text!r}")
    return CharacterGroup(circles, _classify_diag(orders))


def hom_to_circle(g: FgAbelianGroup) -> CharacterGroup:
    """``Hom(Z^r x T, C^x) = (C^x)^r x Hom(T, C^x)`` and ``Hom(T, C^x)`` is abstractly ``T``."""
    return CharacterGroup(g.free_rank, g.torsion_subgroup())
