"""Finite simplicial complexes and their field-coefficient homology.

A :class:`SimplicialComplex` is given by its facets over the vertex set
``0..vertex_count-1``.  Chain-level work happens on a :class:`DeltaComplex`,
an ordered semi-simplicial set with explicit face maps; every simplicial
complex yields one by ordering vertices, and quotient constructions such as
the antipodal projective spaces fit directly.

Coefficient fields are named by characteristic: 2 for F_2, an odd prime p
for F_p, and 0 for Q.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Protocol, Sequence

from .linalg import SparseVec, rank_over

Simplex = tuple[int, ...]

FIELD_NAMES = {"f2": 2, "z2": 2, "q": 0, "rationals": 0}


def parse_field(spec: str | int) -> int:
    """Characteristic from a label like ``q``, ``f2``, ``f3`` or an int."""
    if isinstance(spec, int):
        char = spec
    else:
        s = spec.strip().lower().replace("/", "")
        if s in FIELD_NAMES:
            char = FIELD_NAMES[s]
        elif s.startswith("f") and s[1:].isdigit():
            char = int(s[1:])
        elif s.startswith("z") and s[1:].isdigit():
            char = int(s[1:])
        else:
            raise ValueError(f"unknown field {spec!r}")
    if char != 0 and (char < 2 or any(char % d == 0 for d in range(2, int(char**0.5) + 1))):
        raise ValueError(f"field characteristic must be 0 or prime, got {char}")
    return char


def field_label(char: int) -> str:
    return "Q" if char == 0 else f"F{char}"


class ComplexError(ValueError):
    """Malformed or inapplicable simplicial input."""


# ---------------------------------------------------------------------------
# semi-simplicial chain substrate


@dataclass(eq=False)
class DeltaComplex:
    """Ordered semi-simplicial set.

    ``faces[k][j]`` lists the indices of the ``k+1`` codimension-one faces of
    the ``j``-th ``k``-simplex; entry ``i`` is the face opposite vertex ``i``.
    """

    counts: list[int]
    faces: list[list[tuple[int, ...]]]
    _subface_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.counts) - 1

    def delta(self) -> "DeltaComplex":
        return self

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def boundary_columns(self, k: int) -> list[SparseVec]:
        """Columns of the boundary map ``C_k -> C_{k-1}``."""
        if k <= 0 or k > self.dimension:
            return [{} for _ in range(self.count(k))]
        cols = []
        for fs in self.faces[k]:
            col: SparseVec = {}
            for i, f in enumerate(fs):
                c = col.get(f, 0) + (-1 if i & 1 else 1)
                if c:
                    col[f] = c
                else:
                    del col[f]
            cols.append(col)
        return cols

    def coboundary_bits(self, k: int) -> list[int]:
        """Mod 2 coboundary of each elementary k-cochain, as bitsets over (k+1)-simplices."""
        out = [0] * self.count(k)
        if k + 1 > self.dimension:
            return out
        for j, fs in enumerate(self.faces[k + 1]):
            for f in fs:
                out[f] ^= 1 << j
        return out

    def subface(self, k: int, j: int, keep: tuple[int, ...]) -> int:
        """Index of the face of simplex ``(k, j)`` spanned by vertex positions ``keep``."""
        key = (k, j, keep)
        hit = self._subface_cache.get(key)
        if hit is not None:
            return hit
        idx, dim = j, k
        drop = [i for i in range(k + 1) if i not in keep]
        for i in reversed(drop):
            idx = self.faces[dim][idx][i]
            dim -= 1
        self._subface_cache[key] = idx
        return idx

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))


class HasDelta(Protocol):
    def delta(self) -> DeltaComplex: ...


# ---------------------------------------------------------------------------
# simplicial complexes


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    facets: tuple[Simplex, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        seen = set()
        norm = []
        for f in self.facets:
            t = tuple(sorted(int(v) for v in f))
            if len(set(t)) != len(t):
                raise ComplexError(f"facet {tuple(f)} repeats a vertex")
            if not t:
                raise ComplexError("empty facet")
            if t[0] < 0 or t[-1] >= self.vertex_count:
                raise ComplexError(f"facet {tuple(f)} uses a vertex outside 0..{self.vertex_count - 1}")
            if t in seen:
                raise ComplexError(f"duplicate facet {t}")
            seen.add(t)
            norm.append(t)
        object.__setattr__(self, "facets", tuple(sorted(norm, key=lambda s: (len(s), s))))

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def simplices(self) -> list[list[Simplex]]:
        by_dim: list[set[Simplex]] = [set() for _ in range(self.dimension + 1)]
        for f in self.facets:
            for k in range(len(f)):
                by_dim[k].update(combinations(f, k + 1))
        return [sorted(s) for s in by_dim]

    @cached_property
    def index(self) -> list[dict[Simplex, int]]:
        return [{s: i for i, s in enumerate(level)} for level in self.simplices]

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def delta(self) -> DeltaComplex:
        return self._delta

    @cached_property
    def _delta(self) -> DeltaComplex:
        counts = list(self.f_vector)
        faces: list[list[tuple[int, ...]]] = [[() for _ in range(counts[0])]]
        for k in range(1, len(counts)):
            lower = self.index[k - 1]
            faces.append([tuple(lower[s[:i] + s[i + 1:]] for i in range(k + 1)) for s in self.simplices[k]])
        return DeltaComplex(counts, faces)

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    @cached_property
    def ridge_facets(self) -> dict[Simplex, list[int]]:
        """Codimension-one faces of top facets mapped to the facets containing them."""
        n = self.dimension
        out: dict[Simplex, list[int]] = defaultdict(list)
        for j, f in enumerate(self.facets):
            if len(f) == n + 1:
                for i in range(n + 1):
                    out[f[:i] + f[i + 1:]].append(j)
        return dict(out)

    def boundary(self) -> "SimplicialComplex":
        """Subcomplex of ridges that lie in exactly one facet, same vertex labels."""
        ridges = [r for r, fs in self.ridge_facets.items() if len(fs) == 1]
        return SimplicialComplex(self.vertex_count, tuple(ridges), name=f"boundary({self.name})" if self.name else "")

    def is_closed(self) -> bool:
        return self.dimension >= 0 and all(len(fs) == 2 for fs in self.ridge_facets.values())

    def link(self, v: int) -> "SimplicialComplex":
        facets = [tuple(x for x in f if x != v) for f in self.facets if v in f]
        facets = [f for f in facets if f]
        return SimplicialComplex(self.vertex_count, tuple(facets))

    def used_vertices(self) -> list[int]:
        return sorted({v for f in self.facets for v in f})

    def components(self) -> list[list[int]]:
        """Vertex sets of connected components."""
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for f in self.facets:
            for v in f[1:]:
                a, b = find(f[0]), find(v)
                if a != b:
                    parent[a] = b
        groups: dict[int, list[int]] = defaultdict(list)
        for v in self.used_vertices():
            groups[find(v)].append(v)
        return sorted(groups.values())

    def orientation(self) -> list[int] | None:
        """Coherent facet signs found by propagation across ridges, or None.

        A facet ``f`` with sign ``s`` induces sign ``s * (-1)^i`` on the ridge
        opposite its ``i``-th vertex; neighbours must induce opposite signs.
        """
        n = self.dimension
        top = [j for j, f in enumerate(self.facets) if len(f) == n + 1]
        sign: dict[int, int] = {}
        adj: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
        for r, fs in self.ridge_facets.items():
            if len(fs) > 2:
                return None
            if len(fs) == 2:
                a, b = fs
                ia = next(i for i, x in enumerate(self.facets[a]) if x not in r)
                ib = next(i for i, x in enumerate(self.facets[b]) if x not in r)
                adj[a].append((b, ia, ib))
                adj[b].append((a, ib, ia))
        for start in top:
            if start in sign:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                a = queue.popleft()
                for b, ia, ib in adj[a]:
                    want = -sign[a] * (-1) ** ia * (-1) ** ib
                    if b not in sign:
                        sign[b] = want
                        queue.append(b)
                    elif sign[b] != want:
                        return None
        return [sign.get(j, 0) for j in range(len(self.facets))]

    def is_orientable(self) -> bool:
        return self.orientation() is not None

    def relabel(self, name: str) -> "SimplicialComplex":
        return SimplicialComplex(self.vertex_count, self.facets, name=name)


@dataclass(frozen=True)
class ValidationReport:
    pure: bool
    pseudomanifold: bool
    closed: bool
    orientable: bool
    manifold_links: bool
    issues: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.pure and self.pseudomanifold and self.manifold_links


def validate(k: SimplicialComplex, check_links: bool = True) -> ValidationReport:
    """Check purity, the pseudomanifold condition and vertex links.

    Vertex links must have the F_2 and Q homology of a sphere (interior
    vertices) or a point (boundary vertices).
    """
    issues = []
    pure = k.is_pure()
    if not pure:
        issues.append("facets of mixed dimension")
    over = [r for r, fs in k.ridge_facets.items() if len(fs) > 2]
    if over:
        issues.append(f"{len(over)} ridges in more than two facets, e.g. {over[0]}")
    links_ok = True
    if check_links and pure and not over and k.dimension >= 1:
        bdry_vertices = {v for f in k.boundary().facets for v in f}
        n = k.dimension
        for v in k.used_vertices():
            lk = k.link(v)
            want = [1] + [0] * (n - 1)
            if v not in bdry_vertices:
                want[n - 1] += 1
            for char in (2, 0):
                got = list(homology(lk, char))
                got += [0] * (n - len(got))
                if got != want:
                    links_ok = False
                    issues.append(f"link of vertex {v} has {field_label(char)} Betti numbers {tuple(got)}")
                    break
            if not links_ok:
                break
    return ValidationReport(
        pure=pure,
        pseudomanifold=not over,
        closed=k.is_closed(),
        orientable=k.is_orientable(),
        manifold_links=links_ok,
        issues=tuple(issues),
    )


@dataclass(frozen=True)
class ManifoldPair:
    """A compact triangulated manifold with its derived boundary."""

    total: SimplicialComplex

    @cached_property
    def boundary(self) -> SimplicialComplex:
        return self.total.boundary()

    @property
    def dimension(self) -> int:
        return self.total.dimension

    def interior_mask(self) -> list[set[int]]:
        """Per dimension, indices of simplices of ``total`` not in the boundary."""
        bd = self.boundary
        bd_simplices = [set(level) for level in bd.simplices] if bd.facets else []
        out = []
        for k, level in enumerate(self.total.simplices):
            inside = bd_simplices[k] if k < len(bd_simplices) else set()
            out.append({i for i, s in enumerate(level) if s not in inside})
        return out


@dataclass(frozen=True)
class BettiVector:
    values: tuple[int, ...]
    characteristic: int

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k] if 0 <= k < len(self.values) else 0

    def __len__(self) -> int:
        return len(self.values)

    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.values))

    def __str__(self) -> str:
        return f"{field_label(self.characteristic)}: {self.values}"


# ---------------------------------------------------------------------------
# homology


def _restricted(cols: list[SparseVec], keep_cols: set[int] | None, keep_rows: set[int] | None) -> list[SparseVec]:
    out = []
    for j, c in enumerate(cols):
        if keep_cols is not None and j not in keep_cols:
            continue
        out.append({i: x for i, x in c.items() if keep_rows is None or i in keep_rows})
    return out


def boundary_rank(x: HasDelta, k: int, char: int, keep: list[set[int]] | None = None) -> int:
    """Rank of ``d_k: C_k -> C_{k-1}``, optionally restricted to kept simplices."""
    d = x.delta()
    if k <= 0 or k > d.dimension:
        return 0
    cols = d.boundary_columns(k)
    if keep is not None:
        cols = _restricted(cols, keep[k], keep[k - 1])
    return rank_over(cols, char)


def homology(x: HasDelta, char: int | str = 2) -> BettiVector:
    """Betti numbers over the field of the given characteristic."""
    char = parse_field(char)
    d = x.delta()
    n = d.dimension
    ranks = [boundary_rank(d, k, char) for k in range(n + 2)]
    return BettiVector(tuple(d.count(k) - ranks[k] - ranks[k + 1] for k in range(n + 1)), char)


def relative_homology(pair: ManifoldPair, char: int | str = 2) -> BettiVector:
    """Homology of the quotient chain complex ``C(W) / C(dW)``."""
    char = parse_field(char)
    keep = pair.interior_mask()
    d = pair.total.delta()
    n = d.dimension
    ranks = [boundary_rank(d, k, char, keep) if 0 < k <= n else 0 for k in range(n + 2)]
    return BettiVector(tuple(len(keep[k]) - ranks[k] - ranks[k + 1] for k in range(n + 1)), char)


def euler_characteristic(x: HasDelta) -> int:
    return x.delta().euler_characteristic()


def kervaire_semichar(m: SimplicialComplex | DeltaComplex, char: int | str = 2) -> int:
    """Sum of the lower-half Betti numbers of an odd-dimensional closed manifold, mod 2."""
    char = parse_field(char)
    if isinstance(m, SimplicialComplex):
        if not m.is_closed():
            raise ComplexError("Kervaire semi-characteristic needs a closed manifold")
        if char != 2 and not m.is_orientable():
            raise ComplexError(f"Kervaire semi-characteristic over {field_label(char)} needs an orientable manifold")
    n = m.delta().dimension
    if n % 2 == 0:
        raise ComplexError(f"Kervaire semi-characteristic needs odd dimension, got {n}")
    b = homology(m, char)
    return sum(b[i] for i in range((n - 1) // 2 + 1)) % 2


def jstar_rank(pair: ManifoldPair, char: int | str = 2, degree: int | None = None) -> int:
    """Rank of ``H_k(W) -> H_k(W, dW)``, by default in the middle degree.

    Uses ``rank = dim Z_k(W) - dim Z_k(dW) - rank(d_{k+1} restricted to interior rows)``.
    """
    char = parse_field(char)
    n = pair.dimension
    if degree is None:
        if n % 2:
            raise ComplexError("middle degree needs an even-dimensional manifold")
        degree = n // 2
    k = degree
    w = pair.total.delta()
    z_w = w.count(k) - boundary_rank(w, k, char)
    bd = pair.boundary
    if bd.facets and k <= bd.dimension:
        bdd = bd.delta()
        z_b = bdd.count(k) - boundary_rank(bdd, k, char)
    else:
        z_b = 0
    keep = pair.interior_mask()
    if k + 1 <= w.dimension:
        cols = _restricted(w.boundary_columns(k + 1), None, keep[k])
        b_int = rank_over(cols, char)
    else:
        b_int = 0
    return z_w - z_b - b_int


# ---------------------------------------------------------------------------
# constructions


def product(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of the product; vertex ``(u, v)`` becomes ``u * nb + v``."""
    nb = b.vertex_count
    facets = set()
    for f in a.facets:
        for g in b.facets:
            p, q = len(f) - 1, len(g) - 1
            for steps in combinations(range(p + q), p):
                i = j = 0
                path = [f[0] * nb + g[0]]
                chosen = set(steps)
                for t in range(p + q):
                    if t in chosen:
                        i += 1
                    else:
                        j += 1
                    path.append(f[i] * nb + g[j])
                facets.add(tuple(path))
    name = f"{a.name} x {b.name}" if a.name and b.name else ""
    return SimplicialComplex(a.vertex_count * nb, tuple(sorted(facets)), name=name)


def disjoint_union(*parts: SimplicialComplex) -> SimplicialComplex:
    facets = []
    offset = 0
    for p in parts:
        facets += [tuple(v + offset for v in f) for f in p.facets]
        offset += p.vertex_count
    name = " + ".join(p.name for p in parts) if all(p.name for p in parts) else ""
    return SimplicialComplex(offset, tuple(facets), name=name)


def compact(k: SimplicialComplex) -> SimplicialComplex:
    """Relabel used vertices as ``0..m-1`` preserving order."""
    used = k.used_vertices()
    new = {v: i for i, v in enumerate(used)}
    return SimplicialComplex(len(used), tuple(tuple(new[v] for v in f) for f in k.facets), name=k.name)


def remove_facet(k: SimplicialComplex, facet: Sequence[int] | None = None) -> SimplicialComplex:
    """Delete one top facet (the first by default), leaving a manifold with sphere boundary."""
    target = tuple(sorted(facet)) if facet is not None else k.facets[-1]
    if target not in k.facets:
        raise ComplexError(f"{target} is not a facet")
    name = f"{k.name} minus disc" if k.name else ""
    return SimplicialComplex(k.vertex_count, tuple(f for f in k.facets if f != target), name=name)


def barycentric_subdivision(k: SimplicialComplex) -> tuple[SimplicialComplex, list[Simplex]]:
    """First barycentric subdivision; vertex ``i`` is the barycentre of ``labels[i]``."""
    labels = [s for level in k.simplices for s in level]
    pos = {s: i for i, s in enumerate(labels)}
    facets = []
    for f in k.facets:
        for perm in _flags(f):
            facets.append(tuple(pos[s] for s in perm))
    return SimplicialComplex(len(labels), tuple(facets)), labels


def _flags(f: Simplex) -> Iterable[list[Simplex]]:
    from itertools import permutations

    for order in permutations(f):
        yield [tuple(sorted(order[: i + 1])) for i in range(len(order))]


def free_quotient(k: SimplicialComplex, generator: Sequence[int], *, name: str = "") -> SimplicialComplex:
    """Quotient of ``k`` by the cyclic group generated by a vertex permutation.

    The action must be free and simplicial with no simplex meeting a vertex
    orbit twice.  The quotient is taken after one barycentric subdivision,
    where orbits of flags are determined by their vertex orbits, so the
    result is a genuine simplicial complex.
    """
    gen = list(generator)
    group = [list(range(k.vertex_count))]
    while True:
        nxt = [gen[v] for v in group[-1]]
        if nxt == group[0]:
            break
        group.append(nxt)
    facet_set = set(k.facets)
    for g in group[1:]:
        for f in k.facets:
            if tuple(sorted(g[v] for v in f)) not in facet_set:
                raise ComplexError("permutation is not a simplicial automorphism")
    for g in group[1:]:
        if any(g[v] == v for v in range(k.vertex_count)):
            raise ComplexError("action is not free on vertices")
    orbit_of = {}
    for v in range(k.vertex_count):
        orbit_of[v] = min(g[v] for g in group)
    for f in k.facets:
        if len({orbit_of[v] for v in f}) != len(f):
            raise ComplexError("a simplex meets some vertex orbit twice")

    def canon(s: Simplex) -> Simplex:
        return min(tuple(sorted(g[v] for v in s)) for g in group)

    orbits = sorted({canon(s) for level in k.simplices for s in level}, key=lambda s: (len(s), s))
    pos = {s: i for i, s in enumerate(orbits)}
    facets = set()
    for f in k.facets:
        for flag in _flags(f):
            facets.add(tuple(sorted(pos[canon(s)] for s in flag)))
    return SimplicialComplex(len(orbits), tuple(sorted(facets)), name=name)
