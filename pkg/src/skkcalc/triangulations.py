"""Triangulation generators and the versioned text format.

File layout::

    format: skk-triangulation/1
    name: rp2
    dimension: 2
    vertex_count: 6
    facets:
    0 1 2
    ...

Facets are 0-based vertex tuples, one per line.  Lines starting with ``#``
are comments.
"""

from __future__ import annotations

from itertools import combinations, product as iproduct
from pathlib import Path

from .simplicial import ComplexError, DeltaComplex, SimplicialComplex, free_quotient, product, remove_facet

FORMAT_TAG = "skk-triangulation/1"


class TriangulationFormatError(ComplexError):
    pass


def dumps(k: SimplicialComplex, name: str | None = None, comment: str = "") -> str:
    lines = []
    if comment:
        lines += [f"# {line}" for line in comment.splitlines()]
    lines += [
        f"format: {FORMAT_TAG}",
        f"name: {name or k.name or 'unnamed'}",
        f"dimension: {k.dimension}",
        f"vertex_count: {k.vertex_count}",
        "facets:",
    ]
    lines += [" ".join(map(str, f)) for f in k.facets]
    return "\n".join(lines) + "\n"


def loads(text: str) -> SimplicialComplex:
    header: dict[str, str] = {}
    facets: list[tuple[int, ...]] = []
    in_facets = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_facets:
            try:
                facets.append(tuple(int(x) for x in line.replace(",", " ").split()))
            except ValueError:
                raise TriangulationFormatError(f"line {lineno}: bad facet {raw!r}") from None
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise TriangulationFormatError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        if key == "facets":
            in_facets = True
            continue
        header[key] = value.strip()
    if header.get("format") != FORMAT_TAG:
        raise TriangulationFormatError(f"missing or unsupported format tag {header.get('format')!r}")
    for key in ("dimension", "vertex_count"):
        if key not in header:
            raise TriangulationFormatError(f"missing {key}")
    try:
        k = SimplicialComplex(int(header["vertex_count"]), tuple(facets), name=header.get("name", ""))
    except ComplexError as e:
        raise TriangulationFormatError(str(e)) from None
    if k.dimension != int(header["dimension"]):
        raise TriangulationFormatError(f"declared dimension {header['dimension']} but facets have dimension {k.dimension}")
    return k


def load(path: str | Path) -> SimplicialComplex:
    return loads(Path(path).read_text())


# ---------------------------------------------------------------------------
# basic families


def sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    verts = range(n + 2)
    return SimplicialComplex(n + 2, tuple(combinations(verts, n + 1)), name=f"s{n}")


def disc(n: int) -> SimplicialComplex:
    return SimplicialComplex(n + 1, (tuple(range(n + 1)),), name=f"d{n}")


def polygon(m: int) -> SimplicialComplex:
    if m < 3:
        raise ComplexError("a simplicial circle needs at least 3 vertices")
    return SimplicialComplex(m, tuple((i, (i + 1) % m) for i in range(m)), name=f"c{m}")


def cyclic_orbit_complex(n_vertices: int, base: list[tuple[int, ...]], name: str = "") -> SimplicialComplex:
    """Union of the orbits of ``base`` facets under ``i -> i + 1 mod n``."""
    facets = {tuple(sorted((v + s) % n_vertices for v in f)) for f in base for s in range(n_vertices)}
    return SimplicialComplex(n_vertices, tuple(sorted(facets)), name=name)


def moebius_strip() -> SimplicialComplex:
    """Five-vertex Moebius strip: triangles ``{i, i+1, i+2} mod 5``."""
    return cyclic_orbit_complex(5, [(0, 1, 2)], name="moebius")


def torus() -> SimplicialComplex:
    """Seven-vertex torus with triangles ``{i, i+1, i+3}`` and ``{i, i+2, i+3}`` mod 7."""
    return cyclic_orbit_complex(7, [(0, 1, 3), (0, 2, 3)], name="t2")


def rp2() -> SimplicialComplex:
    """Six-vertex projective plane (hemi-icosahedron)."""
    facets = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
    ]
    return SimplicialComplex(6, tuple(facets), name="rp2")


def cylinder(m: int = 3) -> SimplicialComplex:
    k = product(polygon(m), disc(1))
    return SimplicialComplex(k.vertex_count, k.facets, name="cylinder")


def cross_polytope_sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-dimensional cross-polytope; vertex ``2i + e`` is ``(-1)^e e_i``."""
    facets = [tuple(2 * i + e for i, e in enumerate(signs)) for signs in iproduct((0, 1), repeat=n + 1)]
    return SimplicialComplex(2 * (n + 1), tuple(facets), name=f"octahedral_s{n}")


def join_of_polygons(m1: int, m2: int) -> SimplicialComplex:
    """The 3-sphere as the join of an ``m1``-gon (vertices ``0..m1-1``) and an ``m2``-gon."""
    facets = [
        (i, (i + 1) % m1, m1 + j, m1 + (j + 1) % m2)
        for i in range(m1)
        for j in range(m2)
    ]
    return SimplicialComplex(m1 + m2, tuple(facets))


def lens_space(p: int, q: int = 1, spread: int = 2) -> SimplicialComplex:
    """``L(p, q)`` as the free quotient of a join of two ``p * spread``-gons.

    The generator rotates the first polygon by ``spread`` steps and the second
    by ``q * spread`` steps, i.e. ``(z, w) -> (zeta z, zeta^q w)``.
    """
    if spread < 2:
        raise ComplexError("spread must be at least 2 so that no edge joins an orbit to itself")
    m = p * spread
    k = join_of_polygons(m, m)
    gen = [(i + spread) % m for i in range(m)] + [m + (j + q * spread) % m for j in range(m)]
    name = "rp3" if p == 2 else f"l{p}_{q}"
    return free_quotient(k, gen, name=name)


def projective_space(n: int) -> SimplicialComplex:
    """``RP^n`` as the antipodal quotient of the octahedral n-sphere (after subdivision)."""
    s = cross_polytope_sphere(n)
    gen = [v ^ 1 for v in range(s.vertex_count)]
    return free_quotient(s, gen, name=f"rp{n}")


def projective_delta(n: int) -> DeltaComplex:
    """``RP^n`` as an ordered semi-simplicial set with ``2^n`` top simplices.

    Faces of the octahedral sphere are sign vectors on a subset of the
    coordinates; ordering vertices by coordinate index is preserved by the
    antipodal map, so the orbit set inherits face maps.  Orbits are
    represented by sign vectors whose first sign is ``+``.
    """
    levels: list[list[tuple[tuple[int, int], ...]]] = []
    for k in range(n + 1):
        level = []
        for coords in combinations(range(n + 1), k + 1):
            for rest in iproduct((0, 1), repeat=k):
                level.append(tuple(zip(coords, (0,) + rest)))
        levels.append(level)
    index = [{s: i for i, s in enumerate(level)} for level in levels]

    def canon(s):
        if s[0][1] == 0:
            return s
        return tuple((c, 1 - e) for c, e in s)

    faces: list[list[tuple[int, ...]]] = [[() for _ in levels[0]]]
    for k in range(1, n + 1):
        faces.append([tuple(index[k - 1][canon(s[:i] + s[i + 1:])] for i in range(k + 1)) for s in levels[k]])
    return DeltaComplex([len(level) for level in levels], faces)


def punctured(k: SimplicialComplex) -> SimplicialComplex:
    return remove_facet(k)
