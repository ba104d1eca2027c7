"""Regenerate the triangulation corpus under src/skkcalc/data/triangulations.

Most entries come from the generators in ``skkcalc.triangulations``.  Two are
found by search and written out so the search never runs at import time:

* the Klein bottle, by link-condition edge contractions of a twisted 4x4 grid
  until 8 vertices remain;
* the 9-vertex complex projective plane, as the unique union of four orbits
  of 4-simplices under the translation group Z/3 x Z/3 that is a closed
  pseudomanifold with the Betti numbers of CP^2.
"""

from __future__ import annotations

import argparse
import random
from collections import Counter
from itertools import combinations
from pathlib import Path

from skkcalc import triangulations as tri
from skkcalc.simplicial import SimplicialComplex, compact, homology, remove_facet, validate

OUT = Path(__file__).resolve().parents[1] / "src" / "skkcalc" / "data" / "triangulations"


def twisted_grid(m: int, n: int) -> SimplicialComplex:
    def v(i, j):
        if j == n:
            i, j = -i, 0
        return (i % m) * n + j

    facets = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)
            facets += [(a, b, d), (a, c, d)]
    return SimplicialComplex(m * n, tuple(facets))


def _closed_star(k: SimplicialComplex, simplex: set[int]) -> set[tuple[int, ...]]:
    out = set()
    for f in k.facets:
        if simplex <= set(f):
            rest = tuple(x for x in f if x not in simplex)
            for r in range(1, len(rest) + 1):
                out.update(combinations(rest, r))
    return out


def contract_edge(k: SimplicialComplex, a: int, b: int) -> SimplicialComplex | None:
    la = {s for s in _closed_star(k, {a}) if b not in s}
    lb = {s for s in _closed_star(k, {b}) if a not in s}
    if la & lb != _closed_star(k, {a, b}):
        return None
    facets = [tuple(a if x == b else x for x in f) for f in k.facets if not (a in f and b in f)]
    return compact(SimplicialComplex(k.vertex_count, tuple(facets)))


def klein_bottle(target: int = 8, seed: int = 1) -> SimplicialComplex:
    rng = random.Random(seed)
    while True:
        k = twisted_grid(4, 4)
        progress = True
        while progress and k.vertex_count > target:
            edges = list(k.simplices[1])
            rng.shuffle(edges)
            progress = False
            for a, b in edges:
                smaller = contract_edge(k, a, b)
                if smaller is not None:
                    k, progress = smaller, True
                    break
        if k.vertex_count == target:
            return k.relabel("klein")


def projective_plane_9() -> SimplicialComplex:
    group = [[3 * ((v // 3 + a) % 3) + (v % 3 + b) % 3 for v in range(9)] for a in range(3) for b in range(3)]
    orbits, seen = [], set()
    for t in combinations(range(9), 5):
        if t not in seen:
            orbit = {tuple(sorted(g[v] for v in t)) for g in group}
            seen |= orbit
            orbits.append(sorted(orbit))
    for choice in combinations(orbits, 4):
        facets = [f for orbit in choice for f in orbit]
        ridges = Counter(f[:i] + f[i + 1:] for f in facets for i in range(5))
        if any(c != 2 for c in ridges.values()):
            continue
        k = SimplicialComplex(9, tuple(facets), name="cp2")
        if all(homology(k, c).values == (1, 0, 1, 0, 1) for c in (0, 2, 3)) and validate(k).ok:
            return k
    raise RuntimeError("no candidate found")


def corpus() -> dict[str, tuple[SimplicialComplex, str]]:
    out: dict[str, tuple[SimplicialComplex, str]] = {}
    for n in range(1, 7):
        out[f"s{n}"] = (tri.sphere(n), f"{n}-sphere: boundary of the {n + 1}-simplex")
        out[f"d{n}"] = (tri.disc(n), f"{n}-disc: a single {n}-simplex")
    cp2 = projective_plane_9()
    out.update(
        rp2=(tri.rp2(), "real projective plane, 6 vertices"),
        rp3=(tri.lens_space(2), "real projective 3-space: antipodal quotient of a join of two 4-gons, subdivided"),
        rp4=(tri.projective_space(4), "real projective 4-space: antipodal quotient of the octahedral 4-sphere, subdivided"),
        t2=(tri.torus(), "torus, 7 vertices"),
        klein=(klein_bottle(), "Klein bottle, 8 vertices (edge contractions of a twisted grid)"),
        moebius=(tri.moebius_strip(), "Moebius strip, 5 vertices"),
        cylinder=(tri.cylinder(), "cylinder S^1 x I, staircase product of a triangle and an edge"),
        cp2=(cp2, "complex projective plane, 9 vertices, invariant under Z/3 x Z/3"),
        cp2_minus_disc=(remove_facet(cp2).relabel("cp2_minus_disc"), "CP^2 with one open 4-simplex removed"),
    )
    for p in range(3, 6):
        out[f"l{p}_1"] = (tri.lens_space(p), f"lens space L({p},1): Z/{p} quotient of a join of two {2 * p}-gons, subdivided")
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, (k, desc) in corpus().items():
        report = validate(k)
        if not report.ok:
            raise SystemExit(f"{name}: {report.issues}")
        (args.out / f"{name}.tri").write_text(tri.dumps(k, name=name, comment=desc))
        print(f"{name:16s} f={k.f_vector}")


if __name__ == "__main__":
    main()
