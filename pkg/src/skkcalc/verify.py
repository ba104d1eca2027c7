"""Property suites runnable outside pytest, for ``skkcalc verify``.

Each check returns a :class:`Check`; a suite is a list of them.  The checks
mirror the identities the test suite exercises, over the shipped corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Callable, Iterator

from . import catalog, corpus, itqft, tables
from .charclass import (
    class_coordinates,
    cup,
    intersection_form_mid,
    ring,
    steenrod_sq,
    stiefel_whitney,
    top_sw_number,
    wu_classes,
)
from .simplicial import disjoint_union, euler_characteristic, homology, jstar_rank, kervaire_semichar, relative_homology
from .skk import SkkEngine, splitting_criterion_check

SUITES = ("homology", "charclass", "skk", "itqft")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.suite}: {self.name}" + (f" ({self.detail})" if self.detail else "")


def _closed(data_dir):
    for name in corpus.CLOSED_CORPUS:
        yield name, corpus.load(name, data_dir)


def homology_suite(data_dir=None) -> Iterator[Check]:
    for name, m in _closed(data_dir):
        n = m.dimension
        for char in (2, 0):
            b = homology(m, char)
            if char == 2 or m.is_orientable():
                ok = all(b[k] == b[n - k] for k in range(n + 1))
                yield Check("homology", f"Poincare duality {name} over {'F2' if char == 2 else 'Q'}", ok, str(b))
            yield Check("homology", f"chi {name} over {'F2' if char == 2 else 'Q'}", b.euler() == euler_characteristic(m), str(b.euler()))
    for name in corpus.PAIR_CORPUS:
        pair = corpus.load_pair(name, data_dir)
        n = pair.dimension
        rel, abs_ = relative_homology(pair, 2), homology(pair.total, 2)
        ok = all(rel[k] == abs_[n - k] for k in range(n + 1))
        yield Check("homology", f"Lefschetz duality {name}", ok, f"rel {rel}, abs {abs_}")


def charclass_suite(data_dir=None) -> Iterator[Check]:
    for name, m in _closed(data_dir):
        d = m.delta()
        n = d.dimension
        v = wu_classes(d)
        r = ring(d)
        ok = True
        for k in range(n + 1):
            for x in r.basis(n - k).representatives:
                if steenrod_sq(k, x).evaluate() != cup(x, v[k]).evaluate():
                    ok = False
        yield Check("charclass", f"Wu identity {name}", ok)
        yield Check("charclass", f"<w_n,[M]> = chi mod 2 {name}", top_sw_number(d) == euler_characteristic(m) % 2)
        if n % 2 == 0:
            form = intersection_form_mid(d)
            yield Check("charclass", f"even form has even rank {name}", not form.is_even or form.rank % 2 == 0)
    for n in (2, 3, 4):
        m = corpus.load(f"rp{n}", data_dir)
        w = stiefel_whitney(m)
        ok = all((class_coordinates(w[k]) or [0])[0] == comb(n + 1, k) % 2 for k in range(1, n + 1))
        yield Check("charclass", f"w(RP^{n}) = (1+a)^{n + 1}", ok)


def skk_suite(data_dir=None) -> Iterator[Check]:
    root = corpus.data_dir(data_dir)
    builder = tables.TableBuilder(catalog.load(data_dir))
    for preset in tables.PRESETS:
        diff = tables.diff_against_golden(builder.build(preset), root)
        yield Check("skk", f"golden {preset}", not diff, f"{len(diff)} diff lines" if diff else "")
    for name in corpus.PAIR_CORPUS:
        pair = corpus.load_pair(name, data_dir)
        if pair.dimension % 2:
            continue
        lhs = kervaire_semichar(pair.boundary, 2)
        rhs = (jstar_rank(pair, 2) + euler_characteristic(pair.total)) % 2
        yield Check("skk", f"kerv(dW) = rank j* + chi(W) for {name}", lhs == rhs, f"{lhs} vs {rhs}")
    s1 = corpus.load("s1", data_dir)
    yield Check("skk", "criterion passes for (S^1, D^2)", splitting_criterion_check(s1, corpus.load_pair("d2", data_dir)).passed)
    yield Check("skk", "criterion fails for (S^1, Moebius)", not splitting_criterion_check(s1, corpus.load_pair("moebius", data_dir)).passed)
    e1, e2 = SkkEngine(catalog.load(data_dir)), SkkEngine(catalog.load(data_dir))
    same = all(e1.verdict(s, n) == e2.verdict(s, n) for s in e1.catalog.names() for n in range(1, 12))
    yield Check("skk", "verdicts are deterministic", same)


def itqft_suite(data_dir=None) -> Iterator[Check]:
    for name, m in _closed(data_dir):
        if m.dimension % 2 == 0:
            yield Check("itqft", f"trace check {name}", itqft.trace_check(m, corpus.load("s1", data_dir)).passed)
    for name, m in _closed(data_dir):
        if m.dimension % 2:
            both = disjoint_union(m, m)
            ok = itqft.kervaire_partition(both) == itqft.kervaire_partition(m) ** 2
            yield Check("itqft", f"Z_kerv multiplicative on {name} + {name}", ok)
    engine = SkkEngine(catalog.load(data_dir))
    for s in engine.catalog.names():
        for n in range(1, 6):
            c = itqft.classify(s, n, engine)
            if c.full is None or c.quotient == "unknown":
                continue
            ok = c.quotient == ("C*" if n % 2 == 0 else str(c.verdict.sphere_group()))
            yield Check("itqft", f"quotient by unitary {s} dim {n}", ok, c.quotient)


RUNNERS: dict[str, Callable[..., Iterator[Check]]] = {
    "homology": homology_suite,
    "charclass": charclass_suite,
    "skk": skk_suite,
    "itqft": itqft_suite,
}


def run(suite: str = "all", data_dir: str | Path | None = None) -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in RUNNERS for n in names):
        raise ValueError(f"unknown suite {suite!r}; choose all or one of {', '.join(SUITES)}")
    out: list[Check] = []
    for n in names:
        out.extend(RUNNERS[n](data_dir))
    return out
