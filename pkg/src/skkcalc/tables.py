"""Summary tables regenerated from the catalog and the engines.

Three presets:

``skk-odd``
    For each structure, which odd ``n`` have ``SKK_n = Omega_n``, which have
    the ``Z/2`` extension split by ``kerv_F2``, and which are open.
``pin-parity``
    Possible Euler characteristics by dimension mod 8.
``physics``
    Sphere subgroups and ITQFT groups in dimensions 1-5 for the tenfold way.

A table is a plain dict (the machine format, stored as golden JSON) and can
be rendered as aligned text.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .abgroup import format_group
from .catalog import CatalogBundle, witness_symbolic
from .itqft import classify_verdict
from .skk import SkkEngine

PRESETS = ("skk-odd", "pin-parity", "physics")

ISO, KERV, OTHER, UNKNOWN = "iso", "kerv", "split_other", "unknown"


@dataclass(frozen=True)
class OddRow:
    structure: str
    style: str = "divisibility"  # or "residues"


@dataclass(frozen=True)
class OddTableConfig:
    rows: tuple[OddRow, ...] = (
        OddRow("o"),
        OddRow("so"),
        OddRow("spin"),
        OddRow("string"),
        OddRow("or3"),
        OddRow("or4"),
        OddRow("bo8"),
        OddRow("framed"),
        OddRow("pin+", "residues"),
        OddRow("pin-", "residues"),
    )
    max_dim: int = 255
    # residue rows use the behaviour above this dimension as the generic one
    stable_from: int = 16


@dataclass(frozen=True)
class ParityTableConfig:
    structures: tuple[str, ...] = ("o", "so", "spin", "pin-", "pin+")
    residues: tuple[int, ...] = (0, 2, 4, 6)
    max_k: int = 15


@dataclass(frozen=True)
class PhysicsRow:
    structure: str
    symmetry_class: str | None


@dataclass(frozen=True)
class PhysicsTableConfig:
    rows: tuple[PhysicsRow, ...] = (
        PhysicsRow("so", None),
        PhysicsRow("o", None),
        PhysicsRow("spinc", "A"),
        PhysicsRow("pinc", "AIII"),
        PhysicsRow("spin", "D"),
        PhysicsRow("pin+", "DIII"),
        PhysicsRow("pin-", "BDI"),
        PhysicsRow("pinc~+", "AII"),
        PhysicsRow("pinc~-", "AI"),
        PhysicsRow("spinh", "C"),
        PhysicsRow("pinh+", "CI"),
        PhysicsRow("pinh-", "CII"),
    )
    dims: tuple[int, ...] = (1, 2, 3, 4, 5)
    sphere_dims: tuple[int, ...] = (1, 3, 5)


@dataclass
class TableBuilder:
    catalog: CatalogBundle
    engine: SkkEngine = field(init=False)

    def __post_init__(self) -> None:
        self.engine = SkkEngine(self.catalog)

    def build(self, preset: str) -> dict:
        if preset == "skk-odd":
            return self.skk_odd()
        if preset == "pin-parity":
            return self.pin_parity()
        if preset == "physics":
            return self.physics()
        raise ValueError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")

    # -- odd-dimensional SKK -------------------------------------------

    def odd_category(self, structure: str, n: int) -> str:
        v = self.engine.verdict(structure, n)
        if v.sphere_subgroup == "zero":
            return ISO
        if v.sphere_subgroup == "Z2" and v.split.kind == "split":
            return KERV if "kerv_F2" in v.split.invariants else OTHER
        return UNKNOWN

    def skk_odd(self, config: OddTableConfig = OddTableConfig()) -> dict:
        odds = list(range(1, config.max_dim + 1, 2))
        rows = []
        for r in config.rows:
            cats = {n: self.odd_category(r.structure, n) for n in odds}
            if r.style == "residues":
                cells, note = _residue_cells(cats, config.stable_from)
            else:
                cells, note = _divisibility_cells(cats), _other_note(cats)
            rows.append({"structure": r.structure, "label": self.catalog.get(r.structure).label, **cells, "note": note})
        return {
            "preset": "skk-odd",
            "columns": ["structure", ISO, KERV, UNKNOWN, "note"],
            "range": f"odd n <= {config.max_dim}",
            "rows": rows,
        }

    # -- Euler parity --------------------------------------------------

    def parity_cell(self, structure: str, residue: int, max_k: int) -> str:
        s = self.catalog.get(structure)
        per_k = []
        for k in range(max_k + 1):
            p = s.euler_parity_at(8 * k + residue)
            if p.status == "odd_exists":
                per_k.append(f"Z({witness_symbolic(p.template, 8, residue)})")
            elif p.status == "always_even":
                per_k.append("2Z")
            else:
                per_k.append("?")
        return _runs_over_k(per_k)

    def pin_parity(self, config: ParityTableConfig = ParityTableConfig()) -> dict:
        rows = [{"dim": "odd", **{s: "0" for s in config.structures}}]
        for r in config.residues:
            row = {"dim": f"8k+{r}" if r else "8k"}
            for s in config.structures:
                row[s] = self.parity_cell(s, r, config.max_k)
            rows.append(row)
        return {
            "preset": "pin-parity",
            "columns": ["dim", *config.structures],
            "labels": {s: self.catalog.get(s).label for s in config.structures},
            "range": f"k <= {config.max_k}",
            "rows": rows,
        }

    # -- physics -------------------------------------------------------

    def physics(self, config: PhysicsTableConfig = PhysicsTableConfig()) -> dict:
        rows = []
        for r in config.rows:
            row: dict = {"structure": r.structure, "label": self.catalog.get(r.structure).label, "class": r.symmetry_class}
            for n in config.sphere_dims:
                sphere = self.engine.verdict(r.structure, n).sphere_group()
                row[f"sphere_{n}"] = format_group(sphere) if sphere is not None else "?"
            for n in config.dims:
                c = classify_verdict(self.engine.verdict(r.structure, n))
                row[f"itqft_{n}"] = {
                    "group": str(c.full) if c.full is not None else "?",
                    "split": c.split_over_unitary,
                }
            rows.append(row)
        columns = ["structure", "class"] + [f"sphere_{n}" for n in config.sphere_dims] + [f"itqft_{n}" for n in config.dims]
        return {"preset": "physics", "columns": columns, "rows": rows}


# ---------------------------------------------------------------------------
# cell rendering


def _power_of_two_divisibility(ns: set[int], odds: list[int]) -> int | None:
    """``m`` with ``ns == {n : m | n+1}`` if there is one."""
    m = 2
    while m <= odds[-1] + 1:
        if ns == {n for n in odds if (n + 1) % m == 0}:
            return m
        m *= 2
    return None


def _divisibility_cells(cats: dict[int, str]) -> dict[str, str]:
    odds = sorted(cats)
    by = {c: {n for n, x in cats.items() if x == c} for c in (ISO, KERV, UNKNOWN)}

    def describe(ns: set[int], whole: str | None = None) -> str | None:
        if not ns:
            return "-"
        if whole and len(ns) == len(odds):
            return whole
        m = _power_of_two_divisibility(ns, odds)
        return f"{m} | (n+1)" if m else None

    iso = describe(by[ISO])
    if not by[ISO] and by[UNKNOWN]:
        iso = "?"
    unknown = describe(by[UNKNOWN])
    kerv = describe(by[KERV], "all odd n")
    if by[KERV] and len(by[KERV]) < len(odds) and (by[KERV] | by[ISO] | by[UNKNOWN]) == set(odds):
        kerv = "other odd n"
    return {ISO: iso or _listing(by[ISO]), KERV: kerv or _listing(by[KERV]), UNKNOWN: unknown or _listing(by[UNKNOWN])}


def _listing(ns: set[int]) -> str:
    return "n in {" + ", ".join(map(str, sorted(ns))) + "}"


def _other_note(cats: dict[int, str]) -> str:
    others = sorted(n for n, c in cats.items() if c == OTHER)
    return "; ".join(f"split for n={n}, not by kerv" for n in others)


def _residue_cells(cats: dict[int, str], stable_from: int) -> tuple[dict[str, str], str]:
    generic: dict[int, str] = {}
    for r in (1, 3, 5, 7):
        seen = {c for n, c in cats.items() if n % 8 == r and n > stable_from}
        generic[r] = seen.pop() if len(seen) == 1 else UNKNOWN
    cells = {}
    for c in (ISO, KERV, UNKNOWN):
        rs = [r for r in (1, 3, 5, 7) if generic[r] == c]
        cells[c] = f"n ≡ {','.join(map(str, rs))} (mod 8)" if rs else "-"
    notes = []
    for n in sorted(cats):
        c, g = cats[n], generic[n % 8]
        if c == g:
            continue
        if c == OTHER:
            notes.append(f"split for n={n}, not by kerv")
        else:
            notes.append(f"{c} for n={n}")
    return cells, "; ".join(notes)


def _runs_over_k(per_k: list[str]) -> str:
    """Collapse a list indexed by k into ``A`` or ``A for k=0,1; B for k≥2``."""
    runs: list[tuple[int, int, str]] = []
    for k, v in enumerate(per_k):
        if runs and runs[-1][2] == v:
            runs[-1] = (runs[-1][0], k, v)
        else:
            runs.append((k, k, v))
    if len(runs) == 1:
        return runs[0][2]
    parts = []
    for i, (a, b, v) in enumerate(runs):
        if i == len(runs) - 1:
            parts.append(f"{v} for k≥{a}")
        elif a == b:
            parts.append(f"{v} for k={a}")
        else:
            parts.append(f"{v} for k={','.join(map(str, range(a, b + 1)))}")
    return "; ".join(parts)


# ---------------------------------------------------------------------------
# output


def to_json(table: dict) -> str:
    return json.dumps(table, indent=2, ensure_ascii=False) + "\n"


def _cell_text(v) -> str:
    if isinstance(v, dict):
        tag = {False: " [non-split]", None: " [?]"}.get(v["split"], "")
        return v["group"] + tag
    return "" if v is None else str(v)


def render_text(table: dict) -> str:
    cols = table["columns"]
    header = list(cols)
    body = []
    for row in table["rows"]:
        line = []
        for c in cols:
            if c == "structure":
                line.append(row.get("label", row["structure"]))
            else:
                line.append(_cell_text(row.get(c)))
        body.append(line)
    if "labels" in table:
        header = [table["labels"].get(c, c) for c in cols]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(cols))]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    out += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in body]
    return "\n".join(out) + "\n"


def golden_dir(data_dir: Path) -> Path:
    return data_dir / "golden"


def golden_path(data_dir: Path, preset: str) -> Path:
    return golden_dir(data_dir) / f"{preset}.json"


def diff_against_golden(table: dict, data_dir: Path) -> list[str]:
    """Unified diff lines between the regenerated table and its golden file; empty if identical."""
    path = golden_path(data_dir, table["preset"])
    expected = path.read_text(encoding="utf-8") if path.exists() else ""
    actual = to_json(table)
    if actual == expected:
        return []
    return list(difflib.unified_diff(expected.splitlines(), actual.splitlines(), str(path), "regenerated", lineterm=""))

