"""Tangential-structure catalog: records, dimension patterns and the YAML format.

A catalog is a YAML stream.  The first document is a header::

    schema: skk-catalog/1
    version: 1.0.0

and every following document describes one structure.  Dimension patterns
are written ``8k+2`` (all ``n = 8k + 2`` with ``k >= 0``), ``4m``, or a
literal dimension such as ``10``.  Optional ``min_dim`` / ``max_dim`` clip
a pattern.  Groups use the :mod:`skkcalc.abgroup` grammar and Euler
characteristic homomorphisms are integer rows on canonical generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import yaml

from .abgroup import Z2, FgAbelianGroup, GroupHom, format_group, parse_group

SCHEMA = "skk-catalog/1"
STABILIZATIONS = ("unstabilized", "once", "twice", "stable")
PARITY_STATUSES = ("always_even", "odd_exists", "unknown")


class CatalogError(ValueError):
    pass


_PATTERN = re.compile(r"^(?:(\d+)\s*[a-z]\s*(?:\+\s*(\d+))?|(\d+))$")


@dataclass(frozen=True)
class DimPattern:
    """``{modulus * k + residue : k >= 0}`` clipped to ``[min_dim, max_dim]``."""

    modulus: int
    residue: int
    min_dim: int | None = None
    max_dim: int | None = None
    text: str = ""

    @classmethod
    def parse(cls, text: str | int, min_dim: int | None = None, max_dim: int | None = None) -> "DimPattern":
        s = str(text).replace(" ", "")
        m = _PATTERN.match(s)
        if not m:
            raise CatalogError(f"bad dimension pattern {text!r}")
        if m.group(3) is not None:
            d = int(m.group(3))
            return cls(0, d, min_dim, max_dim, s)
        return cls(int(m.group(1)), int(m.group(2) or 0), min_dim, max_dim, s)

    def matches(self, dim: int) -> bool:
        if self.min_dim is not None and dim < self.min_dim:
            return False
        if self.max_dim is not None and dim > self.max_dim:
            return False
        if self.modulus == 0:
            return dim == self.residue
        return dim >= self.residue and (dim - self.residue) % self.modulus == 0

    def only_even(self) -> bool:
        if self.modulus == 0:
            return self.residue % 2 == 0
        return self.modulus % 2 == 0 and self.residue % 2 == 0

    def to_yaml(self) -> dict:
        out: dict = {"dims": self.text or self._render()}
        if self.min_dim is not None:
            out["min_dim"] = self.min_dim
        if self.max_dim is not None:
            out["max_dim"] = self.max_dim
        return out

    def _render(self) -> str:
        if self.modulus == 0:
            return str(self.residue)
        return f"{self.modulus}k" + (f"+{self.residue}" if self.residue else "")


def _pattern_from(doc: dict) -> DimPattern:
    if "dims" not in doc:
        raise CatalogError(f"entry without dims: {doc!r}")
    return DimPattern.parse(doc["dims"], doc.get("min_dim"), doc.get("max_dim"))


_WITNESS_SLOT = re.compile(r"\{\(?n(?:([+-])(\d+))?\)?(?:/(\d+))?\}")


def _slot(m: re.Match) -> tuple[int, int]:
    off = int(m.group(2) or 0) * (-1 if m.group(1) == "-" else 1)
    return off, int(m.group(3) or 1)


def _braced(text: str) -> str:
    return text if len(text) == 1 else "{" + text + "}"


def witness_name(template: str, dim: int) -> str:
    """Fill ``{n}``, ``{n/2}``, ``{(n-2)/4}`` slots with a concrete dimension."""

    def fill(m: re.Match) -> str:
        off, div = _slot(m)
        return _braced(str((dim + off) // div))

    return _WITNESS_SLOT.sub(fill, template)


def witness_symbolic(template: str, modulus: int, residue: int, var: str = "k") -> str:
    """Fill slots with ``modulus * var + residue``, e.g. ``CP^{n/2}`` at ``8k+4`` is ``CP^{4k+2}``."""

    def fill(m: re.Match) -> str:
        off, div = _slot(m)
        a, b = modulus // div, (residue + off) // div
        head = f"{a}{var}" if a != 1 else var
        if a == 0:
            return _braced(str(b))
        return _braced(head + (f"+{b}" if b else ""))

    return _WITNESS_SLOT.sub(fill, template)


@dataclass(frozen=True)
class ParityRule:
    pattern: DimPattern
    status: str
    witness: str | None = None
    citation: str = ""

    def to_yaml(self) -> dict:
        out = self.pattern.to_yaml()
        out["status"] = self.status
        if self.witness:
            out["witness"] = self.witness
        out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class PatternFact:
    """A dimension pattern with a citation (top-Wu vanishing, obstructions)."""

    pattern: DimPattern
    citation: str
    note: str = ""

    def to_yaml(self) -> dict:
        out = self.pattern.to_yaml()
        if self.note:
            out["note"] = self.note
        out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class BordismEntry:
    group: FgAbelianGroup
    citation: str
    chi_mod2: tuple[int, ...] | None = None
    chi_citation: str = ""
    generators: tuple[str, ...] = ()

    def chi_hom(self) -> GroupHom | None:
        if self.chi_mod2 is None:
            return None
        return GroupHom(self.group, Z2, (tuple(self.chi_mod2),))

    def to_yaml(self) -> dict:
        out: dict = {"group": format_group(self.group)}
        if self.generators:
            out["generators"] = list(self.generators)
        if self.chi_mod2 is not None:
            out["chi_mod2"] = list(self.chi_mod2)
            out["chi_citation"] = self.chi_citation
        out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class ComparisonMap:
    """A map of structures over ``BO``; ``sphere_iso=None`` lets the engine decide."""

    target: str
    citation: str
    sphere_iso: bool | None = None

    def to_yaml(self) -> dict:
        out: dict = {"target": self.target}
        if self.sphere_iso is not None:
            out["sphere_iso"] = self.sphere_iso
        out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class SplitOverride:
    dim: int
    invariant: str
    note: str
    citation: str

    def to_yaml(self) -> dict:
        return {"dim": self.dim, "invariant": self.invariant, "note": self.note, "citation": self.citation}


@dataclass(frozen=True)
class ParityVerdict:
    status: str
    witness: str | None
    source: str
    template: str | None = None


@dataclass(frozen=True)
class TangentialStructureRecord:
    name: str
    label: str
    stabilization: str
    orientable: bool | None
    citation: str
    k_orientability: int | None = None
    connective_cover_b: int | None = None
    # citation for "Omega_n is torsion in every dimension", if known
    torsion_bordism: str | None = None
    aliases: tuple[str, ...] = ()
    bordism: dict[int, BordismEntry] = field(default_factory=dict)
    euler_parity: tuple[ParityRule, ...] = ()
    top_wu_vanishes: tuple[PatternFact, ...] = ()
    comparison_maps: tuple[ComparisonMap, ...] = ()
    split_overrides: tuple[SplitOverride, ...] = ()
    split_obstructions: tuple[PatternFact, ...] = ()

    def __post_init__(self) -> None:
        if self.stabilization not in STABILIZATIONS:
            raise CatalogError(f"{self.name}: stabilization must be one of {STABILIZATIONS}")
        for rule in self.euler_parity:
            if rule.status not in PARITY_STATUSES:
                raise CatalogError(f"{self.name}: bad parity status {rule.status!r}")
            if not rule.pattern.only_even():
                raise CatalogError(f"{self.name}: Euler parity is only recorded in even dimensions")
            if rule.status == "odd_exists" and not rule.witness:
                raise CatalogError(f"{self.name}: odd_exists needs a witness")
        for dim, entry in self.bordism.items():
            if entry.chi_mod2 is not None:
                entry.chi_hom()  # validates shape and order compatibility

    def __hash__(self) -> int:
        return hash(self.name)

    def stabilization_level(self) -> int:
        return STABILIZATIONS.index(self.stabilization)

    @property
    def effective_k(self) -> int | None:
        """Largest known k with every such manifold k-orientable."""
        ks = []
        if self.k_orientability is not None:
            ks.append(self.k_orientability)
        if self.connective_cover_b is not None:
            ks.append(phi_bound(self.connective_cover_b))
        if self.orientable:
            ks.append(1)
        return max(ks) if ks else None

    def euler_parity_at(self, dim: int) -> ParityVerdict:
        if dim % 2:
            raise ValueError("Euler parity is recorded for even dimensions only")
        for rule in self.euler_parity:
            if rule.pattern.matches(dim):
                w = witness_name(rule.witness, dim) if rule.witness else None
                return ParityVerdict(rule.status, w, rule.citation, rule.witness)
        k = self.effective_k
        if k is not None and k_orientable_parity(k, dim) == "always_even":
            return ParityVerdict("always_even", None, f"{k}-orientable manifolds have even Euler characteristic unless 2^{k + 1} divides the dimension")
        return ParityVerdict("unknown", None, "no catalog fact")

    def top_wu_fact(self, dim: int) -> PatternFact | None:
        for fact in self.top_wu_vanishes:
            if fact.pattern.matches(dim):
                return fact
        return None

    def override_at(self, dim: int) -> SplitOverride | None:
        for o in self.split_overrides:
            if o.dim == dim:
                return o
        return None

    def obstruction_at(self, dim: int) -> PatternFact | None:
        for o in self.split_obstructions:
            if o.pattern.matches(dim):
                return o
        return None

    def to_yaml(self) -> dict:
        out: dict = {
            "schema": SCHEMA,
            "name": self.name,
            "label": self.label,
            "aliases": list(self.aliases),
            "stabilization": self.stabilization,
            "orientable": self.orientable,
            "k_orientability": self.k_orientability,
            "connective_cover_b": self.connective_cover_b,
            "torsion_bordism": self.torsion_bordism,
            "citation": self.citation,
            "bordism": {d: self.bordism[d].to_yaml() for d in sorted(self.bordism)},
            "euler_parity": [r.to_yaml() for r in self.euler_parity],
            "top_wu_vanishes": [f.to_yaml() for f in self.top_wu_vanishes],
            "comparison_maps": [c.to_yaml() for c in self.comparison_maps],
            "split_overrides": [o.to_yaml() for o in self.split_overrides],
            "split_obstructions": [o.to_yaml() for o in self.split_obstructions],
        }
        return out

    @classmethod
    def from_yaml(cls, doc: dict) -> "TangentialStructureRecord":
        if doc.get("schema") != SCHEMA:
            raise CatalogError(f"unsupported schema {doc.get('schema')!r}")
        name = doc["name"]

        def cite(d: dict, what: str) -> str:
            c = d.get("citation", "")
            if not c:
                raise CatalogError(f"{name}: {what} has no citation")
            return c

        bordism = {}
        for dim, b in (doc.get("bordism") or {}).items():
            chi = b.get("chi_mod2")
            if chi is not None and not b.get("chi_citation"):
                raise CatalogError(f"{name}: chi_mod2 in dim {dim} has no citation")
            bordism[int(dim)] = BordismEntry(
                group=parse_group(str(b["group"])),
                citation=cite(b, f"bordism group in dim {dim}"),
                chi_mod2=tuple(int(x) for x in chi) if chi is not None else None,
                chi_citation=b.get("chi_citation", ""),
                generators=tuple(b.get("generators") or ()),
            )
        parity = tuple(
            ParityRule(_pattern_from(r), r["status"], r.get("witness"), cite(r, "parity rule"))
            for r in doc.get("euler_parity") or ()
        )
        wu = tuple(PatternFact(_pattern_from(r), cite(r, "Wu fact"), r.get("note", "")) for r in doc.get("top_wu_vanishes") or ())
        maps = tuple(ComparisonMap(c["target"], cite(c, "comparison map"), c.get("sphere_iso")) for c in doc.get("comparison_maps") or ())
        overrides = tuple(
            SplitOverride(int(o["dim"]), o["invariant"], o.get("note", ""), cite(o, "override"))
            for o in doc.get("split_overrides") or ()
        )
        obstructions = tuple(
            PatternFact(_pattern_from(o), cite(o, "obstruction"), o.get("note", "")) for o in doc.get("split_obstructions") or ()
        )
        return cls(
            name=name,
            label=doc.get("label", name),
            stabilization=doc["stabilization"],
            orientable=doc.get("orientable"),
            citation=cite(doc, "structure"),
            k_orientability=doc.get("k_orientability"),
            connective_cover_b=doc.get("connective_cover_b"),
            torsion_bordism=doc.get("torsion_bordism") or None,
            aliases=tuple(doc.get("aliases") or ()),
            bordism=bordism,
            euler_parity=parity,
            top_wu_vanishes=wu,
            comparison_maps=maps,
            split_overrides=overrides,
            split_obstructions=obstructions,
        )


def phi_bound(b: int) -> int:
    """``#{1 <= s <= b : s = 0, 1, 2, 4 mod 8}``."""
    if b < 0:
        raise ValueError("b must be non-negative")
    return sum(1 for s in range(1, b + 1) if s % 8 in (0, 1, 2, 4))


def k_orientable_parity(k: int, dim: int) -> str:
    """``always_even`` unless ``2^(k+1)`` divides ``dim``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if dim % 2:
        raise ValueError("Euler parity question is only posed in even dimensions")
    return "odd_possible" if dim % (2 ** (k + 1)) == 0 else "always_even"


@dataclass(frozen=True)
class CatalogBundle:
    version: str
    structures: tuple[TangentialStructureRecord, ...]

    def __post_init__(self) -> None:
        names = [s.name for s in self.structures]
        if len(set(names)) != len(names):
            raise CatalogError("duplicate structure names")
        known = set(names)
        for s in self.structures:
            for c in s.comparison_maps:
                if c.target not in known:
                    raise CatalogError(f"{s.name}: comparison target {c.target!r} is not in the catalog")

    def names(self) -> list[str]:
        return [s.name for s in self.structures]

    def get(self, name: str) -> TangentialStructureRecord:
        key = name.strip().lower()
        for s in self.structures:
            if key == s.name or key in s.aliases or key == s.label.lower():
                return s
        raise KeyError(f"unknown structure {name!r}; known: {', '.join(self.names())}")

    def provenance(self) -> list[tuple[str, str, str]]:
        """``(structure, fact, citation)`` for every recorded fact."""
        out = [(s.name, "structure", s.citation) for s in self.structures]
        for s in self.structures:
            if s.torsion_bordism:
                out.append((s.name, "bordism torsion in all dimensions", s.torsion_bordism))
            for d, b in sorted(s.bordism.items()):
                out.append((s.name, f"bordism {d} = {format_group(b.group)}", b.citation))
                if b.chi_mod2 is not None:
                    out.append((s.name, f"chi mod 2 on bordism {d}", b.chi_citation))
            for r in s.euler_parity:
                out.append((s.name, f"parity {r.pattern.text}: {r.status}", r.citation))
            for f in s.top_wu_vanishes:
                out.append((s.name, f"top Wu vanishes {f.pattern.text}", f.citation))
            for c in s.comparison_maps:
                out.append((s.name, f"map to {c.target}", c.citation))
            for o in s.split_overrides:
                out.append((s.name, f"override dim {o.dim}", o.citation))
            for o in s.split_obstructions:
                out.append((s.name, f"obstruction {o.pattern.text}", o.citation))
        return out

    def replace(self, record: TangentialStructureRecord) -> "CatalogBundle":
        return CatalogBundle(self.version, tuple(record if s.name == record.name else s for s in self.structures))


def dumps(bundle: CatalogBundle) -> str:
    docs = [{"schema": SCHEMA, "version": bundle.version}] + [s.to_yaml() for s in bundle.structures]
    return yaml.safe_dump_all(docs, sort_keys=False, allow_unicode=True, default_flow_style=False, width=100)


def loads(text: str) -> CatalogBundle:
    docs = [d for d in yaml.safe_load_all(text) if d is not None]
    if not docs or docs[0].get("schema") != SCHEMA or "version" not in docs[0] or "name" in docs[0]:
        raise CatalogError(f"catalog must start with a '{SCHEMA}' header carrying a version")
    return CatalogBundle(str(docs[0]["version"]), tuple(TangentialStructureRecord.from_yaml(d) for d in docs[1:]))


def catalog_path(data_dir: Path) -> Path:
    return data_dir / "catalog" / "structures.yaml"


@lru_cache(maxsize=8)
def _load_cached(path: str, mtime: float) -> CatalogBundle:
    return loads(Path(path).read_text())


def load(data_dir: str | Path | None = None) -> CatalogBundle:
    from .corpus import data_dir as resolve

    path = catalog_path(resolve(data_dir))
    if not path.exists():
        raise CatalogError(f"no catalog at {path}")
    return _load_cached(str(path), path.stat().st_mtime)
