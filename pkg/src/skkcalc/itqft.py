"""Invertible TQFTs as characters of SKK groups.

An invertible field theory is a homomorphism ``SKK_n -> C^x``.  ``C^x`` is
injective, so ``Hom(-, C^x)`` turns

    0 -> <S^n_b> -> SKK_n -> Omega_n -> 0

into an exact sequence ``0 -> Hom(Omega, C^x) -> ITQFT_n -> Hom(<S^n_b>, C^x) -> 0``.
Unitary theories are those with positive real value on the bounding sphere;
they are exactly ``Hom(Omega, U(1))`` (a finite group of torsion characters)
times a positive real scaling in even dimensions.

``C^x`` never appears as a number here, only as a rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from . import corpus
from .abgroup import CharacterGroup, FgAbelianGroup, format_group, hom_to_circle
from .catalog import TangentialStructureRecord
from .simplicial import ComplexError, SimplicialComplex, euler_characteristic, kervaire_semichar, product
from .skk import SkkEngine, SkkVerdict


@dataclass(frozen=True)
class UnitaryPart:
    """``Hom(Omega, U(1))`` as its torsion character group, plus ``R_{>0}`` in even dimensions."""

    torsion: CharacterGroup | None
    positive_reals: bool

    def __str__(self) -> str:
        if self.torsion is None:
            return "unknown"
        base = str(self.torsion)
        if not self.positive_reals:
            return base
        return "R>0" if base == "0" else f"R>0 x {base}"


@dataclass(frozen=True)
class ItqftClassification:
    structure: str
    dimension: int
    full: CharacterGroup | None
    unitary: UnitaryPart
    quotient: str  # "C*" or a character group of the sphere subgroup, "unknown" if open
    split_over_unitary: bool | None
    verdict: SkkVerdict

    @property
    def blue(self) -> bool:
        """Non-split cells; the ones a printed table highlights."""
        return self.split_over_unitary is False

    def render(self) -> str:
        full = str(self.full) if self.full is not None else "unknown"
        split = {True: "split", False: "non-split", None: "split unknown"}[self.split_over_unitary]
        return f"{full} ({split} over unitary {self.unitary})"

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "dimension": self.dimension,
            "full": str(self.full) if self.full is not None else None,
            "unitary": str(self.unitary),
            "quotient_by_unitary": self.quotient,
            "split_over_unitary": self.split_over_unitary,
            "skk": self.verdict.to_dict(),
        }


def _split_flag(v: SkkVerdict) -> bool | None:
    return {"split": True, "non_split": False}.get(v.split.kind)


def _quotient(v: SkkVerdict) -> str:
    if v.dimension % 2 == 0:
        return "C*" if v.sphere_subgroup == "Z" else "unknown"
    sphere = v.sphere_group()
    return str(hom_to_circle(sphere)) if sphere is not None else "unknown"


def classify_verdict(v: SkkVerdict) -> ItqftClassification:
    full = hom_to_circle(v.group) if v.group is not None else None
    torsion = hom_to_circle(v.bordism.torsion_subgroup()) if v.bordism is not None else None
    unitary = UnitaryPart(torsion, v.dimension % 2 == 0)
    return ItqftClassification(v.structure, v.dimension, full, unitary, _quotient(v), _split_flag(v), v)


def classify(s: TangentialStructureRecord | str, n: int, engine: SkkEngine) -> ItqftClassification:
    return classify_verdict(engine.verdict(s, n))


def characters(g: FgAbelianGroup) -> str:
    """``Hom(g, C^x)`` rendered, e.g. ``C* x Z/4`` for ``Z x Z/4``."""
    return str(hom_to_circle(g))


# ---------------------------------------------------------------------------
# partition functions


def kervaire_partition(m: SimplicialComplex, field_char: int | str = 2) -> int:
    """``(-1)^kerv(M)``; the bounding sphere gets ``-1``, so this theory is not unitary."""
    return -1 if kervaire_semichar(m, field_char) else 1


def parse_scalar(text: str | int | sympy.Expr) -> sympy.Expr:
    """A nonzero complex literal such as ``-1``, ``3/2``, ``2*I`` or a symbol ``lam``."""
    value = sympy.sympify(text, rational=True) if isinstance(text, str) else sympy.sympify(text)
    if value == 0:
        raise ValueError("the Euler theory needs a nonzero scalar")
    return value


def euler_partition(lam: str | int | sympy.Expr, m: SimplicialComplex) -> sympy.Expr:
    """``lambda^chi(M)``, exact for algebraic numbers and symbolic otherwise."""
    value = parse_scalar(lam)
    return sympy.simplify(value ** euler_characteristic(m))


@dataclass(frozen=True)
class TraceCheck:
    passed: bool
    kerv: int
    euler: int

    def __str__(self) -> str:
        return f"{'pass' if self.passed else 'fail'} (kerv(Y x S^1) = {self.kerv}, chi(Y) = {self.euler})"


def trace_check(y: SimplicialComplex, circle: SimplicialComplex | None = None) -> TraceCheck:
    """``Z_kerv(Y x S^1)`` is the trace of the identity on ``Z(Y)``, which is ``(-1)^chi(Y)``."""
    if circle is None:
        circle = corpus.load("s1")
    if y.dimension % 2:
        raise ComplexError("trace check needs an even-dimensional Y")
    if not y.is_closed():
        raise ComplexError("trace check needs a closed Y")
    k = kervaire_semichar(product(y, circle), 2)
    chi = euler_characteristic(y)
    return TraceCheck(k == chi % 2, k, chi)


def describe(c: ItqftClassification) -> list[str]:
    v = c.verdict
    lines = [
        f"ITQFT_{c.dimension} for {c.structure}: {c.render()}",
        f"  SKK = {format_group(v.group) if v.group is not None else 'unknown'}",
        f"  quotient by unitary: {c.quotient}",
    ]
    if c.dimension % 2 == 0:
        lines.append("  continuous theories are not classified here; only the torsion part is printed")
    return lines
