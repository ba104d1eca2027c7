"""SKK groups from catalog data.

In dimension ``n`` the bounding sphere generates the kernel of
``SKK_n -> Omega_n``.  That kernel is ``Z`` for even ``n``; for odd ``n`` it
is ``Z/2`` when every closed ``(n+1)``-manifold with the structure has even
Euler characteristic and zero when one with odd Euler characteristic exists.
Even-dimensional SKK is the pullback ``Omega x_{Z/2} Z`` along Euler
characteristic mod 2 and reduction mod 2.

The engine is an ordered list of guarded rules.  Each firing is logged with
a rule identifier; the identifiers are listed in :data:`RULES`.  An unknown
premise never lets a rule fire.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import (
    Z2,
    FgAbelianGroup,
    FiberProduct,
    GroupHom,
    fiber_product,
    format_group,
    mod_reduction,
    surjections_to_z2,
    torsion_elements_parity_cover,
    zero_hom,
)
from .catalog import CatalogBundle, TangentialStructureRecord
from .simplicial import (
    ComplexError,
    ManifoldPair,
    SimplicialComplex,
    euler_characteristic,
    homology,
    kervaire_semichar,
    parse_field,
)

RULES = {
    "hypothesis": "stabilisation hypothesis of the SKK sequence",
    "sphere-even": "even n: the bounding sphere generates Z, detected by chi/2",
    "sphere-odd-euler": "odd n: an odd-Euler (n+1)-manifold kills the bounding sphere",
    "sphere-even-euler": "odd n: all (n+1)-manifolds have even Euler characteristic, so the sphere generates Z/2",
    "sphere-unknown": "odd n: parity of Euler characteristic in dimension n+1 is open",
    "sphere-trivial": "sphere subgroup is zero, so SKK = Omega",
    "k-orientable-kerv": "k-orientable and 2^(k+1) does not divide n+1: top Wu class vanishes, kerv_F2 splits",
    "wu-vanishing-kerv": "top Wu class vanishes on all closed (n+1)-manifolds: kerv_F2 splits",
    "inheritance": "a map to a structure whose sequence splits, iso on sphere subgroups, splits by the induced section",
    "catalog-override": "structure-specific splitting fact",
    "trivial-bordism": "Omega = 0, so SKK is the sphere subgroup",
    "open-split": "split status open; conjecturally every twice stabilised structure splits",
    "split-obstruction": "no invariant of the underlying manifold splits here",
    "de-rham": "kerv_Q also splits; it differs from kerv_F2 by the de Rham invariant",
    "pullback": "SKK = Omega x_{Z/2} Z along chi mod 2 and reduction mod 2",
    "pullback-enumeration": "chi mod 2 unknown but onto: all surjections to Z/2 give the same answer",
    "even-euler-half": "all n-manifolds have even Euler characteristic: chi/2 splits",
    "torsion-odd-euler": "a torsion class with odd Euler characteristic: no splitting",
    "orientable-signature": "(chi - sigma)/2 splits for oriented manifolds with n = 0 mod 4",
    "torsion-free-split": "Omega torsion free: splits via chi/2 corrected on free generators",
    "torsion-even-euler": "every torsion class has even Euler characteristic: splits non-canonically",
    "no-bordism-data": "bordism group not in the catalog",
    "no-chi-data": "chi mod 2 on Omega not determined by the catalog",
}


@dataclass(frozen=True)
class RuleFiring:
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.detail}"


@dataclass(frozen=True)
class SplitStatus:
    kind: str  # split | non_split | unknown
    invariants: tuple[str, ...] = ()
    note: str = ""

    def __str__(self) -> str:
        if self.kind == "split":
            return "split: " + ", ".join(self.invariants) if self.invariants else "split"
        if self.kind == "non_split":
            return "non-split"
        return "split status unknown"


@dataclass(frozen=True)
class SkkVerdict:
    structure: str
    dimension: int
    sphere_subgroup: str  # Z | Z2 | zero | unknown
    group: FgAbelianGroup | None
    bordism: FgAbelianGroup | None
    split: SplitStatus
    justification: tuple[RuleFiring, ...]
    group_note: str = ""
    fiber: FiberProduct | None = field(default=None, compare=False, repr=False)

    @property
    def is_determinate(self) -> bool:
        return self.group is not None and self.split.kind != "unknown"

    @property
    def anchors(self) -> tuple[str, ...]:
        return tuple(f.rule for f in self.justification)

    def sphere_group(self) -> FgAbelianGroup | None:
        return {"Z": FgAbelianGroup(1), "Z2": Z2, "zero": FgAbelianGroup()}.get(self.sphere_subgroup)

    def render(self) -> str:
        """One-line summary, e.g. ``Z x Z/4, non-split (torsion-odd-euler)``."""
        group = format_group(self.group) if self.group is not None else "unknown"
        if self.group is None and self.group_note:
            group = f"unknown ({self.group_note})"
        if self.split.kind == "split":
            return f"{group}, {self.split}"
        decisive = [f.rule for f in self.justification if f.rule in _DECISIVE]
        tag = f" ({decisive[-1]})" if decisive else ""
        return f"{group}, {self.split}{tag}"

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "dimension": self.dimension,
            "sphere_subgroup": self.sphere_subgroup,
            "bordism": format_group(self.bordism) if self.bordism is not None else None,
            "group": format_group(self.group) if self.group is not None else None,
            "group_note": self.group_note,
            "split_status": self.split.kind,
            "split_invariants": list(self.split.invariants),
            "split_note": self.split.note,
            "justification": [{"rule": f.rule, "detail": f.detail} for f in self.justification],
        }


_DECISIVE = {"torsion-odd-euler", "open-split", "sphere-unknown", "no-bordism-data", "no-chi-data", "hypothesis"}


def sphere_subgroup(s: TangentialStructureRecord, n: int) -> tuple[str, list[RuleFiring]]:
    """``Z``, ``Z2``, ``zero`` or ``unknown``, with the firing trace."""
    trace: list[RuleFiring] = []
    level = s.stabilization_level()
    if n % 2 == 0:
        if level < 1:
            trace.append(RuleFiring("hypothesis", "even n needs a once stabilised structure"))
            return "unknown", trace
        trace.append(RuleFiring("sphere-even", "<S^n_b> = Z"))
        return "Z", trace
    if level < 2:
        trace.append(RuleFiring("hypothesis", "odd n needs a twice stabilised structure"))
        return "unknown", trace
    parity = s.euler_parity_at(n + 1)
    if parity.status == "odd_exists":
        trace.append(RuleFiring("sphere-odd-euler", f"chi({parity.witness}) is odd in dimension {n + 1} ({parity.source})"))
        return "zero", trace
    if parity.status == "always_even":
        trace.append(RuleFiring("sphere-even-euler", f"chi is even in dimension {n + 1} ({parity.source})"))
        return "Z2", trace
    trace.append(RuleFiring("sphere-unknown", f"parity of chi in dimension {n + 1}: {parity.source}"))
    return "unknown", trace


def surgery_class(chi_of_nullbordism: int, sphere_order: int | None = None) -> int:
    """Coefficient of ``[S^n_b]`` for the class of ``Y = dW``: ``chi(W)``, reduced if the sphere has finite order."""
    if sphere_order:
        return chi_of_nullbordism % sphere_order
    return chi_of_nullbordism


def cylinder_class(chi_m: int) -> int:
    """``[M] + [M-bar] = chi(M) [S^n_b]``, from the cylinder ``M x I`` with ``chi = chi(M)``."""
    return chi_m


class SkkEngine:
    """Verdicts for one catalog, memoised per ``(structure, n)``."""

    def __init__(self, catalog: CatalogBundle) -> None:
        self.catalog = catalog
        self._memo: dict[tuple[str, int], SkkVerdict] = {}
        self._active: set[tuple[str, int]] = set()

    def verdict(self, structure: str | TangentialStructureRecord, n: int) -> SkkVerdict:
        s = structure if isinstance(structure, TangentialStructureRecord) else self.catalog.get(structure)
        if n < 0:
            raise ValueError("dimension must be non-negative")
        key = (s.name, n)
        if key not in self._memo:
            self._active.add(key)
            try:
                self._memo[key] = self._odd(s, n) if n % 2 else self._even(s, n)
            finally:
                self._active.discard(key)
        return self._memo[key]

    # -- odd dimensions -------------------------------------------------

    def _odd(self, s: TangentialStructureRecord, n: int) -> SkkVerdict:
        sphere, trace = sphere_subgroup(s, n)
        entry = s.bordism.get(n)
        omega = entry.group if entry else None
        if s.stabilization_level() >= 2:
            trace.insert(0, RuleFiring("hypothesis", f"{s.label} is {s.stabilization}; reversibility with a structured sphere would also suffice"))
        if omega is None:
            trace.append(RuleFiring("no-bordism-data", f"Omega_{n} missing"))

        def done(group, split, note=""):
            return SkkVerdict(s.name, n, sphere, group, omega, split, tuple(trace), note)

        if sphere == "unknown":
            return done(None, SplitStatus("unknown", note="sphere subgroup unknown"), "extension of Omega by 0 or Z/2")
        if sphere == "zero":
            trace.append(RuleFiring("sphere-trivial", "SKK -> Omega is an isomorphism"))
            return done(omega, SplitStatus("split", ("trivially",)))

        split = self._odd_split(s, n, trace)
        if split.kind == "split":
            group = Z2.direct_sum(omega) if omega is not None else None
            return done(group, split, "" if group else "Z/2 x Omega")
        return done(None, split, "extension of Omega by Z/2")

    def _odd_split(self, s: TangentialStructureRecord, n: int, trace: list[RuleFiring]) -> SplitStatus:
        k = s.effective_k
        d = n + 1
        obstruction = s.obstruction_at(n)
        if obstruction is not None:
            trace.append(RuleFiring("split-obstruction", f"{obstruction.note} ({obstruction.citation})"))
        if obstruction is None and k is not None and d % (2 ** (k + 1)):
            trace.append(RuleFiring("k-orientable-kerv", f"{k}-orientable and 2^{k + 1} does not divide {d}"))
            self._de_rham(s, n, trace)
            return SplitStatus("split", ("kerv_F2",))
        wu = s.top_wu_fact(d)
        if obstruction is None and wu is not None:
            trace.append(RuleFiring("wu-vanishing-kerv", f"v_{d // 2} = 0 in dimension {d} ({wu.citation})"))
            self._de_rham(s, n, trace)
            return SplitStatus("split", ("kerv_F2",))
        for cmap in s.comparison_maps:
            if cmap.sphere_iso is False or (cmap.target, n) in self._active:
                continue
            target = self.verdict(cmap.target, n)
            if target.sphere_subgroup == "Z2" and target.split.kind == "split":
                inv = tuple(i for i in target.split.invariants if i != "trivially")
                if obstruction is not None and "kerv_F2" in inv:
                    continue
                trace.append(RuleFiring("inheritance", f"via {cmap.target} ({cmap.citation}); both sphere subgroups Z/2"))
                return SplitStatus("split", inv or target.split.invariants)
        override = s.override_at(n)
        if override is not None:
            trace.append(RuleFiring("catalog-override", f"{override.note} ({override.citation})"))
            return SplitStatus("split", (override.invariant,), override.note)
        entry = s.bordism.get(n)
        if entry is not None and entry.group.is_trivial():
            trace.append(RuleFiring("trivial-bordism", f"Omega_{n} = 0"))
            return SplitStatus("split", ("trivially",))
        trace.append(RuleFiring("open-split", "the conjecture that every twice stabilised structure splits would settle it"))
        return SplitStatus("unknown", note="open; conjecturally split")

    @staticmethod
    def _de_rham(s: TangentialStructureRecord, n: int, trace: list[RuleFiring]) -> None:
        if s.orientable and n % 4 == 1:
            trace.append(RuleFiring("de-rham", "informational: kerv_Q is a second splitting"))

    # -- even dimensions ------------------------------------------------

    def _even(self, s: TangentialStructureRecord, n: int) -> SkkVerdict:
        sphere, trace = sphere_subgroup(s, n)
        entry = s.bordism.get(n)
        omega = entry.group if entry else None

        def done(group, split, note="", fiber=None):
            return SkkVerdict(s.name, n, sphere, group, omega, split, tuple(trace), note, fiber)

        if sphere == "unknown":
            return done(None, SplitStatus("unknown", note="hypothesis not met"))
        parity = s.euler_parity_at(n)

        canonical: list[str] = []
        if parity.status == "always_even":
            canonical.append("chi/2")
        if s.orientable and n % 4 == 0:
            canonical.append("(chi-sigma)/2")

        if omega is None:
            trace.append(RuleFiring("no-bordism-data", f"Omega_{n} missing"))
            if parity.status == "always_even":
                trace.append(RuleFiring("even-euler-half", parity.source))
                return done(None, SplitStatus("split", tuple(canonical)), "Z x Omega")
            if s.orientable and n % 4 == 0:
                trace.append(RuleFiring("orientable-signature", "sigma is a bordism invariant with chi = sigma mod 2"))
                return done(None, SplitStatus("split", tuple(canonical)), "Z x Omega")
            if s.torsion_bordism and parity.status == "odd_exists":
                # the odd-Euler witness is itself a torsion class
                trace.append(RuleFiring("torsion-odd-euler", f"chi({parity.witness}) is odd and Omega is torsion ({s.torsion_bordism})"))
                return done(None, SplitStatus("non_split"), "Omega x_Z/2 Z")
            return done(None, SplitStatus("unknown"))

        candidates = self._chi_candidates(s, n, entry, parity, trace)
        if candidates is None:
            trace.append(RuleFiring("no-chi-data", "need chi mod 2 or the parity of chi"))
            if s.orientable and n % 4 == 0:
                trace.append(RuleFiring("orientable-signature", "splits by (chi - sigma)/2"))
                return done(None, SplitStatus("split", tuple(canonical)), "Z x Omega")
            if omega.is_torsion_free():
                trace.append(RuleFiring("torsion-free-split", f"Omega_{n} = {format_group(omega)} is torsion free"))
                return done(None, SplitStatus("split", ("(chi - chi_free)/2",)), "pullback along an unknown chi")
            return done(None, SplitStatus("unknown"))

        fibers = [fiber_product(chi, mod_reduction(2)) for chi in candidates]
        groups = {f.group for f in fibers}
        covers = {torsion_elements_parity_cover(chi) for chi in candidates}
        group = fibers[0].group if len(groups) == 1 else None
        fiber = fibers[0] if len(candidates) == 1 else None
        if len(candidates) > 1:
            detail = f"{len(candidates)} surjections Omega_{n} -> Z/2"
            detail += ", all with pullback " + format_group(group) if group else ", pullbacks differ"
            trace.append(RuleFiring("pullback-enumeration", detail))
        if group is not None:
            trace.append(RuleFiring("pullback", f"{format_group(omega)} x_Z/2 Z = {format_group(group)}"))

        if covers == {True}:
            trace.append(RuleFiring("torsion-odd-euler", "chi mod 2 is nonzero on the torsion of Omega"))
            return done(group, SplitStatus("non_split"), "" if group else "depends on chi mod 2", fiber)
        if parity.status == "always_even":
            trace.append(RuleFiring("even-euler-half", parity.source))
            return done(group, SplitStatus("split", tuple(canonical)), fiber=fiber)
        if s.orientable and n % 4 == 0:
            trace.append(RuleFiring("orientable-signature", "sigma kills torsion and chi = sigma mod 2"))
            return done(group, SplitStatus("split", tuple(canonical)), fiber=fiber)
        if omega.is_torsion_free():
            trace.append(RuleFiring("torsion-free-split", f"Omega_{n} = {format_group(omega)}"))
            return done(group, SplitStatus("split", ("(chi - chi_free)/2",)), fiber=fiber)
        if covers == {False}:
            trace.append(RuleFiring("torsion-even-euler", "odd-Euler classes all have infinite order (finite type)"))
            return done(group, SplitStatus("split", ("non-canonical",)), fiber=fiber)
        return done(group, SplitStatus("unknown", note="depends on chi mod 2"), fiber=fiber)

    @staticmethod
    def _chi_candidates(s, n, entry, parity, trace) -> list[GroupHom] | None:
        omega = entry.group
        chi = entry.chi_hom()
        if parity.status == "always_even":
            zero = zero_hom(omega, Z2)
            if chi is not None and chi != zero:
                raise ValueError(f"{s.name}: chi mod 2 in dim {n} is nonzero but chi is recorded always even")
            return [zero]
        if chi is not None:
            return [chi]
        if parity.status == "odd_exists":
            surj = surjections_to_z2(omega)
            if not surj:
                raise ValueError(f"{s.name}: odd chi in dim {n} but Omega_{n} has no map onto Z/2")
            return surj
        return None


# ---------------------------------------------------------------------------
# triangulated falsifier


@dataclass(frozen=True)
class CriterionCheck:
    passed: bool
    kerv: int
    euler: int
    field: int

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "fail"
        return f"{verdict} (kerv {self.kerv}, chi(W) mod 2 = {self.euler % 2})"


def splitting_criterion_check(boundary: SimplicialComplex, filling: ManifoldPair, char: int | str = 2) -> CriterionCheck:
    """A kerv splitting must send ``Y = dW`` to ``chi(W)`` mod 2; test that on one filling."""
    if boundary.dimension % 2 == 0:
        raise ComplexError("the boundary must be odd-dimensional")
    if filling.dimension != boundary.dimension + 1:
        raise ComplexError("filling must have one dimension more than the boundary")
    # vertex labels differ between files, so compare mod 2 Betti numbers
    if tuple(homology(filling.boundary, 2)) != tuple(homology(boundary, 2)):
        raise ComplexError("boundary does not match the derived boundary of the filling")
    p = parse_field(char)
    k = kervaire_semichar(boundary, p)
    chi = euler_characteristic(filling.total)
    return CriterionCheck(k == chi % 2, k, chi, p)
