"""Named triangulations shipped with the package.

The data directory defaults to the package's ``data`` folder and can be
overridden with the ``SKKCALC_DATA`` environment variable or an explicit
argument.  Triangulations live in ``<data>/triangulations/<name>.tri``.
Product and disjoint-union names such as ``rp2*s1`` or ``s1+s1`` are built
on the fly.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from . import triangulations as tri
from .simplicial import ComplexError, ManifoldPair, SimplicialComplex, disjoint_union, product

PACKAGE_DATA = Path(__file__).resolve().parent / "data"
ENV_VAR = "SKKCALC_DATA"

ALIASES = {"l2_1": "rp3", "mobius": "moebius", "s1xi": "cylinder"}

# closed manifolds used by the property suites, dims 1-4
CLOSED_CORPUS = ("s1", "s2", "s3", "s4", "rp2", "rp3", "t2", "klein", "cp2", "l3_1", "l4_1", "l5_1")

# manifolds with boundary whose derived boundary is the named closed manifold
PAIR_CORPUS = {
    "d2": "s1",
    "moebius": "s1",
    "cylinder": "s1+s1",
    "cp2_minus_disc": "s3",
    "d4": "s3",
}


def data_dir(override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else PACKAGE_DATA


def triangulation_dir(override: str | Path | None = None) -> Path:
    return data_dir(override) / "triangulations"


def available(override: str | Path | None = None) -> list[str]:
    return sorted(p.stem for p in triangulation_dir(override).glob("*.tri"))


@lru_cache(maxsize=None)
def _load_named(name: str, root: str) -> SimplicialComplex:
    path = Path(root) / f"{name}.tri"
    if not path.exists():
        raise ComplexError(f"no triangulation named {name!r} in {root}")
    return tri.load(path)


def load(name: str, override: str | Path | None = None) -> SimplicialComplex:
    """Load a corpus entry, a ``.tri`` path, a product ``a*b`` or a union ``a+b``."""
    name = name.strip()
    if "+" in name:
        parts = [load(p, override) for p in name.split("+")]
        return disjoint_union(*parts).relabel(name)
    if "*" in name:
        parts = [load(p, override) for p in name.split("*")]
        out = parts[0]
        for p in parts[1:]:
            out = product(out, p)
        return out.relabel(name)
    if name.endswith(".tri") or os.sep in name:
        return tri.load(name)
    key = ALIASES.get(name.lower(), name.lower())
    return _load_named(key, str(triangulation_dir(override)))


def load_pair(name: str, override: str | Path | None = None) -> ManifoldPair:
    return ManifoldPair(load(name, override))
