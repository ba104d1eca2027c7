"""Print a structure x dimension grid of SKK verdicts.

Useful when extending the catalog: every cell shows the group (or ``?``) and
a one-letter split tag, s = split, n = non-split, u = unknown.
"""

from __future__ import annotations

import argparse

from skkcalc import catalog
from skkcalc.abgroup import format_group
from skkcalc.skk import SkkEngine

TAG = {"split": "s", "non_split": "n", "unknown": "u"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-dim", type=int, default=8)
    ap.add_argument("--structure", action="append", help="restrict to these; repeatable")
    ap.add_argument("--data-dir")
    args = ap.parse_args()

    engine = SkkEngine(catalog.load(args.data_dir))
    names = args.structure or engine.catalog.names()
    dims = range(1, args.max_dim + 1)
    grid = []
    for s in names:
        row = [s]
        for n in dims:
            v = engine.verdict(s, n)
            g = format_group(v.group) if v.group is not None else "?"
            row.append(f"{g} [{TAG[v.split.kind]}]")
        grid.append(row)
    header = ["structure", *map(str, dims)]
    widths = [max(len(r[i]) for r in [header, *grid]) for i in range(len(header))]
    for r in [header, *grid]:
        print("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())


if __name__ == "__main__":
    main()
