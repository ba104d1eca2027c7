"""Regenerate the summary tables and compare them with the checked-in goldens.

By default only reports differences.  ``--write DIR`` puts the regenerated
JSON in DIR, leaving the goldens untouched, so a change can be reviewed
before a golden file is replaced.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from skkcalc import catalog, corpus, tables


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data-dir")
    ap.add_argument("--write", type=Path, help="directory for regenerated JSON")
    ap.add_argument("--text", action="store_true", help="also print aligned text")
    args = ap.parse_args()

    root = corpus.data_dir(args.data_dir)
    builder = tables.TableBuilder(catalog.load(args.data_dir))
    failed = False
    for preset in tables.PRESETS:
        t0 = time.perf_counter()
        table = builder.build(preset)
        dt = time.perf_counter() - t0
        diff = tables.diff_against_golden(table, root)
        print(f"{preset}: {'identical' if not diff else f'{len(diff)} diff lines'} ({dt:.2f}s)")
        failed |= bool(diff)
        for line in diff:
            print("  " + line)
        if args.text:
            print(tables.render_text(table))
        if args.write:
            args.write.mkdir(parents=True, exist_ok=True)
            (args.write / f"{preset}.json").write_text(tables.to_json(table), encoding="utf-8")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
