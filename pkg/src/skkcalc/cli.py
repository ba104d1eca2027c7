"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 the answer is a computed unknown,
4 a verification or golden diff failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import yaml

from . import catalog, corpus, itqft, tables, verify
from .charclass import intersection_form_mid, stiefel_whitney, wu_classes
from .simplicial import (
    ComplexError,
    euler_characteristic,
    field_label,
    homology,
    jstar_rank,
    kervaire_semichar,
    parse_field,
    validate,
)
from .skk import SkkEngine, splitting_criterion_check

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN, EXIT_FAILED = 0, 2, 3, 4

INVARIANTS = ("euler", "betti", "kerv", "wu", "sw", "form")


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _engine(args) -> SkkEngine:
    return SkkEngine(catalog.load(args.data_dir))


def _structure(args):
    try:
        return catalog.load(args.data_dir).get(args.structure)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute_skk(args) -> int:
    s = _structure(args)
    v = _engine(args).verdict(s, args.dim)
    lines = [v.render(), f"  sphere subgroup: {v.sphere_subgroup}"]
    lines += [f"  {f}" for f in v.justification]
    _emit(args, v.to_dict(), "\n".join(lines))
    return EXIT_OK if v.is_determinate else EXIT_UNKNOWN


def cmd_tables(args) -> int:
    builder = tables.TableBuilder(catalog.load(args.data_dir))
    presets = tables.PRESETS if args.preset == "all" else (args.preset,)
    status = EXIT_OK
    for p in presets:
        t = builder.build(p)
        if args.check:
            diff = tables.diff_against_golden(t, corpus.data_dir(args.data_dir))
            print(f"{p}: {'identical to golden' if not diff else 'DIFFERS'}")
            for line in diff:
                print(line)
            status = status or (EXIT_FAILED if diff else EXIT_OK)
        elif args.json:
            sys.stdout.write(tables.to_json(t))
        else:
            print(f"== {p} ==")
            sys.stdout.write(tables.render_text(t))
    return status


def _split_list(values: list[str] | None, default: Sequence[str]) -> list[str]:
    if not values:
        return list(default)
    return [x.strip().lower() for v in values for x in v.split(",") if x.strip()]


def _describe_class(label: str, c) -> dict:
    nonzero = not c.is_zero_class()
    return {"class": label, "nonzero": nonzero, "support": c.support.bit_count()}


def cmd_manifold_analyze(args) -> int:
    try:
        m = corpus.load(args.manifold, args.data_dir)
    except (ComplexError, OSError) as exc:
        raise InputError(str(exc)) from None
    fields = [parse_field(f) for f in _split_list(args.field, ["f2"])]
    invs = _split_list(args.inv, INVARIANTS)
    bad = [i for i in invs if i not in INVARIANTS]
    if bad:
        raise InputError(f"unknown invariant(s) {', '.join(bad)}; choose from {', '.join(INVARIANTS)}")
    report = validate(m)
    out: dict = {"manifold": m.name, "dimension": m.dimension, "valid": report.ok, "invariants": {}}
    lines = [f"{m.name}: dimension {m.dimension}, f-vector {m.f_vector}, {'valid' if report.ok else 'INVALID'}"]
    lines += [f"  issue: {i}" for i in report.issues]

    def record(key: str, value, text: str) -> None:
        out["invariants"][key] = value
        lines.append(f"  {key}: {text}")

    for inv in invs:
        try:
            if inv == "euler":
                chi = euler_characteristic(m)
                record("euler", chi, str(chi))
            elif inv == "betti":
                for p in fields:
                    b = homology(m, p)
                    record(f"betti_{field_label(p)}", list(b), str(b))
            elif inv == "kerv":
                for p in fields:
                    k = kervaire_semichar(m, p)
                    record(f"kerv_{field_label(p)}", k, str(k))
            elif inv in ("wu", "sw"):
                classes = wu_classes(m) if inv == "wu" else stiefel_whitney(m)
                letter = "v" if inv == "wu" else "w"
                top = m.dimension // 2 if inv == "wu" else m.dimension
                for i in range(1, top + 1):
                    info = _describe_class(f"{letter}{i}", classes[i])
                    rel = "!= 0" if info["nonzero"] else "= 0"
                    record(f"{letter}{i}", info, f"{letter}{i} {rel}" + (f" ({info['support']} simplices)" if info["nonzero"] else ""))
            elif inv == "form":
                form = intersection_form_mid(m)
                record("form", {"rank": form.rank, "even": form.is_even}, f"rank {form.rank}, {'even' if form.is_even else 'odd'}")
        except (ComplexError, ValueError) as exc:
            record(inv, {"error": str(exc)}, f"not applicable ({exc})")
    _emit(args, out, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_INPUT


def cmd_manifold_pair(args) -> int:
    try:
        pair = corpus.load_pair(args.manifold, args.data_dir)
    except (ComplexError, OSError) as exc:
        raise InputError(str(exc)) from None
    if not pair.boundary.facets:
        raise InputError(f"{args.manifold} has empty boundary")
    p = parse_field(args.field)
    chi = euler_characteristic(pair.total)
    out: dict = {"manifold": pair.total.name, "dimension": pair.dimension, "field": field_label(p), "chi": chi}
    lines = [f"{pair.total.name}: dimension {pair.dimension}, chi {chi}, boundary f-vector {pair.boundary.f_vector}"]
    status = EXIT_OK
    if pair.dimension % 2 == 0:
        kerv = kervaire_semichar(pair.boundary, p)
        rank = jstar_rank(pair, p)
        holds = kerv == (rank + chi) % 2
        out |= {"kerv_boundary": kerv, "jstar_rank": rank, "congruence": holds}
        lines.append(f"  kerv(boundary) {kerv}, rank j* {rank}, congruence {'holds' if holds else 'FAILS'}")
        check = splitting_criterion_check(pair.boundary, pair, p)
        out["criterion"] = check.passed
        lines.append(f"  splitting criterion: {check}")
        status = EXIT_OK if holds else EXIT_FAILED
    else:
        lines.append("  odd-dimensional filling: the congruence is posed for even dimensions")
    _emit(args, out, "\n".join(lines))
    return status


def cmd_itqft_classify(args) -> int:
    s = _structure(args)
    c = itqft.classify(s, args.dim, _engine(args))
    _emit(args, c.to_dict(), "\n".join(itqft.describe(c)))
    return EXIT_OK if c.full is not None and c.split_over_unitary is not None else EXIT_UNKNOWN


def cmd_verify(args) -> int:
    try:
        results = verify.run(args.suite, args.data_dir)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    failed = [r for r in results if not r.passed]
    if args.json:
        print(json.dumps([r.__dict__ for r in results], indent=2))
    else:
        for r in results:
            if args.verbose or not r.passed:
                print(r)
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_catalog_list(args) -> int:
    bundle = catalog.load(args.data_dir)
    rows = [{"name": s.name, "label": s.label, "stabilization": s.stabilization, "dims": sorted(s.bordism)} for s in bundle.structures]
    text = "\n".join(f"{r['name']:<8} {r['label']:<20} {r['stabilization']:<8} bordism dims {r['dims']}" for r in rows)
    _emit(args, {"version": bundle.version, "structures": rows}, f"catalog {bundle.version}\n{text}")
    return EXIT_OK


def cmd_catalog_show(args) -> int:
    s = _structure(args)
    doc = s.to_yaml()
    _emit(args, doc, yaml.safe_dump(doc, sort_keys=False, allow_unicode=True).rstrip())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def shared(suppress: bool) -> argparse.ArgumentParser:
        # subcommands accept the flags too, without clobbering ones given before the subcommand
        extra = {"default": argparse.SUPPRESS} if suppress else {}
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--data-dir", help=f"data directory (default: ${corpus.ENV_VAR} or the packaged data)", **extra)
        p.add_argument("--json", action="store_true", help="structured output", **extra)
        return p

    common = shared(True)
    parser = argparse.ArgumentParser(prog="skkcalc", description=__doc__.splitlines()[0], parents=[shared(False)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute-skk", parents=[common], help="SKK group of a structure in one dimension")
    p.add_argument("--structure", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_compute_skk)

    p = sub.add_parser("tables", parents=[common], help="regenerate the summary tables")
    p.add_argument("--preset", choices=(*tables.PRESETS, "all"), default="all")
    p.add_argument("--check", action="store_true", help="diff against the golden files")
    p.set_defaults(func=cmd_tables)

    man = sub.add_parser("manifold", help="invariants of triangulated manifolds").add_subparsers(dest="action", required=True)
    p = man.add_parser("analyze", parents=[common])
    p.add_argument("manifold", help="corpus name, .tri path, product a*b or union a+b")
    p.add_argument("--field", action="append", help="q, f2, f3, ...; repeatable")
    p.add_argument("--inv", action="append", help=f"comma separated subset of {','.join(INVARIANTS)}")
    p.set_defaults(func=cmd_manifold_analyze)
    p = man.add_parser("pair", parents=[common])
    p.add_argument("manifold", help="manifold with boundary")
    p.add_argument("--field", default="f2")
    p.set_defaults(func=cmd_manifold_pair)

    it = sub.add_parser("itqft", help="invertible TQFTs").add_subparsers(dest="action", required=True)
    p = it.add_parser("classify", parents=[common])
    p.add_argument("--structure", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_itqft_classify)

    p = sub.add_parser("verify", parents=[common], help="run property suites over the corpus")
    p.add_argument("--suite", default="all", choices=("all", *verify.SUITES))
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    cat = sub.add_parser("catalog", help="inspect the structure catalog").add_subparsers(dest="action", required=True)
    p = cat.add_parser("list", parents=[common])
    p.set_defaults(func=cmd_catalog_list)
    p = cat.add_parser("show", parents=[common])
    p.add_argument("structure")
    p.set_defaults(func=cmd_catalog_show)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
