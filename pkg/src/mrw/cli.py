"""Command-line surface.

Exit codes: 0 verified/success, 1 refuted/invalid, 2 unknown within the
bound, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from mrw.backends import UsageError
from mrw.engine import (
    Bounds,
    EngineError,
    Refused,
    Status,
    certify,
    is_irreducible,
    normal_form,
)
from mrw.formats import (
    FormatError,
    emit_mrs,
    emit_report,
    emit_script,
    gen_closure_rules,
    gen_horn_rules,
    parse_horn,
    parse_hom,
    parse_mrs,
    parse_script,
    parse_table,
    parse_topology,
    run_requests,
)
from mrw.irreducibles import check_mrs_hom, irreducible_elements, quotient_monoid
from mrw.tables import FiniteMonoid


def _bounds(args) -> Bounds:
    return Bounds(size_bound=args.bound, steps=args.steps)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e


def _write_or_print(args, text):
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _verdict_exit(*verdicts):
    if any(v.status is Status.REFUTED for v in verdicts):
        return 1
    if any(v.status is Status.UNKNOWN for v in verdicts):
        return 2
    return 0


def cmd_check(args):
    system = parse_mrs(_read(args.system))
    cert = certify(system, args.bound, _bounds(args))
    print(emit_report(
        [("noetherian", cert.noetherian), ("confluent", cert.confluent)],
        as_json=args.json,
    ))
    return _verdict_exit(cert.noetherian, cert.confluent)


def cmd_nf(args):
    system = parse_mrs(_read(args.system))
    a = system.backend.parse_element(args.element)
    result, trace = normal_form(system, a, args.steps, _bounds(args))
    fmt = system.backend.format_element
    if args.json:
        print(json.dumps({
            "normal_form": fmt(result),
            "steps": [fmt(s.after) for s in trace.steps],
        }))
    else:
        print(fmt(result))
        if args.trace:
            for s in trace.steps:
                print(f"  {fmt(s.before)} -> {fmt(s.after)}  (rule {s.rule_index})")
    return 0


def cmd_irr(args):
    system = parse_mrs(_read(args.system))
    irr = irreducible_elements(system, args.bound, _bounds(args))
    fmt = system.backend.format_element
    names = [fmt(x) for x in irr.elements]
    if args.json:
        print(json.dumps({
            "irreducible": names,
            "exhaustive": irr.exhaustive,
            "bound": irr.bound,
        }))
    else:
        scope = "exhaustive" if irr.exhaustive else f"up to size {irr.bound}"
        print(f"irreducible elements ({scope}):")
        for n in names:
            print(f"  {n}")
    return 0


def cmd_quotient(args):
    system = parse_mrs(_read(args.system))
    q = quotient_monoid(system)
    from mrw.formats import emit_table

    _write_or_print(args, emit_table(q.monoid))
    return 0


def cmd_present(args):
    from mrw.presentation import g_of_monoid

    table = parse_table(_read(args.table))
    gp = g_of_monoid(table)
    _write_or_print(args, emit_mrs(gp.system))
    return 0


def cmd_counit(args):
    from mrw.irreducibles import monoid_of_irreducibles
    from mrw.presentation import counit

    system = parse_mrs(_read(args.system))
    bounds = _bounds(args)
    irr = monoid_of_irreducibles(system, args.bound, bounds)
    gp, eps = counit(system, irr, bounds=bounds)
    word = gp.system.backend.parse_element(args.word)
    print(system.backend.format_element(eps(word)))
    return 0


def cmd_adjoint_check(args):
    from mrw.irreducibles import monoid_of_irreducibles
    from mrw.presentation import (
        check_hom_equivalence,
        check_triangles,
        check_unit_identity,
    )

    table = parse_table(_read(args.table))
    system = parse_mrs(_read(args.system))
    bounds = _bounds(args)
    entries = []
    ok = True

    unit = check_unit_identity(table, bounds)
    entries.append(("unit identity", unit))
    ok &= unit

    triangles = check_triangles(system, table, args.word_bound, bounds)
    entries.append(("triangle identities", triangles))
    ok &= triangles

    if system.backend.finite:
        rep = check_hom_equivalence(table, system, bounds)
        entries.append(("hom classes", rep.two_cell_classes))
        entries.append(("monoid homomorphisms", rep.monoid_homs))
        entries.append(("hom equivalence", rep.bijective))
        ok &= rep.bijective
    else:
        entries.append(("hom equivalence", "skipped (infinite carrier)"))

    print(emit_report(entries, as_json=args.json))
    return 0 if ok else 1


def cmd_gett(args):
    system = parse_mrs(_read(args.system))
    requests = parse_script(_read(args.script))
    run = run_requests(system, requests, _bounds(args))
    if args.gett_command == "apply":
        if not run.ok:
            print(f"move {run.failed_index}: {run.message}", file=sys.stderr)
            return run.status_code
        _write_or_print(args, emit_mrs(run.final))
        return 0
    # validate
    if args.json:
        print(json.dumps({
            "valid": run.ok,
            "failed_index": run.failed_index,
            "message": run.message,
        }))
    elif run.ok:
        print(f"valid: {len(requests)} moves replay")
    else:
        print(f"invalid at move {run.failed_index}: {run.message}")
    return run.status_code


def cmd_tietze(args):
    from mrw.tietze import tietze_path

    a_sys = parse_mrs(_read(args.source))
    b_sys = parse_mrs(_read(args.target))
    identify = None
    if args.identify:
        identify = {}
        for i, line in enumerate(_read(args.identify).splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if not line.startswith("map "):
                raise FormatError("identification lines look like 'map x -> y'", i)
            lhs, arrow, rhs = line[4:].partition("->")
            if not arrow:
                raise FormatError("identification lines look like 'map x -> y'", i)
            identify[lhs.strip()] = rhs.strip()
    path = tietze_path(a_sys, b_sys, _bounds(args), identify)
    text = emit_script(a_sys, path.script, _bounds(args))
    _write_or_print(args, text)
    counts = path.report.move_counts()
    print("; ".join(f"{k}: {v}" for k, v in counts.items()), file=sys.stderr)
    return 0


def cmd_gen(args):
    if args.gen_command == "closure-rules":
        spec = parse_topology(_read(args.spec))
        system = gen_closure_rules(spec)
    else:
        spec = parse_horn(_read(args.spec))
        system = gen_horn_rules(spec)
    _write_or_print(args, emit_mrs(system))
    return 0


def cmd_hom(args):
    source = parse_mrs(_read(args.source))
    target = parse_mrs(_read(args.target))
    hom = parse_hom(_read(args.hom), source, target)
    chk = check_mrs_hom(hom, _bounds(args))
    if args.json:
        print(json.dumps({"ok": chk.ok, "failure": chk.failure}))
    elif chk.ok is True:
        print("valid MRS-homomorphism")
    else:
        print(f"not verified: {chk.failure}")
    if chk.ok is True:
        return 0
    return 2 if chk.ok is None else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mrw",
        description="workbench for rewriting systems over arbitrary monoids",
    )
    parser.add_argument("--bound", type=int, default=8,
                        help="element size bound for enumeration (default 8)")
    parser.add_argument("--steps", type=int, default=500,
                        help="derivation step budget (default 500)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # top-level values when they are not repeated there
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS)
    common.add_argument("--steps", type=int, default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="termination and confluence verdicts")
    p.add_argument("system")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("nf", parents=[common], help="normal form of an element")
    p.add_argument("system")
    p.add_argument("element")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("irr", parents=[common],
                       help="irreducible elements up to the bound")
    p.add_argument("system")
    p.set_defaults(func=cmd_irr)

    p = sub.add_parser("quotient", parents=[common],
                       help="quotient monoid of a finite carrier")
    p.add_argument("system")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("present", parents=[common],
                       help="canonical presentation of a table monoid")
    p.add_argument("table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("counit", parents=[common],
                       help="evaluate a word of irreducibles")
    p.add_argument("system")
    p.add_argument("word")
    p.set_defaults(func=cmd_counit)

    p = sub.add_parser("adjoint-check", parents=[common],
                       help="unit, triangles, and hom equivalence report")
    p.add_argument("table")
    p.add_argument("system")
    p.add_argument("--word-bound", type=int, default=6)
    p.set_defaults(func=cmd_adjoint_check)

    p = sub.add_parser("gett", help="apply or validate a move script")
    gsub = p.add_subparsers(dest="gett_command", required=True)
    for name in ("apply", "validate"):
        g = gsub.add_parser(name, parents=[common])
        g.add_argument("system")
        g.add_argument("script")
        if name == "apply":
            g.add_argument("-o", "--output")
        g.set_defaults(func=cmd_gett)

    p = sub.add_parser("tietze", parents=[common],
                       help="script transforming one system into another")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--identify", help="file of 'map x -> y' lines")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tietze)

    p = sub.add_parser("gen", help="generate rule systems")
    gsub = p.add_subparsers(dest="gen_command", required=True)
    for name in ("closure-rules", "horn-rules"):
        g = gsub.add_parser(name, parents=[common])
        g.add_argument("spec")
        g.add_argument("-o", "--output")
        g.set_defaults(func=cmd_gen)

    p = sub.add_parser("hom", help="check a homomorphism file")
    hsub = p.add_subparsers(dest="hom_command", required=True)
    h = hsub.add_parser("check", parents=[common])
    h.add_argument("hom")
    h.add_argument("source")
    h.add_argument("target")
    h.set_defaults(func=cmd_hom)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except Refused as e:
        print(f"refused: {e}", file=sys.stderr)
        return 1
    except EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
