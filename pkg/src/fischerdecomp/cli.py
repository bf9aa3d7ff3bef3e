"""Command line front end.

Exit codes: 0 success (direct / pass / match), 1 semantic negative (collapse
witness, violated condition, mismatch, not in span), 2 input error, 3 resource
cap exceeded, 70 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import fischer, harmonics, repcomb, verma, weyl
from .errors import ParseError, ResourceCapExceeded
from .ratpoly import DEFAULT_CAP, format_rational, parse, render

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 70

CAP_ENV = "FISCHERDECOMP_CAP"


class InputError(Exception):
    pass


def _default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"{CAP_ENV} must be positive")
    return cap


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _partition_arg(text: str) -> tuple[int, ...]:
    try:
        return repcomb.parse_partition(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fischerdecomp",
        description="Exact harmonic decomposition of polynomials in several vector variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=_positive, required=True, help="number of vector variables")
    common.add_argument("--m", type=_positive, required=True, help="dimension of each vector variable")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--cap", type=_positive, default=None,
                        help=f"largest monomial space allowed (default ${CAP_ENV} or {DEFAULT_CAP})")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    p = sub.add_parser("decompose", parents=[common], help="decompose a polynomial into r^2n * harmonics")
    src = p.add_mutually_exclusive_group()
    src.add_argument("-e", "--expr", help="polynomial text")
    src.add_argument("-f", "--file", help="file holding polynomial text ('-' for stdin)")

    p = sub.add_parser("directness", parents=[common], help="rank analysis of the decomposition")
    p.add_argument("--degree", type=_nonneg, required=True, help="total degree bound")

    p = sub.add_parser("verma", parents=[common], help="irreducibility conditions for a partition")
    p.add_argument("--partition", type=_partition_arg, required=True)
    p.add_argument("--detect", action="store_true", help="also compare graded dimensions")
    p.add_argument("--depth", type=_nonneg, default=2, help="depth bound for --detect")

    p = sub.add_parser("relations", parents=[common], help="check closure of the invariant operators")
    p.add_argument("-e", "--expr", help="operator expression, e.g. '[D12,R12]'")

    p = sub.add_parser("harmonics", parents=[common], help="basis of harmonics of a multidegree")
    p.add_argument("--multidegree", type=_int_list, required=True)

    p = sub.add_parser("simplicial", parents=[common], help="basis of simplicial harmonics")
    p.add_argument("--partition", type=_partition_arg, required=True)

    p = sub.add_parser("isotypic", parents=[common], help="check the harmonic dimension identity")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--degree", type=_nonneg, help="scan all multidegrees up to this total degree")
    g.add_argument("--multidegree", type=_int_list)
    return parser


# -- output helpers -----------------------------------------------------------


def _emit_json(obj, out) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def _emit_csv(header, rows, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def _fmt_tuple(t) -> str:
    return ",".join(str(x) for x in t)


def _read_polynomial_text(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.file is not None and args.file != "-":
        try:
            with open(args.file, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    return sys.stdin.read()


# -- commands -----------------------------------------------------------------


def cmd_decompose(args, out, err) -> int:
    k, m = args.k, args.m
    p = parse(_read_polynomial_text(args), k, m)
    comps = fischer.fischer_decompose(p, args.cap)
    residual = p - fischer.reassemble(comps, k, m)
    if residual:
        raise RuntimeError(f"decomposition does not reassemble; residual {render(residual)}")
    bad = [c for c in comps if any(weyl.apply(op, c.harmonic) for op in harmonics.laplacians(k, m))]
    if bad:
        raise RuntimeError("decomposition produced a non-harmonic component")

    if not verma.semistable(m, k):
        err.write(f"warning: m={m} < 2k-1={2 * k - 1}; the decomposition need not be unique\n")
        if not fischer.is_unique_decomposition(p, args.cap):
            err.write("warning: non-unique: the sum is not direct at a multidegree of the input; "
                      "this is one representative\n")

    if args.format == "json":
        _emit_json([c.to_dict() for c in comps], out)
    elif args.format == "csv":
        header = [f"n{i}{j}" for i, j in fischer.pairs(k)] + ["harmonic"]
        _emit_csv(header, [list(c.n.entries) + [render(c.harmonic)] for c in comps], out)
    else:
        if not comps:
            out.write("0 (no components)\n")
        for c in comps:
            out.write(f"{c.n.label():>16}  *  {render(c.harmonic)}\n")
    return EXIT_OK


def _witness_text(record, w) -> str:
    pieces = []
    for c, f in zip(w, record.family):
        if c:
            pieces.append(f"({format_rational(c)})*{f.n.label()}*[{render(f.harmonic)}]")
    return " + ".join(pieces) + " = 0"


def cmd_directness(args, out, err) -> int:
    report = fischer.directness_report(args.k, args.m, args.degree, args.cap, args.jobs)
    if args.format == "json":
        _emit_json(report.to_dict(), out)
    elif args.format == "csv":
        rows = [[_fmt_tuple(r.multidegree), r.assembled_dim, r.ambient_dim, r.rank, len(r.witnesses)]
                for r in report.records]
        _emit_csv(["multidegree", "assembled_dim", "ambient_dim", "rank", "witnesses"], rows, out)
    else:
        out.write(f"k={args.k} m={args.m} degree<={args.degree}\n")
        out.write(f"{'multidegree':>12} {'family':>7} {'ambient':>8} {'rank':>5}  witnesses\n")
        for r in report.records:
            out.write(f"{_fmt_tuple(r.multidegree):>12} {r.assembled_dim:>7} {r.ambient_dim:>8} "
                      f"{r.rank:>5}  {len(r.witnesses)}\n")
        for r in report.collapses():
            for w in r.witnesses:
                out.write(f"collapse at {_fmt_tuple(r.multidegree)}: {_witness_text(r, w)}\n")
        out.write("direct\n" if report.direct else "not direct\n")
    return EXIT_OK if report.direct else EXIT_NEGATIVE


def cmd_verma(args, out, err) -> int:
    k, m, a = args.k, args.m, args.partition
    if len(a) > k:
        raise InputError(f"partition {_fmt_tuple(a)} has more than k={k} parts")
    report = verma.check_partition(a, m, k)
    detect = verma.collapse_detect(a, m, k, args.depth, args.cap) if args.detect else None
    if args.format == "json":
        obj = report.to_dict()
        obj["partition"] = list(repcomb.pad(a, k))
        obj["semistable"] = verma.semistable(m, k)
        if detect is not None:
            obj["collapse"] = [r.to_dict() for r in detect]
        _emit_json(obj, out)
    elif args.format == "csv":
        rows = [[c.kind, _fmt_tuple(c.indices), format_rational(c.value), c.violated]
                for c in report.pair_conditions + report.index_conditions]
        _emit_csv(["condition", "indices", "value", "violated"], rows, out)
        if detect is not None:
            _emit_csv(["g", "free_dim", "realized_dim", "collapsed"],
                      [[r.g, r.free_dim, r.realized_dim, r.collapsed] for r in detect], out)
    else:
        out.write(f"weight: ({', '.join(format_rational(x) for x in report.weight)})\n")
        for c in report.pair_conditions + report.index_conditions:
            flag = "VIOLATED" if c.violated else "ok"
            kind = "pair" if c.kind == "1" else "index"
            out.write(f"  {kind:<5} {_fmt_tuple(c.indices):>5}: {format_rational(c.value):>6}  {flag}\n")
        out.write("pass\n" if report.irreducible_sufficient else "violation\n")
        if detect is not None:
            if not detect:
                out.write("no simplicial harmonics with this label\n")
            for r in detect:
                out.write(f"  g={r.g}: free {r.free_dim}, realized {r.realized_dim}"
                          f"{'  COLLAPSE' if r.collapsed else ''}\n")
    return EXIT_OK if report.irreducible_sufficient else EXIT_NEGATIVE


def cmd_relations(args, out, err) -> int:
    k, m = args.k, args.m
    ops = weyl.sp_spanning_set(k, m)
    names = list(ops)
    if args.expr is not None:
        w = weyl.parse_operator(args.expr, k, m)
        coeffs = weyl.span_membership(w, list(ops.values()))
        combo = None
        if coeffs is not None:
            combo = {n: format_rational(c) for n, c in zip(names, coeffs) if c}
        if args.format == "json":
            _emit_json({"expression": args.expr, "normal_form": weyl.render(w), "in_span": coeffs is not None,
                        "coefficients": combo}, out)
        else:
            out.write(f"{args.expr} = {weyl.render(w)}\n")
            if combo is None:
                out.write("not in span\n")
            else:
                text = " + ".join(f"({c})*{n}" for n, c in combo.items()) or "0"
                out.write(f"= {text}\n")
        return EXIT_OK if coeffs is not None else EXIT_NEGATIVE

    basis = list(ops.values())
    failures = []
    for x in range(len(names)):
        for y in range(x + 1, len(names)):
            c = weyl.commutator(basis[x], basis[y])
            if weyl.span_membership(c, basis) is None:
                failures.append(f"[{names[x]},{names[y]}]")
    gl = weyl.gl_spanning_set(k, m)
    gl_fail = []
    gl_names = list(gl)
    gl_ops = list(gl.values())
    for x in range(len(gl_ops)):
        for y in range(x + 1, len(gl_ops)):
            if weyl.span_membership(weyl.commutator(gl_ops[x], gl_ops[y]), gl_ops) is None:
                gl_fail.append(f"[{gl_names[x]},{gl_names[y]}]")
    span_dim = weyl.span_dimension(basis)
    gl_dim = weyl.span_dimension(gl_ops)
    ok = not failures and not gl_fail and span_dim == k * (2 * k + 1) and gl_dim == k * k
    result = {
        "k": k, "m": m,
        "span_dim": span_dim, "expected_span_dim": k * (2 * k + 1),
        "gl_dim": gl_dim, "expected_gl_dim": k * k,
        "closed": not failures, "gl_closed": not gl_fail,
        "failures": failures + gl_fail,
    }
    if args.format == "json":
        _emit_json(result, out)
    elif args.format == "csv":
        _emit_csv(list(result)[:-1], [[result[key] for key in list(result)[:-1]]], out)
    else:
        out.write(f"spanning set: {' '.join(names)}\n")
        out.write(f"span dimension {span_dim} (expected {k * (2 * k + 1)}), "
                  f"gl dimension {gl_dim} (expected {k * k})\n")
        out.write("closed under commutators\n" if ok else f"NOT closed: {' '.join(failures + gl_fail)}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _basis_output(fmt, key, label, basis, out):
    if fmt == "json":
        _emit_json({key: list(label), "dimension": len(basis), "basis": [render(b) for b in basis]}, out)
    elif fmt == "csv":
        _emit_csv(["index", "polynomial"], [[i, render(b)] for i, b in enumerate(basis)], out)
    else:
        out.write(f"{key} {_fmt_tuple(label)}: dimension {len(basis)}\n")
        for b in basis:
            out.write(f"  {render(b)}\n")


def cmd_harmonics(args, out, err) -> int:
    d = args.multidegree
    if len(d) != args.k or any(x < 0 for x in d):
        raise InputError(f"multidegree must have {args.k} non-negative entries")
    hb = harmonics.harmonic_basis(args.k, args.m, d, args.cap)
    _basis_output(args.format, "multidegree", d, hb.basis, out)
    return EXIT_OK


def cmd_simplicial(args, out, err) -> int:
    a = args.partition
    if len(a) > args.k:
        raise InputError(f"partition {_fmt_tuple(a)} has more than k={args.k} parts")
    sb = harmonics.simplicial_basis(args.k, args.m, a, args.cap)
    _basis_output(args.format, "partition", repcomb.pad(a, args.k), sb.basis, out)
    return EXIT_OK


def cmd_isotypic(args, out, err) -> int:
    k, m = args.k, args.m
    if args.multidegree is not None:
        d = args.multidegree
        if len(d) != k or any(x < 0 for x in d):
            raise InputError(f"multidegree must have {k} non-negative entries")
        records = [harmonics.isotypic_dimension_check(k, m, d, args.cap)]
    else:
        records = harmonics.isotypic_scan(k, m, args.degree, args.cap, args.jobs)
    ok = all(r.match for r in records)
    if args.format == "json":
        _emit_json([{"multidegree": list(r.multidegree), "lhs": r.lhs, "rhs": r.rhs, "match": r.match,
                     "terms": [{"partition": list(a), "simplicial_dim": s, "kostka": K} for a, s, K in r.terms]}
                    for r in records], out)
    elif args.format == "csv":
        _emit_csv(["multidegree", "lhs", "rhs", "match"],
                  [[_fmt_tuple(r.multidegree), r.lhs, r.rhs, r.match] for r in records], out)
    else:
        out.write(f"{'multidegree':>12} {'lhs':>6} {'rhs':>6}  match\n")
        for r in records:
            out.write(f"{_fmt_tuple(r.multidegree):>12} {r.lhs:>6} {r.rhs:>6}  {'yes' if r.match else 'NO'}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


COMMANDS = {
    "decompose": cmd_decompose,
    "directness": cmd_directness,
    "verma": cmd_verma,
    "relations": cmd_relations,
    "harmonics": cmd_harmonics,
    "simplicial": cmd_simplicial,
    "isotypic": cmd_isotypic,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.cap is None:
            args.cap = _default_cap()
        return COMMANDS[args.command](args, out, err)
    except (ParseError, InputError, ValueError, IndexError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ResourceCapExceeded as exc:
        err.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    except Exception as exc:  # a bug, not a user error
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
