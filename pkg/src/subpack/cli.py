"""Command-line front end.

    subpack rs    build|encode|repair|audit      -s S -m M -n N -k K [-q Q] ...
    subpack array build|encode|repair|mds-check|update-check|audit -q Q ...
    subpack bounds [--set s,m,n,k ...] [--measure]

Reports go to stdout (or --out); errors are JSON records on stderr with exit 2.
"""

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import arraycode as ac
from . import rs
from .audit import array_audit, bounds_row, rs_audit, rs_cost_estimate
from .digits import CodeParams
from .errors import SubpackError
from .gf import PrimeField, is_prime
from .serialize import (CSV_COLUMNS, array_codeword_doc, array_responses_from_doc,
                        array_transcript_doc, array_word_from_doc, bytes_to_digits, dumps,
                        plain, provenance, report_doc, rs_codeword_doc, rs_transcript_doc,
                        rs_transcript_from_doc, rs_word_from_doc)

SLOW_L = 1024


class UsageError(SubpackError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- formatting -------------------------------------------------------------

def _fmt(v):
    if v is None:
        return "n/a"
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return "%d/%d (%.4f)" % (v.numerator, v.denominator, float(v))
    if isinstance(v, float):
        return "%.4f" % v
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _text_lines(doc, prefix=""):
    lines = []
    for key, v in doc.items():
        if key in ("provenance", "checks", "nodes", "reference", "records", "responses"):
            continue
        if key == "notes":
            lines.extend("note: %s" % x for x in v)
        elif isinstance(v, dict):
            lines.extend(_text_lines(v, prefix + key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            continue
        else:
            lines.append("%s%s: %s" % (prefix, key, _fmt(v) if not isinstance(v, list)
                                        else ", ".join(_fmt(x) for x in v)))
    return lines


def _node_table(nodes):
    out = ["node  bandwidth  passed"]
    for r in nodes:
        out.append("%4d  %9d  %s" % (r["node"], r["bandwidth"], _fmt(r["passed"])))
    return out


def _row_table(rows):
    out = []
    for r in rows:
        shape = "(%s,%s,%s,%s) l=%s" % tuple(r.get(k) for k in ("s", "m", "n", "k", "l"))
        fields = ", ".join("%s=%s" % (k, _fmt(r.get(k))) for k in CSV_COLUMNS[6:])
        out.append("%-6s %s: %s" % (r.get("construction"), shape, fields))
    return out


def _csv_rows(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: plain(row.get(k)) for k in CSV_COLUMNS})
    return buf.getvalue()


def _csv_from_summary(doc):
    s, p = doc["summary"], doc["provenance"]["params"]
    row = dict(s)
    row.update({k: p[k] for k in ("s", "m", "n", "k", "l")})
    row["measured_max_bandwidth"] = s["max_bandwidth"]
    return _csv_rows([row])


def render(doc, fmt):
    if fmt == "json":
        return dumps(doc)
    if fmt == "csv":
        if "summary" in doc:
            return _csv_from_summary(doc)
        if "rows" in doc:
            return _csv_rows(doc["rows"])
        return _csv_rows([])
    lines = ["%s (subpack %s)" % (doc.get("kind", "report"), __version__)]
    lines.extend(_text_lines(doc))
    if doc.get("nodes") and isinstance(doc["nodes"][0], dict) and "bandwidth" in doc["nodes"][0]:
        lines.extend(_node_table(doc["nodes"]))
    if doc.get("rows"):
        lines.extend(_row_table(doc["rows"]))
    return "\n".join(lines) + "\n"


def emit(args, doc):
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_json(path, doc):
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


# --- shared argument handling -------------------------------------------------

def _params(args):
    if args.s is None or args.m is None or args.n is None or args.k is None:
        raise UsageError("-s, -m, -n and -k are required")
    if args.k >= args.n:
        raise UsageError("k must be smaller than n (got n=%d, k=%d)" % (args.n, args.k))
    return CodeParams(args.s, args.m, args.n, args.k)


def _common(p):
    p.add_argument("-s", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out")


# --- rs -----------------------------------------------------------------------

def _rs_code(args):
    p = _params(args)
    q = args.q or 2
    if not is_prime(q):
        raise UsageError("q must be prime (got %d)" % q)
    return rs.build_rs_code(p, PrimeField(q), seed=args.seed, cap=args.cap)


def _rs_message(code, args):
    if getattr(args, "input", None):
        with open(args.input, "rb") as fh:
            data = fh.read()
        l, q = code.params.l, code.F.q
        digits = bytes_to_digits(data, q, code.params.k * l)
        msg = [code.E.from_coeffs(digits[t * l:(t + 1) * l]) for t in range(code.params.k)]
        return msg, len(data)
    return rs.random_message(code, random.Random(args.message_seed)), None


def _rs_word(code, args):
    if getattr(args, "codeword", None):
        return rs_word_from_doc(code, _read_json(args.codeword))
    msg, _ = _rs_message(code, args)
    return rs.rs_encode(code, msg)


def cmd_rs(args):
    if args.action == "audit":
        p = _params(args)
        est = rs_cost_estimate(p)
        if p.l >= SLOW_L and not args.slow:
            raise UsageError("l = %d audit needs --slow (estimated %.0f s)" % (p.l, est))
        if p.l >= SLOW_L:
            sys.stderr.write("estimated audit time: %.0f s\n" % est)
    code = _rs_code(args)
    p = code.params
    if args.action == "build":
        body = {"points": [code.E.coeffs(x) for x in code.points],
                "exact_power": p.exact_power}
        return report_doc("rs-build", code, body)
    if args.action == "encode":
        msg, nbytes = _rs_message(code, args)
        return rs_codeword_doc(code, rs.rs_encode(code, msg), nbytes)
    if args.action == "repair":
        if args.fail is None or not 0 <= args.fail < p.n:
            raise UsageError("--fail must name a node in [0, %d]" % (p.n - 1))
        word = _rs_word(code, args)
        scheme = rs.build_repair_scheme(code, args.fail)
        if args.transcript:
            transcript = rs_transcript_from_doc(code, _read_json(args.transcript))
        else:
            transcript = rs.make_transcript(code, scheme, word)
        if args.transcript_out:
            _write_json(args.transcript_out, rs_transcript_doc(code, transcript))
        value = rs.rs_repair_node(code, scheme, transcript)
        body = {"failed": args.fail, "bandwidth": transcript.total_symbols,
                "repaired_equals_original": value == word[args.fail],
                "repaired": code.E.coeffs(value)}
        return report_doc("rs-repair", code, body)
    if args.action == "audit":
        return report_doc("rs-audit", None, _strip_kind(rs_audit(code)), provenance(code))
    raise UsageError("unknown rs action %r" % args.action)


def _strip_kind(doc):
    return {k: v for k, v in doc.items() if k not in ("kind", "provenance")}


# --- array --------------------------------------------------------------------

def _array_code(args):
    p = _params(args)
    if args.q is None:
        raise UsageError("array code needs -q")
    return ac.build_array_code(p, args.q, seed=args.seed, shuffle=args.shuffle)


def _array_systematic(code, args):
    p = code.params
    if getattr(args, "input", None):
        with open(args.input, "rb") as fh:
            data = fh.read()
        digits = bytes_to_digits(data, code.q, p.k * p.l)
        return np.array(digits, dtype=np.int64).reshape(p.k, p.l), len(data)
    return ac.random_systematic(code, np.random.default_rng(args.message_seed)), None


def _array_word(code, args):
    if getattr(args, "codeword", None):
        return array_word_from_doc(code, _read_json(args.codeword))
    sys_arr, _ = _array_systematic(code, args)
    return ac.array_encode(code, sys_arr)


def cmd_array(args):
    code = _array_code(args)
    p = code.params
    if args.action == "build":
        return report_doc("array-build", code, {"exact_power": p.exact_power})
    if args.action == "encode":
        sys_arr, nbytes = _array_systematic(code, args)
        return array_codeword_doc(code, ac.array_encode(code, sys_arr), nbytes)
    if args.action == "repair":
        if args.fail is None or not 0 <= args.fail < p.n:
            raise UsageError("--fail must name a node in [0, %d]" % (p.n - 1))
        word = _array_word(code, args)
        plan = ac.build_repair_plan(code, args.fail, weak=args.weak)
        if args.transcript:
            responses = array_responses_from_doc(code, plan, _read_json(args.transcript))
        else:
            responses = ac.collect_responses(code, word, plan)
        if args.transcript_out:
            _write_json(args.transcript_out, array_transcript_doc(code, plan, responses))
        repaired = ac.array_repair_node(code, plan, responses)
        body = {"failed": args.fail, "mode": plan.mode, "bandwidth": plan.bandwidth,
                "per_group": plan.per_group,
                "repaired_equals_original": bool(np.array_equal(repaired, word[args.fail]))}
        return report_doc("array-repair", code, body)
    if args.action == "mds-check":
        rng = np.random.default_rng(args.message_seed)
        words = [ac.array_encode(code, ac.random_systematic(code, rng)) for _ in range(args.words)]
        passed, total = ac.mds_check(code, words)
        return report_doc("array-mds-check", code, {"subsets_passed": passed, "subsets": total,
                                                    "words": args.words, "passed": passed == total})
    if args.action == "update-check":
        rng = np.random.default_rng(args.message_seed)
        positions = [(int(rng.integers(0, p.k)), int(rng.integers(0, p.l)))
                     for _ in range(args.positions)]
        counts, local = ac.update_check(code, positions, rng)
        changed = sorted(set(counts))
        return report_doc("array-update-check", code, {
            "positions": len(positions), "r": p.r,
            "changed_symbols_per_update": changed[0] if len(changed) == 1 else changed,
            "changes_stay_at_coordinate": local,
            "passed": local and changed == [p.r]})
    if args.action == "audit":
        return report_doc("array-audit", None, _strip_kind(array_audit(code)), provenance(code))
    raise UsageError("unknown array action %r" % args.action)


# --- bounds -------------------------------------------------------------------

def _next_prime(x):
    while not is_prime(x):
        x += 1
    return x


def _parse_set(text):
    try:
        s, m, n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--set expects s,m,n,k (got %r)" % text)
    return CodeParams(s, m, n, k)


def cmd_bounds(args):
    sets = [_parse_set(t) for t in args.set] if args.set else [_params(args)]
    out_rows, detail = [], []
    for p in sets:
        q_arr = args.q or _next_prime(p.group * p.n)
        row = bounds_row(p, 2, q_arr)
        rs_name = "weak_bound" if p.exact_power else "group_weak_bound"
        measured = {}
        if args.measure:
            if p.l < SLOW_L or args.slow:
                a = rs_audit(rs.build_rs_code(p, seed=args.seed, cap=max(p.l, rs.DEFAULT_CAP)))
                measured["rs"] = a["summary"]["max_bandwidth"]
            measured["array"] = array_audit(ac.build_array_code(p, q_arr))["summary"]["max_bandwidth"]
            row["measured"] = measured
        detail.append(row)
        for cons, bound, gw in (("rs", row["rs"][rs_name], row["rs"]["gw"]),
                                ("array", row["array"]["bound_strong"], row["array"]["gw"])):
            m = measured.get(cons)
            out_rows.append({"construction": cons, "s": p.s, "m": p.m, "n": p.n, "k": p.k,
                             "l": p.l, "measured_max_bandwidth": m, "bound": bound,
                             "cutset": row["rs"]["cutset"], "gw": gw,
                             "meets_bound": None if m is None else m <= bound})
    return {"kind": "bounds", "provenance": {"version": __version__, "seed": args.seed},
            "rows": out_rows, "detail": detail}


# --- entry point ----------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="subpack", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    prs = sub.add_parser("rs", help="Reed-Solomon code with trace repair")
    prs.add_argument("action", choices=("build", "encode", "repair", "audit"))
    _common(prs)
    prs.add_argument("-q", type=int, default=2, help="base field size (prime)")
    prs.add_argument("--cap", type=int, default=rs.DEFAULT_CAP, help="largest l to build")
    prs.add_argument("--message-seed", type=int, default=0)
    prs.add_argument("--in", dest="input", help="file to encode into one stripe")
    prs.add_argument("--codeword", help="codeword file to repair from")
    prs.add_argument("--fail", type=int)
    prs.add_argument("--transcript", help="helper responses to repair from")
    prs.add_argument("--transcript-out", help="write the helper responses here")
    prs.add_argument("--slow", action="store_true", help="allow audits with l >= 1024")
    prs.set_defaults(func=cmd_rs)

    par = sub.add_parser("array", help="optimal-update MDS array code")
    par.add_argument("action", choices=("build", "encode", "repair", "mds-check",
                                        "update-check", "audit"))
    _common(par)
    par.add_argument("-q", type=int)
    par.add_argument("--shuffle", action="store_true", help="seeded random lambda table")
    par.add_argument("--message-seed", type=int, default=0)
    par.add_argument("--in", dest="input")
    par.add_argument("--codeword")
    par.add_argument("--fail", type=int)
    par.add_argument("--weak", action="store_true", help="near helpers send every coordinate")
    par.add_argument("--transcript")
    par.add_argument("--transcript-out")
    par.add_argument("--words", type=int, default=20)
    par.add_argument("--positions", type=int, default=1000)
    par.add_argument("--slow", action="store_true")
    par.set_defaults(func=cmd_array)

    pb = sub.add_parser("bounds", help="closed-form bound table")
    _common(pb)
    pb.add_argument("-q", type=int, help="array field size (default: smallest prime >= s^m n)")
    pb.add_argument("--set", action="append", help="s,m,n,k (repeatable)")
    pb.add_argument("--measure", action="store_true", help="also run audits")
    pb.add_argument("--slow", action="store_true")
    pb.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: rs, array or bounds")
        doc = args.func(args)
        emit(args, doc)
    except SubpackError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}, sort_keys=True) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io", "message": str(exc)}, sort_keys=True) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
