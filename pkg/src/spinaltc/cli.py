"""Command-line front end.

Exit codes: 0 ok, 1 usage or input error, 2 verification failure, 3 budget exceeded.
Every error is reported on stderr as a single line ``error: <code>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Iterable, Sequence

from . import codec, counting, enumeration, verify
from .enumeration import BudgetExceeded, EnumerationBudget
from .marked import MarkedTree
from .network import NetworkError, PhyloNetwork, canonical_form, isomorphic
from .words import (
    Word,
    WordError,
    canonicalize_tilde,
    format_word,
    parse_lrq,
    parse_word_text,
    transform_t_steps,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _one_line(text: str) -> str:
    return " ".join(str(text).split())


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _word_record(w: Word) -> dict:
    return {"n": w.n, "k": w.k, "word": format_word(w.letters)}


def _emit_words(ws: list[Word], fmt: str) -> str:
    if fmt == "word":
        return "".join(format_word(w.letters) + "\n" for w in ws)
    if fmt == "csv":
        return _csv(["index", "n", "k", "word"], ((i, w.n, w.k, format_word(w.letters)) for i, w in enumerate(ws)))
    if fmt == "json":
        return _dump_json([_word_record(w) for w in ws])
    raise CliError("usage", f"format {fmt!r} does not apply to words")


def _emit_networks(nets: list[PhyloNetwork], fmt: str) -> str:
    if fmt == "json":
        return _dump_json([net.to_dict() for net in nets])
    if fmt == "dot":
        return "".join(net.to_dot(f"N{i}") for i, net in enumerate(nets))
    raise CliError("usage", f"format {fmt!r} does not apply to networks; use json or dot")


def _marked_record(mt: MarkedTree) -> dict:
    rec = {
        "root": mt.root,
        "children": {str(v): list(cs) for v, cs in sorted(mt.children.items())},
        "r_labels": {str(v): i for v, i in sorted(mt.r_labels.items())},
    }
    if mt.leaf_labels is not None:
        rec["leaf_labels"] = {str(v): lab for v, lab in sorted(mt.leaf_labels.items())}
    return rec


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError("io", f"cannot read {path}: {exc.strerror}") from None


def _require_nk(args, need_k: bool = True) -> tuple[int, int]:
    if args.n is None or (need_k and args.k is None):
        raise CliError("usage", "both --n and --k are required")
    k = args.k if args.k is not None else 0
    if args.n < 0 or k < 0:
        raise CliError("usage", f"n and k must be non-negative (got n={args.n}, k={k})")
    return args.n, k


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_count(args) -> str:
    family = args.family_pos or args.family
    n = args.n_pos if args.n_pos is not None else args.n
    k = args.k_pos if args.k_pos is not None else args.k
    if family is None or n is None or k is None:
        raise CliError("usage", "count needs a family, n and k")
    if family not in counting.FAMILIES:
        raise CliError("usage", f"unknown family {family!r}; choose from {', '.join(counting.FAMILIES)}")
    try:
        value = counting.FAMILIES[family](n, k)
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None
    fmt = args.format or "csv"
    if fmt == "json":
        return _dump_json({"family": family, "n": n, "k": k, "value": int(value), "provenance": value.provenance})
    if fmt != "csv":
        raise CliError("usage", "count supports --format csv or json")
    return _csv(["family", "n", "k", "value", "provenance"], [(family, n, k, int(value), value.provenance)])


def cmd_table(args) -> str:
    family = args.family
    if family not in counting.FAMILIES:
        raise CliError("usage", f"unknown family {family!r}")
    max_n, max_k = _require_nk(args)
    rows = counting.count_table(family, max_n, max_k)
    fmt = args.format or "csv"
    if fmt == "csv":
        return counting.table_csv(rows)
    if fmt == "json":
        return _dump_json([{"n": n, "k": k, "value": int(v), "provenance": v.provenance} for n, k, v in rows])
    raise CliError("usage", "table supports --format csv or json")


ENUM_FAMILIES = ("c1", "c2", "bessel", "nlstc", "nlsctc", "stc", "marked", "marked-labeled")


def _enumerate(family: str, n: int, k: int):
    if family == "c1":
        return enumeration.enumerate_c1_classes(n, k)
    if family == "c2":
        return enumeration.enumerate_c2_classes(n, k)
    if family == "bessel":
        return enumeration.enumerate_pair_partitions(n, k)
    if family == "nlstc":
        return enumeration.enumerate_nlstc(n, k)
    if family == "nlsctc":
        return enumeration.enumerate_nlsctc(n, k)
    if family == "stc":
        return enumeration.enumerate_stc(n, k)
    if family in ("marked", "marked-labeled"):
        return enumeration.enumerate_marked_trees(n, k, labeled=family == "marked-labeled")
    raise CliError("usage", f"unknown family {family!r}; choose from {', '.join(ENUM_FAMILIES)}")


def cmd_enumerate(args, err) -> str:
    n, k = _require_nk(args)
    family = args.family
    try:
        stream = _enumerate(family, n, k)
        objs = []
        for obj in stream:
            objs.append(obj)
            if args.max_objects is not None and len(objs) > args.max_objects:
                raise BudgetExceeded(f"more than {args.max_objects} objects")
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None
    if args.dedup_report:
        distinct = len({_identity_key(o) for o in objs})
        err.write(f"generated={len(objs)} distinct={distinct}\n")
    if family in ("c1", "c2"):
        return _emit_words(objs, args.format or "word")
    if family == "bessel":
        fmt = args.format or "csv"
        rows = [(i, ";".join("-".join(map(str, pr)) for pr in p.sorted_pairs())) for i, p in enumerate(objs)]
        if fmt == "csv":
            return _csv(["index", "pairs"], rows)
        if fmt == "json":
            return _dump_json([[list(pr) for pr in p.sorted_pairs()] for p in objs])
        raise CliError("usage", "bessel supports --format csv or json")
    if family.startswith("marked"):
        if (args.format or "json") != "json":
            raise CliError("usage", "marked trees support --format json only")
        return _dump_json([_marked_record(mt) for mt in objs])
    return _emit_networks(objs, args.format or "json")


def _identity_key(obj):
    if isinstance(obj, PhyloNetwork):
        return canonical_form(obj)
    if isinstance(obj, MarkedTree):
        return obj.key()
    if isinstance(obj, Word):
        return obj.letters
    return tuple(sorted(tuple(sorted(pr)) for pr in obj.pairs))


def _load_network(args) -> PhyloNetwork:
    net = PhyloNetwork.from_json(_read_input(args.input))
    return net.unlabeled() if net.labeled else net


def _load_word(args) -> Word:
    if args.word is not None:
        return parse_word_text(args.word)
    if args.input is None:
        raise CliError("usage", "give --word or --input")
    return parse_word_text(_read_input(args.input))


def cmd_encode(args) -> str:
    if args.input is None:
        raise CliError("usage", "encode needs --input FILE (network JSON, '-' for stdin)")
    net = _load_network(args)
    cls = args.cls or "c1"
    w = codec.encode_nlstc(net) if cls == "c1" else codec.encode_nlsctc(net)
    if args.roundtrip:
        back = codec.decode_nlstc(w) if cls == "c1" else codec.decode_nlsctc(w)
        if not isomorphic(back, net):
            raise CliError("roundtrip", f"decoding {w} does not give back the input network", EXIT_VERIFY)
    return _emit_words([w], args.format or "word")


def cmd_decode(args) -> str:
    w = _load_word(args)
    cls = args.cls or "c1"
    net = codec.decode_nlstc(w) if cls == "c1" else codec.decode_nlsctc(w)
    if args.roundtrip:
        back = codec.encode_nlstc(net) if cls == "c1" else codec.encode_nlsctc(net)
        if back != canonicalize_tilde(w, cls):
            raise CliError("roundtrip", f"re-encoding gives {back}, expected the class of {w}", EXIT_VERIFY)
    if (args.format or "json") == "json":
        return _dump_json(net.to_dict())
    return net.to_dot()


def cmd_transform(args) -> str:
    text = args.lrq if args.lrq is not None else (_read_input(args.input) if args.input else None)
    if text is None:
        raise CliError("usage", "give --lrq TEXT or --input FILE")
    u = parse_lrq(text)
    w1, w2, w3, final = transform_t_steps(u)
    if args.roundtrip:
        back = codec.lrq_encode(codec.decode_nlstc(final))
        if back.tokens != u.tokens:
            raise CliError("roundtrip", f"decoded network reads back as {back}", EXIT_VERIFY)
    fmt = args.format or "word"
    if fmt == "json":
        rec = _word_record(final)
        if args.steps:
            rec["steps"] = [" ".join(str(a) for a in w1), format_word(w2), format_word(w3)]
        return _dump_json(rec)
    if fmt != "word":
        raise CliError("usage", "transform supports --format word or json")
    out = ""
    if args.steps:
        out += f"w1: {' '.join(str(a) for a in w1)}\nw2: {format_word(w2)}\nw3: {format_word(w3)}\n"
    return out + format_word(final.letters) + "\n"


def cmd_verify(args, out) -> int:
    only = [name for chunk in (args.only or []) for name in chunk.split(",") if name]
    try:
        results = verify.run_matrix(only or None, args.budget_seconds, args.max_objects or 10 ** 7)
    except KeyError as exc:
        raise CliError("usage", f"{exc.args[0]}; known: {', '.join(verify.IDENTITY_NAMES)}") from None
    fmt = args.format or "csv"
    if fmt == "csv":
        out.write(_csv(["identity", "n", "k", "status", "detail"],
                       ((r.identity, r.n, r.k, r.status, r.detail) for r in results)))
    elif fmt == "json":
        out.write(_dump_json([r.__dict__ for r in results]))
    else:
        raise CliError("usage", "verify supports --format csv or json")
    statuses = {r.status for r in results}
    if "fail" in statuses:
        return EXIT_VERIFY
    if "skip" in statuses:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_oracle(args) -> str:
    n, k = _require_nk(args)
    budget = EnumerationBudget(
        max_n=args.n, max_k=args.k,
        max_objects=args.max_objects or 10 ** 7,
        time_limit=args.budget_seconds,
    )
    if args.caterpillar:
        result = enumeration.caterpillar_oracle(n, k, budget=budget)
    else:
        result = enumeration.brute_force_oracle(n, k, labeled=args.labeled, budget=budget)
    fmt = args.format or "csv"
    if fmt == "csv":
        return _csv(["n", "k", "count", "provenance"], [(n, k, int(result.count), result.count.provenance)])
    return _emit_networks(result.networks, fmt)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinaltc", description="Count, enumerate and encode spinal tree-child networks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats):
        sp.add_argument("--n", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--format", choices=formats)

    sp = sub.add_parser("count", help="exact count for one (family, n, k)")
    sp.add_argument("family_pos", nargs="?", metavar="family")
    sp.add_argument("n_pos", nargs="?", type=int, metavar="n")
    sp.add_argument("k_pos", nargs="?", type=int, metavar="k")
    sp.add_argument("--family")
    common(sp, ["csv", "json"])

    sp = sub.add_parser("table", help="rectangular table of counts for n <= --n, k <= --k")
    sp.add_argument("--family", required=True)
    common(sp, ["csv", "json"])

    sp = sub.add_parser("enumerate", help="list every object of a family")
    sp.add_argument("--family", required=True, choices=ENUM_FAMILIES)
    sp.add_argument("--max-objects", type=int)
    sp.add_argument("--dedup-report", action="store_true", help="report generated vs distinct counts on stderr")
    common(sp, ["json", "csv", "dot", "word"])

    for name, helptext in (("encode", "network JSON -> word"), ("decode", "word -> network JSON")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--input", help="file to read, '-' for stdin")
        sp.add_argument("--class", dest="cls", choices=["c1", "c2"])
        sp.add_argument("--roundtrip", action="store_true", help="re-encode the output and compare")
        if name == "decode":
            sp.add_argument("--word", help="word given inline, e.g. '3,1,2,1,1,2,2,4,3,4'")
            sp.add_argument("--format", choices=["json", "dot"])
        else:
            sp.add_argument("--format", choices=["word", "json", "csv"])

    sp = sub.add_parser("transform", help="LRQ spine reading -> word of C1")
    sp.add_argument("--lrq", help="tokens such as 'L R1 L R2 L Q1 Q2 L'")
    sp.add_argument("--input")
    sp.add_argument("--steps", action="store_true", help="also print the intermediate words")
    sp.add_argument("--roundtrip", action="store_true")
    sp.add_argument("--format", choices=["word", "json"])

    sp = sub.add_parser("verify", help="run the identity matrix")
    sp.add_argument("--only", action="append", help=f"identity names: {', '.join(verify.IDENTITY_NAMES)}")
    sp.add_argument("--budget-seconds", type=float, default=600.0)
    sp.add_argument("--max-objects", type=int)
    sp.add_argument("--format", choices=["csv", "json"])

    sp = sub.add_parser("oracle", help="brute-force count (and listing) of spinal networks")
    sp.add_argument("--labeled", action="store_true")
    sp.add_argument("--caterpillar", action="store_true")
    sp.add_argument("--budget-seconds", type=float, default=300.0)
    sp.add_argument("--max-objects", type=int)
    common(sp, ["csv", "json", "dot"])
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "enumerate":
            text = cmd_enumerate(args, err)
        else:
            text = {
                "count": cmd_count,
                "table": cmd_table,
                "encode": cmd_encode,
                "decode": cmd_decode,
                "transform": cmd_transform,
                "oracle": cmd_oracle,
            }[args.command](args)
        out.write(text)
        return EXIT_OK
    except CliError as exc:
        err.write(f"error: {exc.code}: {_one_line(exc)}\n")
        return exc.exit_code
    except BudgetExceeded as exc:
        err.write(f"error: budget: {_one_line(exc)}\n")
        return EXIT_BUDGET
    except WordError as exc:
        err.write(f"error: word: {_one_line(exc)}\n")
        return EXIT_USAGE
    except NetworkError as exc:
        err.write(f"error: network: {_one_line(exc)}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
