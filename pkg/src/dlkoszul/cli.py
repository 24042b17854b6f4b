"""Command-line front end.

Every verb prints a table: tab-separated with a header row by default, or a
JSON object ``{"schema": "1", "verb": ..., "columns": [...], "rows": [...]}``.
Exit status is 0 on success, 2 when a check or validation fails and 1 on
usage errors.

Modules come from a record file (``--input``) or a short spec (``--module``):
``sphere:D``, ``fdual:N``, ``R:<spec>`` (free DL object, needs
``--max-length``) and ``triv:<spec>``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import records
from .destab import connectivity_certificate, h0r_dual_steenrod, h0r_unstable
from .dyerlashof import QModule, dl_adem_reduce, format_upper, normal_form, singer_free, triv
from .fpmodule import FpModule, build_F_dual, sphere
from .koszul import compare_homologies, lderq
from .loops import deloop_ss, loops
from .seqcomb import admissible_basis, free_unstable_basis
from .specseq import ss_dual_steenrod, ss_desusp2
from .steenrod import adem_reduce, format_element
from .steinberg import lowest_degree, steinberg_dim_check

SCHEMA = "1"


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, message: str, table=None):
        super().__init__(message)
        self.table = table


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


# -- module specs -------------------------------------------------------------------

def parse_spec(spec: str, cutoff: int, max_length: int | None) -> FpModule:
    head, _, rest = spec.partition(":")
    try:
        if head == "sphere":
            d = int(rest)
            return sphere(d, cutoff)
        if head == "fdual":
            return build_F_dual(int(rest), cutoff)
        if head == "R":
            if max_length is None:
                raise UsageError("R:<spec> needs --max-length")
            return singer_free(parse_spec(rest, cutoff, max_length), max_length, cutoff)
        if head == "triv":
            return triv(parse_spec(rest, cutoff, max_length))
    except ValueError as exc:
        raise UsageError(f"bad module spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown module spec {spec!r}")


def _module(args, cutoff: int | None = None) -> FpModule:
    if bool(args.input) == bool(args.module):
        raise UsageError("give exactly one of --input and --module")
    if args.input:
        try:
            return records.load(args.input)
        except (OSError, records.RecordError) as exc:
            raise CheckFailed(f"cannot read {args.input}: {exc}") from exc
    if cutoff is None:
        raise UsageError("--module needs --max-degree")
    return parse_spec(args.module, cutoff, getattr(args, "max_length", None))


def _qmodule(args) -> QModule:
    m = _module(args, args.max_degree)
    return m if isinstance(m, QModule) else triv(m)


# -- verbs --------------------------------------------------------------------------

def cmd_adem(args):
    elt = adem_reduce(_ints(args.word))
    rows = [[" ".join(map(str, w))] for w in sorted(elt, reverse=True)]
    return ["monomial"], rows, format_element(elt)


def cmd_dl_adem(args):
    word = _ints(args.word)
    if args.lower:
        elt = normal_form(word, args.degree) if all(j >= 0 for j in word) else frozenset()
        rows = [[",".join(map(str, w))] for w in sorted(elt)]
        text = " + ".join(f"Q_({','.join(map(str, w))})x" for w in sorted(elt)) or "0"
        return ["lower"], rows, text
    elt = dl_adem_reduce(word, args.degree)
    rows = [[" ".join(map(str, w))] for w in sorted(elt, reverse=True)]
    return ["upper"], rows, format_upper(elt)


def cmd_basis(args):
    if args.excess is None:
        seqs = admissible_basis(args.degree)
    else:
        seqs = free_unstable_basis(args.excess, args.degree)
    return ["degree", "sequence"], [[args.degree, ",".join(map(str, I))] for I in seqs], None


def cmd_steinberg(args):
    lo = lowest_degree(args.s, args.d) if args.min_degree is None else args.min_degree
    checks = steinberg_dim_check(args.s, args.d, range(lo, args.max_degree + 1))
    rows = [[c.degree, c.kernel, c.decreasing, c.admissible] for c in checks]
    cols = ["degree", "kernel", "decreasing", "admissible"]
    if not all(c.ok for c in checks):
        raise CheckFailed("basis counts disagree", (cols, rows))
    return cols, rows, None


def _lderq_rows(args, method):
    N = _qmodule(args)
    table = lderq(N, args.max_length, min(args.max_degree, N.cutoff), method)
    return ["length", "t", "degree", "dim"], [[*k, v] for k, v in sorted(table.items())], None


def cmd_koszul(args):
    return _lderq_rows(args, "koszul")


def cmd_bar(args):
    return _lderq_rows(args, "bar")


def cmd_compare(args):
    N = _qmodule(args)
    cmp = compare_homologies(N, args.max_length, min(args.max_degree, N.cutoff))
    cols = ["length", "t", "degree", "koszul", "bar"]
    keys = sorted(set(cmp.koszul) | set(cmp.bar))
    rows = [[*k, cmp.koszul.get(k, 0), cmp.bar.get(k, 0)] for k in keys]
    if cmp.skipped:
        raise CheckFailed("some N<i> is not (-2)-connected; comparison skipped")
    if not cmp.ok:
        raise CheckFailed(f"first mismatch at {cmp.mismatches[0]}", (cols, rows))
    return cols, rows, None


def cmd_h0r(args):
    if args.dual_steenrod is not None:
        h = h0r_dual_steenrod(args.dual_steenrod, args.max_degree)
    else:
        m = _module(args, args.max_degree)
        h = h0r_unstable(m, args.max_length, min(args.max_degree, m.cutoff))
    cert = connectivity_certificate(h)
    cols = ["length", "degree", "dim", "provenance"]
    rows = [[l, n, v, h.provenance] for (l, n), v in sorted(h.dims().items())]
    if not cert.ok:
        raise CheckFailed(f"connectivity violated at {cert.violations}", (cols, rows))
    return cols, rows, None


def cmd_deloop(args):
    m = _module(args, args.max_degree)
    pages = deloop_ss(m, args.max_degree)
    chosen = pages if args.all_pages else [pages[-1]]
    rows = []
    for page in chosen:
        r = "inf" if page is pages[-1] else str(page.r)
        for (p, q, n), v in sorted(page.dims.items()):
            rows.append([r, p, q, n, v])
    return ["page", "p", "q", "degree", "dim"], rows, None


def cmd_ss_dual(args):
    rec = ss_dual_steenrod(args.n, args.max_degree)
    totals = rec.totals()
    rows = []
    for (s, t, n), v in sorted(rec.page.dims.items(), key=lambda kv: (kv[0][2], kv[0][1])):
        rows.append(["E", s, t, n, v])
    for n in sorted(rec.target):
        rows.append(["total", "", "", n, totals.get(n, 0)])
        rows.append(["target", "", "", n, rec.target[n]])
    cols = ["kind", "s", "t", "degree", "dim"]
    if not rec.ok or any(totals.get(n, 0) != v for n, v in rec.target.items()):
        raise CheckFailed(f"reconstruction failed: {rec.failures[:3]}", (cols, rows))
    return cols, rows, None


def cmd_ss_desusp2(args):
    N = _module(args, args.max_degree)
    r = ss_desusp2(N)
    rows = []
    for (s, t, n), v in sorted(r.page.dims.items(), key=lambda kv: (kv[0][2], kv[0][1])):
        rows.append(["E2", s, t, n, v])
    for t, table in ((0, r.v0), (1, r.v1)):
        for n, v in sorted(table.items()):
            if n <= r.reliable_to:
                rows.append(["v", "", t, n, v])
    cols = ["kind", "s", "t", "degree", "dim"]
    if not r.ok:
        raise CheckFailed(f"filtration check failed: {r.failures[:3]}", (cols, rows))
    return cols, rows, None


def cmd_hilbert(args):
    m = _module(args, args.max_degree)
    if not args.loops:
        return ["degree", "dim"], [[n, m.dim(n)] for n in m.degrees()], None
    lp = loops(m)
    degs = sorted(set(m.degrees()) | {n - 1 for n in lp.sigma_omega.degrees()}
                  | {n - 1 for n in lp.sigma_omega1.degrees()})
    rows = [[n, m.dim(n), lp.omega.dim(n), lp.omega1.dim(n)] for n in degs]
    return ["degree", "dim", "omega", "omega1"], rows, None


def cmd_validate(args):
    m = _module(args, args.max_degree)
    rep = m.validate()
    rows = [list(w) for w in rep.witnesses]
    if not rep.ok:
        raise CheckFailed(f"{m.name} fails validation", (["witness"], rows))
    return ["status"], [["ok"]], "ok"


# -- plumbing ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dlkoszul", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--output", help="write the table here instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        return s

    def module_opts(s, lengths=False):
        s.add_argument("--input", help="module record file")
        s.add_argument("--module", help="module spec such as sphere:2 or R:fdual:1")
        s.add_argument("--max-degree", type=int)
        if lengths:
            s.add_argument("--max-length", type=int, required=True)

    s = verb("adem", cmd_adem, "Adem normal form of a Steenrod word")
    s.add_argument("--word", required=True)
    s = verb("dl-adem", cmd_dl_adem, "allowable normal form of a Dyer-Lashof word")
    s.add_argument("--word", required=True)
    s.add_argument("--degree", type=int, required=True, help="degree of the class acted on")
    s.add_argument("--lower", action="store_true", help="read the word in lower indices")
    s = verb("basis", cmd_basis, "admissible sequences of a given degree")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--excess", type=int, help="only excess <= this (basis of F(n))")
    s = verb("steinberg", cmd_steinberg, "dimensions of L_s Sigma^d F three ways")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--min-degree", type=int)
    s.add_argument("--max-degree", type=int, required=True)
    for name, fn, h in (("koszul", cmd_koszul, "derived indecomposables via Koszul complexes"),
                        ("bar", cmd_bar, "derived indecomposables via the bar complex"),
                        ("compare", cmd_compare, "Koszul against bar, cell by cell")):
        module_opts(verb(name, fn, h), lengths=True)
    s = verb("h0r", cmd_h0r, "H_0 r of an unstable module or of Sigma^n A^*")
    module_opts(s)
    s.add_argument("--max-length", type=int, default=0)
    s.add_argument("--dual-steenrod", type=int, metavar="N")
    s = verb("deloop", cmd_deloop, "the single-delooping spectral sequence")
    module_opts(s)
    s.add_argument("--all-pages", action="store_true")
    s = verb("ss-dual", cmd_ss_dual, "E^infty for Sigma^n A^* and its reconstruction")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s = verb("ss-desusp2", cmd_ss_desusp2, "the filtration of Sigma^{-2} N")
    module_opts(s)
    s = verb("hilbert", cmd_hilbert, "Hilbert series, optionally with the loop functors")
    module_opts(s)
    s.add_argument("--loops", action="store_true")
    s = verb("validate", cmd_validate, "check relations and instability of a module")
    module_opts(s)
    return p


def _render(fmt: str, verb: str, cols, rows, text) -> str:
    if fmt == "json":
        obj = {"schema": SCHEMA, "verb": verb, "columns": cols, "rows": rows}
        if text is not None:
            obj["text"] = text
        return json.dumps(obj, sort_keys=True) + "\n"
    if text is not None and verb in ("adem", "dl-adem"):
        return text + "\n"
    lines = ["\t".join(cols)] + ["\t".join(map(str, r)) for r in rows]
    return "\n".join(lines) + "\n"


def _error(fmt: str, kind: str, message: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, "error": kind, "message": message}, sort_keys=True) + "\n"
    return f"error: {message}\n"


def _sniff_format(argv) -> str:
    """Output format requested on the command line, for errors raised before parsing ends."""
    for k, a in enumerate(argv):
        if a == "--format=json" or (a == "--format" and argv[k + 1:k + 2] == ["json"]):
            return "json"
    return "tsv"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = _sniff_format(argv)
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        cols, rows, text = args.fn(args)
        out = _render(fmt, args.verb, cols, rows, text)
    except UsageError as exc:
        stderr.write(_error(fmt, "usage", str(exc)))
        return 1
    except ValueError as exc:
        stderr.write(_error(fmt, "check", str(exc)))
        return 2
    except CheckFailed as exc:
        if exc.table is not None:
            stdout.write(_render(fmt, args.verb, *exc.table, None))
        stderr.write(_error(fmt, "check", str(exc)))
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
