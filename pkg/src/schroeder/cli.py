"""Command-line front end: ``schroeder <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage error or bad input.
Data goes to stdout (or ``--output``); timings and failure records go to
stderr so that stdout is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from math import comb

from .checks import SUITE_NAMES, Check, run_suites
from .core import Family, MapError, MonoidSpec, format_map, is_idempotent, map_to_json, parse_map
from .enumeration import MAX_ENUM_N, CapExceeded, ElementStore, enumerate_family, family_elements
from .factorize import decompose_to_idempotents, idempotent_factorization
from .green import classify, eggbox_render
from .rank import BRUTE_CAP, brute_min_rank, ls_slice_count, schroeder_number, ss_slice_count, verify_rank

RELATIONS = {
    "l": "L", "r": "R", "h": "H", "d": "D",
    "lstar": "L*", "rstar": "R*", "hstar": "H*", "dstar": "D*", "jstar": "J*",
}
COUNT_HEADER = ("n", "family", "count", "formula", "match")


# -- parser -----------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1, help="worker threads (default: cores)")
    common.add_argument("--max-n", type=_nonneg, default=MAX_ENUM_N, help=f"largest n to enumerate (default {MAX_ENUM_N})")
    common.add_argument("--max-elements", type=_positive, default=None, help="cap on materialized family size")
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    def fmt(p, choices):
        p.add_argument("--format", choices=choices, default="text")

    def family_args(p, required=True):
        p.add_argument("--family", choices=Family.ALL, required=required)
        p.add_argument("--n", type=_nonneg, required=True)
        p.add_argument("--p", type=_positive, default=None)

    parser = argparse.ArgumentParser(prog="schroeder", description="Exact computation on Schröder monoids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{enumerate,classify,factorize,rank,count,verify}")

    p = sub.add_parser("enumerate", parents=[common], help="list the elements of a family")
    family_args(p)
    p.add_argument("--method", choices=("structural", "filter"), default="structural")
    fmt(p, ("json", "csv", "text"))

    p = sub.add_parser("classify", parents=[common], help="Green's or starred classes")
    family_args(p)
    p.add_argument("--relation", choices=tuple(RELATIONS), required=True)
    p.add_argument("--eggbox", action="store_true", help="also render egg-box diagrams")
    fmt(p, ("json", "text"))

    p = sub.add_parser("factorize", parents=[common], help="factor an element into idempotents")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--map", required=True, dest="map_text", metavar="TEXT")
    p.add_argument("--target-height", type=_nonneg, default=None)
    p.add_argument("--family", choices=(Family.LS, Family.SS), default=Family.LS)
    fmt(p, ("json", "text"))

    p = sub.add_parser("rank", parents=[common], help="closed-form rank with a verification certificate")
    family_args(p)
    p.add_argument("--brute-force", action="store_true")
    fmt(p, ("json", "text"))

    p = sub.add_parser("count", parents=[common], help="counts against their formulas")
    p.add_argument("--what", choices=("order", "idempotents", "rstar", "lstar", "schroeder"), required=True)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--p", type=_nonneg, default=None)
    fmt(p, ("json", "csv", "text"))

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=("all",) + SUITE_NAMES, default="all")
    p.add_argument("--n", type=_positive, required=True)
    fmt(p, ("json", "csv", "text"))

    for name, sp in sub.choices.items():
        sp.set_defaults(usage=sp.format_usage())
    return parser


# -- helpers ----------------------------------------------------------------


def _spec(args) -> MonoidSpec:
    spec = MonoidSpec(args.family, args.n, args.p)
    if spec.n > args.max_n:
        raise CapExceeded(f"{spec.label}: n={spec.n} exceeds --max-n {args.max_n}")
    return spec


def _store(args, spec: MonoidSpec, method: str = "structural") -> ElementStore:
    store = enumerate_family(spec, method, max_n=args.max_n)
    if args.max_elements is not None and len(store) > args.max_elements:
        raise CapExceeded(f"{spec.label}: {len(store)} elements exceeds --max-elements {args.max_elements}")
    return store


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(rows, header=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(rows, header) -> str:
    rows = [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _element_json(store: ElementStore, i: int) -> dict:
    a = store.element(i)
    if a is None:
        return {"text": store.text(i), "zero": True}
    return {"text": store.text(i), **map_to_json(a)}


# -- subcommands ------------------------------------------------------------


def cmd_enumerate(args) -> tuple[str, int]:
    spec = _spec(args)
    store = _store(args, spec, args.method)
    texts = [store.text(i) for i in store]
    if args.format == "json":
        return _json({"spec": spec.to_json(), "count": len(store), "elements": [_element_json(store, i) for i in store]}), 0
    if args.format == "csv":
        return _csv([t] for t in texts), 0
    return f"{spec.label}: {len(store)} elements\n" + "".join(t + "\n" for t in texts), 0


def cmd_classify(args) -> tuple[str, int]:
    spec = _spec(args)
    store = _store(args, spec)
    rel = RELATIONS[args.relation]
    cls = classify(store, rel)
    box = None
    if args.eggbox:
        left, right = ("L*", "R*") if "*" in rel else ("L", "R")
        box = eggbox_render(classify(store, left), classify(store, right))
    if args.format == "json":
        out = {"relation": rel, "classes": cls.texts()}
        if box is not None:
            out["eggbox"] = box
        return _json(out), 0
    lines = [f"{spec.label} {rel}: {len(cls)} classes"]
    lines += [f"  {k}: " + " | ".join(c) for k, c in enumerate(cls.texts())]
    text = "\n".join(lines) + "\n"
    if box is not None:
        text += "\n" + box
    return text, 0


def cmd_factorize(args) -> tuple[str, int]:
    a = parse_map(args.map_text, args.n)
    if args.target_height is None:
        f = idempotent_factorization(a)
    else:
        f = decompose_to_idempotents(a, args.target_height, args.family)
    code = 0 if f.verified else 1
    if args.format == "json":
        return _json(f.to_json()), code
    lines = [
        f"target:      {format_map(a)} (height {a.height})",
        f"certificate: {f.certificate}",
        f"case:        {f.case or '-'}",
        f"verified:    {str(f.verified).lower()}",
        "factors:",
    ]
    lines += [f"  {format_map(e)}" + ("  (idempotent)" if is_idempotent(e) else "") for e in f.factors]
    if f.fallback:
        lines.append("note: fallback search was used")
    return "\n".join(lines) + "\n", code


def cmd_rank(args) -> tuple[str, int]:
    spec = _spec(args)
    cap = args.max_elements or BRUTE_CAP
    if spec.n < 1:
        raise MapError("rank needs n >= 1")
    if spec.family == Family.SS_PRIME:
        size = len(family_elements(spec))
        value = brute_min_rank(spec, cap)
        out = {"spec": spec.to_json(), "label": spec.label, "closed_form": None,
               "brute_force_rank": value, "elements": size, "computed_only": True}
        if args.format == "json":
            return _json(out), 0
        return f"{spec.label}: rank {value} by exhaustive search over {size} elements (computed value, no closed form)\n", 0
    rep = verify_rank(spec, brute_force=False, max_n=args.max_n)
    if args.brute_force:
        rep.brute_force_rank = brute_min_rank(spec, cap)
    code = 0 if rep.ok else 1
    if args.format == "json":
        return _json(rep.to_json()), code
    lines = [
        f"{spec.label}: rank {rep.closed_form}",
        f"generating set ({len(rep.generating_set)}): " + " | ".join(rep.generating_set),
        f"closure reaches every element: {str(rep.verified_generates).lower()}",
        f"lower bound: {rep.lower_bound_certificate}",
        f"all generators idempotent: {str(rep.idempotent_generated).lower()}",
    ]
    if rep.brute_force_rank is not None:
        lines.append(f"exhaustive search: {rep.brute_force_rank}")
    lines.append("OK" if rep.ok else "FAILED")
    return "\n".join(lines) + "\n", code


def _large_by_recurrence(n: int) -> int:
    s = [1]
    for m in range(1, n + 1):
        s.append(s[m - 1] + sum(s[k] * s[m - 1 - k] for k in range(m)))
    return s[n]


def count_rows(what: str, n: int, p: int | None, max_n: int = MAX_ENUM_N) -> list[Check]:
    """Rows of (n, family, count, formula); counts come from enumeration except for ``schroeder``."""
    if what == "schroeder":
        # binomial sum against the convolution recurrence
        big = _large_by_recurrence(n)
        pairs = [("large", big)] + ([("small", big // 2)] if n >= 1 else [])
        return [
            Check("count", kind, schroeder_number(kind, n) == ref, n=n, family=kind,
                  count=schroeder_number(kind, n), formula=ref)
            for kind, ref in pairs
        ]
    if n > max_n:
        raise CapExceeded(f"n={n} exceeds --max-n {max_n}")
    fams = (Family.LS,) if n == 0 else (Family.LS, Family.SS, Family.SS_PRIME)
    rows: list[Check] = []

    def add(fam, count, formula):
        rows.append(Check("count", fam, count == formula, n=n, family=fam, count=count, formula=formula))

    if what == "order":
        for f in fams:
            add(f, len(family_elements(MonoidSpec(f, n))), schroeder_number("large" if f == Family.LS else "small", n))
        return rows
    if n == 0:
        raise MapError(f"count --what {what} needs n >= 1")
    heights = [p] if p is not None else list(range(0 if what == "idempotents" else 1, n + 1))
    if any(h > n for h in heights):
        raise MapError(f"need p <= n, got p={p}, n={n}")
    ls = family_elements(MonoidSpec(Family.LS, n))
    ss = family_elements(MonoidSpec(Family.SS, n))
    if what == "idempotents":
        for h in heights:
            add(f"ls/p={h}", sum(1 for a in ls if a.height == h and is_idempotent(a)), ls_slice_count(n, h))
        if p is None:
            add("ss", sum(1 for a in ss if is_idempotent(a)), 3 ** (n - 1))
        return rows
    # R*-classes are kernels, L*-classes are images
    key = (lambda a: a.kernel()) if what == "rstar" else (lambda a: a.image)
    for h in heights:
        if h == 0:
            continue
        ls_formula = ls_slice_count(n, h) if what == "rstar" else comb(n, h)
        ss_formula = ss_slice_count(n, h) if what == "rstar" else comb(n - 1, h - 1)
        add(f"ls/p={h}", len({key(a) for a in ls if a.height == h}), ls_formula)
        add(f"ss/p={h}", len({key(a) for a in ss if a.height == h}), ss_formula)
    return rows


def _emit_checks(checks: list[Check], fmt: str) -> str:
    counts_only = all(c.count is not None for c in checks)
    if fmt == "json":
        return _json({"passed": all(c.passed for c in checks), "checks": [c.to_json() for c in checks]})
    if counts_only:
        rows = [(c.n, c.family, c.count, c.formula, str(c.passed).lower()) for c in checks]
        if fmt == "csv":
            return _csv(rows, COUNT_HEADER)
        names = [c.name for c in checks]
        return _table([(nm,) + r for nm, r in zip(names, rows)], ("check",) + COUNT_HEADER)
    rows = [(c.suite, c.name, "PASS" if c.passed else "FAIL", c.detail, c.witness or "") for c in checks]
    if fmt == "csv":
        return _csv(rows, ("suite", "check", "result", "detail", "witness"))
    return _table(rows, ("suite", "check", "result", "detail", "witness"))


def cmd_count(args) -> tuple[str, int]:
    rows = count_rows(args.what, args.n, args.p, args.max_n)
    return _emit_checks(rows, args.format), 0 if all(r.passed for r in rows) else 1


def cmd_verify(args) -> tuple[str, int]:
    if args.n > args.max_n:
        raise CapExceeded(f"n={args.n} exceeds --max-n {args.max_n}")
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    checks = []
    for name, block, dt in run_suites(names, args.n, args.threads):
        bad = sum(not c.passed for c in block)
        print(f"[{name}] {len(block)} checks, {bad} failed, {dt:.2f}s", file=sys.stderr)
        checks.extend(block)
    for c in checks:
        if not c.passed:
            print(json.dumps({"failure": c.to_json()}), file=sys.stderr)
    return _emit_checks(checks, args.format), 0 if all(c.passed for c in checks) else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "factorize": cmd_factorize,
    "rank": cmd_rank,
    "count": cmd_count,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        text, code = COMMANDS[args.command](args)
    except (MapError, ArithmeticError) as exc:
        print(f"schroeder {args.command}: error: {exc}", file=sys.stderr)
        sys.stderr.write(args.usage)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{args.command}: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
