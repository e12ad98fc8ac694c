"""Verification suites behind ``schroeder verify``.

Each suite returns a list of :class:`Check` rows; a failing row carries the
smallest witness found, in element-text form.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product
from math import comb

from .core import Family, MonoidSpec, fixed_points, format_map, in_ls, is_idempotent, partial_identity
from .enumeration import closure, enumerate_family, family_elements
from .factorize import (
    EXTENSION_CASES,
    decompose_to_idempotents,
    height_descent,
    idempotent_factorization,
    idempotent_product_rigidity_check,
    inverse_witness,
)
from .green import (
    abundance_report,
    char_L,
    characterized_classes,
    classify,
    d_star_composition_check,
    starred_classes,
)
from .rank import (
    BRUTE_CAP,
    binomial_identity_check,
    idempotent_count_formulas,
    ls_slice_count,
    schroeder_number,
    ss_slice_count,
    verify_rank,
)

SUITE_NAMES = ("counts", "green", "starred", "factorize", "rank")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    witness: str | None = None
    # populated by count rows only
    n: int | None = None
    family: str | None = None
    count: int | None = None
    formula: int | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def specs_for(n: int, families=Family.ALL) -> list[MonoidSpec]:
    out = []
    for f in families:
        if f in Family.WITH_P:
            out.extend(MonoidSpec(f, n, p) for p in range(1, n + 1))
        else:
            out.append(MonoidSpec(f, n))
    return out


def _count_row(suite, name, n, family, count, formula) -> Check:
    return Check(suite, name, count == formula, f"{count} vs {formula}", n=n, family=family, count=count, formula=formula)


def counts_suite(n: int) -> list[Check]:
    out = []
    for m in range(0, n + 1):
        large = schroeder_number("large", m)
        out.append(_count_row("counts", f"|LS_{m}|", m, "ls", len(family_elements(MonoidSpec(Family.LS, m))), large))
        if m >= 1:
            small = schroeder_number("small", m)
            for f in (Family.SS, Family.SS_PRIME):
                spec = MonoidSpec(f, m)
                out.append(_count_row("counts", f"|{spec.label}|", m, f, len(family_elements(spec)), small))
            if m <= 6:
                filt = len(family_elements(MonoidSpec(Family.LS, m), "filter"))
                out.append(_count_row("counts", f"|LS_{m}| filter", m, "ls", filt, large))
            ic = idempotent_count_formulas(m)
            out.append(_count_row("counts", f"|E(SS_{m})|", m, "ss", ic.ss_total, 3 ** (m - 1)))
            for h in range(0, m + 1):
                out.append(
                    _count_row("counts", f"|E(LS_{m})| h={h}", m, "ls", ic.ls_by_height[h], ic.ls_formula[h])
                )
    return out


def _pairwise_char_L(store) -> str | None:
    lcls = classify(store, "L")
    for i, j in product(store.nonzero, repeat=2):
        if bool(lcls.related(i, j)) != char_L(store.elements[i], store.elements[j]):
            return f"{store.text(i)} / {store.text(j)}"
    return None


def green_suite(n: int) -> list[Check]:
    out = []
    for spec in specs_for(n, (Family.LS, Family.SS, Family.K, Family.M, Family.RLS, Family.RSS)):
        store = enumerate_family(spec)
        rcls = classify(store, "R")
        out.append(Check("green", f"{spec.label} R-trivial", len(rcls) == len(store)))
        for rel in ("L", "H", "D"):
            got = classify(store, rel)
            ok = got.same_partition(characterized_classes(store, rel))
            out.append(Check("green", f"{spec.label} {rel} = characterization", ok, f"{len(got)} classes"))
        out.append(Check("green", f"{spec.label} H = R", classify(store, "H").same_partition(rcls)))
        w = _pairwise_char_L(store)
        out.append(Check("green", f"{spec.label} char_L pairwise", w is None, witness=w))
    return out


def starred_suite(n: int) -> list[Check]:
    out = []
    for spec in specs_for(n, (Family.LS, Family.SS, Family.K, Family.M, Family.RLS, Family.RSS)):
        store = enumerate_family(spec)
        for rel in ("L*", "R*", "H*", "D*"):
            got = starred_classes(store, rel)
            ok = got.same_partition(characterized_classes(store, rel))
            out.append(Check("starred", f"{spec.label} {rel} = characterization", ok, f"{len(got)} classes"))
        ab = abundance_report(store)
        out.append(Check("starred", f"{spec.label} abundant", ab.abundant))
        out.append(Check("starred", f"{spec.label} one idempotent per R*-class", ab.unique_per_r_star))
        if spec.family in (Family.LS, Family.SS, Family.RLS, Family.RSS):
            rep = d_star_composition_check(store)
            out.append(Check("starred", f"{spec.label} D* = L*R*L* = R*L*R*", rep.ok, f"depth {rep.depth}"))
        if spec.family in (Family.LS, Family.SS) and n <= 4:
            j = classify(store, "J*")
            out.append(Check("starred", f"{spec.label} J* = D*", j.same_partition(classify(store, "D*"))))
        if spec.family in (Family.LS, Family.SS):
            r, l = starred_classes(store, "R*"), starred_classes(store, "L*")
            small = spec.family == Family.SS
            for p in range(1, n + 1):
                sl = [i for i in store.nonzero if store.height(i) == p]
                nr = len({int(r.labels[i]) for i in sl})
                nl = len({int(l.labels[i]) for i in sl})
                fr = ss_slice_count(n, p) if small else ls_slice_count(n, p)
                fl = _lstar_formula(n, p, small)
                out.append(_count_row("starred", f"{spec.label} R*-classes h={p}", n, spec.family, nr, fr))
                out.append(_count_row("starred", f"{spec.label} L*-classes h={p}", n, spec.family, nl, fl))
    return out


def _lstar_formula(n: int, p: int, small: bool) -> int:
    # images of SS_n maps always contain 1
    return comb(n - 1, p - 1) if small else comb(n, p)


def _same_height_ok(a) -> bool:
    f = idempotent_factorization(a)
    return f.verified and all(is_idempotent(e) and e.height == a.height for e in f.factors)


def factorize_suite(n: int) -> list[Check]:
    out = []
    ls = family_elements(MonoidSpec(Family.LS, n))
    bad = next((a for a in ls if not _same_height_ok(a)), None)
    out.append(Check("factorize", f"LS_{n} idempotent factorization", bad is None, witness=bad and format_map(bad)))

    for fam in (Family.LS, Family.SS):
        els = family_elements(MonoidSpec(fam, n))
        bad, fallbacks, ext = None, 0, 0
        for e in els:
            if not is_idempotent(e) or e.height > n - 2 or (fam == Family.SS and e.height == 0):
                continue
            f = height_descent(e, fam)
            fallbacks += f.fallback
            ext += f.case in EXTENSION_CASES
            if not (f.verified and all(is_idempotent(x) and x.height == e.height + 1 for x in f.factors)):
                bad = bad or format_map(e)
        out.append(Check("factorize", f"{fam.upper()}_{n} height descent", bad is None,
                         f"fallback searches: {fallbacks}; before-first-block template: {ext}", witness=bad))

    bad = None
    for a in ls:
        if a.is_empty():
            continue
        w = inverse_witness(a)
        if not (a * w * a == a and w * a == partial_identity(n, a.image) and in_ls(a * w) and is_idempotent(a * w)):
            bad = bad or format_map(a)
    out.append(Check("factorize", f"LS_{n} inverse-ideal laws", bad is None, witness=bad))

    if n <= 5:
        bad = next(
            ((a, b) for a in ls for b in ls if not fixed_points(a * b) == fixed_points(a) & fixed_points(b) == fixed_points(b * a)),
            None,
        )
        out.append(Check("factorize", f"LS_{n} fixed-point law", bad is None,
                         witness=bad and f"{format_map(bad[0])} / {format_map(bad[1])}"))

    for fam, ideal in ((Family.LS, Family.K), (Family.SS, Family.M)):
        pool = family_elements(MonoidSpec(fam, n))
        for p in range(1, n):
            gens = [a for a in pool if a.height == p and is_idempotent(a)]
            cl = closure(gens, MonoidSpec(ideal, n, p))
            out.append(Check("factorize", f"<E(J*_{p})> = {ideal.upper()}({n},{p})", bool(cl.complete), f"{len(cl)} elements"))
            bad = None
            for a in pool:
                if a.height <= p:
                    f = decompose_to_idempotents(a, p, fam)
                    if not (f.verified and all(is_idempotent(e) and e.height == p for e in f.factors)):
                        bad = bad or format_map(a)
            out.append(Check("factorize", f"{ideal.upper()}({n},{p}) decomposition to height {p}", bad is None, witness=bad))

    for spec in specs_for(n, (Family.RLS, Family.RSS)):
        rep = idempotent_product_rigidity_check(enumerate_family(spec))
        out.append(Check("factorize", f"{spec.label} idempotent-product rigidity", rep.ok,
                         witness=rep.counterexample and " / ".join(rep.counterexample)))
    return out


def rank_suite(n: int) -> list[Check]:
    out = []
    for spec in specs_for(n):
        size = len(family_elements(spec))
        rep = verify_rank(spec, brute_force=size <= BRUTE_CAP)
        detail = f"closed {rep.closed_form}, generators {len(rep.generating_set)}"
        if rep.brute_force_rank is not None:
            detail += f", search {rep.brute_force_rank}"
        out.append(Check("rank", f"rank {spec.label}", rep.ok, detail))
    for m in range(1, 31):
        bad = [p for p in range(1, m + 1) if not binomial_identity_check(m, p)]
        if bad:
            out.append(Check("rank", f"binomial identity n={m}", False, witness=str(bad)))
    out.append(Check("rank", "binomial identity n <= 30", all(c.passed for c in out if c.name.startswith("binomial"))))
    return out


SUITES = {
    "counts": counts_suite,
    "green": green_suite,
    "starred": starred_suite,
    "factorize": factorize_suite,
    "rank": rank_suite,
}


def _timed(name: str, n: int) -> tuple[str, list[Check], float]:
    t0 = time.perf_counter()
    block = SUITES[name](n)
    return name, block, time.perf_counter() - t0


def run_suites(names, n: int, threads: int = 1) -> list[tuple[str, list[Check], float]]:
    """Run suites, possibly concurrently; results keep the order of ``names``."""
    if threads <= 1 or len(names) <= 1:
        return [_timed(s, n) for s in names]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: _timed(s, n), names))
