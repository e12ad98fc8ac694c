"""Constructive factorizations of LS_n / SS_n elements into idempotents.

* ``inverse_witness``: for a in LS_n, a map a' of P_n with a a' a = a,
  a' a = 1_{im a} and a a' an idempotent of LS_n.
* ``idempotent_factorization``: a = e e_1 ... e_p with every factor an
  idempotent of the same height as a.
* ``height_descent``: an idempotent of height p as a product of two or
  three idempotents of height p + 1, following a case split on how the
  domain's gaps sit relative to the kernel blocks.
* ``decompose_to_idempotents``: chains the two to reach any target height.

Every result is checked by composing it out.  ``height_descent`` falls back
to exhaustive search when no template applies or a template misfires, and
records that in ``Factorization.fallback``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache, reduce

from .core import (
    Family,
    MapError,
    MonoidSpec,
    PartialMap,
    compose,
    empty_map,
    format_map,
    in_ls,
    is_idempotent,
    is_member,
    make_partial_map,
    map_to_json,
    partial_identity,
    to_block_form,
)
from .enumeration import ElementStore, family_elements

log = logging.getLogger(__name__)

INVERSE_WITNESS = "INVERSE_WITNESS"
SAME_HEIGHT = "SAME_HEIGHT"
HEIGHT_DESCENT = "HEIGHT_DESCENT"

# templates for a gap below the first block, tried only when no other template fits
EXTENSION_CASES = ("gap-before/left", "gap-before/big", "gap-before/gap")


@dataclass(frozen=True)
class Factorization:
    target: PartialMap
    factors: tuple
    certificate: str
    case: str | None = None
    skippable: tuple = ()
    fallback: bool = False
    notes: tuple = field(default=(), compare=False)

    def product(self) -> PartialMap:
        return reduce(compose, self.factors)

    @property
    def verified(self) -> bool:
        return self.product() == self.target

    @property
    def essential(self) -> tuple:
        """Factors minus the ones flagged skippable (partial identities that act trivially)."""
        if not self.skippable:
            return self.factors
        kept = tuple(f for f, s in zip(self.factors, self.skippable) if not s)
        return kept or self.factors[:1]

    def to_json(self) -> dict:
        return {
            "target": format_map(self.target),
            "factors": [format_map(f) for f in self.factors],
            "certificate": self.certificate,
            "case": self.case,
            "verified": self.verified,
        }


def _check_ls(a: PartialMap) -> None:
    if not in_ls(a):
        raise MapError(f"{format_map(a)} is not in LS_{a.n}")


def inverse_witness(a: PartialMap) -> PartialMap:
    """The map a_i -> min A_i on im a.  Empty for the empty map."""
    _check_ls(a)
    bf = to_block_form(a)
    return make_partial_map(a.n, zip(bf.images, bf.mins))


def inverse_witness_factorization(a: PartialMap) -> Factorization:
    w = inverse_witness(a)
    return Factorization(
        a, (a, w, a), INVERSE_WITNESS, case="degenerate" if a.is_empty() else None
    )


def idempotent_factorization(a: PartialMap) -> Factorization:
    _check_ls(a)
    n = a.n
    if a.is_empty():
        return Factorization(a, (a,), SAME_HEIGHT, skippable=(False,))
    bf = to_block_form(a)
    t, im = bf.mins, bf.images
    p = len(t)
    head = make_partial_map(n, ((x, ti) for b, ti in zip(bf.blocks, t) for x in b))
    factors, skip = [head], [False]
    for i in range(p):
        pairs = [(im[k], im[k]) for k in range(i)]
        pairs += [(t[i], im[i])] + ([(im[i], im[i])] if im[i] != t[i] else [])
        pairs += [(t[k], t[k]) for k in range(i + 1, p)]
        factors.append(make_partial_map(n, pairs))
        skip.append(im[i] == t[i])
    return Factorization(a, tuple(factors), SAME_HEIGHT, skippable=tuple(skip))


# -- height descent ---------------------------------------------------------


def _build(n: int, parts) -> PartialMap:
    """Map from a list of (points, image) pairs."""
    return make_partial_map(n, ((x, y) for pts, y in parts for x in pts))


def _descent_templates(eps: PartialMap):
    """Yield (case, factors) candidates in preference order."""
    n = eps.n
    bf = to_block_form(eps)
    blocks, t = bf.blocks, bf.mins
    p = len(blocks)
    base = [(b, b[0]) for b in blocks]  # eps itself
    tfix = [((x,), x) for x in t]  # 1 on im eps
    big = [k for k, b in enumerate(blocks) if len(b) >= 2]
    gaps = sorted(set(range(1, n + 1)) - set(eps.domain))

    def but(parts, k, *repl):
        return parts[:k] + list(repl) + parts[k + 1:]

    def split_off_min(k):
        # block k becomes {t_k} -> t_k and the rest -> its least point
        b = blocks[k]
        return but(base, k, ((b[0],), b[0]), (b[1:], b[1]))

    def collapse(k, x, *extra):
        # 1 on the t's except {t_k, x} -> t_k, plus fixed extra points
        return sorted(but(tfix, k, ((t[k], x), t[k])) + [((e,), e) for e in extra], key=lambda q: q[0][0])

    def plus_fixed(parts, *pts):
        return sorted(parts + [((x,), x) for x in pts], key=lambda q: q[0][0])

    if not gaps:
        i = big[0]
        if len(blocks[i]) == 2:
            j = next((k for k in big if k != i), None)
            if j is None:
                return
            yield "full/pair", [but(base, i, ((t[i],), t[i]), ((blocks[i][1],), blocks[i][1])),
                          collapse(i, blocks[i][1], blocks[j][1])]
        else:
            x1, x2 = blocks[i][1], blocks[i][2]
            yield "full/triple", [split_off_min(i), collapse(i, x1, x2)]
        return

    for q in gaps:
        if p and q < t[0]:
            continue
        inside = next((k for k, b in enumerate(blocks) if b[0] < q < b[-1]), None)
        if inside is not None:
            i = inside
            lower = tuple(x for x in blocks[i] if x < q)
            upper = tuple(x for x in blocks[i] if x > q)
            u = upper[0]
            e1 = but(base, i, (lower, t[i]), (upper, u))
            e2 = sorted(but(tfix, i, ((t[i],), t[i]), ((q, u), q)), key=lambda z: z[0][0])
            e3 = collapse(i, q, u)
            yield "gap-inside", [e1, e2, e3]
            continue
        between = next((k for k in range(p - 1) if blocks[k][-1] < q < blocks[k + 1][0]), None)
        if between is not None:
            i = between
            if len(blocks[i]) >= 2:
                x1 = blocks[i][1]
                e2 = sorted(but(tfix, i, ((t[i],), t[i]), ((x1, q), x1)), key=lambda z: z[0][0])
                yield "gap-between/left", [split_off_min(i), e2, collapse(i, x1, q)]
            elif len(blocks[i + 1]) >= 2:
                x = blocks[i + 1][1]
                yield "gap-between/right", [split_off_min(i + 1), collapse(i + 1, x, q)]
            elif big:
                yield "gap-between/big", [plus_fixed(base, q), plus_fixed(tfix, blocks[big[0]][1])]
            else:
                d = next(g for g in gaps if g != q)
                yield "gap-between/gap", [plus_fixed(base, q), plus_fixed(base, d)]
            continue
        # q lies beyond the last block (or eps is empty)
        if big:
            i = big[0]
            yield "gap-after/big", [split_off_min(i), collapse(i, blocks[i][1], q)]
            continue
        later = [d for d in gaps if d > q]
        if later:
            yield "gap-after/gap", [plus_fixed(base, q), plus_fixed(tfix, later[0])]

    # gap before the first block: mirror of the between-blocks split with an empty block 0
    if p and gaps[0] < t[0]:
        q = gaps[0]
        if len(blocks[0]) >= 2:
            yield "gap-before/left", [split_off_min(0), collapse(0, blocks[0][1], q)]
        elif big:
            yield "gap-before/big", [plus_fixed(base, q), plus_fixed(tfix, blocks[big[0]][1])]
        else:
            d = next(g for g in gaps if g != q)
            yield "gap-before/gap", [plus_fixed(base, q), plus_fixed(base, d)]


@lru_cache(maxsize=None)
def _top_idempotents(n: int, h: int, small: bool) -> tuple:
    spec = MonoidSpec(Family.SS if small else Family.LS, n)
    return tuple(a for a in family_elements(spec) if a.height == h and is_idempotent(a))


def _search_descent(eps: PartialMap, small: bool) -> tuple | None:
    cands = _top_idempotents(eps.n, eps.height + 1, small)
    for k in (2, 3):
        for combo in itertools.product(cands, repeat=k):
            if reduce(compose, combo) == eps:
                return combo
    return None


def _valid_descent(eps: PartialMap, factors, small: bool) -> bool:
    h = eps.height + 1
    spec = MonoidSpec(Family.SS if small else Family.LS, eps.n)
    return (
        all(is_member(f, spec) and is_idempotent(f) and f.height == h for f in factors)
        and reduce(compose, factors) == eps
    )


def height_descent(eps: PartialMap, family: str = Family.LS) -> Factorization:
    """Write an idempotent of height p <= n-2 as a product of idempotents of height p+1."""
    small = family in Family.SMALL
    _check_ls(eps)
    if not is_idempotent(eps):
        raise MapError(f"{format_map(eps)} is not idempotent")
    n, p = eps.n, eps.height
    if p > n - 2:
        raise MapError(f"height {p} > n-2 = {n - 2}: no decomposition into height {p + 1} idempotents")
    if small:
        if p == 0 or not eps.values[0]:
            raise MapError(f"{format_map(eps)} is not a nonempty element of SS_{n}")
    notes = []
    for case, parts in _descent_templates(eps):
        try:
            factors = tuple(_build(n, part) for part in parts)
        except MapError as exc:
            notes.append(f"{case}: template invalid ({exc})")
            log.warning("height_descent %s case %s: %s", format_map(eps), case, exc)
            continue
        if _valid_descent(eps, factors, small):
            return Factorization(eps, factors, HEIGHT_DESCENT, case=case, notes=tuple(notes))
        notes.append(f"{case}: product check failed")
        log.warning("height_descent %s case %s: template product check failed", format_map(eps), case)
    found = _search_descent(eps, small)
    if found is None:
        raise MapError(f"no descent found for {format_map(eps)}")
    log.warning("height_descent %s: fallback search used", format_map(eps))
    return Factorization(eps, found, HEIGHT_DESCENT, case="search", fallback=True, notes=tuple(notes))


def decompose_to_idempotents(a: PartialMap, target_height: int, family: str = Family.LS) -> Factorization:
    """Product of idempotents all of height exactly ``target_height`` equal to ``a``."""
    _check_ls(a)
    n, h = a.n, a.height
    if not h <= target_height <= max(n - 1, h):
        raise MapError(f"target height {target_height} outside {h}..{n - 1}")
    base = idempotent_factorization(a)
    factors = list(base.essential)
    cases: list[str] = []
    fallback = False
    for _ in range(target_height - h):
        nxt = []
        for e in factors:
            f = height_descent(e, family)
            cases.append(f.case)
            fallback |= f.fallback
            nxt.extend(f.factors)
        factors = nxt
    cert = HEIGHT_DESCENT if cases else SAME_HEIGHT
    case = ",".join(sorted(set(cases))) if cases else None
    return Factorization(a, tuple(factors), cert, case=case, fallback=fallback)


# -- rigidity of idempotent products in the Rees quotients ------------------


@dataclass
class RigidityReport:
    label: str
    pairs_checked: int
    counterexample: tuple | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def idempotent_product_rigidity_check(store: ElementStore) -> RigidityReport:
    """For nonzero a, b: ab a nonzero idempotent  <=>  a, b idempotent and ab = a."""
    if not store.spec.is_quotient:
        raise MapError(f"{store.spec.label} is not a Rees quotient")
    t = store.table
    idem = {i for i in store.nonzero if t[i, i] == i}
    checked = 0
    for a in store.nonzero:
        for b in store.nonzero:
            c = int(t[a, b])
            lhs = c != store.zero and c in idem
            rhs = a in idem and b in idem and c == a
            checked += 1
            if lhs != rhs:
                return RigidityReport(store.spec.label, checked, (store.text(a), store.text(b)))
    return RigidityReport(store.spec.label, checked, None)


def rigidity_on_slice(elements, p: int) -> tuple | None:
    """The same check on the height-p maps of ``elements`` with products of lower height as zero."""
    top = [a for a in elements if a.height == p]
    for a in top:
        for b in top:
            c = compose(a, b)
            lhs = c.height == p and is_idempotent(c)
            rhs = is_idempotent(a) and is_idempotent(b) and c == a
            if lhs != rhs:
                return (format_map(a), format_map(b))
    return None


__all__ = [
    "Factorization",
    "inverse_witness",
    "inverse_witness_factorization",
    "idempotent_factorization",
    "height_descent",
    "decompose_to_idempotents",
    "idempotent_product_rigidity_check",
    "rigidity_on_slice",
    "partial_identity",
    "empty_map",
    "map_to_json",
]
