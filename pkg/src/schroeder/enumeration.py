"""Enumeration of the Schröder families and indexed element stores.

Two generators are provided.  ``structural`` builds members directly from
their block form (domain, convex split, images below block minima);
``filter`` walks every partial map of [n] and keeps members.  They share
nothing beyond the membership predicate and are cross-checked in tests.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .core import Family, MapError, MonoidSpec, PartialMap, compose, format_map, is_member

# Largest chain size for whole-family enumeration.
MAX_ENUM_N = 7
# Stores up to this size get a full Cayley table.
TABLE_CAP = 4096

ZERO_TEXT = "0"


class CapExceeded(MapError):
    pass


def sort_key(a: PartialMap) -> tuple:
    return (a.height, a.domain_mask, tuple(y for y in a.values if y))


def _images_below(mins: list[int], lo: int = 0) -> Iterator[tuple]:
    # strictly increasing a_1 < ... < a_p with a_i <= mins[i]
    if not mins:
        yield ()
        return
    for a in range(lo + 1, mins[0] + 1):
        for rest in _images_below(mins[1:], a):
            yield (a,) + rest


def _structural(spec: MonoidSpec) -> Iterator[PartialMap]:
    n, f = spec.n, spec.family
    lo_h, hi_h = 0, n
    if f in (Family.K, Family.M):
        hi_h = spec.p
    elif f in Family.QUOTIENTS:
        lo_h = hi_h = spec.p
    for mask in range(1 << n):
        if f in Family.SMALL and not mask & 1:
            continue
        if f == Family.SS_PRIME and mask & 1:
            continue
        dom = [x + 1 for x in range(n) if mask >> x & 1]
        r = len(dom)
        if r == 0:
            if lo_h == 0:
                yield PartialMap._raw((0,) * n)
            continue
        for p in range(max(lo_h, 1), min(hi_h, r) + 1):
            for cuts in itertools.combinations(range(1, r), p - 1):
                edges = (0,) + cuts + (r,)
                blocks = [dom[edges[k]:edges[k + 1]] for k in range(p)]
                for images in _images_below([b[0] for b in blocks]):
                    v = [0] * n
                    for b, y in zip(blocks, images):
                        for x in b:
                            v[x - 1] = y
                    yield PartialMap._raw(tuple(v))


def _filtered(spec: MonoidSpec) -> Iterator[PartialMap]:
    n = spec.n
    for v in itertools.product(range(n + 1), repeat=n):
        a = PartialMap._raw(v)
        if is_member(a, spec):
            yield a


class ElementStore:
    """An indexed finite semigroup of partial maps.

    For the Rees quotients the zero is an extra index (``store.zero``, the
    last index) rather than a map; every product of height below p lands
    there.  Products are served from a Cayley table when the store is small
    enough, otherwise computed and memoized.
    """

    def __init__(self, spec: MonoidSpec, elements: Iterable[PartialMap], with_zero: bool | None = None):
        self.spec = spec
        self.elements = sorted(set(elements), key=sort_key)
        if with_zero is None:
            with_zero = spec.is_quotient
        self.zero = len(self.elements) if with_zero else None
        self.index = {a: i for i, a in enumerate(self.elements)}
        self._memo: dict[tuple[int, int], int] = {}
        self.complete: bool | None = None

    def __len__(self):
        return len(self.elements) + (self.zero is not None)

    def __iter__(self):
        return iter(range(len(self)))

    def __repr__(self):
        return f"<ElementStore {self.spec.label} size={len(self)}>"

    @property
    def nonzero(self) -> range:
        return range(len(self.elements))

    def element(self, i: int) -> PartialMap | None:
        return None if i == self.zero else self.elements[i]

    def text(self, i: int) -> str:
        return ZERO_TEXT if i == self.zero else format_map(self.elements[i])

    def height(self, i: int) -> int:
        return -1 if i == self.zero else self.elements[i].height

    @cached_property
    def heights(self) -> np.ndarray:
        return np.array([self.height(i) for i in self], dtype=np.int64)

    @cached_property
    def identity_index(self) -> int | None:
        ident = PartialMap._raw(tuple(range(1, self.spec.n + 1)))
        return self.index.get(ident)

    def _compose_index(self, i: int, j: int) -> int:
        if i == self.zero or j == self.zero:
            return self.zero
        c = compose(self.elements[i], self.elements[j])
        k = self.index.get(c)
        if k is None:
            if self.spec.is_quotient and c.height < self.spec.p and self.zero is not None:
                return self.zero
            raise MapError(f"{self.spec.label}: product {format_map(c)} escapes the store")
        return k

    def multiply(self, i: int, j: int) -> int:
        if len(self) <= TABLE_CAP:
            return int(self.table[i, j])
        key = (i, j)
        k = self._memo.get(key)
        if k is None:
            k = self._memo[key] = self._compose_index(i, j)
        return k

    def product(self, a: PartialMap, b: PartialMap) -> PartialMap | None:
        """Product of two members as maps; ``None`` stands for the zero."""
        k = self.multiply(self.index[a], self.index[b])
        return self.element(k)

    @cached_property
    def table(self) -> np.ndarray:
        """Cayley table: ``table[i, j]`` is the index of e_i e_j."""
        size = len(self)
        if size > TABLE_CAP:
            raise CapExceeded(f"{self.spec.label}: {size} elements exceeds table cap {TABLE_CAP}")
        n, m = self.spec.n, len(self.elements)
        t = np.empty((size, size), dtype=np.int32)
        if self.zero is not None:
            t[self.zero, :] = self.zero
            t[:, self.zero] = self.zero
        if m == 0:
            return t
        # column 0 absorbs "undefined"
        emat = np.zeros((m, n + 1), dtype=np.int64)
        emat[:, 1:] = np.array([a.values for a in self.elements], dtype=np.int64).reshape(m, n)
        weights = (n + 1) ** np.arange(n, dtype=np.int64)
        keys = emat[:, 1:] @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        for i in range(m):
            prod = emat[:, emat[i, 1:]]  # row j is e_i e_j on points 1..n
            pk = prod @ weights
            pos = np.searchsorted(sorted_keys, pk)
            pos[pos >= m] = 0
            found = sorted_keys[pos] == pk
            row = np.where(found, order[pos], -1)
            if not found.all():
                if self.zero is None:
                    j = int(np.flatnonzero(~found)[0])
                    raise MapError(
                        f"{self.spec.label}: product {self.text(i)} * {self.text(j)} escapes the store"
                    )
                row[~found] = self.zero
            t[i, :m] = row
        return t


def check_enumerable(spec: MonoidSpec, max_n: int = MAX_ENUM_N) -> None:
    if spec.n > max_n:
        raise CapExceeded(f"{spec.label}: n={spec.n} exceeds enumeration cap {max_n}")


def family_elements(spec: MonoidSpec, method: str = "structural") -> list[PartialMap]:
    if method == "structural":
        return sorted(_structural(spec), key=sort_key)
    if method == "filter":
        return sorted(_filtered(spec), key=sort_key)
    raise ValueError(f"unknown method {method!r}")


def enumerate_family(spec: MonoidSpec, method: str = "structural", max_n: int = MAX_ENUM_N) -> ElementStore:
    check_enumerable(spec, max_n)
    store = ElementStore(spec, family_elements(spec, method))
    store.complete = True
    return store


def multiply(store: ElementStore, i: int, j: int) -> int:
    return store.multiply(i, j)


def closure(generators: Iterable[PartialMap], spec: MonoidSpec, compare: bool = True) -> ElementStore:
    """Subsemigroup generated by ``generators`` inside the family ``spec``.

    Breadth-first: every new element is multiplied on the right by every
    generator.  For quotients a product dropping below height p becomes the
    zero.  ``store.complete`` records whether every nonzero member of the
    family was reached (the zero is not counted, see ``rank``).
    """
    gens = list(dict.fromkeys(generators))
    for g in gens:
        if not is_member(g, spec):
            raise MapError(f"generator {format_map(g)} is not in {spec.label}")
    p = spec.p
    quotient = spec.is_quotient
    seen = set(gens)
    has_zero = False
    queue = deque(gens)
    while queue:
        a = queue.popleft()
        for g in gens:
            c = compose(a, g)
            if quotient and c.height < p:
                has_zero = True
                continue
            if c not in seen:
                seen.add(c)
                queue.append(c)
    store = ElementStore(spec, seen, with_zero=has_zero)
    if compare:
        check_enumerable(spec)
        store.complete = set(seen) == set(family_elements(spec))
    return store


def idempotents(store: ElementStore, include_zero: bool = False) -> list[int]:
    t = store.table if len(store) <= TABLE_CAP else None
    out = []
    for i in store.nonzero:
        k = int(t[i, i]) if t is not None else store.multiply(i, i)
        if k == i:
            out.append(i)
    if include_zero and store.zero is not None:
        out.append(store.zero)
    return out


def j_star_slice(store: ElementStore, p: int) -> list[int]:
    return [i for i in store.nonzero if store.elements[i].height == p]
