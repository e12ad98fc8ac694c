"""Partial transformations of the chain [n] = {1, ..., n}.

A map is stored as a tuple of length n whose x-th entry (1-based) is the
image of x, or 0 when x is outside the domain.  Composition is left to
right: ``(a * b)`` first applies ``a``, then ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

# Largest chain size accepted by single-element operations.
MAX_N = 12


class MapError(ValueError):
    """Raised for malformed partial maps or maps outside the required family."""


class PartialMap:
    __slots__ = ("_v", "_hash")

    def __init__(self, values: Sequence[int]):
        v = tuple(int(x) for x in values)
        n = len(v)
        for y in v:
            if y < 0 or y > n:
                raise MapError(f"value {y} out of range 1..{n}")
        self._v = v
        self._hash = hash(v)

    @classmethod
    def _raw(cls, v: tuple) -> PartialMap:
        # trusted constructor used on hot paths
        obj = object.__new__(cls)
        obj._v = v
        obj._hash = hash(v)
        return obj

    @property
    def n(self) -> int:
        return len(self._v)

    @property
    def values(self) -> tuple:
        return self._v

    def __call__(self, x: int) -> int | None:
        y = self._v[x - 1]
        return y or None

    def __mul__(self, other: PartialMap) -> PartialMap:
        return compose(self, other)

    def __eq__(self, other):
        return isinstance(other, PartialMap) and self._v == other._v

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PartialMap({format_map(self)!r}, n={self.n})"

    def __str__(self):
        return format_map(self)

    @property
    def domain(self) -> tuple:
        return tuple(x for x, y in enumerate(self._v, 1) if y)

    @property
    def image(self) -> tuple:
        return tuple(sorted({y for y in self._v if y}))

    @property
    def domain_mask(self) -> int:
        m = 0
        for x, y in enumerate(self._v):
            if y:
                m |= 1 << x
        return m

    @property
    def height(self) -> int:
        return len({y for y in self._v if y})

    def is_empty(self) -> bool:
        return not any(self._v)

    def kernel(self) -> tuple:
        """Kernel classes as sorted tuples, ordered by their least point."""
        classes: dict[int, list[int]] = {}
        for x, y in enumerate(self._v, 1):
            if y:
                classes.setdefault(y, []).append(x)
        return tuple(sorted(tuple(c) for c in classes.values()))


def make_partial_map(n: int, pairs: Iterable[tuple[int, int]]) -> PartialMap:
    if not 0 <= n <= MAX_N:
        raise MapError(f"chain size {n} outside 0..{MAX_N}")
    v = [0] * n
    for x, y in pairs:
        if not 1 <= x <= n:
            raise MapError(f"point {x} out of range 1..{n}")
        if not 1 <= y <= n:
            raise MapError(f"value {y} out of range 1..{n}")
        if v[x - 1]:
            raise MapError(f"duplicate point {x}")
        v[x - 1] = y
    return PartialMap._raw(tuple(v))


def empty_map(n: int) -> PartialMap:
    return PartialMap._raw((0,) * n)


def identity(n: int) -> PartialMap:
    return PartialMap._raw(tuple(range(1, n + 1)))


def partial_identity(n: int, subset: Iterable[int]) -> PartialMap:
    return make_partial_map(n, ((x, x) for x in subset))


def compose(a: PartialMap, b: PartialMap) -> PartialMap:
    av, bv = a._v, b._v
    if len(av) != len(bv):
        raise MapError(f"chain sizes differ: {len(av)} vs {len(bv)}")
    return PartialMap._raw(tuple(bv[y - 1] if y else 0 for y in av))


def is_isotone(a: PartialMap) -> bool:
    last = 0
    for y in a._v:
        if y:
            if y < last:
                return False
            last = y
    return True


def is_decreasing(a: PartialMap) -> bool:
    return all(y <= x for x, y in enumerate(a._v, 1))


def in_ls(a: PartialMap) -> bool:
    return is_isotone(a) and is_decreasing(a)


def height(a: PartialMap) -> int:
    return a.height


def fixed_points(a: PartialMap) -> frozenset:
    return frozenset(x for x, y in enumerate(a._v, 1) if x == y)


def is_idempotent(a: PartialMap) -> bool:
    return compose(a, a) == a


@dataclass(frozen=True)
class BlockForm:
    """Ordered kernel blocks of an LS_n map with their (strictly increasing) images."""

    n: int
    blocks: tuple
    images: tuple

    def __post_init__(self):
        if len(self.blocks) != len(self.images):
            raise MapError("blocks and images differ in length")
        prev_max, prev_img = 0, 0
        for block, a in zip(self.blocks, self.images):
            if not block:
                raise MapError("empty block")
            if list(block) != sorted(block) or block[0] <= prev_max:
                raise MapError("blocks must be ascending and ordered")
            if block[-1] > self.n:
                raise MapError(f"point {block[-1]} out of range 1..{self.n}")
            if not prev_img < a <= block[0]:
                raise MapError(f"image {a} violates a_i <= min A_i or strict increase")
            prev_max, prev_img = block[-1], a

    @property
    def mins(self) -> tuple:
        return tuple(b[0] for b in self.blocks)

    def to_map(self) -> PartialMap:
        return from_block_form(self)


def to_block_form(a: PartialMap) -> BlockForm:
    if not in_ls(a):
        raise MapError(f"{format_map(a)} is not isotone and order-decreasing")
    blocks = a.kernel()
    return BlockForm(a.n, blocks, tuple(a._v[b[0] - 1] for b in blocks))


def from_block_form(bf: BlockForm) -> PartialMap:
    return make_partial_map(bf.n, ((x, y) for b, y in zip(bf.blocks, bf.images) for x in b))


def format_map(a: PartialMap) -> str:
    """Element text: ``1,2->1;3->2``; the empty map is ``-``.

    Blocks are the kernel classes ordered by least point, so the text is
    defined for any partial map, not only members of LS_n.
    """
    ker = a.kernel()
    if not ker:
        return "-"
    return ";".join(",".join(map(str, b)) + "->" + str(a._v[b[0] - 1]) for b in ker)


def parse_map(text: str, n: int) -> PartialMap:
    text = text.strip()
    if text == "-":
        return empty_map(n)
    pairs = []
    try:
        for chunk in text.split(";"):
            pts, val = chunk.split("->")
            y = int(val)
            pairs.extend((int(x), y) for x in pts.split(","))
    except ValueError:
        raise MapError(f"cannot parse element text {text!r}") from None
    return make_partial_map(n, pairs)


def map_to_json(a: PartialMap) -> dict:
    ker = a.kernel()
    return {"n": a.n, "blocks": [list(b) for b in ker], "images": [a._v[b[0] - 1] for b in ker]}


def map_from_json(obj: dict) -> PartialMap:
    n = int(obj["n"])
    blocks, images = obj["blocks"], obj["images"]
    if len(blocks) != len(images):
        raise MapError("blocks and images differ in length")
    return make_partial_map(n, ((x, y) for b, y in zip(blocks, images) for x in b))


class Family:
    LS = "ls"
    SS = "ss"
    SS_PRIME = "ssp"
    K = "k"
    M = "m"
    RLS = "rls"
    RSS = "rss"

    ALL = (LS, SS, SS_PRIME, K, M, RLS, RSS)
    WITH_P = (K, M, RLS, RSS)
    QUOTIENTS = (RLS, RSS)
    SMALL = (SS, M, RSS)


@dataclass(frozen=True)
class MonoidSpec:
    family: str
    n: int
    p: int | None = None

    def __post_init__(self):
        if self.family not in Family.ALL:
            raise MapError(f"unknown family {self.family!r}")
        if self.n < 0:
            raise MapError("chain size must be nonnegative")
        if self.family in Family.WITH_P:
            if self.p is None:
                raise MapError(f"family {self.family} needs a height bound p")
            if not 1 <= self.p <= self.n:
                raise MapError(f"need 1 <= p <= n, got p={self.p}, n={self.n}")
        elif self.p is not None:
            raise MapError(f"family {self.family} takes no height bound")

    @property
    def is_quotient(self) -> bool:
        return self.family in Family.QUOTIENTS

    @property
    def parent(self) -> str:
        """The ideal whose elements (of top height, for quotients) make up this family."""
        return {Family.RLS: Family.K, Family.RSS: Family.M}.get(self.family, self.family)

    @property
    def label(self) -> str:
        f = self.family
        if f == Family.LS:
            return f"LS_{self.n}"
        if f == Family.SS:
            return f"SS_{self.n}"
        if f == Family.SS_PRIME:
            return f"SS'_{self.n}"
        if f in (Family.K, Family.M):
            return f"{f.upper()}({self.n},{self.p})"
        return f"{f.upper()}_{self.n}({self.p})"

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "p": self.p}


def is_member(a: PartialMap, spec: MonoidSpec) -> bool:
    """Membership of a map in the underlying element set of ``spec``.

    For the Rees quotients this tests the nonzero elements, i.e. maps of
    height exactly p.
    """
    if a.n != spec.n or not in_ls(a):
        return False
    f = spec.family
    one_in_dom = spec.n >= 1 and a._v[0] != 0
    if f in Family.SMALL and not one_in_dom:
        return False
    if f == Family.SS_PRIME and one_in_dom:
        return False
    h = a.height
    if f in (Family.K, Family.M):
        return h <= spec.p
    if f in Family.QUOTIENTS:
        return h == spec.p
    return True
