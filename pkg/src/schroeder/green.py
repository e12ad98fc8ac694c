"""Green's and starred Green's relations on an element store.

Every relation has a definitional route computed from the Cayley table
and a characterization route computed from the maps themselves:

==========  ==========================================  ===========================
relation    definition (over S¹)                        characterization
==========  ==========================================  ===========================
L           S¹a = S¹b                                   same image, same block minima
R           aS¹ = bS¹                                   equality
L*          ax = ay  <=>  bx = by                       same image
R*          xa = ya  <=>  xb = yb                       same kernel (domain included)
H, H*       L ∩ R, L* ∩ R*                              equality
D           L ∘ R                                       as L
D*          join of L* and R*                           same height
J*          equal principal *-ideals                    same height
==========  ==========================================  ===========================

The zero of a Rees quotient is its own class under every relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MapError, PartialMap, to_block_form
from .enumeration import ElementStore, idempotents

GREEN = ("L", "R", "H", "D")
STARRED = ("L*", "R*", "H*", "D*")
RELATIONS = GREEN + STARRED + ("J*",)


@dataclass
class Classification:
    store: ElementStore
    relation: str
    labels: np.ndarray
    classes: list = field(repr=False)

    @classmethod
    def from_labels(cls, store: ElementStore, relation: str, raw) -> Classification:
        # renumber classes in order of their smallest member
        remap: dict = {}
        labels = np.empty(len(store), dtype=np.int64)
        classes: list[list[int]] = []
        for i, key in enumerate(raw):
            c = remap.get(key)
            if c is None:
                c = remap[key] = len(classes)
                classes.append([])
            labels[i] = c
            classes[c].append(i)
        return cls(store, relation, labels, classes)

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    def __len__(self):
        return len(self.classes)

    def related(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def class_of(self, i: int) -> list[int]:
        return self.classes[self.labels[i]]

    def matrix(self) -> np.ndarray:
        return self.labels[:, None] == self.labels[None, :]

    def texts(self) -> list[list[str]]:
        return [[self.store.text(i) for i in c] for c in self.classes]

    def same_partition(self, other: Classification) -> bool:
        return np.array_equal(self.labels, other.labels)

    def to_json(self) -> dict:
        return {"relation": self.relation, "classes": self.texts()}


def _ext_table(store: ElementStore) -> np.ndarray:
    """Cayley table of S¹: one extra index acting as an adjoined identity."""
    t = store.table
    size = len(store)
    ext = np.empty((size + 1, size + 1), dtype=t.dtype)
    ext[:size, :size] = t
    ext[size, :size] = np.arange(size)
    ext[:size, size] = np.arange(size)
    ext[size, size] = size
    return ext


def _canonical(row: np.ndarray) -> bytes:
    # relabel values by first occurrence; equal outputs <=> equal kernels of the row
    _, first, inv = np.unique(row, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int32)
    rank[np.argsort(first)] = np.arange(len(first), dtype=np.int32)
    return rank[inv.ravel()].tobytes()


def _compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def _join(store: ElementStore, relation: str, *parts: Classification) -> Classification:
    size = len(store)
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in parts:
        for cls in part.classes:
            for i in cls[1:]:
                ra, rb = find(cls[0]), find(i)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return Classification.from_labels(store, relation, [find(i) for i in range(size)])


def _from_matrix(store: ElementStore, relation: str, mat: np.ndarray) -> Classification:
    if not (np.array_equal(mat, mat.T) and mat.diagonal().all() and np.array_equal(_compose(mat, mat), mat)):
        raise MapError(f"{relation} on {store.spec.label} is not an equivalence")
    return Classification.from_labels(store, relation, [row.tobytes() for row in mat])


def green_classes(store: ElementStore, relation: str) -> Classification:
    """Definitional Green's classes: compare principal one-sided ideals."""
    if relation not in GREEN:
        raise ValueError(f"not a Green's relation: {relation!r}")
    ext = _ext_table(store)
    size = len(store)
    if relation == "L":
        return Classification.from_labels(store, "L", [frozenset(ext[:, a].tolist()) for a in range(size)])
    if relation == "R":
        return Classification.from_labels(store, "R", [frozenset(ext[a, :].tolist()) for a in range(size)])
    lcls, rcls = green_classes(store, "L"), green_classes(store, "R")
    if relation == "H":
        return Classification.from_labels(store, "H", list(zip(lcls.labels.tolist(), rcls.labels.tolist())))
    lr = _compose(lcls.matrix(), rcls.matrix())
    rl = _compose(rcls.matrix(), lcls.matrix())
    if not np.array_equal(lr, rl):
        raise MapError(f"L∘R != R∘L on {store.spec.label}")
    return _from_matrix(store, "D", lr)


def starred_classes(store: ElementStore, relation: str) -> Classification:
    """Definitional starred classes via the pair-cancellation criterion over S¹."""
    if relation not in STARRED:
        raise ValueError(f"not a starred relation: {relation!r}")
    ext = _ext_table(store)
    size = len(store)
    if relation == "L*":
        return Classification.from_labels(store, "L*", [_canonical(ext[a, :]) for a in range(size)])
    if relation == "R*":
        return Classification.from_labels(store, "R*", [_canonical(ext[:, a]) for a in range(size)])
    lcls, rcls = starred_classes(store, "L*"), starred_classes(store, "R*")
    if relation == "H*":
        return Classification.from_labels(store, "H*", list(zip(lcls.labels.tolist(), rcls.labels.tolist())))
    return _join(store, "D*", lcls, rcls)


def alternation_depth(lcls: Classification, rcls: Classification, joined: Classification) -> int:
    """Least k such that both alternating k-fold compositions of the two relations equal the join."""
    target = joined.matrix()
    lm, rm = lcls.matrix(), rcls.matrix()
    a, b = lm, rm
    k = 1
    while not (np.array_equal(a, target) and np.array_equal(b, target)):
        nxt = (rm, lm) if k % 2 else (lm, rm)
        a, b = _compose(a, nxt[0]), _compose(b, nxt[1])
        k += 1
        if k > len(target) + 1:
            raise MapError("alternating compositions did not stabilize")
    return k


# -- characterizations ------------------------------------------------------


def char_L(a: PartialMap, b: PartialMap) -> bool:
    """Same image and the same minimum in each corresponding kernel block."""
    fa, fb = to_block_form(a), to_block_form(b)
    return fa.images == fb.images and fa.mins == fb.mins


def _char_key(store: ElementStore, relation: str, i: int):
    if i == store.zero:
        return ("zero",)
    a = store.elements[i]
    if relation in ("L", "D"):
        bf = to_block_form(a)
        return (bf.images, bf.mins)
    if relation in ("R", "H", "H*"):
        return a
    if relation == "L*":
        return a.image
    if relation == "R*":
        return a.kernel()
    if relation in ("D*", "J*"):
        return a.height
    raise ValueError(f"unknown relation {relation!r}")


def characterized_classes(store: ElementStore, relation: str) -> Classification:
    """Classes predicted by the structural characterizations, without multiplying."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    return Classification.from_labels(store, relation, [_char_key(store, relation, i) for i in store])


# -- inverse-ideal route ----------------------------------------------------


def _left_factor(a: PartialMap, b: PartialMap) -> PartialMap | None:
    # some g in P_n with g*b = a, if one exists
    pre = {}
    for x, y in enumerate(b.values, 1):
        if y:
            pre.setdefault(y, x)
    v = []
    for y in a.values:
        if y and y not in pre:
            return None
        v.append(pre[y] if y else 0)
    return PartialMap._raw(tuple(v))


def _right_factor(a: PartialMap, b: PartialMap) -> PartialMap | None:
    # some g in P_n with b*g = a, if one exists
    g = {}
    for x, (ya, yb) in enumerate(zip(a.values, b.values), 1):
        if ya:
            if not yb or g.setdefault(yb, ya) != ya:
                return None
    return PartialMap._raw(tuple(g.get(x, 0) for x in range(1, a.n + 1)))


def ambient_L(a: PartialMap, b: PartialMap) -> bool:
    """Green's L in P_n, decided by constructing both factor witnesses."""
    g, h = _left_factor(a, b), _left_factor(b, a)
    return g is not None and h is not None and g * b == a and h * a == b


def ambient_R(a: PartialMap, b: PartialMap) -> bool:
    """Green's R in P_n, decided by constructing both factor witnesses."""
    g, h = _right_factor(a, b), _right_factor(b, a)
    return g is not None and h is not None and b * g == a and a * h == b


def inverse_ideal_classes(store: ElementStore, relation: str) -> Classification:
    """L* or R* on a store obtained as the restriction of L or R of P_n."""
    test = {"L*": ambient_L, "R*": ambient_R}[relation]
    size = len(store)
    mat = np.zeros((size, size), dtype=bool)
    for i in store:
        for j in store:
            if i == store.zero or j == store.zero:
                mat[i, j] = i == j
            else:
                mat[i, j] = test(store.elements[i], store.elements[j])
    return _from_matrix(store, relation, mat)


# -- composition of starred relations ---------------------------------------


@dataclass
class DStarReport:
    label: str
    depth: int
    equals_lrl: bool
    equals_rlr: bool
    equals_height: bool
    lr_equals_rl: bool
    witness: tuple | None  # (a, b) in L*∘R* but not in R*∘L*, as element texts
    link: str | None  # some d with a L* d R* b

    @property
    def ok(self) -> bool:
        return self.equals_lrl and self.equals_rlr and self.equals_height


def starred_link(store: ElementStore, i: int, j: int, first: str, second: str) -> int | None:
    """Smallest k with i ``first`` k and k ``second`` j, or None."""
    c1, c2 = starred_classes(store, first), starred_classes(store, second)
    both = set(c1.class_of(i)) & set(c2.class_of(j))
    return min(both) if both else None


def d_star_composition_check(store: ElementStore) -> DStarReport:
    lcls, rcls = starred_classes(store, "L*"), starred_classes(store, "R*")
    dcls = _join(store, "D*", lcls, rcls)
    lm, rm, dm = lcls.matrix(), rcls.matrix(), dcls.matrix()
    lr, rl = _compose(lm, rm), _compose(rm, lm)
    lrl, rlr = _compose(lr, lm), _compose(rl, rm)
    witness = link = None
    diff = np.argwhere(lr & ~rl)
    if len(diff):
        i, j = (int(x) for x in diff[0])
        k = starred_link(store, i, j, "L*", "R*")
        witness = (store.text(i), store.text(j))
        link = store.text(k)
    return DStarReport(
        label=store.spec.label,
        depth=alternation_depth(lcls, rcls, dcls),
        equals_lrl=np.array_equal(lrl, dm),
        equals_rlr=np.array_equal(rlr, dm),
        equals_height=dcls.same_partition(characterized_classes(store, "D*")),
        lr_equals_rl=np.array_equal(lr, rl),
        witness=witness,
        link=link,
    )


# -- J* ---------------------------------------------------------------------


def principal_star_ideal(store: ElementStore, i: int, dstar: Classification | None = None) -> np.ndarray:
    """Boolean mask of J*(e_i): least ideal containing e_i that is a union of D*-classes."""
    if dstar is None:
        dstar = starred_classes(store, "D*")
    t = store.table
    mask = np.zeros(len(store), dtype=bool)
    mask[i] = True
    while True:
        idx = np.flatnonzero(mask)
        new = mask.copy()
        new[t[idx, :].ravel()] = True
        new[t[:, idx].ravel()] = True
        new |= np.isin(dstar.labels, dstar.labels[new])
        if np.array_equal(new, mask):
            return mask
        mask = new


def j_star_classes(store: ElementStore) -> Classification:
    dstar = starred_classes(store, "D*")
    ideals = [principal_star_ideal(store, i, dstar).tobytes() for i in store]
    return Classification.from_labels(store, "J*", ideals)


def classify(store: ElementStore, relation: str) -> Classification:
    if relation in GREEN:
        return green_classes(store, relation)
    if relation in STARRED:
        return starred_classes(store, relation)
    if relation == "J*":
        return j_star_classes(store)
    raise ValueError(f"unknown relation {relation!r}")


# -- reports ----------------------------------------------------------------


@dataclass
class AbundanceReport:
    label: str
    l_star: list  # per L*-class: idempotent indices
    r_star: list
    abundant: bool
    unique_per_r_star: bool


def abundance_report(store: ElementStore) -> AbundanceReport:
    idem = set(idempotents(store, include_zero=True))
    lcls, rcls = starred_classes(store, "L*"), starred_classes(store, "R*")
    ls = [[i for i in c if i in idem] for c in lcls.classes]
    rs = [[i for i in c if i in idem] for c in rcls.classes]
    return AbundanceReport(
        label=store.spec.label,
        l_star=ls,
        r_star=rs,
        abundant=all(ls) and all(rs),
        unique_per_r_star=all(len(e) == 1 for e in rs),
    )


@dataclass
class RegularityReport:
    label: str
    regular: list
    idempotent: list
    regular_is_idempotent: bool
    is_regular: bool
    nonregular_witness: str | None


def regularity_report(store: ElementStore) -> RegularityReport:
    t = store.table
    regular = []
    for a in store:
        # a is regular iff a b a = a for some b in S
        if (t[t[a, :], a] == a).any():
            regular.append(a)
    idem = idempotents(store, include_zero=True)
    missing = [a for a in store if a not in set(regular)]
    return RegularityReport(
        label=store.spec.label,
        regular=regular,
        idempotent=idem,
        regular_is_idempotent=sorted(regular) == sorted(idem),
        is_regular=not missing,
        nonregular_witness=store.text(missing[0]) if missing else None,
    )


def eggbox_render(lcls: Classification, rcls: Classification) -> str:
    """Text egg-box diagrams, one per class of the join of the two relations.

    Rows are R-classes, columns L-classes; a cell shows the number of
    elements in the intersection, starred when it holds an idempotent.
    """
    if lcls.store is not rcls.store:
        raise ValueError("classifications come from different stores")
    store = lcls.store
    idem = set(idempotents(store, include_zero=True))
    joined = _join(store, "D", lcls, rcls)
    out = []
    for k, members in enumerate(joined.classes):
        rows = sorted({int(rcls.labels[i]) for i in members}, key=lambda c: rcls.classes[c][0])
        cols = sorted({int(lcls.labels[i]) for i in members}, key=lambda c: lcls.classes[c][0])
        h = store.height(members[0])
        out.append(f"class {k} (height {'zero' if h < 0 else h}): {len(rows)} x {len(cols)}")
        rlabels = [store.text(rcls.classes[r][0]) for r in rows]
        clabels = [store.text(lcls.classes[c][0]) for c in cols]
        width = max(len(s) for s in rlabels)
        cw = [max(len(s), 2) for s in clabels]
        out.append(" " * width + " | " + " ".join(s.rjust(w) for s, w in zip(clabels, cw)))
        for r, rl in zip(rows, rlabels):
            cells = []
            for c, w in zip(cols, cw):
                inter = [i for i in rcls.classes[r] if lcls.labels[i] == c]
                if inter:
                    cell = str(len(inter)) + ("*" if any(i in idem for i in inter) else "")
                else:
                    cell = "."
                cells.append(cell.rjust(w))
            out.append(rl.rjust(width) + " | " + " ".join(cells))
        out.append("")
    return "\n".join(out)
