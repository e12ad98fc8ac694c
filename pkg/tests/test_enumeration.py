import itertools

import numpy as np
import pytest

import oracles
from schroeder.core import Family, MapError, MonoidSpec, compose, identity, make_partial_map
from schroeder.enumeration import (
    TABLE_CAP,
    CapExceeded,
    ElementStore,
    closure,
    enumerate_family,
    family_elements,
    idempotents,
    j_star_slice,
)

LARGE = [1, 2, 6, 22, 90, 394, 1806]
SMALL = [None, 1, 3, 11, 45, 197, 903]


def all_specs(n):
    for f in Family.ALL:
        if f in Family.WITH_P:
            for p in range(1, n + 1):
                yield MonoidSpec(f, n, p)
        else:
            yield MonoidSpec(f, n)


@pytest.mark.parametrize("n", range(7))
def test_ls_counts(n):
    assert len(family_elements(MonoidSpec(Family.LS, n))) == LARGE[n]
    assert oracles.large_schroeder(n) == LARGE[n]


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("family", [Family.SS, Family.SS_PRIME])
def test_small_counts(n, family):
    assert len(family_elements(MonoidSpec(family, n))) == SMALL[n]


@pytest.mark.parametrize("spec", [s for n in range(5) for s in all_specs(n)], ids=lambda s: s.label)
def test_structural_matches_naive_filter(spec):
    got = {a.values for a in family_elements(spec)}
    assert got == set(oracles.members(spec.family, spec.n, spec.p))
    assert family_elements(spec, "filter") == family_elements(spec)


def test_unknown_method():
    with pytest.raises(ValueError):
        family_elements(MonoidSpec(Family.LS, 2), "magic")


def test_empty_chain():
    store = enumerate_family(MonoidSpec(Family.LS, 0))
    assert len(store) == 1
    assert store.text(0) == "-"


def test_sorted_by_height_then_domain():
    els = family_elements(MonoidSpec(Family.LS, 4))
    hs = [a.height for a in els]
    assert hs == sorted(hs)
    assert els[0].is_empty()
    assert els[-1] == identity(4)


@pytest.mark.parametrize("spec", [MonoidSpec("ls", 3), MonoidSpec("ss", 4), MonoidSpec("m", 4, 2), MonoidSpec("rls", 4, 2), MonoidSpec("rss", 3, 1)], ids=lambda s: s.label)
def test_table_agrees_with_composition(spec):
    store = enumerate_family(spec)
    sg = oracles.Semigroup(spec.family, spec.n, spec.p)
    for i, j in itertools.product(store, repeat=2):
        a, b = store.element(i), store.element(j)
        expect = sg.mul(a.values if a else oracles.ZERO, b.values if b else oracles.ZERO)
        got = store.element(int(store.table[i, j]))
        assert (got.values if got else oracles.ZERO) == expect


def test_quotient_zero_is_last():
    store = enumerate_family(MonoidSpec(Family.RLS, 3, 2))
    assert store.zero == len(store) - 1
    assert store.text(store.zero) == "0"
    assert store.height(store.zero) == -1
    assert (store.table[store.zero] == store.zero).all()


def test_memo_path_matches_table():
    store = enumerate_family(MonoidSpec(Family.SS, 4))
    fresh = ElementStore(store.spec, store.elements)
    for i, j in [(0, 0), (3, 17), (44, 44), (10, 44)]:
        assert fresh._compose_index(i, j) == store.multiply(i, j)


def test_escaping_product_raises():
    a = make_partial_map(3, [(1, 1), (2, 2)])
    store = ElementStore(MonoidSpec(Family.LS, 3), [a, make_partial_map(3, [(2, 1)])])
    with pytest.raises(MapError):
        store.table


def test_caps():
    with pytest.raises(CapExceeded):
        enumerate_family(MonoidSpec(Family.LS, 8))
    assert TABLE_CAP >= 1806


def test_closure_of_idempotents_reaches_ideal():
    pool = family_elements(MonoidSpec(Family.LS, 4))
    gens = [a for a in pool if a.height == 2 and compose(a, a) == a]
    store = closure(gens, MonoidSpec(Family.K, 4, 2))
    assert store.complete
    assert len(store) == sum(1 for a in pool if a.height <= 2)


def test_closure_in_quotient_produces_zero():
    gens = [a for a in family_elements(MonoidSpec(Family.LS, 3)) if a.height == 1 and compose(a, a) == a]
    store = closure(gens, MonoidSpec(Family.RLS, 3, 1))
    assert store.complete
    assert store.zero is not None


def test_closure_rejects_foreign_generator():
    with pytest.raises(MapError):
        closure([identity(3)], MonoidSpec(Family.K, 3, 2))


def test_idempotents_and_slices():
    store = enumerate_family(MonoidSpec(Family.RSS, 3, 2))
    idem = idempotents(store)
    assert all(store.multiply(i, i) == i for i in idem)
    assert store.zero in idempotents(store, include_zero=True)
    assert j_star_slice(store, 2) == list(store.nonzero)
    assert np.array_equal(store.heights[:-1], np.full(len(store) - 1, 2))
