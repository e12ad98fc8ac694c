from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from schroeder.core import Family, MapError, MonoidSpec, identity, parse_map
from schroeder.enumeration import family_elements
from schroeder.rank import (
    binomial_identity_check,
    brute_min_rank,
    closed_rank,
    idempotent_count_formulas,
    idrank_equals_rank_check,
    ls_slice_count,
    proposed_generators,
    required_generators,
    schroeder_number,
    ss_slice_count,
    verify_rank,
)


@pytest.mark.parametrize("n", range(0, 15))
def test_large_schroeder_against_recurrence(n):
    assert schroeder_number("large", n) == oracles.large_schroeder(n)


@pytest.mark.parametrize("n", range(1, 15))
def test_small_is_half_large(n):
    assert 2 * schroeder_number("small", n) == schroeder_number("large", n)


@pytest.mark.parametrize("kind, n", [("small", 0), ("large", -1), ("huge", 3)])
def test_schroeder_bad_args(kind, n):
    with pytest.raises(ValueError):
        schroeder_number(kind, n)


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_binomial_identity(np_):
    assert binomial_identity_check(*np_)


def test_slice_counts_small_values():
    assert [ls_slice_count(3, p) for p in range(4)] == [1, 7, 5, 1]
    assert [ss_slice_count(3, p) for p in range(1, 4)] == [4, 4, 1]
    # kernels of height-p maps: choose the domain, then cut it into p convex blocks
    for n in range(1, 8):
        for p in range(1, n + 1):
            assert ls_slice_count(n, p) == sum(comb(n, r) * comb(r - 1, p - 1) for r in range(p, n + 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_idempotent_counts(n):
    ic = idempotent_count_formulas(n)
    assert ic.ok
    assert ic.ss_total == 3 ** (n - 1)


@pytest.mark.parametrize(
    "spec, rank",
    [
        (MonoidSpec("ls", 2), 4),
        (MonoidSpec("ss", 2), 3),
        (MonoidSpec("ls", 3), 6),
        (MonoidSpec("ss", 3), 5),
        (MonoidSpec("k", 3, 3), 6),
        (MonoidSpec("m", 3, 3), 5),
        (MonoidSpec("k", 4, 2), 17),
        (MonoidSpec("m", 4, 2), 12),
        (MonoidSpec("rls", 4, 1), 15),
        (MonoidSpec("rss", 5, 2), 32),
    ],
    ids=lambda x: x.label if isinstance(x, MonoidSpec) else str(x),
)
def test_closed_rank_values(spec, rank):
    assert closed_rank(spec) == rank


def test_closed_rank_edge_cases():
    assert closed_rank(MonoidSpec(Family.SS_PRIME, 3)) is None
    with pytest.raises(MapError):
        closed_rank(MonoidSpec(Family.LS, 0))


def _all_specs(n):
    for f in Family.ALL:
        if f in Family.WITH_P:
            yield from (MonoidSpec(f, n, p) for p in range(1, n + 1))
        elif f != Family.SS_PRIME:
            yield MonoidSpec(f, n)


@pytest.mark.parametrize("spec", [s for n in (1, 2, 3) for s in _all_specs(n)], ids=lambda s: s.label)
def test_brute_rank_matches_closed_form(spec):
    assert brute_min_rank(spec) == closed_rank(spec)


@pytest.mark.parametrize("n, rank", [(1, 1), (2, 2), (3, 5), (4, 8)])
def test_ss_prime_computed_rank(n, rank):
    # no closed form; these are the search results
    assert brute_min_rank(MonoidSpec(Family.SS_PRIME, n)) == rank


def test_brute_cap():
    with pytest.raises(MapError):
        brute_min_rank(MonoidSpec(Family.LS, 5))


@pytest.mark.parametrize("spec", [s for n in (4, 5) for s in _all_specs(n)], ids=lambda s: s.label)
def test_verify_rank_certificate(spec):
    rep = verify_rank(spec)
    assert rep.ok, rep.lower_bound_certificate
    assert rep.idempotent_generated
    assert len(rep.generating_set) == closed_rank(spec)


def test_verify_rank_with_search():
    rep = verify_rank(MonoidSpec(Family.LS, 3), brute_force=True)
    assert rep.ok and rep.brute_force_rank == 6
    js = rep.to_json()
    assert js["label"] == "LS_3" and js["ok"] is True


def test_verify_rank_ss_prime():
    rep = verify_rank(MonoidSpec(Family.SS_PRIME, 3), brute_force=True)
    assert rep.closed_form is None and rep.brute_force_rank == 5


def test_verify_rank_beyond_cap():
    rep = verify_rank(MonoidSpec(Family.LS, 8))
    assert not rep.ok and "cap" in rep.lower_bound_certificate


def test_proposed_generators_full_monoid_includes_identity():
    gens = proposed_generators(MonoidSpec(Family.LS, 3))
    assert identity(3) in gens and len(gens) == 6
    with pytest.raises(MapError):
        proposed_generators(MonoidSpec(Family.SS_PRIME, 3))


def test_required_generators():
    els = family_elements(MonoidSpec(Family.LS, 2))
    req = {str(a) for a in required_generators(els)}
    assert req == {"1->1;2->2", "1->1", "2->2", "1,2->1"}
    assert parse_map("2->1", 2) not in required_generators(els)


@pytest.mark.parametrize("spec", [MonoidSpec("k", 4, 2), MonoidSpec("rss", 4, 3), MonoidSpec("ls", 4)], ids=lambda s: s.label)
def test_idrank_equals_rank(spec):
    assert idrank_equals_rank_check(spec)
