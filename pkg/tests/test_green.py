import pytest

import oracles
from schroeder.core import Family, MapError, MonoidSpec, parse_map
from schroeder.enumeration import enumerate_family
from schroeder.green import (
    abundance_report,
    alternation_depth,
    ambient_L,
    ambient_R,
    char_L,
    characterized_classes,
    classify,
    d_star_composition_check,
    eggbox_render,
    inverse_ideal_classes,
    principal_star_ideal,
    regularity_report,
    starred_classes,
)


def specs(max_n, families=Family.ALL):
    for n in range(1, max_n + 1):
        for f in families:
            if f in Family.WITH_P:
                for p in range(1, n + 1):
                    yield MonoidSpec(f, n, p)
            else:
                yield MonoidSpec(f, n)


def as_sets(cls):
    store = cls.store
    key = lambda i: store.element(i).values if store.element(i) else oracles.ZERO  # noqa: E731
    return {frozenset(key(i) for i in c) for c in cls.classes}


SMALL_SPECS = list(specs(3))


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
def test_green_against_ideal_oracle(spec):
    store = enumerate_family(spec)
    sg = oracles.Semigroup(spec.family, spec.n, spec.p)
    assert as_sets(classify(store, "L")) == sg.partition(sg.rel_L)
    assert as_sets(classify(store, "R")) == sg.partition(sg.rel_R)
    assert as_sets(classify(store, "H")) == sg.partition(sg.rel_H)
    assert as_sets(classify(store, "D")) == sg.partition(sg.rel_D)


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
def test_starred_against_cancellation_oracle(spec):
    store = enumerate_family(spec)
    sg = oracles.Semigroup(spec.family, spec.n, spec.p)
    lstar, rstar = sg.partition(sg.rel_Lstar), sg.partition(sg.rel_Rstar)
    assert as_sets(starred_classes(store, "L*")) == lstar
    assert as_sets(starred_classes(store, "R*")) == rstar
    assert as_sets(starred_classes(store, "H*")) == sg.partition(sg.rel_Hstar)
    assert as_sets(starred_classes(store, "D*")) == sg.join(sg.rel_Lstar, sg.rel_Rstar)


@pytest.mark.parametrize("spec", list(specs(4)), ids=lambda s: s.label)
@pytest.mark.parametrize("rel", ["L", "R", "H", "D", "L*", "R*", "H*", "D*"])
def test_definitions_match_characterizations(spec, rel):
    store = enumerate_family(spec)
    assert classify(store, rel).same_partition(characterized_classes(store, rel))


@pytest.mark.parametrize("spec", list(specs(4, (Family.LS, Family.SS, Family.K, Family.RSS))), ids=lambda s: s.label)
@pytest.mark.parametrize("rel", ["L*", "R*"])
def test_inverse_ideal_route(spec, rel):
    store = enumerate_family(spec)
    assert inverse_ideal_classes(store, rel).same_partition(starred_classes(store, rel))


def test_ambient_relations_examples():
    a, b = parse_map("1->1;3->2", 3), parse_map("2->1;3->2", 3)
    assert ambient_L(a, b)  # same image
    assert not ambient_R(a, b)
    c = parse_map("1->1;3->3", 3)
    assert ambient_R(a, c) and not ambient_L(a, c)


def test_char_L_uses_block_minima():
    # same image, different block minima
    a, b = parse_map("2->1", 3), parse_map("3->1", 3)
    assert not char_L(a, b)
    assert char_L(parse_map("2->1;3->3", 3), parse_map("2,3->1", 3)) is False
    assert char_L(parse_map("2->1", 3), parse_map("2,3->1", 3))


@pytest.mark.parametrize("spec", list(specs(4, (Family.LS, Family.SS, Family.K, Family.M))), ids=lambda s: s.label)
def test_j_star_equals_d_star(spec):
    store = enumerate_family(spec)
    assert classify(store, "J*").same_partition(classify(store, "D*"))


@pytest.mark.parametrize("spec", [MonoidSpec("ls", 3), MonoidSpec("ss", 3)], ids=lambda s: s.label)
def test_principal_star_ideal_is_an_ideal(spec):
    store = enumerate_family(spec)
    t = store.table
    for i in store:
        mask = principal_star_ideal(store, i)
        idx = mask.nonzero()[0]
        assert mask[t[idx, :]].all() and mask[t[:, idx]].all()
        assert max(store.height(j) for j in idx) == store.height(i)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_star_on_ls(n):
    rep = d_star_composition_check(enumerate_family(MonoidSpec(Family.LS, n)))
    assert rep.ok
    assert rep.depth == 3
    assert not rep.lr_equals_rl


def test_d_star_two_point_chain():
    # on LS_2 the two one-step compositions already differ; on SS_2 they agree
    rep = d_star_composition_check(enumerate_family(MonoidSpec(Family.LS, 2)))
    assert rep.witness == ("1->1", "2->2")
    assert rep.link == "2->1"
    rep = d_star_composition_check(enumerate_family(MonoidSpec(Family.SS, 2)))
    assert rep.lr_equals_rl and rep.depth == 2


def test_alternation_depth_trivial():
    store = enumerate_family(MonoidSpec(Family.RLS, 2, 2))
    lc, rc = starred_classes(store, "L*"), starred_classes(store, "R*")
    assert alternation_depth(lc, rc, starred_classes(store, "D*")) <= 1


@pytest.mark.parametrize("spec", list(specs(4, (Family.LS, Family.SS, Family.K, Family.M, Family.RLS, Family.RSS))), ids=lambda s: s.label)
def test_abundance(spec):
    rep = abundance_report(enumerate_family(spec))
    assert rep.abundant and rep.unique_per_r_star


def test_ss_prime_is_not_abundant():
    rep = abundance_report(enumerate_family(MonoidSpec(Family.SS_PRIME, 3)))
    assert not rep.abundant


@pytest.mark.parametrize("spec", list(specs(4)), ids=lambda s: s.label)
def test_regular_elements_are_idempotent(spec):
    assert regularity_report(enumerate_family(spec)).regular_is_idempotent


def test_regularity_examples():
    assert regularity_report(enumerate_family(MonoidSpec(Family.M, 4, 1))).is_regular
    assert regularity_report(enumerate_family(MonoidSpec(Family.RLS, 3, 3))).is_regular
    rep = regularity_report(enumerate_family(MonoidSpec(Family.K, 4, 3)))
    assert not rep.is_regular and rep.nonregular_witness is not None


def test_eggbox_ls2():
    store = enumerate_family(MonoidSpec(Family.LS, 2))
    text = eggbox_render(classify(store, "L"), classify(store, "R"))
    blocks = [b for b in text.strip().split("\n\n")]
    assert len(blocks) == 5  # D = L: five classes
    assert blocks[0].splitlines()[0] == "class 0 (height 0): 1 x 1"
    assert any(b.startswith("class 1 (height 1): 2 x 1") for b in blocks)
    starred = eggbox_render(starred_classes(store, "L*"), starred_classes(store, "R*"))
    assert "3 x 2" in starred


def test_eggbox_rejects_mixed_stores():
    a = enumerate_family(MonoidSpec(Family.LS, 2))
    b = enumerate_family(MonoidSpec(Family.LS, 2))
    with pytest.raises(ValueError):
        eggbox_render(classify(a, "L"), classify(b, "R"))


def test_classify_unknown_relation():
    with pytest.raises(ValueError):
        classify(enumerate_family(MonoidSpec(Family.LS, 1)), "Q")


def test_classification_json_and_texts():
    cls = classify(enumerate_family(MonoidSpec(Family.RLS, 2, 1)), "L*")
    js = cls.to_json()
    assert js["relation"] == "L*"
    assert sorted(t for c in js["classes"] for t in c) == sorted(["0", "1->1", "2->1", "2->2", "1,2->1"])


def test_d_raises_if_not_an_equivalence():
    store = enumerate_family(MonoidSpec(Family.LS, 2))
    from schroeder.green import _from_matrix
    import numpy as np

    with pytest.raises(MapError):
        _from_matrix(store, "X", np.eye(len(store), k=1, dtype=bool))
