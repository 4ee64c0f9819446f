import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serrelab.errors import CycleDetected, GuardrailExceeded, NotALattice, RedundantCover
from serrelab.lattice import (
    Antichain,
    IntervalRef,
    all_antichains_over,
    boolean_lattice,
    boolean_partner,
    build_lattice,
    chain,
    chain_product,
    classify,
    is_boolean_antichain,
    is_dual_boolean_antichain,
    lattice_from_json_dict,
    lattice_to_json_dict,
    min_complement_antichain,
    order_dual,
    poset_isomorphism,
    product,
)


def test_two_chain():
    lat = build_lattice(["0", "1"], [("0", "1")])
    assert lat.bottom_label == "0" and lat.top_label == "1"
    assert lat.meet("0", "1") == "0" and lat.join("0", "1") == "1"


def test_pentagon_build(pentagon):
    assert pentagon.bottom_label == "0"
    assert pentagon.top_label == "1"
    assert pentagon.join("a", "b") == "1"
    assert pentagon.meet("a", "b") == "0"


def test_appendix_lattice_build(appendix9):
    assert appendix9.bottom_label == "1"
    assert appendix9.top_label == "9"
    assert appendix9.join("2", "3") == "9"
    assert appendix9.meet("7", "5") == "4"


def test_cycle_detected():
    with pytest.raises(CycleDetected):
        build_lattice(["a", "b"], [("a", "b"), ("b", "a")])


def test_redundant_cover_names_pair():
    with pytest.raises(RedundantCover) as err:
        build_lattice(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert err.value.pair == ("a", "c")


def test_not_a_lattice_names_pair():
    # two maximal elements -> no join
    with pytest.raises(NotALattice) as err:
        build_lattice(["x", "y", "z"], [("x", "y"), ("x", "z")])
    assert set(err.value.pair) == {"y", "z"}


def test_guardrail():
    n = 10_001
    labels = [str(i) for i in range(n)]
    with pytest.raises(GuardrailExceeded):
        build_lattice(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def test_meet_join_oracle_exhaustive(pentagon, appendix9):
    for lat in (pentagon, appendix9, boolean_lattice(3)):
        for a, b in itertools.product(range(lat.n), repeat=2):
            lower = [c for c in range(lat.n) if lat.leq_i(c, a) and lat.leq_i(c, b)]
            maximal = [c for c in lower if not any(d != c and lat.leq_i(c, d) for d in lower)]
            assert len(maximal) == 1
            assert lat.meet_tab[a][b] == maximal[0]
            upper = [c for c in range(lat.n) if lat.leq_i(a, c) and lat.leq_i(b, c)]
            minimal = [c for c in upper if not any(d != c and lat.leq_i(d, c) for d in upper)]
            assert len(minimal) == 1
            assert lat.join_tab[a][b] == minimal[0]


def test_leq_compatible_with_meet(pentagon):
    lat = pentagon
    for a, b in itertools.product(lat.labels, repeat=2):
        assert lat.leq(a, b) == (lat.meet(a, b) == a)


def test_interval_members(pentagon):
    assert sorted(pentagon.interval_members(IntervalRef("0", "c"))) == ["0", "a", "c"]
    with pytest.raises(ValueError):
        pentagon.interval_members(IntervalRef("a", "b"))


def test_min_complement_antichain(pentagon):
    full = min_complement_antichain(pentagon, IntervalRef("0", "1"))
    assert full.members == frozenset()
    c3 = chain(3)
    ac = min_complement_antichain(c3, IntervalRef("0", "1"))
    assert ac.members == frozenset({"2"})
    ac2 = min_complement_antichain(pentagon, IntervalRef("0", "a"))
    assert ac2.members == frozenset({"b", "c"})
    assert ac2.base == "0" and ac2.mode == "over"


def test_min_complement_reconstructs_interval(pentagon, appendix9):
    from serrelab.reps import antichain_module, interval_module

    for lat in (pentagon, appendix9):
        for lo, hi in itertools.product(lat.labels, repeat=2):
            if not lat.leq(lo, hi):
                continue
            ref = IntervalRef(lo, hi)
            ac = min_complement_antichain(lat, ref)
            assert antichain_module(lat, ac).dims == interval_module(lat, ref).dims


def test_boolean_antichain_basics(pentagon):
    b2 = boolean_lattice(2)
    atoms = frozenset(
        b2.labels[i] for i in range(b2.n) if len(b2.poset.lower_covers[i]) == 1
    )
    assert is_boolean_antichain(b2, Antichain(atoms, b2.bottom_label, "over"))
    # singleton antichains are always boolean
    assert is_boolean_antichain(chain(2), Antichain(frozenset({"1"}), "0", "over"))
    # gamma is injective and meet-compatible here, so this one is boolean too
    assert is_boolean_antichain(pentagon, Antichain(frozenset({"a", "b"}), "0", "over"))


def test_non_boolean_antichain_diamond():
    m3 = build_lattice(
        ["0", "x", "y", "z", "1"],
        [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")],
    )
    tri = Antichain(frozenset({"x", "y", "z"}), "0", "over")
    assert not is_boolean_antichain(m3, tri)
    pair = Antichain(frozenset({"x", "y"}), "0", "over")
    assert is_boolean_antichain(m3, pair)


def test_boolean_partner_bijection(pentagon, appendix9):
    for lat in (pentagon, boolean_lattice(3), appendix9):
        for base in lat.labels:
            for ac in all_antichains_over(lat, base, include_empty=False):
                if is_boolean_antichain(lat, ac):
                    partner = boolean_partner(lat, ac)
                    assert is_dual_boolean_antichain(lat, partner)


def test_classify_divisor_and_boolean():
    assert classify(chain_product([3, 2])).is_divisor_lattice
    assert classify(chain_product([3, 2])).is_distributive
    b3 = classify(boolean_lattice(3))
    assert b3.is_boolean and b3.chain_sizes == (2, 2, 2)
    assert classify(chain(1)).is_divisor_lattice


def test_classify_kite_and_pentagon(pentagon, kite, appendix9):
    ck = classify(kite)
    assert ck.is_distributive and not ck.is_divisor_lattice
    cp = classify(pentagon)
    assert not cp.is_distributive and cp.is_semidistributive
    ca = classify(appendix9)
    assert not ca.is_semidistributive


def test_product_unit_and_diamond():
    c2 = chain(2)
    b2 = product(c2, c2)
    assert poset_isomorphism(b2, boolean_lattice(2)) is not None
    one = chain(1)
    lat = product(one, chain(3))
    assert poset_isomorphism(lat, chain(3)) is not None


def test_product_c2_c3_is_divisor():
    lat = product(chain(2), chain(3))
    assert len(lat) == 6
    c = classify(lat)
    assert c.is_divisor_lattice and sorted(c.chain_sizes) == [2, 3]


def test_product_associative_up_to_relabel():
    a, b, c = chain(2), chain(3), chain(2)
    left = product(product(a, b), c)
    right = product(a, product(b, c))
    assert poset_isomorphism(left, right) is not None


def test_json_roundtrip(appendix9):
    data = lattice_to_json_dict(appendix9)
    again = lattice_from_json_dict(json.loads(json.dumps(data)))
    assert again.labels == appendix9.labels
    assert again.covers == appendix9.covers


def test_json_rejects_redundant_covers():
    data = {"elements": ["a", "b", "c"], "covers": [["a", "b"], ["b", "c"], ["a", "c"]]}
    with pytest.raises(RedundantCover):
        lattice_from_json_dict(data)


def test_order_dual(pentagon):
    d = order_dual(pentagon)
    assert d.bottom_label == "1" and d.top_label == "0"
    assert poset_isomorphism(order_dual(d), pentagon) is not None


def test_boolean_antichain_counts_match_dual(pentagon, appendix9):
    # boolean antichains over some base and dual boolean antichains under
    # some base both enumerate the boolean sublattices
    for lat in (pentagon, boolean_lattice(3), appendix9, chain(4)):
        over = sum(
            1
            for base in lat.labels
            for ac in all_antichains_over(lat, base)
            if is_boolean_antichain(lat, ac)
        )
        dual = order_dual(lat)
        under = 0
        for base in dual.labels:
            for ac in all_antichains_over(dual, base):
                mirrored = Antichain(ac.members, ac.base, "under")
                if is_dual_boolean_antichain(lat, mirrored):
                    under += 1
        assert over == under


# random meet/join-closed subsets of B4 are sublattices; they must build
# cleanly and inherit distributivity
@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 15), min_size=1, max_size=8))
def test_random_sublattice_of_boolean(seed):
    members = set(seed)
    while True:
        new = set(members)
        for a, b in itertools.product(members, repeat=2):
            new.add(a & b)
            new.add(a | b)
        if new == members:
            break
        members = new
    elems = sorted(members)
    covers = []
    for a in elems:
        for b in elems:
            if a != b and a & b == a:
                if not any(c != a and c != b and a & c == a and c & b == c for c in elems):
                    covers.append((str(a), str(b)))
    lat = build_lattice([str(x) for x in elems], covers)
    assert classify(lat).is_distributive
    for a, b in itertools.product(elems, repeat=2):
        assert lat.meet(str(a), str(b)) == str(a & b)
        assert lat.join(str(a), str(b)) == str(a | b)
