"""Buyer-seller matrices and stable matching."""
import numpy as np
import pytest

from hsub.graphs import GraphFormatError
from hsub.market import (MarketInstance, PreferenceSpec, blocking_pairs,
                         generate_random_market, parse_market,
                         serialize_market, stable_matching,
                         transaction_matrices)
from hsub.oracle import oracle_stable_matching, oracle_transaction_matrices


def two_by_two():
    """Buyer 1 wants only item 2; seller 1 holds only item 1, so buyer 1
    can transact with seller 2 alone.  All quotes meet reserves."""
    return MarketInstance.build(
        2,
        [{2: 4.0}, {1: 3.0, 2: 5.0}],
        [{1: 2.0}, {1: 1.0, 2: 2.0}],
    )


def test_single_item_matrices():
    inst = MarketInstance.build(1, [{1: 5.0}], [{1: 3.0}])
    tm = transaction_matrices(inst)
    assert tm.counts.tolist() == [[1]]
    assert tm.prices.tolist() == [[5.0]]
    assert tm.reserves.tolist() == [[3.0]]


def test_two_by_two_counts():
    tm = transaction_matrices(two_by_two())
    assert tm.counts.tolist() == [[0, 1], [1, 2]]


def test_two_by_two_count_matching():
    inst = two_by_two()
    matching = stable_matching(inst, PreferenceSpec("count"))
    # buyer 2 takes the two-item seller; buyer 1 is left with zero items
    assert matching == {1: 1, 2: 2}
    tm = transaction_matrices(inst)
    assert int(tm.counts[0, matching[1] - 1]) == 0
    assert blocking_pairs(inst, matching, PreferenceSpec("count")) == []


def test_empty_want_sets():
    inst = MarketInstance.build(4, [{}, {}], [{}, {}])
    tm = transaction_matrices(inst)
    assert not tm.counts.any() and not tm.prices.any() and not tm.reserves.any()


def test_single_agent_pairing():
    assert stable_matching(MarketInstance.build(3, [{}], [{2: 1.0}])) == {1: 1}


def test_reserve_above_quote_blocks_item():
    inst = MarketInstance.build(1, [{1: 2.0}], [{1: 3.0}])
    assert transaction_matrices(inst).counts.tolist() == [[0]]
    # equality transacts
    inst = MarketInstance.build(1, [{1: 3.0}], [{1: 3.0}])
    assert transaction_matrices(inst).counts.tolist() == [[1]]


@pytest.mark.parametrize("rule", ["count", "surplus", "price", "expr:P - R"])
def test_random_instances_match_oracle(rule):
    prefs = PreferenceSpec(rule)
    for trial in range(40):
        inst = generate_random_market(1 + trial % 7, 1 + trial % 15,
                                      seed=trial)
        tm = transaction_matrices(inst)
        c, p, r = oracle_transaction_matrices(inst)
        assert (tm.counts == c).all() and (tm.prices == p).all() \
            and (tm.reserves == r).all()
        mine = stable_matching(inst, prefs, tm)
        assert mine == oracle_stable_matching(inst, prefs)
        assert blocking_pairs(inst, mine, prefs, tm) == []


def test_matrix_invariants():
    for trial in range(30):
        tm = transaction_matrices(generate_random_market(6, 12, seed=trial))
        zero = tm.counts == 0
        assert not tm.prices[zero].any() and not tm.reserves[zero].any()
        assert (tm.reserves <= tm.prices).all()


def test_count_order_is_scale_invariant():
    inst = generate_random_market(6, 10, seed=42)
    scaled = MarketInstance.build(
        inst.k,
        [{l: 2.5 * w for l, w in b.items.items()} for b in inst.buyers],
        [{l: 2.5 * w for l, w in s.items.items()} for s in inst.sellers])
    assert (transaction_matrices(inst).counts
            == transaction_matrices(scaled).counts).all()
    assert stable_matching(inst) == stable_matching(scaled)


def test_expression_preferences():
    inst = generate_random_market(5, 8, seed=7)
    assert stable_matching(inst, PreferenceSpec("expr:P - R")) == \
        stable_matching(inst, PreferenceSpec("surplus"))
    # buyer and seller rules can differ
    mixed = PreferenceSpec("count", "price")
    m = stable_matching(inst, mixed)
    assert blocking_pairs(inst, m, mixed) == []


@pytest.mark.parametrize("bad", [
    "expr:__import__('os')", "expr:P.real", "expr:max(P, R)",
    "expr:X + 1", "expr:P * R", "expr:'s'", "mystery",
])
def test_preference_whitelist(bad):
    with pytest.raises(ValueError):
        PreferenceSpec(bad)


def test_instance_validation():
    with pytest.raises(ValueError):
        MarketInstance.build(2, [{1: 1.0}], [{1: 1.0}, {2: 1.0}])
    with pytest.raises(ValueError):
        MarketInstance.build(2, [{3: 1.0}], [{1: 1.0}])
    with pytest.raises(ValueError):
        MarketInstance.build(2, [{1: -1.0}], [{1: 1.0}])
    with pytest.raises(ValueError):
        MarketInstance.build(0, [], [])


def test_blocking_pairs_flags_bad_matching():
    inst = two_by_two()
    prefs = PreferenceSpec("count")
    swapped = {1: 2, 2: 1}
    # buyer 2 and seller 2 both strictly prefer each other to the swap
    assert (2, 2) in blocking_pairs(inst, swapped, prefs)
    with pytest.raises(ValueError):
        blocking_pairs(inst, {1: 1}, prefs)


def test_round_trip():
    for seed in range(5):
        inst = generate_random_market(4, 7, seed=seed)
        assert parse_market(serialize_market(inst)) == inst
    text = "# market\nmarket 2 3\nb 1 1:2.5 3:1.0\nb 2\ns 1 1:2.0\ns 2 2:0.5\n"
    inst = parse_market(text)
    assert inst.buyers[0].items == {1: 2.5, 3: 1.0}
    assert inst.buyers[1].items == {}


@pytest.mark.parametrize("text", [
    "b 1 1:2.0",                              # no header
    "market 1 1\nb 1 1:x\ns 1",               # bad price token
    "market 1 1\nb 1 1:1.0\nb 1\ns 1",        # duplicate buyer
    "market 1 1\nb 1 1:1.0",                  # missing seller line
    "market 1 1\nb 1 2:1.0\ns 1",             # item out of range
    "market 2 1\nb 1 1:1.0\ns 1 1:1.0",       # missing agents
])
def test_parse_rejects(text):
    with pytest.raises(GraphFormatError):
        parse_market(text)
