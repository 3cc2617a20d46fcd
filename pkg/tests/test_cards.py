import numpy as np
import pytest

from bidkit.cards import (Deal, card_index, card_name, card_rank, card_suit,
                          deal_from_line, deal_to_line, new_deal,
                          read_deal_file, write_deal_file)


def test_card_indexing():
    assert card_suit(0) == 0 and card_rank(0) == 0
    assert card_suit(51) == 3 and card_rank(51) == 12
    assert card_index(3, 12) == 51
    assert card_name(51) == "SA"
    assert card_name(0) == "C2"


def test_new_deal_deterministic():
    d1 = new_deal(np.random.default_rng(42))
    d2 = new_deal(np.random.default_rng(42))
    assert d1 == d2


def test_hands_have_13_cards():
    d = new_deal(np.random.default_rng(0))
    for p in range(4):
        assert len(d.hand(p)) == 13


def test_holder_frequencies_uniform():
    rng = np.random.default_rng(7)
    counts = np.zeros((52, 4))
    n = 2000
    for _ in range(n):
        d = new_deal(rng)
        for c in range(52):
            counts[c, d.holder[c]] += 1
    # binomial(n, 1/4): 3 sigma band
    sigma = np.sqrt(n * 0.25 * 0.75)
    assert (np.abs(counts - n / 4) < 3.5 * sigma + 5).all()


def test_bad_deals_rejected():
    with pytest.raises(ValueError):
        Deal(tuple([0] * 52))
    with pytest.raises(ValueError):
        Deal(tuple(range(4)) * 13, dd_table=(1, 2, 3))


def test_deal_line_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    deals = [new_deal(rng) for _ in range(5)]
    deals[0] = deals[0].with_dd_table([i % 14 for i in range(20)])
    assert deal_from_line(deal_to_line(deals[0])) == deals[0]
    path = tmp_path / "deals.txt"
    write_deal_file(path, deals, header="test file")
    assert read_deal_file(path) == deals


def test_deal_line_errors():
    with pytest.raises(ValueError):
        deal_from_line("0 1 2")
    d = new_deal(np.random.default_rng(0))
    bad = deal_to_line(d) + " " + " ".join(["99"] * 20)
    with pytest.raises(ValueError):
        deal_from_line(bad)


def test_hcp():
    d = new_deal(np.random.default_rng(0))
    assert sum(d.hcp(p) for p in range(4)) == 40
