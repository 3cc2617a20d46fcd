import numpy as np
import pytest

from bidkit.auction import AuctionState, apply_call, legal_calls, replay
from bidkit.cards import new_deal
from bidkit.encoder import (BID_OFFSET, CARD_OFFSET, DecodeError,
                            DOUBLE_OFFSET, OPENING_PASS_OFFSET,
                            REDOUBLE_OFFSET, VECTOR_SIZE, encode,
                            reconstruct_history)


def random_state(rng, stop_prob=0.15):
    """A random reachable non-terminal auction state."""
    state = AuctionState()
    while True:
        if rng.random() < stop_prob:
            return state
        calls = sorted(legal_calls(state))
        call = calls[0] if rng.random() < 0.55 else \
            calls[int(rng.integers(len(calls)))]
        nxt = apply_call(state, call)
        if nxt.terminal:
            return state
        state = nxt


def test_vector_shape_and_blocks():
    d = new_deal(np.random.default_rng(0))
    f = encode(AuctionState(), d, 0)
    assert len(f) == VECTOR_SIZE
    assert f[0] == 1 and f[1] == 0          # phase: bidding
    assert f[2] == 1 and f[3] == 0          # vulnerability: neither
    assert f[CARD_OFFSET:].sum() == 13
    assert int(f.sum()) == 15               # opening position popcount


def test_wrong_player_rejected():
    d = new_deal(np.random.default_rng(0))
    with pytest.raises(ValueError):
        encode(AuctionState(), d, 1)


def test_opening_pass_and_bid_bits():
    d = new_deal(np.random.default_rng(0))
    s = replay([0, 3])  # N passes, E opens 1C; S to act
    f = encode(s, d, 2)
    assert f[OPENING_PASS_OFFSET + 2] == 1   # N is two seats before S
    assert f[BID_OFFSET + 0 * 4 + 3] == 1    # E (relative 3) made bid 1C
    assert f[OPENING_PASS_OFFSET:OPENING_PASS_OFFSET + 4].sum() == 1


def test_double_redouble_bits():
    d = new_deal(np.random.default_rng(0))
    s = replay([3, 1, 2, 0])  # N 1C, E doubles, S redoubles, W passes
    f = encode(s, d, 0)
    assert f[BID_OFFSET + 0] == 1            # own opening bid
    assert f[DOUBLE_OFFSET + 0 * 4 + 1] == 1
    assert f[REDOUBLE_OFFSET + 0 * 4 + 2] == 1


def test_round_trip_fuzz():
    rng = np.random.default_rng(17)
    for _ in range(3000):
        d = new_deal(rng)
        s = random_state(rng)
        f = encode(s, d, s.to_act)
        assert tuple(reconstruct_history(f)) == s.history


def test_distinct_histories_distinct_vectors():
    d = new_deal(np.random.default_rng(0))
    rng = np.random.default_rng(3)
    seen = {}
    for _ in range(500):
        s = random_state(rng)
        f = encode(s, d, s.to_act)
        key = f.tobytes()
        if key in seen:
            assert seen[key] == s.history
        seen[key] = s.history


def test_seat_relativity():
    """Rotating hands and shifting the auction one seat (via an extra
    opening pass) yields the same relative encoding."""
    from bidkit.cards import Deal
    from bidkit.encoder import OPENING_PASS_OFFSET

    base = new_deal(np.random.default_rng(8))
    rot = Deal(tuple((h + 1) % 4 for h in base.holder))
    f0 = encode(replay([3, 8]), base, 2)       # N 1C, E 2C; S to act
    f1 = encode(replay([0, 3, 8]), rot, 3)     # same auction shifted a seat
    assert (f0[CARD_OFFSET:] == f1[CARD_OFFSET:]).all()
    assert (f0[BID_OFFSET:CARD_OFFSET] == f1[BID_OFFSET:CARD_OFFSET]).all()
    diff = f1[OPENING_PASS_OFFSET:OPENING_PASS_OFFSET + 4].astype(int) - \
        f0[OPENING_PASS_OFFSET:OPENING_PASS_OFFSET + 4].astype(int)
    assert list(diff) == [0, 1, 0, 0]  # N's pass, one seat behind W


def test_empty_vector_decodes_to_empty_history():
    d = new_deal(np.random.default_rng(0))
    f = encode(AuctionState(), d, 0)
    assert reconstruct_history(f) == []


def test_inconsistent_vectors_rejected():
    d = new_deal(np.random.default_rng(0))
    f = encode(replay([3]), d, 1)
    g = f.copy()
    g[REDOUBLE_OFFSET + 0] = 1  # redouble bit without a double
    with pytest.raises(DecodeError):
        reconstruct_history(g)
    g = f.copy()
    g[DOUBLE_OFFSET + 4 * 10] = 1  # double of a bid never made
    with pytest.raises(DecodeError):
        reconstruct_history(g)
    with pytest.raises(DecodeError):
        reconstruct_history(f[:100])
