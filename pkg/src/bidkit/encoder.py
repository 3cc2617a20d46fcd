"""Observation encoding: the 480-element binary feature vector.

Layout (offsets inclusive):
  0..1     phase, one-hot; element 0 (bidding) is always set
  2..3     vulnerability, one-hot; element 0 (neither side) is always set
  4..7     opening pass by relative player r (passes before the first bid)
  8..147   bid b made by relative player r         -> 8   + 4*(b-3) + r
  148..287 bid b doubled by relative player r      -> 148 + 4*(b-3) + r
  288..427 bid b redoubled by relative player r    -> 288 + 4*(b-3) + r
  428..479 card c held by the acting player        -> 428 + c

Relative player index r = (seat - acting_player) % 4, so 0 is the acting
player and 1 their left-hand opponent.  The encoding has perfect recall:
``reconstruct_history`` recovers the exact call sequence.
"""

from __future__ import annotations

import numpy as np

from .auction import (AuctionState, DOUBLE, FIRST_BID, PASS, REDOUBLE,
                      is_bid, replay)
from .cards import Deal, NUM_CARDS, NUM_PLAYERS

VECTOR_SIZE = 480
PHASE_OFFSET = 0
VUL_OFFSET = 2
OPENING_PASS_OFFSET = 4
BID_OFFSET = 8
DOUBLE_OFFSET = 148
REDOUBLE_OFFSET = 288
CARD_OFFSET = 428


class DecodeError(ValueError):
    """Raised when a feature vector does not describe a legal auction."""


def _rel(seat: int, player: int) -> int:
    return (seat - player) % NUM_PLAYERS


def encode(state: AuctionState, deal: Deal, player: int) -> np.ndarray:
    """Feature vector for ``player`` (who must be to act) at ``state``."""
    if player != state.to_act:
        raise ValueError(f"player {player} is not to act")
    f = np.zeros(VECTOR_SIZE, dtype=np.uint8)
    f[PHASE_OFFSET] = 1
    f[VUL_OFFSET] = 1
    seen_bid = False
    for i, call in enumerate(state.history):
        seat = state.caller(i)
        r = _rel(seat, player)
        if is_bid(call):
            f[BID_OFFSET + 4 * (call - FIRST_BID) + r] = 1
            seen_bid = True
            last_bid = call
        elif call == DOUBLE:
            f[DOUBLE_OFFSET + 4 * (last_bid - FIRST_BID) + r] = 1
        elif call == REDOUBLE:
            f[REDOUBLE_OFFSET + 4 * (last_bid - FIRST_BID) + r] = 1
        elif not seen_bid:
            f[OPENING_PASS_OFFSET + r] = 1
    for c in range(NUM_CARDS):
        if deal.holder[c] == player:
            f[CARD_OFFSET + c] = 1
    return f


def _bits(f, lo, hi):
    return [i - lo for i in range(lo, hi) if f[i]]


def reconstruct_history(f: np.ndarray) -> list:
    """Exact call sequence that produced ``f`` (raises DecodeError if none).

    Bids are recoverable in order because bids in an auction are strictly
    ascending; passes are implied by the seat gaps between consecutive
    non-pass actions, and the vector's player indices are relative to the
    player to act at the end.
    """
    if len(f) != VECTOR_SIZE:
        raise DecodeError(f"expected {VECTOR_SIZE} elements, got {len(f)}")
    openers = set(_bits(f, OPENING_PASS_OFFSET, BID_OFFSET))
    actions = []  # (relative seat, call id) in auction order
    for slot in _bits(f, BID_OFFSET, DOUBLE_OFFSET):
        actions.append((slot % 4, FIRST_BID + slot // 4))
    actions.sort(key=lambda a: a[1])
    for base, call in ((DOUBLE_OFFSET, DOUBLE), (REDOUBLE_OFFSET, REDOUBLE)):
        hi = base + 140
        for slot in _bits(f, base, hi):
            bid = FIRST_BID + slot // 4
            pos = [i for i, (_, c) in enumerate(actions) if c == bid]
            if not pos:
                raise DecodeError(f"{'double' if call == DOUBLE else 'redouble'} "
                                  f"of a bid ({bid}) that was never made")
            # A double follows its bid; a redouble follows the double.
            at = pos[0] + 1
            if call == REDOUBLE:
                if at >= len(actions) or actions[at][1] != DOUBLE:
                    raise DecodeError(f"redouble of bid {bid} without a double")
                at += 1
            actions.insert(at, (slot % 4, call))
    if not actions and not openers:
        return []
    # Relative seat of the first non-pass actor, implied by the opening
    # passes; with no bids the openers must be the seats just before us.
    n_open = len(openers)
    if actions:
        first = actions[0][0]
    else:
        first = 0  # we act after n_open opening passes
    want = {(first - i) % 4 for i in range(1, n_open + 1)}
    if openers != want or n_open > 3:
        raise DecodeError(f"opening passes {sorted(openers)} inconsistent "
                          f"with first actor at relative seat {first}")
    history = [PASS] * n_open
    prev = actions[0][0] if actions else first
    for i, (seat, call) in enumerate(actions):
        if i > 0:
            history.extend([PASS] * ((seat - prev - 1) % 4))
        history.append(call)
        prev = seat
    if actions:
        history.extend([PASS] * ((0 - prev - 1) % 4))
    try:
        state = replay(history)
    except ValueError as e:
        raise DecodeError(f"decoded history is not a legal auction: {e}") from e
    if state.terminal:
        raise DecodeError("decoded history is a finished auction")
    return history
