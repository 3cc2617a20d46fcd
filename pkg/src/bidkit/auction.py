"""Auction rules: call legality, termination, and contract determination.

Calls are integers 0..37: 0=Pass, 1=Double, 2=Redouble, and bids
3..37 ordered by level then denomination C,D,H,S,NT, i.e.
bid id = 3 + (level-1)*5 + denomination.  The dealer is always North
and players call clockwise N, E, S, W.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cards import DENOM_NAMES, NUM_PLAYERS, SEAT_NAMES

PASS = 0
DOUBLE = 1
REDOUBLE = 2
FIRST_BID = 3
NUM_CALLS = 38
NUM_BIDS = 35
DEALER = 0  # North

UNDOUBLED, DOUBLED, REDOUBLED = 0, 1, 2

# Hard cap on auction length; 4 opening passes plus every bid with 3
# intervening calls is the longest possible legal auction.
MAX_AUCTION_LENGTH = 4 + NUM_BIDS * 4


class IllegalCallError(ValueError):
    """Raised for calls that violate the auction rules."""


def is_bid(call: int) -> bool:
    return FIRST_BID <= call < NUM_CALLS


def bid_id(level: int, denomination: int) -> int:
    if not (1 <= level <= 7 and 0 <= denomination <= 4):
        raise ValueError(f"invalid bid {level}/{denomination}")
    return FIRST_BID + (level - 1) * 5 + denomination


def bid_level(call: int) -> int:
    if not is_bid(call):
        raise ValueError(f"call {call} is not a bid")
    return (call - FIRST_BID) // 5 + 1


def bid_denomination(call: int) -> int:
    if not is_bid(call):
        raise ValueError(f"call {call} is not a bid")
    return (call - FIRST_BID) % 5


def call_name(call: int) -> str:
    if call == PASS:
        return "P"
    if call == DOUBLE:
        return "X"
    if call == REDOUBLE:
        return "XX"
    return f"{bid_level(call)}{DENOM_NAMES[bid_denomination(call)]}"


def call_from_name(name: str) -> int:
    name = name.strip().upper()
    aliases = {"P": PASS, "PASS": PASS, "X": DOUBLE, "DBL": DOUBLE,
               "XX": REDOUBLE, "RDBL": REDOUBLE}
    if name in aliases:
        return aliases[name]
    level = int(name[0])
    denom = DENOM_NAMES.index(name[1:])
    return bid_id(level, denom)


def same_side(p: int, q: int) -> bool:
    return (p - q) % 2 == 0


@dataclass(frozen=True)
class Contract:
    """Final contract; ``passed_out`` deals have level 0."""

    level: int
    denomination: int
    doubling: int
    declarer: int

    PASSED_OUT = None  # set below

    @property
    def passed_out(self) -> bool:
        return self.level == 0

    @property
    def target(self) -> int:
        return self.level + 6

    def __str__(self):
        if self.passed_out:
            return "PassedOut"
        tag = ["", "X", "XX"][self.doubling]
        return f"{self.level}{DENOM_NAMES[self.denomination]}{tag} by {SEAT_NAMES[self.declarer]}"


Contract.PASSED_OUT = Contract(0, 0, UNDOUBLED, 0)


@dataclass(frozen=True)
class AuctionState:
    """Immutable auction position; ``apply_call`` returns a new state."""

    history: tuple = field(default_factory=tuple)

    @property
    def to_act(self) -> int:
        return (DEALER + len(self.history)) % NUM_PLAYERS

    @property
    def terminal(self) -> bool:
        h = self.history
        if len(h) == 4 and all(c == PASS for c in h):
            return True
        if any(is_bid(c) for c in h) and len(h) >= 4:
            return h[-1] == PASS and h[-2] == PASS and h[-3] == PASS
        return False

    def caller(self, i: int) -> int:
        """Player who made history[i]."""
        return (DEALER + i) % NUM_PLAYERS

    def highest_bid(self) -> int | None:
        best = None
        for c in self.history:
            if is_bid(c):
                best = c
        return best

    def _last_non_pass(self):
        for i in range(len(self.history) - 1, -1, -1):
            if self.history[i] != PASS:
                return self.history[i], self.caller(i)
        return None, None


def legal_calls(state: AuctionState) -> set:
    """Set of legal call ids in ``state``; error if the auction is over."""
    if state.terminal:
        raise IllegalCallError("auction is over; no calls are legal")
    legal = {PASS}
    best = state.highest_bid()
    lo = FIRST_BID if best is None else best + 1
    legal.update(range(lo, NUM_CALLS))
    last, last_player = state._last_non_pass()
    if last is not None:
        opponent = not same_side(last_player, state.to_act)
        if is_bid(last) and opponent:
            legal.add(DOUBLE)
        elif last == DOUBLE and opponent:
            legal.add(REDOUBLE)
    return legal


def apply_call(state: AuctionState, call: int) -> AuctionState:
    """Apply a call, returning the successor state.  Illegal calls raise."""
    if call not in legal_calls(state):
        raise IllegalCallError(
            f"illegal call {call_name(call)} by {SEAT_NAMES[state.to_act]} "
            f"after [{' '.join(call_name(c) for c in state.history)}]")
    return AuctionState(state.history + (call,))


def replay(calls) -> AuctionState:
    """Apply a sequence of calls from the opening position."""
    state = AuctionState()
    for c in calls:
        state = apply_call(state, c)
    return state


def final_contract(state: AuctionState) -> Contract:
    """Contract of a finished auction; the declarer is the first member of
    the winning side to have bid the contract's denomination."""
    if not state.terminal:
        raise IllegalCallError("auction is not over")
    last_bid = None
    last_bidder = None
    doubling = UNDOUBLED
    for i, c in enumerate(state.history):
        if is_bid(c):
            last_bid, last_bidder = c, state.caller(i)
            doubling = UNDOUBLED
        elif c == DOUBLE:
            doubling = DOUBLED
        elif c == REDOUBLE:
            doubling = REDOUBLED
    if last_bid is None:
        return Contract.PASSED_OUT
    denom = bid_denomination(last_bid)
    declarer = last_bidder
    for i, c in enumerate(state.history):
        p = state.caller(i)
        if is_bid(c) and bid_denomination(c) == denom and same_side(p, last_bidder):
            declarer = p
            break
    return Contract(bid_level(last_bid), denom, doubling, declarer)
