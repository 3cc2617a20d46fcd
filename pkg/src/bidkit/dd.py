"""Double-dummy solving: exact perfect-play trick counts.

``solve`` is the fast solver (numba bitboards, zero-window alpha-beta,
shared transposition table); ``oracle_solve`` is an exhaustive reference
with no pruning or caching, usable up to 6 cards per hand, kept as the
independent ground truth for tests.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

from . import _dd_core, _dd_oracle
from .cards import Deal, HAND_SIZE, NOTRUMP, NUM_PLAYERS, card_name

log = logging.getLogger(__name__)


class LayoutError(ValueError):
    """Raised for malformed card layouts."""


@dataclass(frozen=True)
class CardLayout:
    """A play-phase position: remaining cards, trump, and the trick so far.

    ``current_trick`` holds the cards already played to the open trick in
    play order starting from ``leader``.
    """

    remaining: tuple
    trump: int
    leader: int
    current_trick: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.remaining) != NUM_PLAYERS:
            raise LayoutError("need four hands")
        if not 0 <= self.trump <= NOTRUMP:
            raise LayoutError(f"bad trump {self.trump}")
        if not 0 <= self.leader < NUM_PLAYERS:
            raise LayoutError(f"bad leader {self.leader}")
        if len(self.current_trick) > 3:
            raise LayoutError("at most three cards in an open trick")
        seen = set()
        for hand in self.remaining:
            for c in hand:
                if not 0 <= c < 52 or c in seen:
                    raise LayoutError(f"bad or duplicated card {c}")
                seen.add(c)
        for c in self.current_trick:
            if not 0 <= c < 52 or c in seen:
                raise LayoutError(f"bad or duplicated trick card {c}")
            seen.add(c)
        n = len(self.current_trick)
        base = len(self.remaining[(self.leader + n) % 4])
        for i in range(NUM_PLAYERS):
            played = (i - self.leader) % 4 < n
            want = base - 1 if played else base
            if len(self.remaining[i]) != want:
                raise LayoutError(
                    f"player {i} holds {len(self.remaining[i])} cards, expected {want}")

    @property
    def to_play(self) -> int:
        return (self.leader + len(self.current_trick)) % 4

    @property
    def tricks_left(self) -> int:
        return len(self.remaining[self.to_play])


_TT = None
_TT_LOCK = threading.Lock()


def _table():
    global _TT
    if _TT is None:
        _TT = _dd_core.new_table()
    return _TT


def _masks(layout: CardLayout):
    h = [0, 0, 0, 0]
    for p in range(NUM_PLAYERS):
        for c in layout.remaining[p]:
            h[p] |= 1 << c
    return h


def solve(layout: CardLayout) -> int:
    """Exact minimax tricks for the side of the player to move (both sides
    playing optimally with full information)."""
    h = _masks(layout)
    tc = list(layout.current_trick) + [-1, -1, -1]
    with _TT_LOCK:
        return int(_dd_core.solve_tricks(
            h[0], h[1], h[2], h[3], layout.trump, layout.to_play,
            tc[0], tc[1], tc[2], len(layout.current_trick), *_table()))


def oracle_solve(layout: CardLayout) -> int:
    """Reference solver (exhaustive negamax, no pruning or caching);
    refuses positions larger than 6 cards per hand."""
    if layout.tricks_left > 6:
        raise LayoutError("oracle_solve only handles up to 6 cards per hand")
    h = _masks(layout)
    tc = list(layout.current_trick) + [-1, -1, -1]
    return int(_dd_oracle.oracle_tricks(
        h[0], h[1], h[2], h[3], layout.trump, layout.to_play,
        tc[0], tc[1], tc[2], len(layout.current_trick)))


def dd_table(deal: Deal) -> tuple:
    """20-entry double-dummy table for a full deal.

    Entry ``denomination * 4 + declarer`` is the number of tricks the
    declaring side takes with the player left of declarer on lead.
    """
    hands = tuple(deal.hand(p) for p in range(NUM_PLAYERS))
    table = []
    for denom in range(5):
        for declarer in range(NUM_PLAYERS):
            leader = (declarer + 1) % NUM_PLAYERS
            defense = solve(CardLayout(hands, denom, leader))
            table.append(HAND_SIZE - defense)
    return tuple(table)


# Process-level memo for single DD entries of arbitrary deals (rollout
# particles hit the same contract repeatedly within one search).
_entry_memo: dict = {}
_ENTRY_MEMO_MAX = 200_000


def deal_dd_tricks(deal: Deal, denomination: int, declarer: int) -> int:
    """Declaring side's double-dummy tricks for one contract of ``deal``.

    Uses the deal's cached table when present, otherwise solves just the
    requested entry (memoized in-process).
    """
    if deal.dd_table is not None:
        return deal.dd_tricks(denomination, declarer)
    key = (deal.holder, denomination, declarer)
    hit = _entry_memo.get(key)
    if hit is not None:
        return hit
    hands = tuple(deal.hand(p) for p in range(NUM_PLAYERS))
    leader = (declarer + 1) % NUM_PLAYERS
    tricks = HAND_SIZE - solve(CardLayout(hands, denomination, leader))
    if len(_entry_memo) >= _ENTRY_MEMO_MAX:
        _entry_memo.clear()
    _entry_memo[key] = tricks
    return tricks


def canonical_deal_string(deal: Deal) -> str:
    """104-character canonical encoding: each player's 13 sorted cards as
    two-character names, players N,E,S,W."""
    return "".join(card_name(c) for p in range(NUM_PLAYERS) for c in deal.hand(p))


class DDCache:
    """Append-only file store of DD tables keyed by canonical deal string."""

    def __init__(self, path=None):
        self.path = path
        self._index = {}
        self._lock = threading.Lock()
        if path is not None:
            self._load()

    def _load(self):
        try:
            f = open(self.path)
        except FileNotFoundError:
            return
        with f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    key, rest = line[:104], line[104:].split()
                    table = tuple(int(t) for t in rest)
                    if len(key) != 104 or len(table) != 20 or \
                            any(t < 0 or t > 13 for t in table):
                        raise ValueError("malformed record")
                except ValueError:
                    log.warning("corrupt DD cache record at %s:%d; ignoring",
                                self.path, lineno)
                    continue
                self._index[key] = table

    def get(self, deal: Deal):
        return self._index.get(canonical_deal_string(deal))

    def put(self, deal: Deal, table):
        table = tuple(int(t) for t in table)
        key = canonical_deal_string(deal)
        with self._lock:
            self._index[key] = table
            if self.path is not None:
                with open(self.path, "a") as f:
                    f.write(key + " " + " ".join(f"{t:02d}" for t in table) + "\n")

    def table_for(self, deal: Deal):
        """Cached table, computing and storing it on a miss."""
        hit = self.get(deal)
        if hit is None:
            hit = dd_table(deal)
            self.put(deal, hit)
        return hit
