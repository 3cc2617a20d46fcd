"""Cards, deals, and the plain-text deal file format.

Card indexing is suit-major: suit = index // 13 (C=0, D=1, H=2, S=3),
rank = index % 13 (0 = deuce, ..., 12 = ace).  Players are 0=N, 1=E,
2=S, 3=W, seated clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NUM_CARDS = 52
NUM_PLAYERS = 4
HAND_SIZE = 13

CLUBS, DIAMONDS, HEARTS, SPADES, NOTRUMP = 0, 1, 2, 3, 4
DENOM_NAMES = ["C", "D", "H", "S", "NT"]
RANK_NAMES = "23456789TJQKA"
SEAT_NAMES = "NESW"

# High-card points per rank (2..A); ace=4, king=3, queen=2, jack=1.
HCP_BY_RANK = (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4)


def card_suit(card: int) -> int:
    return card // 13


def card_rank(card: int) -> int:
    return card % 13


def card_index(suit: int, rank: int) -> int:
    return suit * 13 + rank


def card_name(card: int) -> str:
    return DENOM_NAMES[card_suit(card)] + RANK_NAMES[card_rank(card)]


@dataclass(frozen=True)
class Deal:
    """Assignment of the 52 cards to the four players.

    ``holder[c]`` is the player id holding card ``c``.  ``dd_table`` is an
    optional cached 20-entry double-dummy table, indexed
    ``[denomination][declarer]`` (denomination-major, C,D,H,S,NT).
    """

    holder: tuple
    dd_table: tuple | None = None

    def __post_init__(self):
        if len(self.holder) != NUM_CARDS:
            raise ValueError("deal must assign all 52 cards")
        counts = [0] * NUM_PLAYERS
        for h in self.holder:
            counts[h] += 1
        if counts != [HAND_SIZE] * NUM_PLAYERS:
            raise ValueError(f"each player must hold 13 cards, got {counts}")
        if self.dd_table is not None and len(self.dd_table) != 20:
            raise ValueError("dd_table must have 20 entries")

    def hand(self, player: int) -> tuple:
        """Sorted card indices held by ``player``."""
        return tuple(c for c in range(NUM_CARDS) if self.holder[c] == player)

    def hcp(self, player: int) -> int:
        return sum(HCP_BY_RANK[card_rank(c)] for c in self.hand(player))

    def with_dd_table(self, table) -> "Deal":
        return Deal(self.holder, tuple(int(t) for t in table))

    def dd_tricks(self, denomination: int, declarer: int) -> int:
        if self.dd_table is None:
            raise ValueError("deal has no cached double-dummy table")
        return self.dd_table[denomination * NUM_PLAYERS + declarer]


def new_deal(rng: np.random.Generator) -> Deal:
    """Deal the 52 cards uniformly at random; deterministic for a fixed rng state."""
    perm = rng.permutation(NUM_CARDS)
    holder = [0] * NUM_CARDS
    for pos, card in enumerate(perm):
        holder[card] = pos // HAND_SIZE
    return Deal(tuple(holder))


def deal_to_line(deal: Deal) -> str:
    """Serialize a deal as one text line: 52 holder ids, then the optional DD table."""
    parts = [str(h) for h in deal.holder]
    if deal.dd_table is not None:
        parts.extend(str(t) for t in deal.dd_table)
    return " ".join(parts)


def deal_from_line(line: str) -> Deal:
    fields = line.split()
    if len(fields) not in (NUM_CARDS, NUM_CARDS + 20):
        raise ValueError(f"deal line must have 52 or 72 fields, got {len(fields)}")
    holder = tuple(int(f) for f in fields[:NUM_CARDS])
    dd = None
    if len(fields) == NUM_CARDS + 20:
        dd = tuple(int(f) for f in fields[NUM_CARDS:])
        if any(t < 0 or t > 13 for t in dd):
            raise ValueError("DD table entries must be in [0, 13]")
    return Deal(holder, dd)


def read_deal_file(path) -> list:
    """Read a deal file (one deal per line, '#' lines are comments)."""
    deals = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            deals.append(deal_from_line(line))
    return deals


def write_deal_file(path, deals, header: str | None = None):
    with open(path, "w") as f:
        if header:
            for line in header.splitlines():
                f.write(f"# {line}\n")
        for deal in deals:
            f.write(deal_to_line(deal) + "\n")
