"""
Deals and double-dummy analysis
===============================

Generate a random deal, look at the hands, and ask the double-dummy
solver what each side can take with perfect play.  A full 20-entry
table (5 strains x 4 declarers) takes minutes on a single core, so this
demo solves single contracts and a small endgame instead.
"""

import numpy as np

from bidkit.cards import SEAT_NAMES, card_name, new_deal
from bidkit.dd import CardLayout, deal_dd_tricks, oracle_solve, solve

# ---------------------------------------------------------------------------
# A deal is just an assignment of the 52 cards to four seats.

rng = np.random.default_rng(7)
deal = new_deal(rng)
for seat in range(4):
    print(f"{SEAT_NAMES[seat]}: " +
          " ".join(card_name(c) for c in deal.hand(seat)))

# ---------------------------------------------------------------------------
# Double-dummy value of one contract: how many tricks does North take
# declaring in notrump if everyone sees all the cards?

tricks = deal_dd_tricks(deal, 4, 0)
print(f"\nNorth declaring NT makes {tricks} tricks double dummy")

# ---------------------------------------------------------------------------
# The solver also handles partial positions, and position matters: with
# the ace-queen in South behind East's king, leading from North picks
# the king off; move the king to West and the queen loses to it.

finesse = CardLayout(
    remaining=(
        (39, 0, 1),     # N: S2 C2 C3 (on lead)
        (50, 40, 2),    # E: SK S3 C4
        (51, 49, 42),   # S: SA SQ S5
        (26, 27, 28),   # W: low hearts
    ),
    trump=4, leader=0)
offside = CardLayout(
    remaining=(
        (39, 0, 1),     # N unchanged
        (26, 27, 28),   # E now holds the low hearts
        (51, 49, 42),   # S unchanged
        (50, 40, 2),    # W holds the king
    ),
    trump=4, leader=0)
print(f"\nking with East:  N-S take {solve(finesse)} of 3 tricks")
print(f"king with West:  N-S take {solve(offside)} of 3 tricks")
print(f"exhaustive oracle agrees: {oracle_solve(finesse)} "
      f"and {oracle_solve(offside)}")
