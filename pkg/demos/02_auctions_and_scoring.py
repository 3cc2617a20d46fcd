"""
Auctions, contracts, and scoring
================================

Walk through the bidding rules: make calls, watch the legal set change,
read off the final contract, and convert trick counts into duplicate
scores and IMPs.
"""

from bidkit.auction import (AuctionState, apply_call, call_from_name,
                            call_name, final_contract, legal_calls, replay)
from bidkit.scoring import duplicate_score, imp

# ---------------------------------------------------------------------------
# Calls are small integers: 0 = Pass, 1 = Double, 2 = Redouble, and the
# 35 bids 3..37 ordered by level then strain.  North always deals.

state = AuctionState()
print("opening legal calls:",
      " ".join(call_name(c) for c in sorted(legal_calls(state))[:8]), "...")

# ---------------------------------------------------------------------------
# A short constructive auction: 1H - pass - 2H - pass - pass - pass.

for name in ["1H", "P", "2H", "P", "P", "P"]:
    state = apply_call(state, call_from_name(name))
contract = final_contract(state)
print(f"contract: level {contract.level}, strain {contract.denomination}, "
      f"declarer seat {contract.declarer}")

# ---------------------------------------------------------------------------
# Doubles raise the stakes and belong to the side that did not bid.

doubled = replay([call_from_name(n) for n in
                  ["1S", "X", "XX", "P", "P", "P"]])
print("redoubled contract doubling state:",
      final_contract(doubled).doubling)

# ---------------------------------------------------------------------------
# Duplicate scoring (nobody vulnerable).  Making 4H exactly is game;
# going one down in a doubled contract costs 100.

from bidkit.auction import Contract, DOUBLED, UNDOUBLED

game = Contract(4, 2, UNDOUBLED, 0)
print("4H making 10 tricks:", duplicate_score(game, 10))
print("4H doubled, 9 tricks:", duplicate_score(Contract(4, 2, DOUBLED, 0), 9))

# ---------------------------------------------------------------------------
# Team matches compare two scores through the IMP scale, a compressive
# odd monotone lookup.

swing = duplicate_score(game, 10) - (-50)
print(f"+{duplicate_score(game, 10)} here, -50 at the other table: "
      f"{imp(swing)} IMPs")
