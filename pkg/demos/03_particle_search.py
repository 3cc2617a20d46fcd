"""
Particle search over hidden hands
=================================

A bidder only sees 13 of the 52 cards.  The search samples complete
deals consistent with its hand, keeps the ones under which the table's
policies would plausibly have produced the observed auction, rolls out
candidate calls to a double-dummy-grounded score, and tilts the prior
toward the calls that scored well.

Rollouts hit the real double-dummy solver, so this demo uses a small
budget; expect a couple of minutes on one core.
"""

import numpy as np

from bidkit.auction import AuctionState, call_name, legal_calls
from bidkit.cards import SEAT_NAMES, card_name, new_deal
from bidkit.encoder import encode
from bidkit.policy import HeuristicPolicy, legal_mask
from bidkit.search import SearchParams, TableConfig, borel_search_detail

rng = np.random.default_rng(11)
deal = new_deal(rng)
print("searcher (North) holds:",
      " ".join(card_name(c) for c in deal.hand(0)))

# ---------------------------------------------------------------------------
# Everyone at the table is modeled by the point-count heuristic; the
# searcher's prior over calls is its own policy output.

policy = HeuristicPolicy()
cfg = TableConfig(rollout=(policy,) * 4)
state = AuctionState()
prior = policy.evaluate(encode(state, deal, 0),
                        legal_mask(legal_calls(state)))
print("prior argmax:", call_name(int(np.argmax(prior))))

# ---------------------------------------------------------------------------
# Tiny budget: a handful of accepted particles, four candidate calls.

params = SearchParams(t=300.0, r_min=1, r_max=3, p_max=50)
result = borel_search_detail([], deal.hand(0), prior, cfg, params, seed=1)

print(f"\naccepted {result.rollouts} of {result.particles} particles")
for call, value in zip(result.candidates, result.values):
    print(f"  candidate {call_name(call):>4}: summed rollout value "
          f"{value:8.1f}, prior {prior[call]:.4f}, "
          f"posterior {result.posterior[call]:.4f}")

# ---------------------------------------------------------------------------
# The posterior is a proper distribution over all 38 calls; mass the
# prior gave to non-candidates is preserved proportionally.

best = int(np.argmax(result.posterior))
print(f"\nsearch recommends {call_name(best)} "
      f"(p={result.posterior[best]:.3f})")
