"""
Imitation training on bidding decisions
=======================================

The network maps the 480-bit observation to a masked distribution over
38 calls.  This demo builds a small supervised dataset from the
heuristic's decisions and trains the MLP to imitate it, watching the
loss fall and the argmax accuracy rise.
"""

import numpy as np

from bidkit.auction import AuctionState, apply_call, legal_calls
from bidkit.cards import new_deal
from bidkit.encoder import encode
from bidkit.policy import HeuristicPolicy, greedy_action, init_weights, \
    legal_mask
from bidkit.training import Hyperparams, TrainExample, imitation_train, \
    training_accuracy

# ---------------------------------------------------------------------------
# Collect decision points: play heuristic-vs-heuristic auctions and
# record (observation, action distribution) pairs.

rng = np.random.default_rng(0)
teacher = HeuristicPolicy()
dataset = []
while len(dataset) < 200:
    deal = new_deal(rng)
    state = AuctionState()
    while not state.terminal:
        seat = state.to_act
        features = encode(state, deal, seat)
        mask = legal_mask(legal_calls(state))
        dist = teacher.evaluate(features, mask)
        dataset.append(TrainExample(features, dist, deal, state.history, seat))
        state = apply_call(state, greedy_action(dist))
print(f"collected {len(dataset)} decision points")

# ---------------------------------------------------------------------------
# Train from scratch with Adam; accuracy here means matching the
# teacher's most likely call.

weights = init_weights(rng)
print(f"accuracy before training: {training_accuracy(weights, dataset):.2f}")

weights = imitation_train(dataset, Hyperparams(steps=300), rng, init=weights)
print(f"accuracy after 300 steps: {training_accuracy(weights, dataset):.2f}")

# ---------------------------------------------------------------------------
# Snapshots serialize to a compact binary format and can seed the
# search-driven policy-iteration loop (see the iterate CLI subcommand).

from bidkit.policy import load_weights, save_weights

save_weights("/tmp/demo_weights.bkw", weights)
print("round-trip ok:",
      all((a[0] == b[0]).all()
          for a, b in zip(weights.layers,
                          load_weights("/tmp/demo_weights.bkw").layers)))
