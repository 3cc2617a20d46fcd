"""
Paired-deal evaluation
======================

Bridge variance is enormous, so agents are compared by replaying the
*same* deal under different seat assignments and scoring the difference
in IMPs.  The team metric seats the agent pair N-S at one table and E-W
at the other; the compatible metric substitutes the agent into one seat
at a time and asks whether the fixed partnership got better or worse.

Each table's contract is scored with real double-dummy play, so keep
the deal count small when running this on one core.
"""

import numpy as np

from bidkit.cards import new_deal
from bidkit.evaluation import compatible_metric, evaluate_set, team_metric
from bidkit.policy import HeuristicPolicy, UniformPolicy

agent = HeuristicPolicy()
chaos = UniformPolicy()  # a deliberately weak opponent

# ---------------------------------------------------------------------------
# One deal, by hand: positive IMPs mean the agent pair outscored the
# baseline pair on this board.

deal = new_deal(np.random.default_rng(3))
print("team metric on one deal:", team_metric(deal, agent, chaos))
print("compatible metric on one deal:",
      compatible_metric(deal, agent, chaos))

# ---------------------------------------------------------------------------
# Over a set of deals, evaluate_set returns per-deal values plus mean
# and standard error; rows can be persisted as CSV for slicing.

deals = [new_deal(np.random.default_rng(s)) for s in range(4)]
report = evaluate_set(deals, "team", agent, chaos)
print("\nper-deal IMPs:", report.values)
print(report.summary())
