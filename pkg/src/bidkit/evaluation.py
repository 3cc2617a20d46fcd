"""Paired-deal evaluation: partnership, compatibility, and human metrics.

Every metric replays the same deal under different seat-to-agent
assignments and compares the resulting duplicate scores in IMPs.  Seat
patterns are written as four-letter strings over agents, seats in N, E,
S, W order, e.g. ``awaw`` = agent plays N and S, baseline plays E and W.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import dd
from .auction import (AuctionState, apply_call, final_contract, is_bid,
                      legal_calls, same_side)
from .cards import Deal, NUM_PLAYERS, SEAT_NAMES
from .encoder import encode
from .policy import greedy_action, legal_mask, sample_action
from .scoring import duplicate_score, imp


class IllegalAgentCallError(RuntimeError):
    """An agent produced an illegal call during evaluation."""


@dataclass(frozen=True)
class EvalReport:
    """Per-deal metric values with summary statistics."""

    values: tuple
    subset_flags: tuple = None  # optional per-deal no-bid flags

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values else 0.0

    @property
    def sem(self) -> float:
        if len(self.values) < 2:
            return 0.0
        return float(np.std(self.values, ddof=1) / math.sqrt(len(self.values)))

    def summary(self) -> str:
        return f"mean={self.mean:.4f} sem={self.sem:.4f} n={self.n}"


def play_auction(deal: Deal, agents, rng=None) -> AuctionState:
    """Run one auction with ``agents[seat]`` choosing each call (greedy
    when ``rng`` is None, sampled otherwise)."""
    state = AuctionState()
    while not state.terminal:
        seat = state.to_act
        features = encode(state, deal, seat)
        mask = legal_mask(legal_calls(state))
        dist = agents[seat].evaluate(features, mask)
        call = greedy_action(dist) if rng is None else sample_action(dist, rng)
        if not mask[call]:
            raise IllegalAgentCallError(
                f"agent at seat {SEAT_NAMES[seat]} chose illegal call {call}")
        state = apply_call(state, call)
    return state


def score_auction(deal: Deal, state: AuctionState) -> int:
    """Signed duplicate score of a finished auction from the North-South
    perspective, grounded in double-dummy tricks."""
    contract = final_contract(state)
    if contract.passed_out:
        return 0
    tricks = dd.deal_dd_tricks(deal, contract.denomination, contract.declarer)
    score = duplicate_score(contract, tricks)
    return score if same_side(contract.declarer, 0) else -score


def play_deal(deal: Deal, agents, rng=None) -> int:
    """N-S duplicate score of one table: auction plus DD-grounded play."""
    return score_auction(deal, play_auction(deal, agents, rng))


def _assign(pattern: str, agent, baseline):
    if len(pattern) != NUM_PLAYERS or set(pattern) - set("aw"):
        raise ValueError(f"bad seat pattern {pattern!r}")
    return [agent if ch == "a" else baseline for ch in pattern]


class _TableScores:
    """Scores S(pattern) for one deal, computed lazily and cached."""

    def __init__(self, deal, agent, baseline, rng_seed=None):
        self.deal = deal
        self.agent = agent
        self.baseline = baseline
        self.rng_seed = rng_seed
        self.auctions = {}

    def auction(self, pattern: str) -> AuctionState:
        if pattern not in self.auctions:
            rng = None if self.rng_seed is None else \
                np.random.default_rng([self.rng_seed, _pattern_id(pattern)])
            self.auctions[pattern] = play_auction(
                self.deal, _assign(pattern, self.agent, self.baseline), rng)
        return self.auctions[pattern]

    def score(self, pattern: str) -> int:
        return score_auction(self.deal, self.auction(pattern))


def _pattern_id(pattern: str) -> int:
    return int("".join("1" if ch == "a" else "0" for ch in pattern), 2)


def team_metric(deal: Deal, agent, baseline, rng_seed=None,
                tables: _TableScores | None = None) -> int:
    """IMP(S(awaw) - S(wawa)): the agent pair plays N-S at one table and
    E-W at the other."""
    t = tables or _TableScores(deal, agent, baseline, rng_seed)
    return imp(t.score("awaw") - t.score("wawa"))


def compatible_metric(deal: Deal, agent, baseline, rng_seed=None,
                      tables: _TableScores | None = None) -> int:
    """Four-term substitution sum measuring partnership quality with the
    baseline: the agent replaces the baseline in each seat in turn."""
    t = tables or _TableScores(deal, agent, baseline, rng_seed)
    ref = t.score("wwww")
    return (imp(t.score("awww") - ref) - imp(t.score("waww") - ref)
            + imp(t.score("wwaw") - ref) - imp(t.score("wwwa") - ref))


def human_eval_metric(scores: dict) -> int:
    """Session metric from the eight recorded table scores of one deal.

    ``scores`` maps seat patterns over {h, w, a} to N-S scores; the human
    sits in each seat once with the agent and once with the baseline as
    partner.
    """
    needed = ["hwaw", "hwww", "whwa", "whww", "awhw", "wwhw", "wawh", "wwwh"]
    missing = [p for p in needed if p not in scores]
    if missing:
        raise ValueError(f"incomplete session, missing tables {missing}")
    return (imp(scores["hwaw"] - scores["hwww"])
            - imp(scores["whwa"] - scores["whww"])
            + imp(scores["awhw"] - scores["wwhw"])
            - imp(scores["wawh"] - scores["wwwh"]))


def _partnership_made_no_bid(state: AuctionState, side: int) -> bool:
    return not any(is_bid(c) and state.caller(i) % 2 == side
                   for i, c in enumerate(state.history))


def no_bid_subset(tables: _TableScores) -> bool:
    """True iff every table configuration evaluated for this deal had at
    least one partnership that never made a bid."""
    if not tables.auctions:
        raise ValueError("no configurations evaluated for this deal")
    return all(_partnership_made_no_bid(s, 0) or _partnership_made_no_bid(s, 1)
               for s in tables.auctions.values())


def evaluate_set(deals, metric, agent, baseline, rng_seed=None,
                 csv_path=None, progress=None) -> EvalReport:
    """Per-deal metric values with mean and SEM; optionally persists raw
    rows as CSV for external slicing."""
    metric_fn = {"team": team_metric, "compatible": compatible_metric}[metric]
    values = []
    flags = []
    rows = []
    for i, deal in enumerate(deals):
        seed = None if rng_seed is None else rng_seed + i
        tables = _TableScores(deal, agent, baseline, seed)
        value = metric_fn(deal, agent, baseline, tables=tables)
        values.append(value)
        flags.append(no_bid_subset(tables))
        for pattern, auction in sorted(tables.auctions.items()):
            rows.append([i, pattern, tables.score(pattern), value])
        if progress is not None:
            progress(i, value)
    if csv_path is not None:
        with open(csv_path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["deal", "configuration", "ns_score",
                            "deal_metric"])
            writer.writerows(rows)
    return EvalReport(tuple(values), tuple(flags))
