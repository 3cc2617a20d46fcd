"""Determinized rollout search over sampled hidden-hand particles.

A particle is a full deal consistent with the searcher's 13 cards.
Particles are filtered by the likelihood the table's rollout policies
assign to the observed auction, candidate calls are evaluated by rollout
to a double-dummy-grounded score, and the prior is tilted toward
high-value candidates through an exponentiated update.

Per-particle randomness comes from streams derived from (seed, particle
index), so results are identical regardless of how many workers process
the particle loop.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dd
from .auction import (AuctionState, apply_call, final_contract, legal_calls,
                      replay, same_side)
from .cards import Deal, HAND_SIZE, NUM_CARDS, NUM_PLAYERS
from .encoder import encode
from .policy import greedy_action, legal_mask, sample_action, top_k_candidates
from .scoring import duplicate_score

# Guard against rollout policies that never terminate; legal auctions
# are always shorter than this.
MAX_ROLLOUT_CALLS = 320


@dataclass(frozen=True)
class SearchParams:
    """Search budget and posterior temperature."""

    t: float
    r_min: int
    r_max: int
    p_max: int
    k: int = 4
    p_min: float = 1e-4

    def __post_init__(self):
        if self.t <= 0 or self.r_min < 0 or self.p_max < 0 or self.k < 1:
            raise ValueError("search parameters must be positive")
        if self.r_min > self.r_max:
            raise ValueError("r_min must not exceed r_max")


TRAINING_PRESET = SearchParams(t=300.0, r_min=1, r_max=30, p_max=100_000)
TEST_PRESET = SearchParams(t=100.0, r_min=100, r_max=1000, p_max=100_000)


@dataclass(frozen=True)
class TableConfig:
    """Rollout policy per seat plus rollout action selection mode.

    ``greedy_rollouts`` selects argmax actions during rollouts (test-time
    search); otherwise actions are sampled (training-time search).
    """

    rollout: tuple
    greedy_rollouts: bool = False

    def __post_init__(self):
        if len(self.rollout) != NUM_PLAYERS:
            raise ValueError("need one rollout policy per seat")


@dataclass(frozen=True)
class SearchResult:
    posterior: np.ndarray
    candidates: tuple
    values: tuple  # accumulated V per candidate
    rollouts: int  # R: accepted particles
    particles: int  # P: sampled particles


def sample_particle(own_hand, searcher: int, rng: np.random.Generator) -> Deal:
    """Uniform assignment of the 39 unseen cards to the other three hands."""
    own = set(own_hand)
    if len(own) != HAND_SIZE:
        raise ValueError("searcher must hold 13 cards")
    unseen = [c for c in range(NUM_CARDS) if c not in own]
    perm = rng.permutation(len(unseen))
    others = [p for p in range(NUM_PLAYERS) if p != searcher]
    holder = [0] * NUM_CARDS
    for c in own:
        holder[c] = searcher
    for slot, idx in enumerate(perm):
        holder[unseen[idx]] = others[slot // HAND_SIZE]
    return Deal(tuple(holder))


def particle_accept(history, particle: Deal, searcher: int, cfg: TableConfig,
                    rng: np.random.Generator) -> bool:
    """Accept with the probability the rollout models assign to the
    observed past actions of the non-searching players under the particle."""
    state = AuctionState()
    for call in history:
        actor = state.to_act
        if actor != searcher:
            features = encode(state, particle, actor)
            mask = legal_mask(legal_calls(state))
            p = cfg.rollout[actor].evaluate(features, mask)[call]
            if rng.random() >= p:
                return False
        state = apply_call(state, call)
    return True


def rollout_value(history, action: int, particle: Deal, cfg: TableConfig,
                  rng: np.random.Generator) -> float:
    """Play ``action``, finish the auction with the rollout policies, and
    return the double-dummy duplicate score of the final contract from
    the perspective of the player acting at ``history``."""
    state = replay(history)
    perspective = state.to_act
    state = apply_call(state, action)
    n = 0
    while not state.terminal:
        features = encode(state, particle, state.to_act)
        mask = legal_mask(legal_calls(state))
        dist = cfg.rollout[state.to_act].evaluate(features, mask)
        call = greedy_action(dist) if cfg.greedy_rollouts \
            else sample_action(dist, rng)
        state = apply_call(state, call)
        n += 1
        if n > MAX_ROLLOUT_CALLS:
            raise RuntimeError("rollout exceeded the call limit")
    contract = final_contract(state)
    if contract.passed_out:
        return 0.0
    tricks = dd.deal_dd_tricks(particle, contract.denomination,
                               contract.declarer)
    score = duplicate_score(contract, tricks)
    return float(score if same_side(perspective, contract.declarer)
                 else -score)


def _particle_result(history, own_hand, searcher, candidates, cfg, seed, index):
    """Evaluate particle ``index``: (accepted, values per candidate)."""
    rng = np.random.default_rng([seed, index])
    particle = sample_particle(own_hand, searcher, rng)
    if not particle_accept(history, particle, searcher, cfg, rng):
        return False, None
    return True, [rollout_value(history, a, particle, cfg, rng)
                  for a in candidates]


def borel_search_detail(history, own_hand, prior: np.ndarray,
                        cfg: TableConfig, params: SearchParams, seed: int,
                        workers: int = 1) -> SearchResult:
    """Full search: posterior plus candidate values and budget counters.

    Deterministic in ``seed``; identical results for any worker count
    (per-particle streams, reduction in particle-index order).
    """
    state = replay(history)
    searcher = state.to_act
    candidates = top_k_candidates(prior, params.k, params.p_min)
    values = np.zeros(len(candidates))
    r = 0
    p = 0
    if workers <= 1:
        while p < params.p_max and r < params.r_max:
            accepted, vals = _particle_result(
                history, own_hand, searcher, candidates, cfg, seed, p)
            p += 1
            if accepted:
                values += vals
                r += 1
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            next_index = 0
            done = False
            while not done and next_index < params.p_max:
                chunk = range(next_index,
                              min(next_index + workers, params.p_max))
                results = list(pool.map(
                    lambda i: _particle_result(history, own_hand, searcher,
                                               candidates, cfg, seed, i),
                    chunk))
                for i, (accepted, vals) in zip(chunk, results):
                    p = i + 1
                    if accepted:
                        values += vals
                        r += 1
                        if r >= params.r_max:
                            done = True
                            break
                next_index = p
    posterior = _posterior(prior, candidates, values, r, params)
    return SearchResult(posterior, tuple(candidates), tuple(values), r, p)


def _posterior(prior, candidates, values, r, params):
    if r <= params.r_min:
        return prior.copy()
    vmax = values.max()
    post = prior.astype(np.float64).copy()
    for a, v in zip(candidates, values):
        post[a] = prior[a] * np.exp((v - vmax) / (params.t * np.sqrt(r)))
    total = post.sum()
    if total <= 0:  # prior mass on candidates was zero; keep the prior
        return prior.copy()
    return post / total


def borel_search(history, own_hand, prior, cfg, params, seed,
                 workers: int = 1) -> np.ndarray:
    """Posterior action distribution for the player to act."""
    return borel_search_detail(history, own_hand, prior, cfg, params, seed,
                               workers).posterior
