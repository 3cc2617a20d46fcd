import numpy as np
import pytest

from bidkit.auction import NUM_CALLS, PASS, bid_id, legal_calls, replay
from bidkit.policy import UniformPolicy, legal_mask
from bidkit.search import (SearchParams, TableConfig, TEST_PRESET,
                           TRAINING_PRESET, _posterior, borel_search,
                           borel_search_detail, particle_accept,
                           rollout_value, sample_particle)


class PeakedPolicy:
    """Puts ``peak`` mass on one call, the rest uniform over legal."""

    def __init__(self, call, peak):
        self.call = call
        self.peak = peak

    def evaluate(self, features, mask):
        dist = np.zeros(NUM_CALLS)
        n = int(mask.sum())
        if n > 1:
            dist[mask] = (1.0 - self.peak) / (n - 1)
        dist[self.call] = self.peak
        return dist / dist.sum() if dist.sum() else dist


def table(policy):
    return TableConfig(rollout=(policy,) * 4)


def uniform_prior(history):
    mask = legal_mask(legal_calls(replay(history)))
    return mask / mask.sum()


def fake_tricks(deal, denomination, declarer):
    """Deterministic stand-in for the double-dummy table."""
    return (sum(deal.holder[i] * i for i in range(0, 52, 5))
            + 3 * denomination + declarer) % 14


# ---------------------------------------------------------------- params


def test_param_validation():
    with pytest.raises(ValueError):
        SearchParams(t=0, r_min=1, r_max=2, p_max=10)
    with pytest.raises(ValueError):
        SearchParams(t=1, r_min=5, r_max=2, p_max=10)
    assert TRAINING_PRESET.t == 300 and TRAINING_PRESET.r_max == 30
    assert TEST_PRESET.r_min == 100 and TEST_PRESET.r_max == 1000
    with pytest.raises(ValueError):
        TableConfig(rollout=(UniformPolicy(),) * 3)


# ---------------------------------------------------------------- particles


def test_sample_particle_is_consistent():
    rng = np.random.default_rng(0)
    own = list(range(13, 26))
    deal = sample_particle(own, 2, rng)
    counts = [0, 0, 0, 0]
    for c in range(52):
        counts[deal.holder[c]] += 1
    assert counts == [13, 13, 13, 13]
    assert all(deal.holder[c] == 2 for c in own)
    with pytest.raises(ValueError):
        sample_particle(own[:5], 2, rng)


def test_particle_streams_are_reproducible():
    own = list(range(0, 26, 2))
    a = sample_particle(own, 0, np.random.default_rng([7, 3]))
    b = sample_particle(own, 0, np.random.default_rng([7, 3]))
    assert a.holder == b.holder


def test_acceptance_rate_matches_model_probability():
    # Seat 0 passed; the rollout model assigns it probability 0.8, so the
    # acceptance rate over many particle streams must match a fair
    # binomial at that rate (tolerance: three standard deviations).
    cfg = table(PeakedPolicy(PASS, 0.8))
    own = list(range(13))
    trials = 10_000
    accepted = 0
    for i in range(trials):
        rng = np.random.default_rng([42, i])
        particle = sample_particle(own, 1, rng)
        accepted += particle_accept([PASS], particle, 1, cfg, rng)
    sigma = np.sqrt(trials * 0.8 * 0.2)
    assert abs(accepted - 0.8 * trials) < 3 * sigma


def test_searcher_actions_do_not_filter():
    # Only other players' past calls weigh in the acceptance test: a
    # model that gives the searcher's own call probability 0 still
    # accepts when the searcher made that call.
    cfg = table(PeakedPolicy(bid_id(1, 0), 1.0))
    own = list(range(13))
    rng = np.random.default_rng([1, 0])
    particle = sample_particle(own, 0, rng)
    assert particle_accept([PASS], particle, 0, cfg, rng)


# ---------------------------------------------------------------- rollouts


def test_rollout_value_perspectives(monkeypatch):
    monkeypatch.setattr("bidkit.dd.deal_dd_tricks",
                        lambda deal, denom, decl: 9)
    passer = table(PeakedPolicy(PASS, 1.0))
    own = list(range(13))
    rng = np.random.default_rng(0)
    particle = sample_particle(own, 0, rng)
    # Seat 0 opens one club, everyone passes: 1C by N makes 9 tricks.
    v = rollout_value([], bid_id(1, 0), particle, passer, rng)
    assert v == 110.0
    # From the defender about to act over the bid, the same score flips.
    v = rollout_value([bid_id(1, 0)], PASS, particle, passer, rng)
    assert v == -110.0
    # Four passes score zero.
    assert rollout_value([], PASS, particle, passer, rng) == 0.0


# ---------------------------------------------------------------- posterior


def test_posterior_worked_example():
    params = SearchParams(t=300.0, r_min=1, r_max=30, p_max=100)
    prior = np.zeros(NUM_CALLS)
    prior[[0, 3]] = 0.5
    post = _posterior(prior, [0, 3], np.array([900.0, 0.0]), 9, params)
    # exp((0 - 900) / (300 * sqrt(9))) = exp(-1)
    assert post[0] == pytest.approx(1 / (1 + np.exp(-1)), rel=1e-12)
    assert post[3] == pytest.approx(np.exp(-1) / (1 + np.exp(-1)), rel=1e-12)
    assert post.sum() == pytest.approx(1.0)


def test_posterior_keeps_prior_tail_mass():
    params = SearchParams(t=100.0, r_min=1, r_max=30, p_max=100)
    prior = np.zeros(NUM_CALLS)
    prior[[0, 3, 5]] = [0.5, 0.3, 0.2]
    post = _posterior(prior, [0, 3], np.array([500.0, 0.0]), 4, params)
    total = 0.5 + 0.3 * np.exp(-500 / (100 * 2)) + 0.2
    assert post[5] == pytest.approx(0.2 / total, rel=1e-12)
    assert post.sum() == pytest.approx(1.0)


def test_posterior_requires_strictly_more_than_r_min():
    params = SearchParams(t=100.0, r_min=5, r_max=30, p_max=100)
    prior = np.zeros(NUM_CALLS)
    prior[[0, 3]] = 0.5
    post = _posterior(prior, [0, 3], np.array([9999.0, 0.0]), 5, params)
    assert post is not prior
    assert (post == prior).all()


# ---------------------------------------------------------------- search


def test_budget_counters(monkeypatch):
    monkeypatch.setattr("bidkit.dd.deal_dd_tricks", fake_tricks)
    own = list(range(13))
    params = SearchParams(t=100.0, r_min=1, r_max=5, p_max=40)
    # Empty history: nothing to filter, every particle is accepted.
    res = borel_search_detail([], own, uniform_prior([]),
                              table(UniformPolicy()), params, seed=0)
    assert res.rollouts == 5 and res.particles == 5
    # A model that never passes rejects every particle for a passed call.
    cfg = table(PeakedPolicy(bid_id(1, 0), 1.0))
    res = borel_search_detail([PASS], own, uniform_prior([PASS]), cfg,
                              params, seed=0)
    assert res.rollouts == 0 and res.particles == 40
    assert (res.posterior == uniform_prior([PASS])).all()


def test_parallel_matches_sequential(monkeypatch):
    monkeypatch.setattr("bidkit.dd.deal_dd_tricks", fake_tricks)
    own = [c for c in range(52) if c % 4 == 1]
    history = [bid_id(1, 2)]
    prior = uniform_prior(history)
    cfg = table(PeakedPolicy(PASS, 0.7))
    params = SearchParams(t=50.0, r_min=1, r_max=8, p_max=60)
    seq = borel_search_detail(history, own, prior, cfg, params, seed=11,
                              workers=1)
    par = borel_search_detail(history, own, prior, cfg, params, seed=11,
                              workers=3)
    assert seq.candidates == par.candidates
    assert seq.values == par.values
    assert seq.rollouts == par.rollouts and seq.particles == par.particles
    assert (seq.posterior == par.posterior).all()


def test_search_shifts_mass_toward_high_value_calls(monkeypatch):
    # One candidate's rollouts always score far better, so the posterior
    # must rank it above its prior-equal alternative.
    def biased(deal, denom, decl):
        return 11 if denom == 0 else 5

    monkeypatch.setattr("bidkit.dd.deal_dd_tricks", biased)
    own = list(range(13))  # all clubs
    prior = np.zeros(NUM_CALLS)
    prior[[bid_id(1, 0), bid_id(1, 1)]] = 0.5
    params = SearchParams(t=50.0, r_min=1, r_max=10, p_max=50)
    post = borel_search([], own, prior, table(PeakedPolicy(PASS, 1.0)),
                        params, seed=5)
    assert post[bid_id(1, 0)] > post[bid_id(1, 1)]
    assert post.sum() == pytest.approx(1.0)
