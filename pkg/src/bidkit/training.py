"""Imitation training and search-driven policy iteration.

The trainer is a from-scratch cross-entropy + Adam loop over the MLP
(float32 parameters, float64 math inside each step).  Experience is
generated by playing deals where learner seats choose actions through
the rollout search and the search posterior becomes the training target.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .auction import AuctionState, apply_call, legal_calls
from .cards import Deal, NUM_PLAYERS, deal_from_line, deal_to_line, new_deal
from .encoder import VECTOR_SIZE, encode
from .policy import (MlpPolicy, MlpWeights, NUM_CALLS, init_weights,
                     legal_mask, masked_softmax, mlp_logits, sample_action,
                     save_weights)
from .search import (SearchParams, TableConfig, TRAINING_PRESET,
                     borel_search_detail)

log = logging.getLogger(__name__)

COMPATIBLE, PARTNERSHIP = "compatible", "partnership"


@dataclass(frozen=True)
class TrainExample:
    """One decision point: observation plus target distribution."""

    features: np.ndarray  # uint8, length 480
    target: np.ndarray    # float64, length 38, sums to 1
    deal: Deal = None
    history: tuple = ()
    seat: int = 0


@dataclass(frozen=True)
class Hyperparams:
    steps: int = 1000
    learning_rate: float = 0.0003
    batch_size: int = 16
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


@dataclass(frozen=True)
class IterationConfig:
    """Policy-iteration settings; ``task`` fixes the table wiring."""

    task: str = COMPATIBLE
    params: SearchParams = TRAINING_PRESET
    generations: int = 3
    deals_per_generation: int = 500
    train_steps: int = 2000
    seed: int = 0
    opponents_use_baseline: bool = False  # act with pi_b instead of pi_l

    def __post_init__(self):
        if self.task not in (COMPATIBLE, PARTNERSHIP):
            raise ValueError(f"unknown task {self.task!r}")


# ---------------------------------------------------------------------------
# gradient computation and Adam


def _forward_backward(layers, features_batch, targets_batch, masks_batch):
    """Mean cross-entropy over the batch and gradients for every layer.

    All math in float64; cross-entropy is taken against the full target
    distribution with illegal calls masked out of the softmax.
    """
    xs = [np.asarray(features_batch, dtype=np.float64)]
    n_layers = len(layers)
    for i, (w, b) in enumerate(layers):
        z = xs[-1] @ w.astype(np.float64) + b.astype(np.float64)
        if i < n_layers - 1:
            z = np.maximum(z, 0.0)
        xs.append(z)
    logits = xs[-1]
    z = np.where(masks_batch, logits, -np.inf)
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z, where=np.isfinite(z), out=np.zeros_like(z))
    probs = e / e.sum(axis=1, keepdims=True)
    n = len(xs[0])
    logp = np.log(np.where(probs > 0, probs, 1.0))
    loss = -(targets_batch * logp).sum() / n
    # d loss / d logits for softmax cross-entropy with a distribution
    # target: probs - target on legal entries.
    delta = (probs - targets_batch) / n
    delta[~masks_batch] = 0.0
    grads = [None] * n_layers
    for i in range(n_layers - 1, -1, -1):
        grads[i] = (xs[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            delta = delta @ layers[i][0].astype(np.float64).T
            delta[xs[i] <= 0] = 0.0
    return loss, grads


@dataclass
class AdamState:
    """First/second moment estimates per parameter."""

    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    step: int = 0


def adam_step(layers, grads, state: AdamState, hp: Hyperparams):
    """One Adam update; returns new float32 layer tuples."""
    if not state.m:
        state.m = [(np.zeros_like(w, dtype=np.float64),
                    np.zeros_like(b, dtype=np.float64)) for w, b in layers]
        state.v = [(np.zeros_like(w, dtype=np.float64),
                    np.zeros_like(b, dtype=np.float64)) for w, b in layers]
    state.step += 1
    t = state.step
    out = []
    for i, (w, b) in enumerate(layers):
        new_params = []
        for j, (param, grad) in enumerate(((w, grads[i][0]), (b, grads[i][1]))):
            m = state.m[i][j]
            v = state.v[i][j]
            m *= hp.beta1
            m += (1 - hp.beta1) * grad
            v *= hp.beta2
            v += (1 - hp.beta2) * grad * grad
            mhat = m / (1 - hp.beta1 ** t)
            vhat = v / (1 - hp.beta2 ** t)
            upd = param.astype(np.float64) - \
                hp.learning_rate * mhat / (np.sqrt(vhat) + hp.epsilon)
            new_params.append(upd.astype(np.float32))
        out.append(tuple(new_params))
    return tuple(out)


def _legal_mask_of(example: TrainExample) -> np.ndarray:
    if example.history is not None:
        state = AuctionState(tuple(example.history))
        return legal_mask(legal_calls(state))
    return np.ones(NUM_CALLS, dtype=bool)


def imitation_train(dataset, hp: Hyperparams, rng: np.random.Generator,
                    init: MlpWeights | None = None,
                    log_every: int = 200) -> MlpWeights:
    """Adam on cross-entropy against the example targets; decision points
    are sampled uniformly at random per step."""
    if not dataset:
        raise ValueError("empty dataset")
    feats = np.stack([ex.features for ex in dataset]).astype(np.float64)
    targets = np.stack([ex.target for ex in dataset])
    masks = np.stack([_legal_mask_of(ex) for ex in dataset])
    weights = init if init is not None else init_weights(rng)
    layers = weights.layers
    state = AdamState()
    for step in range(hp.steps):
        idx = rng.integers(len(dataset), size=hp.batch_size)
        loss, grads = _forward_backward(layers, feats[idx], targets[idx],
                                        masks[idx])
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite loss at step {step}")
        if hp.learning_rate != 0:
            layers = adam_step(layers, grads, state, hp)
        if log_every and step % log_every == 0:
            log.info("step %d loss %.4f", step, loss)
    return MlpWeights(layers)


def training_accuracy(weights: MlpWeights, dataset) -> float:
    """Fraction of examples where the network argmax matches the target
    argmax."""
    hits = 0
    for ex in dataset:
        mask = _legal_mask_of(ex)
        probs = masked_softmax(mlp_logits(weights, ex.features), mask)
        if int(np.argmax(probs)) == int(np.argmax(ex.target)):
            hits += 1
    return hits / len(dataset)


# ---------------------------------------------------------------------------
# experience generation


def _table_policies(task, learner_seat, pi_l, pi_b, opponents_use_baseline):
    """(acting policy per seat, rollout policy per seat, searching seats)."""
    partner = (learner_seat + 2) % NUM_PLAYERS
    opponent_policy = pi_b if opponents_use_baseline else pi_l
    acting = [opponent_policy] * NUM_PLAYERS
    rollout = [pi_l] * NUM_PLAYERS
    acting[learner_seat] = pi_l
    if task == COMPATIBLE:
        acting[partner] = pi_b
        rollout[partner] = pi_b
        searching = (learner_seat,)
    else:
        acting[partner] = pi_l
        searching = (learner_seat, partner)
    return acting, rollout, searching


def generate_experience(pi_l, pi_b, config: IterationConfig, n_deals: int,
                        rng: np.random.Generator, deals=None,
                        workers: int = 1) -> list:
    """Play complete auctions; learner decisions go through the search and
    are recorded as (features, posterior) examples.

    Learner seats rotate through N, E, S, W across deals.  ``deals`` may
    supply the boards; otherwise they are drawn from ``rng``.
    """
    examples = []
    for d in range(n_deals):
        deal = deals[d] if deals is not None else new_deal(rng)
        learner_seat = d % NUM_PLAYERS
        acting, rollout, searching = _table_policies(
            config.task, learner_seat, pi_l, pi_b,
            config.opponents_use_baseline)
        cfg = TableConfig(tuple(rollout))
        state = AuctionState()
        while not state.terminal:
            seat = state.to_act
            features = encode(state, deal, seat)
            mask = legal_mask(legal_calls(state))
            prior = acting[seat].evaluate(features, mask)
            if seat in searching:
                seed = int(rng.integers(2 ** 62))
                result = borel_search_detail(
                    state.history, deal.hand(seat), prior, cfg,
                    config.params, seed, workers=workers)
                posterior = result.posterior
                examples.append(TrainExample(features, posterior, deal,
                                             state.history, seat))
                call = sample_action(posterior, rng)
            else:
                call = sample_action(prior, rng)
            state = apply_call(state, call)
    return examples


def policy_iteration(pi_b, config: IterationConfig, out_dir=None,
                     eval_hook=None, initial: MlpWeights | None = None,
                     workers: int = 1):
    """Alternate experience generation and imitation training.

    ``pi_b`` is the frozen baseline/partner-model policy; the learner
    starts as ``initial`` weights (fresh initialization when omitted,
    standing in for the imitation-trained starting point).  Yields are
    collected and returned: one ``MlpWeights`` snapshot per generation.
    ``eval_hook(generation, weights)`` runs between generations.
    """
    rng = np.random.default_rng(config.seed)
    weights = initial if initial is not None else init_weights(rng)
    hp = Hyperparams(steps=config.train_steps)
    snapshots = []
    for gen in range(config.generations):
        t0 = time.time()
        pi_l = MlpPolicy(weights)
        dataset = generate_experience(pi_l, pi_b, config,
                                      config.deals_per_generation, rng,
                                      workers=workers)
        log.info("generation %d: %d examples in %.1fs", gen, len(dataset),
                 time.time() - t0)
        weights = imitation_train(dataset, hp, rng, init=weights)
        snapshots.append(weights)
        if out_dir is not None:
            save_weights(f"{out_dir}/gen{gen:03d}.bkw", weights)
        if eval_hook is not None:
            eval_hook(gen, weights)
    return snapshots


# ---------------------------------------------------------------------------
# experience and config files


def write_experience(path, examples):
    """One record per line: deal | auction prefix | seat | 38 posterior
    probabilities."""
    with open(path, "w") as f:
        for ex in examples:
            f.write(" ".join(str(h) for h in ex.deal.holder))
            f.write(" | " + " ".join(str(c) for c in ex.history))
            f.write(f" | {ex.seat} | ")
            f.write(" ".join(f"{p:.8f}" for p in ex.target) + "\n")


def read_experience(path) -> list:
    examples = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            deal_part, hist_part, seat_part, prob_part = line.split("|")
            deal = deal_from_line(deal_part)
            history = tuple(int(c) for c in hist_part.split())
            seat = int(seat_part)
            target = np.array([float(p) for p in prob_part.split()])
            state = AuctionState(history)
            features = encode(state, deal, seat)
            examples.append(TrainExample(features, target, deal, history,
                                         seat))
    return examples


def write_config(path, config: IterationConfig):
    p = config.params
    pairs = [("task", config.task), ("generations", config.generations),
             ("deals_per_generation", config.deals_per_generation),
             ("train_steps", config.train_steps), ("seed", config.seed),
             ("opponents_use_baseline", int(config.opponents_use_baseline)),
             ("t", p.t), ("r_min", p.r_min), ("r_max", p.r_max),
             ("p_max", p.p_max), ("k", p.k), ("p_min", p.p_min)]
    with open(path, "w") as f:
        for key, value in pairs:
            f.write(f"{key}={value}\n")


def read_config(path) -> IterationConfig:
    raw = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    params = SearchParams(
        t=float(raw.get("t", TRAINING_PRESET.t)),
        r_min=int(raw.get("r_min", TRAINING_PRESET.r_min)),
        r_max=int(raw.get("r_max", TRAINING_PRESET.r_max)),
        p_max=int(raw.get("p_max", TRAINING_PRESET.p_max)),
        k=int(raw.get("k", TRAINING_PRESET.k)),
        p_min=float(raw.get("p_min", TRAINING_PRESET.p_min)))
    return IterationConfig(
        task=raw.get("task", COMPATIBLE),
        params=params,
        generations=int(raw.get("generations", 3)),
        deals_per_generation=int(raw.get("deals_per_generation", 500)),
        train_steps=int(raw.get("train_steps", 2000)),
        seed=int(raw.get("seed", 0)),
        opponents_use_baseline=bool(int(raw.get("opponents_use_baseline", 0))))
