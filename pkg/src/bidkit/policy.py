"""Policies over the 38 calls: MLP inference, baselines, and selection.

An action distribution is a float64 array of 38 probabilities summing to
one with zero mass on illegal calls.  The network is a 4-hidden-layer
ReLU MLP (480 -> 1024 x4 -> 38) with a masked softmax head; weights are
float32 and serialize to a portable little-endian file format.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .auction import (FIRST_BID, NUM_CALLS, PASS, bid_denomination, bid_id,
                      bid_level, is_bid)
from .cards import HCP_BY_RANK, NOTRUMP, NUM_PLAYERS, card_rank, card_suit
from .encoder import BID_OFFSET, CARD_OFFSET, VECTOR_SIZE, reconstruct_history

INPUT_SIZE = VECTOR_SIZE
HIDDEN_SIZE = 1024
NUM_HIDDEN = 4

_MAGIC = b"BKW1"
_VERSION = 1


class WeightFormatError(ValueError):
    """Raised for malformed weight files."""


def legal_mask(legal) -> np.ndarray:
    """Boolean mask over the 38 calls from a set of legal call ids."""
    mask = np.zeros(NUM_CALLS, dtype=bool)
    for c in legal:
        mask[c] = True
    return mask


def masked_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Softmax over legal entries only; illegal entries get exactly 0."""
    if not mask.any():
        raise ValueError("no legal calls")
    z = np.where(mask, logits.astype(np.float64), -np.inf)
    z = z - z.max()
    e = np.exp(z, where=np.isfinite(z), out=np.zeros_like(z))
    total = e.sum()
    if not np.isfinite(total) or total <= 0:
        raise FloatingPointError("non-finite softmax")
    return e / total


@dataclass(frozen=True)
class MlpWeights:
    """Immutable network snapshot: per-layer (matrix, bias) pairs.

    Matrix i has shape (fan_in, fan_out); four hidden layers of width
    1024 and a 38-wide output layer.
    """

    layers: tuple

    def __post_init__(self):
        dims = [INPUT_SIZE] + [HIDDEN_SIZE] * NUM_HIDDEN + [NUM_CALLS]
        if len(self.layers) != len(dims) - 1:
            raise WeightFormatError(f"expected {len(dims)-1} layers")
        for i, (w, b) in enumerate(self.layers):
            if w.shape != (dims[i], dims[i + 1]) or b.shape != (dims[i + 1],):
                raise WeightFormatError(
                    f"layer {i} shape {w.shape}/{b.shape}, "
                    f"expected ({dims[i]}, {dims[i+1]})")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise WeightFormatError(f"layer {i} has non-finite values")


def init_weights(rng: np.random.Generator) -> MlpWeights:
    """He-style fan-in scaled uniform initialization, float32."""
    dims = [INPUT_SIZE] + [HIDDEN_SIZE] * NUM_HIDDEN + [NUM_CALLS]
    layers = []
    for n_in, n_out in zip(dims, dims[1:]):
        bound = np.sqrt(6.0 / n_in)
        w = rng.uniform(-bound, bound, size=(n_in, n_out)).astype(np.float32)
        b = np.zeros(n_out, dtype=np.float32)
        layers.append((w, b))
    return MlpWeights(tuple(layers))


def mlp_logits(weights: MlpWeights, features) -> np.ndarray:
    """Raw output logits; float32 parameters, float64 accumulation."""
    x = np.asarray(features, dtype=np.float64)
    for i, (w, b) in enumerate(weights.layers):
        x = x @ w.astype(np.float64) + b.astype(np.float64)
        if i < len(weights.layers) - 1:
            x = np.maximum(x, 0.0)
        x = x.astype(np.float32).astype(np.float64)
    return x


def mlp_forward(weights: MlpWeights, features, mask) -> np.ndarray:
    probs = masked_softmax(mlp_logits(weights, features), np.asarray(mask))
    if not np.isfinite(probs).all():
        raise FloatingPointError("non-finite policy output")
    return probs


def save_weights(path, weights: MlpWeights):
    """Little-endian binary: magic, version, layer count, then per layer
    fan_in, fan_out and row-major float32 matrix + bias."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<II", _VERSION, len(weights.layers)))
        for w, b in weights.layers:
            f.write(struct.pack("<II", w.shape[0], w.shape[1]))
            f.write(np.ascontiguousarray(w, dtype="<f4").tobytes())
            f.write(np.ascontiguousarray(b, dtype="<f4").tobytes())


def load_weights(path) -> MlpWeights:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != _MAGIC:
        raise WeightFormatError("bad magic")
    version, n_layers = struct.unpack_from("<II", data, 4)
    if version != _VERSION:
        raise WeightFormatError(f"unsupported version {version}")
    off = 12
    layers = []
    for _ in range(n_layers):
        if off + 8 > len(data):
            raise WeightFormatError("truncated header")
        n_in, n_out = struct.unpack_from("<II", data, off)
        off += 8
        need = 4 * (n_in * n_out + n_out)
        if off + need > len(data):
            raise WeightFormatError("truncated weights")
        w = np.frombuffer(data, dtype="<f4", count=n_in * n_out,
                          offset=off).reshape(n_in, n_out).copy()
        off += 4 * n_in * n_out
        b = np.frombuffer(data, dtype="<f4", count=n_out, offset=off).copy()
        off += 4 * n_out
        layers.append((w, b))
    return MlpWeights(tuple(layers))


def top_k_candidates(dist: np.ndarray, k: int, p_min: float) -> list:
    """At most k calls with prob >= p_min, by descending probability,
    ties broken toward the lower call id; falls back to the argmax call
    when everything is below the floor."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = sorted(range(NUM_CALLS), key=lambda c: (-dist[c], c))
    picked = [c for c in order if dist[c] >= p_min][:k]
    if not picked:
        picked = [order[0]]
    return picked


def sample_action(dist: np.ndarray, rng: np.random.Generator) -> int:
    p = np.asarray(dist, dtype=np.float64)
    return int(rng.choice(NUM_CALLS, p=p / p.sum()))


def greedy_action(dist: np.ndarray) -> int:
    return int(min(range(NUM_CALLS), key=lambda c: (-dist[c], c)))


class UniformPolicy:
    """Uniform over legal calls."""

    def evaluate(self, features, mask) -> np.ndarray:
        mask = np.asarray(mask)
        return mask / mask.sum()


class MlpPolicy:
    """Network policy over an immutable weight snapshot."""

    def __init__(self, weights: MlpWeights):
        self.weights = weights

    def evaluate(self, features, mask) -> np.ndarray:
        return mlp_forward(self.weights, features, mask)


# The heuristic concentrates this much mass on its chosen call and
# spreads the rest uniformly over the other legal calls, so that every
# legal action keeps nonzero model probability (particle filtering
# multiplies these probabilities and would otherwise veto histories).
HEURISTIC_PEAK = 0.85


class HeuristicPolicy:
    """Deterministic point-count baseline.

    Opens 12+ HCP hands (1NT with a balanced 15-17, else the longest
    suit), raises partner's suit with 3-card support and 6+ HCP, shows a
    new suit with opening strength, and passes otherwise; never bids
    beyond game.  Works purely from the feature vector.
    """

    def evaluate(self, features, mask) -> np.ndarray:
        mask = np.asarray(mask)
        choice = self._choose(np.asarray(features), mask)
        n_legal = int(mask.sum())
        dist = np.zeros(NUM_CALLS)
        if n_legal == 1:
            dist[choice] = 1.0
            return dist
        dist[mask] = (1.0 - HEURISTIC_PEAK) / (n_legal - 1)
        dist[choice] = HEURISTIC_PEAK
        return dist

    def _choose(self, f, mask) -> int:
        cards = [c for c in range(52) if f[CARD_OFFSET + c]]
        hcp = sum(HCP_BY_RANK[card_rank(c)] for c in cards)
        lengths = [0, 0, 0, 0]
        for c in cards:
            lengths[card_suit(c)] += 1
        # Longest suit, preferring the higher-ranking on ties.
        best_suit = max(range(4), key=lambda s: (lengths[s], s))
        history = reconstruct_history(f)
        partner_suits = self._partner_suits(f)
        bids = [c for c in history if is_bid(c)]
        if not bids:
            if hcp < 12:
                return PASS
            balanced = max(lengths) <= 4 and min(lengths) >= 2
            if balanced and 15 <= hcp <= 17 and mask[bid_id(1, NOTRUMP)]:
                return bid_id(1, NOTRUMP)
            call = bid_id(1, best_suit)
            return call if mask[call] else PASS
        highest = max(bids)
        for suit in partner_suits:
            if lengths[suit] >= 3 and hcp >= 6:
                call = self._cheapest(highest, suit)
                if call is not None and mask[call]:
                    return call
        if hcp >= 12:
            call = self._cheapest(highest, best_suit)
            if call is not None and mask[call]:
                return call
        return PASS

    @staticmethod
    def _cheapest(highest_bid, denomination):
        """Lowest bid of ``denomination`` above ``highest_bid``, capped at
        game level (4 of a suit / 3NT)."""
        level = bid_level(highest_bid)
        if bid_denomination(highest_bid) < denomination:
            pass  # same level is enough
        else:
            level += 1
        cap = 3 if denomination == NOTRUMP else 4
        if level > cap:
            return None
        return bid_id(level, denomination)

    @staticmethod
    def _partner_suits(f):
        """Suits bid by partner (relative player 2), in bid order."""
        suits = []
        for slot in range(140):
            if f[BID_OFFSET + slot] and slot % NUM_PLAYERS == 2:
                denom = bid_denomination(FIRST_BID + slot // 4)
                if denom != NOTRUMP and denom not in suits:
                    suits.append(denom)
        return suits


def resolve_policy(spec: str):
    """Policy from a CLI-style spec: ``heuristic``, ``uniform``, or a
    weight-file path."""
    if spec == "heuristic":
        return HeuristicPolicy()
    if spec == "uniform":
        return UniformPolicy()
    return MlpPolicy(load_weights(spec))
