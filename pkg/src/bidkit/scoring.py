"""Duplicate scoring (neither side vulnerable) and IMP conversion.

Both tables are transcribed from the Laws of Duplicate Bridge
(Law 77 scoring, Law 78B IMP scale) for the non-vulnerable case only;
all deals in this project use that single scoring table.
"""

from __future__ import annotations

from bisect import bisect_right

from .auction import Contract, DOUBLED, REDOUBLED, UNDOUBLED
from .cards import CLUBS, DIAMONDS, NOTRUMP

# Trick values: minors 20, majors 30, NT 40 for the first trick then 30.
_GAME_BONUS = 300
_PARTSCORE_BONUS = 50
_SMALL_SLAM_BONUS = 500
_GRAND_SLAM_BONUS = 1000
_INSULT = {UNDOUBLED: 0, DOUBLED: 50, REDOUBLED: 100}

# Law 78B: score difference at which each IMP value starts.
_IMP_THRESHOLDS = [20, 50, 90, 130, 170, 220, 270, 320, 370, 430, 500, 600,
                   750, 900, 1100, 1300, 1500, 1750, 2000, 2250, 2500, 3000,
                   3500, 4000]


def _trick_score(level: int, denomination: int) -> int:
    if denomination in (CLUBS, DIAMONDS):
        return 20 * level
    if denomination == NOTRUMP:
        return 30 * level + 10
    return 30 * level


def duplicate_score(contract: Contract, declarer_tricks: int) -> int:
    """Non-vulnerable duplicate score from the declaring side's perspective."""
    if contract.passed_out:
        return 0
    if not (0 <= declarer_tricks <= 13):
        raise ValueError(f"declarer_tricks must be in [0, 13], got {declarer_tricks}")
    multiplier = {UNDOUBLED: 1, DOUBLED: 2, REDOUBLED: 4}[contract.doubling]
    if declarer_tricks >= contract.target:
        base = _trick_score(contract.level, contract.denomination) * multiplier
        bonus = _GAME_BONUS if base >= 100 else _PARTSCORE_BONUS
        if contract.level == 6:
            bonus += _SMALL_SLAM_BONUS
        elif contract.level == 7:
            bonus += _GRAND_SLAM_BONUS
        overtricks = declarer_tricks - contract.target
        if contract.doubling == UNDOUBLED:
            per = 20 if contract.denomination in (CLUBS, DIAMONDS) else 30
        else:
            per = 100 * multiplier // 2  # 100 doubled, 200 redoubled (non-vul)
        return base + bonus + per * overtricks + _INSULT[contract.doubling]
    down = contract.target - declarer_tricks
    if contract.doubling == UNDOUBLED:
        return -50 * down
    # Doubled, non-vulnerable: 100 for the first, 200 for the second and
    # third, 300 thereafter; redoubled is twice that.
    penalty = 100 + 200 * min(down - 1, 2) + 300 * max(down - 3, 0)
    if contract.doubling == REDOUBLED:
        penalty *= 2
    return -penalty


def imp(score_diff: int) -> int:
    """Law 78B International Match Point scale; odd in ``score_diff``."""
    value = bisect_right(_IMP_THRESHOLDS, abs(score_diff))
    return value if score_diff >= 0 else -value
