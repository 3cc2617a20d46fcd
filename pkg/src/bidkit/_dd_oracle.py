"""Exhaustive reference solver for double-dummy tests.

Plain negamax over every legal line of play: no pruning, no transposition
table, no move ordering, no equivalence reduction.  Deliberately kept
independent of the production solver in ``_dd_core``; only usable for
small endings.

Compiled without on-disk caching: recursive numba functions cannot be
cached, and the function is small enough to compile quickly.
"""

import numpy as np
from numba import njit

_SUIT = np.array([0x1FFF << (13 * s) for s in range(4)], dtype=np.int64)


@njit(cache=True)
def _count(x):
    n = 0
    while x:
        x &= x - 1
        n += 1
    return n


@njit(cache=False)
def oracle_tricks(h0, h1, h2, h3, trump, to_play, tc0, tc1, tc2, n_played):
    """Exact tricks for the side of ``to_play``, counting the open trick."""
    if to_play == 0:
        myh = h0
    elif to_play == 1:
        myh = h1
    elif to_play == 2:
        myh = h2
    else:
        myh = h3
    stake = _count(myh)
    if stake == 0:
        return 0
    if n_played > 0:
        legal = myh & _SUIT[tc0 // 13]
        if legal == 0:
            legal = myh
    else:
        legal = myh
    best = -1
    rest = legal
    while rest != 0:
        bit = rest & -rest
        rest &= rest - 1
        c = _count(bit - 1)
        n0, n1, n2, n3 = h0, h1, h2, h3
        if to_play == 0:
            n0 &= ~bit
        elif to_play == 1:
            n1 &= ~bit
        elif to_play == 2:
            n2 &= ~bit
        else:
            n3 &= ~bit
        if n_played == 0:
            v = stake - oracle_tricks(n0, n1, n2, n3, trump,
                                      (to_play + 1) % 4, c, -1, -1, 1)
        elif n_played == 1:
            v = stake - oracle_tricks(n0, n1, n2, n3, trump,
                                      (to_play + 1) % 4, tc0, c, -1, 2)
        elif n_played == 2:
            v = stake - oracle_tricks(n0, n1, n2, n3, trump,
                                      (to_play + 1) % 4, tc0, tc1, c, 3)
        else:
            cards = (tc0, tc1, tc2, c)
            wi = 0
            for i in range(1, 4):
                w = cards[wi]
                x = cards[i]
                if x // 13 == w // 13:
                    if x > w:
                        wi = i
                elif trump < 4 and x // 13 == trump:
                    wi = i
            leader = (to_play - 3) % 4
            wp = (leader + wi) % 4
            child = oracle_tricks(n0, n1, n2, n3, trump, wp, -1, -1, -1, 0)
            if (wp - to_play) % 2 == 0:
                v = 1 + child
            else:
                v = (stake - 1) - child
        if v > best:
            best = v
    return best
