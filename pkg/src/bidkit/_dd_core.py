"""Numba kernels for the double-dummy solver.

Positions are bitboards: bit ``c`` of a holding is card ``c`` (suit-major,
13 bits per suit).  The search answers the boolean question "can the side
to move take at least ``g`` of the remaining tricks", and the public
solver binary-searches over ``g`` with zero windows.

The search is written with an explicit frame stack rather than recursion
so the compiled kernel can be cached on disk.

The transposition table stores generalized positions: alongside the
bound, each entry keeps only the per-suit *top segment* of cards whose
location actually mattered to the proof (trick winners, cashing runs and
the cards that stop them).  A lookup matches any position with the same
per-hand suit lengths and the same owners of those top cards, however
the irrelevant low cards are shuffled, so one stored ending serves a
whole family of positions across deals.
"""

import numpy as np
from numba import njit

_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int8)

SUIT_MASK = np.array([0x1FFF << (13 * s) for s in range(4)], dtype=np.int64)

TT_BITS = 22
TT_SIZE = 1 << TT_BITS
TT_PROBES = 16

_MAX_DEPTH = 56

_LANE = np.int64(0x3FFFFFF)  # 26 bits: 13 two-bit owner codes, top card first


def new_table():
    """Allocate an empty transposition table.

    Arrays: length signature, owner sequences (two suits per word),
    relevance masks, entry kind (0 empty / 1 lower bound / 2 upper
    bound), bound value, leader+trump, best-move hint, and stored hand
    size (replacement priority).
    """
    return (np.zeros(TT_SIZE, dtype=np.int64),   # SIG
            np.zeros(TT_SIZE, dtype=np.int64),   # HS1 (suits 0,1)
            np.zeros(TT_SIZE, dtype=np.int64),   # HS2 (suits 2,3)
            np.zeros(TT_SIZE, dtype=np.int64),   # M1
            np.zeros(TT_SIZE, dtype=np.int64),   # M2
            np.zeros(TT_SIZE, dtype=np.uint8),   # KIND
            np.zeros(TT_SIZE, dtype=np.int8),    # VAL
            np.zeros(TT_SIZE, dtype=np.int8),    # LT
            np.zeros(TT_SIZE, dtype=np.int8),    # MV
            np.zeros(TT_SIZE, dtype=np.int8))    # SK


@njit(cache=True)
def _popcount(x):
    return (_POP16[x & 0xFFFF] + _POP16[(x >> 16) & 0xFFFF]
            + _POP16[(x >> 32) & 0xFFFF] + _POP16[(x >> 48) & 0xFFFF])


@njit(cache=True)
def _bit_index(bit):
    return _popcount(bit - 1)


@njit(cache=True)
def _beats(cand, best, trump):
    cs = cand // 13
    bs = best // 13
    if cs == bs:
        return cand > best
    if trump < 4 and cs == trump:
        return True
    return False


@njit(cache=True)
def _encode(h0, h1, h2, h3):
    """Length signature (4 bits per hand per suit) and per-suit owner
    sequences, highest remaining card first."""
    sig = np.int64(0)
    hs1 = np.int64(0)
    hs2 = np.int64(0)
    for s in range(4):
        c0 = 0
        c1 = 0
        c2 = 0
        c3 = 0
        seq = np.int64(0)
        n = 0
        for r in range(12, -1, -1):
            bit = np.int64(1) << (13 * s + r)
            if h0 & bit:
                code = 0
                c0 += 1
            elif h1 & bit:
                code = 1
                c1 += 1
            elif h2 & bit:
                code = 2
                c2 += 1
            elif h3 & bit:
                code = 3
                c3 += 1
            else:
                continue
            seq |= np.int64(code) << (2 * n)
            n += 1
        sig |= (np.int64(c0) | (np.int64(c1) << 4) | (np.int64(c2) << 8)
                | (np.int64(c3) << 12)) << (16 * s)
        if s == 0:
            hs1 |= seq
        elif s == 1:
            hs1 |= seq << 26
        elif s == 2:
            hs2 |= seq
        else:
            hs2 |= seq << 26
    return sig, hs1, hs2


@njit(cache=True)
def _tops(h0, h1, h2, h3):
    """Mask of the two highest remaining cards of each suit, and their
    packed owner codes (4 bits per suit).

    Entries always pin these tops, which lets the hash include their
    owners: without that, every position sharing a length profile would
    fight over one probe window.
    """
    mask = np.int64(0)
    owners = np.int64(0)
    for s in range(4):
        got = 0
        for r in range(12, -1, -1):
            bit = np.int64(1) << (13 * s + r)
            if h0 & bit:
                code = 0
            elif h1 & bit:
                code = 1
            elif h2 & bit:
                code = 2
            elif h3 & bit:
                code = 3
            else:
                continue
            mask |= bit
            owners |= np.int64(code) << (4 * s + 2 * got)
            got += 1
            if got == 2:
                break
    return mask, owners


@njit(cache=True)
def _slot_of(sig, lt, owners):
    h = np.uint64(sig) * np.uint64(0x9E3779B97F4A7C15)
    h ^= (np.uint64(lt) + np.uint64(0x9E3779B9)) * np.uint64(0xC2B2AE3D27D4EB4F)
    h ^= (np.uint64(owners) + np.uint64(0x85EBCA6B)) * np.uint64(0x9E3779B97F4A7C15)
    h ^= h >> np.uint64(29)
    return np.int64(h & np.uint64(TT_SIZE - 1))


@njit(cache=True)
def _seg_abs(h0, h1, h2, h3, m1, m2):
    """Absolute-card mask of an entry's top segments in this position."""
    allc = h0 | h1 | h2 | h3
    out = np.int64(0)
    for s in range(4):
        if s == 0:
            lane = m1 & _LANE
        elif s == 1:
            lane = (m1 >> 26) & _LANE
        elif s == 2:
            lane = m2 & _LANE
        else:
            lane = (m2 >> 26) & _LANE
        d = _popcount(lane) >> 1
        if d == 0:
            continue
        for r in range(12, -1, -1):
            bit = np.int64(1) << (13 * s + r)
            if allc & bit:
                out |= bit
                d -= 1
                if d == 0:
                    break
    return out


@njit(cache=True)
def _seg_masks(h0, h1, h2, h3, mask):
    """Relevance masks (2 bits per remaining card from the top) covering
    every remaining card at or above the lowest marked card per suit."""
    allc = h0 | h1 | h2 | h3
    m1 = np.int64(0)
    m2 = np.int64(0)
    for s in range(4):
        mm = mask & SUIT_MASK[s]
        if mm == 0:
            continue
        low = mm & -mm
        d = _popcount(allc & SUIT_MASK[s] & ~(low - 1))
        lane = (np.int64(1) << (2 * d)) - 1
        if s == 0:
            m1 |= lane
        elif s == 1:
            m1 |= lane << 26
        elif s == 2:
            m2 |= lane
        else:
            m2 |= lane << 26
    return m1, m2


@njit(cache=True)
def _extend(h0, h1, h2, h3, mask):
    """Grow each suit's marked segment down through cards held by the
    same hand as the card above them.

    Move generation treats touching cards of one hand as interchangeable
    and only searches the highest; a stored bound that depends on such a
    card must therefore pin its lower twins as well, or a matched
    position could break the equivalence.
    """
    allc = h0 | h1 | h2 | h3
    for s in range(4):
        mm = mask & SUIT_MASK[s]
        if mm == 0:
            continue
        low = mm & -mm
        if h0 & low:
            cur = 0
        elif h1 & low:
            cur = 1
        elif h2 & low:
            cur = 2
        else:
            cur = 3
        base = 13 * s
        r = _bit_index(low) - base - 1
        while r >= 0:
            bit = np.int64(1) << (base + r)
            if allc & bit:
                if h0 & bit:
                    hld = 0
                elif h1 & bit:
                    hld = 1
                elif h2 & bit:
                    hld = 2
                else:
                    hld = 3
                if hld != cur:
                    break
                mask |= bit
            r -= 1
    return mask


@njit(cache=True)
def _suit_cash(myh, ph, opp_a, opp_b, all_cards, suit):
    """Tricks the hand on lead cashes from its own ``suit`` holding.

    The top run (consecutive over every foreign card) always cashes with
    the lead retained.  If the run is long enough to draw both opponents
    out of the suit, and the partner cannot overtake a low card and
    strand the rest, the entire holding cashes.  Only sound when the
    opponents cannot ruff.  Returns (count, mark mask).
    """
    base = 13 * suit
    sm = SUIT_MASK[suit]
    mycards = myh & sm
    if mycards == 0:
        return 0, np.int64(0)
    others = (all_cards & ~myh) & sm
    run = 0
    mask = np.int64(0)
    breaker = np.int64(0)
    for r in range(12, -1, -1):
        bit = np.int64(1) << (base + r)
        if mycards & bit:
            run += 1
            mask |= bit
        elif others & bit:
            breaker = bit
            break
    my_len = _popcount(mycards)
    if run >= my_len:
        return run, mask
    oa = _popcount(opp_a & sm)
    ob = _popcount(opp_b & sm)
    oppmax = oa if oa > ob else ob
    pm = ph & sm
    if run >= oppmax and (pm == 0 or pm < (mycards & -mycards)):
        return my_len, all_cards & sm
    return run, mask | breaker


@njit(cache=True)
def _solo_trumps(own, foreign, trump):
    """Top trumps of a single hand that can never lose or crash.

    Counts ``own`` cards from the top of the trump suit down to the
    first card held by anyone else (partner included, so a forced
    follow under partner's winner is impossible).  Each such card is
    higher than every other outstanding trump and wins one trick
    whenever it is played.  Returns (count, mark mask).
    """
    base = 13 * trump
    run = 0
    mask = np.int64(0)
    for r in range(12, -1, -1):
        bit = np.int64(1) << (base + r)
        if own & bit:
            run += 1
            mask |= bit
        elif foreign & bit:
            mask |= bit
            break
    return run, mask


@njit(cache=True)
def _quick_tricks(h0, h1, h2, h3, trump, leader):
    """Guaranteed tricks for the leading side with supporting marks.

    Returns (count, mark mask): the side's sure trump tricks plus, when
    the opponents cannot ruff (notrump, or out of trumps), the cashing
    masters in the leader's own hand.
    """
    if leader == 0:
        myh = h0
    elif leader == 1:
        myh = h1
    elif leader == 2:
        myh = h2
    else:
        myh = h3
    partner = (leader + 2) % 4
    if partner == 0:
        ph = h0
    elif partner == 1:
        ph = h1
    elif partner == 2:
        ph = h2
    else:
        ph = h3
    oa_p = (leader + 1) % 4
    if oa_p == 0:
        opp_a = h0
    elif oa_p == 1:
        opp_a = h1
    elif oa_p == 2:
        opp_a = h2
    else:
        opp_a = h3
    ob_p = (leader + 3) % 4
    if ob_p == 0:
        opp_b = h0
    elif ob_p == 1:
        opp_b = h1
    elif ob_p == 2:
        opp_b = h2
    else:
        opp_b = h3
    all_cards = h0 | h1 | h2 | h3
    quick = 0
    mask = np.int64(0)
    partner_counted = 0
    if trump < 4:
        sm = SUIT_MASK[trump]
        my_t = myh & sm
        p_t = ph & sm
        opp_t = (opp_a | opp_b) & sm
        oa = _popcount(opp_a & sm)
        ob = _popcount(opp_b & sm)
        oppmax = oa if oa > ob else ob
        solo_me, mask_me = _solo_trumps(my_t, (p_t | opp_t), trump)
        if solo_me > 0:
            # the leader draws trumps itself, keeping the lead, then
            # every remaining trump in hand is high
            if solo_me >= oppmax:
                quick = _popcount(my_t)
            else:
                quick = solo_me
            mask = mask_me
        else:
            solo_p, mask_p = _solo_trumps(p_t, (my_t | opp_t), trump)
            if solo_p > 0:
                # partner's first master may score by ruffing without
                # drawing a round, hence the extra card for exhaustion
                if solo_p - 1 >= oppmax:
                    quick = _popcount(p_t)
                else:
                    quick = solo_p
                mask = mask_p
                partner_counted = quick
        if opp_t != 0:
            return quick, mask
    cashes = 0
    for s in range(4):
        if s == trump:
            continue
        run, mk = _suit_cash(myh, ph, opp_a, opp_b, all_cards, s)
        cashes += run
        mask |= mk
    if partner_counted > 0 and trump < 4:
        # each cash beyond partner's spare cards may force a ruff that
        # merges a counted trump trick into the cash trick
        spares = _popcount(ph & ~SUIT_MASK[trump])
        overlap = cashes - spares
        if overlap > 0:
            cashes -= overlap
    return quick + cashes, mask


@njit(cache=True)
def _opp_sure_trumps(h0, h1, h2, h3, trump, to_play):
    """Sure trump tricks of the side *not* on play; returns (count, mark
    mask)."""
    if trump >= 4:
        return 0, np.int64(0)
    a = (to_play + 1) % 4
    if a == 0:
        ha = h0
    elif a == 1:
        ha = h1
    elif a == 2:
        ha = h2
    else:
        ha = h3
    b = (to_play + 3) % 4
    if b == 0:
        hb = h0
    elif b == 1:
        hb = h1
    elif b == 2:
        hb = h2
    else:
        hb = h3
    if to_play == 0:
        mv = h0
    elif to_play == 1:
        mv = h1
    elif to_play == 2:
        mv = h2
    else:
        mv = h3
    pp = (to_play + 2) % 4
    if pp == 0:
        mp = h0
    elif pp == 1:
        mp = h1
    elif pp == 2:
        mp = h2
    else:
        mp = h3
    sm = SUIT_MASK[trump]
    ha_t = ha & sm
    hb_t = hb & sm
    other = (mv | mp) & sm
    ra, ma = _solo_trumps(ha_t, hb_t | other, trump)
    if ra > 0:
        return ra, ma
    return _solo_trumps(hb_t, ha_t | other, trump)


@njit(cache=True)
def _movegen(h0, h1, h2, h3, trump, to_play, tc0, tc1, tc2, n_played, cards):
    """Fill ``cards`` with equivalence-reduced candidate moves, best first.
    Returns the move count."""
    if to_play == 0:
        myh = h0
    elif to_play == 1:
        myh = h1
    elif to_play == 2:
        myh = h2
    else:
        myh = h3
    if n_played > 0:
        led = tc0 // 13
        legal = myh & SUIT_MASK[led]
        if legal == 0:
            legal = myh
    else:
        led = -1
        legal = myh
    blockers = h0 | h1 | h2 | h3
    if n_played > 0:
        blockers |= np.int64(1) << tc0
    if n_played > 1:
        blockers |= np.int64(1) << tc1
    if n_played > 2:
        blockers |= np.int64(1) << tc2

    # Current trick winner so far, and whether the next seat can still
    # beat it (used for third-hand decisions).
    best = np.int64(-1)
    partner_winning = False
    if n_played > 0:
        best = tc0
        wi = 0
        if n_played > 1 and _beats(tc1, best, trump):
            best = tc1
            wi = 1
        if n_played > 2 and _beats(tc2, best, trump):
            best = tc2
            wi = 2
        partner_winning = (n_played - wi) % 2 == 0
    fourth_can_beat = False
    if n_played == 2 and best >= 0:
        nh_p = (to_play + 1) % 4
        if nh_p == 0:
            nh = h0
        elif nh_p == 1:
            nh = h1
        elif nh_p == 2:
            nh = h2
        else:
            nh = h3
        bbit = np.int64(1) << best
        beaters = SUIT_MASK[best // 13] & ~((bbit << 1) - 1)
        if trump < 4 and best // 13 != trump:
            beaters |= SUIT_MASK[trump]
        fourth_can_beat = (nh & beaters) != 0
    partner = (to_play + 2) % 4
    if partner == 0:
        ph = h0
    elif partner == 1:
        ph = h1
    elif partner == 2:
        ph = h2
    else:
        ph = h3

    scores = np.empty(13, dtype=np.int64)
    n_moves = 0
    rest = legal
    while rest != 0:
        bit = rest & -rest
        rest &= rest - 1
        c = _bit_index(bit)
        # Skip if the next higher remaining card of the suit is our own:
        # the two cards are interchangeable and the higher one is kept.
        above = blockers & SUIT_MASK[c // 13] & ~((bit << 1) - 1)
        if above != 0 and (above & -above) & myh:
            continue
        rank = c % 13
        if n_played == 0:
            suit = c // 13
            higher_elsewhere = ((blockers & ~myh) & SUIT_MASK[suit]
                                & ~((bit << 1) - 1))
            if higher_elsewhere == 0:
                score = 128 + rank  # master: cash first
            elif trump < 4 and (ph & SUIT_MASK[suit]) == 0 \
                    and (ph & SUIT_MASK[trump]) != 0 and suit != trump:
                score = 96 + (12 - rank)  # partner can ruff
            elif trump < 4 and suit == trump:
                score = 64 + (12 - rank)  # draw trumps
            else:
                score = 12 - rank  # otherwise lead low
        elif n_played == 1:
            # Second hand low; winners ordered with the rest by cheapness.
            score = 12 - rank
            if _beats(c, best, trump):
                score += 16
        elif n_played == 3:
            wins = _beats(c, best, trump)
            if partner_winning:
                score = (96 if not wins else 32) + (12 - rank)  # trick is ours
            elif wins:
                score = 96 + (12 - rank)  # win as cheaply as possible
            else:
                score = 12 - rank
        else:
            # Third hand: duck if the trick is safely won, else fight.
            wins = _beats(c, best, trump)
            if partner_winning and not fourth_can_beat:
                score = (96 if not wins else 32) + (12 - rank)
            elif wins:
                score = 96 + (12 - rank)
            else:
                score = 12 - rank
        cards[n_moves] = c
        scores[n_moves] = score
        n_moves += 1

    # Insertion sort, best score first.
    for i in range(1, n_moves):
        c = cards[i]
        sc = scores[i]
        j = i - 1
        while j >= 0 and scores[j] < sc:
            cards[j + 1] = cards[j]
            scores[j + 1] = scores[j]
            j -= 1
        cards[j + 1] = c
        scores[j + 1] = sc
    return n_moves


@njit(cache=True)
def can_win(h0, h1, h2, h3, trump, to_play, tc0, tc1, tc2, n_played, g,
            SIG, HS1, HS2, M1, M2, KIND, VAL, LT, MV, SK):
    """True iff the side of ``to_play`` wins >= g of the remaining tricks,
    counting the trick in progress."""
    N = _MAX_DEPTH
    FH = np.empty((N, 4), dtype=np.int64)
    FTP = np.empty(N, dtype=np.int64)
    FTC = np.empty((N, 3), dtype=np.int64)
    FNP = np.empty(N, dtype=np.int64)
    FG = np.empty(N, dtype=np.int64)
    FSTAKE = np.empty(N, dtype=np.int64)
    FCARDS = np.empty((N, 13), dtype=np.int64)
    FNM = np.empty(N, dtype=np.int64)
    FIDX = np.empty(N, dtype=np.int64)
    FSLOT = np.empty(N, dtype=np.int64)
    FSIG = np.empty(N, dtype=np.int64)
    FHS1 = np.empty(N, dtype=np.int64)
    FHS2 = np.empty(N, dtype=np.int64)
    FNEG = np.empty(N, dtype=np.uint8)
    FFOUND = np.empty(N, dtype=np.uint8)
    FTT = np.empty(N, dtype=np.uint8)
    FBM = np.empty(N, dtype=np.int64)
    FSM = np.empty(N, dtype=np.int64)   # winning child's relevance mask
    FWA = np.empty(N, dtype=np.int64)   # union over refuted children
    FPM = np.empty(N, dtype=np.int64)   # pending trick-winner mark
    FEN = np.empty(N, dtype=np.int64)   # node count at frame entry

    FH[0, 0], FH[0, 1], FH[0, 2], FH[0, 3] = h0, h1, h2, h3
    FTP[0] = to_play
    FTC[0, 0], FTC[0, 1], FTC[0, 2] = tc0, tc1, tc2
    FNP[0] = n_played
    FG[0] = g

    sp = 0
    entering = True
    result = False
    ret_mask = np.int64(0)
    nodes = np.int64(0)
    while sp >= 0:
        if entering:
            nodes += 1
            FEN[sp] = nodes
            fg = FG[sp]
            if fg <= 0:
                result = True
                ret_mask = np.int64(0)
                entering = False
                sp -= 1
                continue
            tp = FTP[sp]
            myh = FH[sp, tp]
            stake = _popcount(myh)
            if fg > stake:
                result = False
                ret_mask = np.int64(0)
                entering = False
                sp -= 1
                continue
            FSTAKE[sp] = stake
            FTT[sp] = 0
            FBM[sp] = -1
            FSM[sp] = 0
            FWA[sp] = 0
            # Tiny endings are cheaper to search than to hash.
            if FNP[sp] == 0 and stake > 2:
                a0, a1, a2, a3 = FH[sp, 0], FH[sp, 1], FH[sp, 2], FH[sp, 3]
                qt, qmask = _quick_tricks(a0, a1, a2, a3, trump, tp)
                if qt >= fg:
                    result = True
                    ret_mask = qmask
                    entering = False
                    sp -= 1
                    continue
                ost, tmask = _opp_sure_trumps(a0, a1, a2, a3, trump, tp)
                if fg > stake - ost:
                    result = False
                    ret_mask = tmask
                    entering = False
                    sp -= 1
                    continue
                sig, hs1, hs2 = _encode(a0, a1, a2, a3)
                lt = np.int8(tp | (trump << 2))
                tmask_top, owners = _tops(a0, a1, a2, a3)
                base = _slot_of(sig, lt, owners)
                hit = 0
                hmask = np.int64(0)
                for i in range(TT_PROBES):
                    s_i = (base + i) & (TT_SIZE - 1)
                    k = KIND[s_i]
                    if k == 0:
                        break
                    if SIG[s_i] != sig or LT[s_i] != lt:
                        continue
                    if (((hs1 ^ HS1[s_i]) & M1[s_i])
                            | ((hs2 ^ HS2[s_i]) & M2[s_i])) != 0:
                        continue
                    if MV[s_i] >= 0 and FBM[sp] < 0:
                        # Decode (suit, depth-from-top) against this layout.
                        ms = MV[s_i] >> 4
                        md = MV[s_i] & 15
                        allc = a0 | a1 | a2 | a3
                        for r in range(12, -1, -1):
                            bit = np.int64(1) << (13 * ms + r)
                            if allc & bit:
                                if md == 0:
                                    FBM[sp] = 13 * ms + r
                                    break
                                md -= 1
                    if k == 1 and VAL[s_i] >= fg:
                        hit = 1
                        hmask = _seg_abs(a0, a1, a2, a3, M1[s_i], M2[s_i])
                        break
                    if k == 2 and VAL[s_i] < fg:
                        hit = 2
                        hmask = _seg_abs(a0, a1, a2, a3, M1[s_i], M2[s_i])
                        break
                if hit != 0:
                    result = hit == 1
                    ret_mask = hmask
                    entering = False
                    sp -= 1
                    continue
                FTT[sp] = 1
                FSLOT[sp] = base
                FSIG[sp] = sig
                FHS1[sp] = hs1
                FHS2[sp] = hs2
            FNM[sp] = _movegen(FH[sp, 0], FH[sp, 1], FH[sp, 2], FH[sp, 3],
                               trump, tp, FTC[sp, 0], FTC[sp, 1], FTC[sp, 2],
                               FNP[sp], FCARDS[sp])
            if FBM[sp] >= 0:
                # Try the remembered cutoff move first.
                for i in range(FNM[sp]):
                    if FCARDS[sp, i] == FBM[sp]:
                        for j in range(i, 0, -1):
                            FCARDS[sp, j] = FCARDS[sp, j - 1]
                        FCARDS[sp, 0] = FBM[sp]
                        break
            FIDX[sp] = 0
            FFOUND[sp] = 0
        else:
            # A child returned ``result``/``ret_mask`` to frame sp.
            cm = ret_mask | FPM[sp]
            if result != (FNEG[sp] == 1):
                FFOUND[sp] = 1
                FSM[sp] = cm
            else:
                FWA[sp] |= cm

        if FFOUND[sp] == 1 or FIDX[sp] >= FNM[sp]:
            found = FFOUND[sp] == 1
            mask = FSM[sp] if found else FWA[sp]
            if FNP[sp] == 0:
                a0, a1, a2, a3 = FH[sp, 0], FH[sp, 1], FH[sp, 2], FH[sp, 3]
                mask = _extend(a0, a1, a2, a3, mask)
                if FTT[sp] == 1:
                    top_mask, _owners = _tops(a0, a1, a2, a3)
                    m1, m2 = _seg_masks(a0, a1, a2, a3, mask | top_mask)
                    kind = np.uint8(1) if found else np.uint8(2)
                    val = np.int8(FG[sp]) if found else np.int8(FG[sp] - 1)
                    lt = np.int8(FTP[sp] | (trump << 2))
                    mv = np.int8(-1)
                    if found:
                        c = FCARDS[sp, FIDX[sp] - 1]
                        cbit = np.int64(1) << c
                        allc = a0 | a1 | a2 | a3
                        depth = _popcount(allc & SUIT_MASK[c // 13]
                                          & ~((cbit << 1) - 1))
                        mv = np.int8(((c // 13) << 4) | depth)
                    effort = nodes - FEN[sp]
                    sk_new = np.int64(0)
                    while effort > 0:
                        effort >>= 1
                        sk_new += 1
                    base = FSLOT[sp]
                    empty = np.int64(-1)
                    victim = base
                    victim_sk = np.int64(127)
                    done = False
                    for i in range(TT_PROBES):
                        s_i = (base + i) & (TT_SIZE - 1)
                        if KIND[s_i] == 0:
                            empty = s_i
                            break
                        if (KIND[s_i] == kind and SIG[s_i] == FSIG[sp]
                                and LT[s_i] == lt):
                            em1 = M1[s_i]
                            em2 = M2[s_i]
                            # An entry at least as general and as strong
                            # already covers this one.
                            if ((em1 & ~m1) | (em2 & ~m2)) == 0 \
                                    and ((FHS1[sp] ^ HS1[s_i]) & em1) == 0 \
                                    and ((FHS2[sp] ^ HS2[s_i]) & em2) == 0 \
                                    and ((kind == 1 and VAL[s_i] >= val)
                                         or (kind == 2 and VAL[s_i] <= val)):
                                if mv >= 0:
                                    MV[s_i] = mv
                                done = True
                                break
                            # The new bound subsumes the entry: tighten it
                            # in place instead of storing a near-duplicate.
                            if ((m1 & ~em1) | (m2 & ~em2)) == 0 \
                                    and ((FHS1[sp] ^ HS1[s_i]) & m1) == 0 \
                                    and ((FHS2[sp] ^ HS2[s_i]) & m2) == 0 \
                                    and ((kind == 1 and val >= VAL[s_i])
                                         or (kind == 2 and val <= VAL[s_i])):
                                HS1[s_i] = FHS1[sp]
                                HS2[s_i] = FHS2[sp]
                                M1[s_i] = m1
                                M2[s_i] = m2
                                VAL[s_i] = val
                                if mv >= 0:
                                    MV[s_i] = mv
                                if sk_new > SK[s_i]:
                                    SK[s_i] = np.int8(sk_new)
                                done = True
                                break
                        if SK[s_i] < victim_sk:
                            victim_sk = SK[s_i]
                            victim = s_i
                    if not done:
                        s_i = empty if empty >= 0 else victim
                        SIG[s_i] = FSIG[sp]
                        HS1[s_i] = FHS1[sp]
                        HS2[s_i] = FHS2[sp]
                        M1[s_i] = m1
                        M2[s_i] = m2
                        KIND[s_i] = kind
                        VAL[s_i] = val
                        LT[s_i] = lt
                        MV[s_i] = mv
                        SK[s_i] = np.int8(sk_new)
            result = found
            ret_mask = mask
            entering = False
            sp -= 1
            continue

        # Push the next move as a child frame.
        i = FIDX[sp]
        FIDX[sp] = i + 1
        c = FCARDS[sp, i]
        bit = np.int64(1) << c
        tp = FTP[sp]
        np_ = FNP[sp]
        stake = FSTAKE[sp]
        fg = FG[sp]
        child = sp + 1
        for q in range(4):
            FH[child, q] = FH[sp, q]
        FH[child, tp] = FH[sp, tp] & ~bit
        if np_ < 3:
            FTP[child] = (tp + 1) % 4
            FTC[child, 0] = FTC[sp, 0] if np_ > 0 else c
            FTC[child, 1] = (FTC[sp, 1] if np_ > 1 else (c if np_ == 1 else -1))
            FTC[child, 2] = c if np_ == 2 else -1
            FNP[child] = np_ + 1
            FG[child] = stake - fg + 1
            FNEG[sp] = 1
            FPM[sp] = 0
        else:
            best = FTC[sp, 0]
            wi = 0
            if _beats(FTC[sp, 1], best, trump):
                best = FTC[sp, 1]
                wi = 1
            if _beats(FTC[sp, 2], best, trump):
                best = FTC[sp, 2]
                wi = 2
            if _beats(c, best, trump):
                best = c
                wi = 3
            leader = (tp - 3) % 4
            wp = (leader + wi) % 4
            FTP[child] = wp
            FTC[child, 0] = -1
            FTC[child, 1] = -1
            FTC[child, 2] = -1
            FNP[child] = 0
            FPM[sp] = np.int64(1) << best  # the trick's winner must stay put
            if (wp - tp) % 2 == 0:
                FG[child] = fg - 1
                FNEG[sp] = 0
            else:
                FG[child] = (stake - 1) - fg + 1
                FNEG[sp] = 1
        sp = child
        entering = True
    return result


@njit(cache=True)
def solve_tricks(h0, h1, h2, h3, trump, to_play, tc0, tc1, tc2, n_played,
                 SIG, HS1, HS2, M1, M2, KIND, VAL, LT, MV, SK):
    """Exact tricks for the side of ``to_play`` via zero-window binary search."""
    if to_play == 0:
        myh = h0
    elif to_play == 1:
        myh = h1
    elif to_play == 2:
        myh = h2
    else:
        myh = h3
    stake = _popcount(myh)
    lo = 0
    hi = stake
    while lo < hi:
        g = (lo + hi + 1) // 2
        if can_win(h0, h1, h2, h3, trump, to_play, tc0, tc1, tc2, n_played,
                   g, SIG, HS1, HS2, M1, M2, KIND, VAL, LT, MV, SK):
            lo = g
        else:
            hi = g - 1
    return lo
