"""HTTP session service for the blind human-partner protocol.

A session deals a set of boards; the human plays each board eight times
(four seats x two hidden partners — the agent under evaluation or the
baseline) in a per-board randomized order.  Play views never reveal the
partner assignment or any hidden hand; the summary endpoint reveals
everything once all play-throughs are complete.

Sessions persist as append-only JSON-lines event logs.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .auction import (AuctionState, IllegalCallError, apply_call, call_name,
                      legal_calls)
from .cards import NUM_PLAYERS, SEAT_NAMES, card_name, new_deal
from .encoder import encode
from .evaluation import EvalReport, human_eval_metric, score_auction
from .policy import greedy_action, legal_mask, resolve_policy

PLAYS_PER_DEAL = 8  # 4 seats x {agent partner, baseline partner}

# Seat patterns for the summary metric: human seat -> (pattern with
# agent partner, pattern with baseline partner).
_PATTERNS = {0: ("hwaw", "hwww"), 1: ("whwa", "whww"),
             2: ("awhw", "wwhw"), 3: ("wawh", "wwwh")}


class _Play:
    """One play-through: a live table with the human in one seat."""

    def __init__(self, deal_index, deal, human_seat, partner_is_agent):
        self.deal_index = deal_index
        self.deal = deal
        self.human_seat = human_seat
        self.partner_is_agent = partner_is_agent
        self.state = AuctionState()
        self.score = None

    @property
    def complete(self):
        return self.state.terminal


class Session:
    def __init__(self, session_id, deal_count, seed, agent, baseline):
        self.id = session_id
        self.seed = seed
        self.agent = agent
        self.baseline = baseline
        self.lock = threading.Lock()
        rng = np.random.default_rng(seed)
        self.deals = [new_deal(rng) for _ in range(deal_count)]
        self.plays = []
        for d, deal in enumerate(self.deals):
            slots = [(seat, part) for seat in range(NUM_PLAYERS)
                     for part in (True, False)]
            order = rng.permutation(PLAYS_PER_DEAL)
            for k in order:
                seat, part = slots[int(k)]
                self.plays.append(_Play(d, deal, seat, part))

    @property
    def completed(self):
        return sum(p.complete for p in self.plays)

    @property
    def complete(self):
        return self.completed == len(self.plays)

    @property
    def current(self):
        for n, p in enumerate(self.plays):
            if not p.complete:
                return n
        return None

    def bot_policy(self, play: _Play, seat: int):
        partner = (play.human_seat + 2) % NUM_PLAYERS
        if seat == partner:
            return self.agent if play.partner_is_agent else self.baseline
        return self.baseline


def _advance_bots(session: Session, play: _Play, events):
    """Let bots call until the human is to act or the auction ends."""
    while not play.state.terminal and play.state.to_act != play.human_seat:
        seat = play.state.to_act
        policy = session.bot_policy(play, seat)
        features = encode(play.state, play.deal, seat)
        mask = legal_mask(legal_calls(play.state))
        call = greedy_action(policy.evaluate(features, mask))
        play.state = apply_call(play.state, call)
        events.append({"event": "call", "seat": seat, "call": call})
    if play.state.terminal and play.score is None:
        play.score = score_auction(play.deal, play.state)
        events.append({"event": "score", "ns_score": play.score})


class CreateSessionRequest(BaseModel):
    deal_count: int = 2
    seed: int = 0
    agent: str = "heuristic"
    baseline: str = "heuristic"


class CallRequest(BaseModel):
    call_id: int
    version: int | None = None


def create_app(log_dir=None) -> FastAPI:
    app = FastAPI(title="bidkit session service")
    sessions = {}
    app.state.sessions = sessions

    def log_event(session_id, payload):
        if log_dir is None:
            return
        os.makedirs(log_dir, exist_ok=True)
        record = {"ts": time.time(), "session": session_id, **payload}
        with open(os.path.join(log_dir, f"{session_id}.jsonl"), "a") as f:
            f.write(json.dumps(record) + "\n")

    def get_session(session_id) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def get_play(session, n) -> _Play:
        if not 0 <= n < len(session.plays):
            raise HTTPException(status_code=404, detail="unknown play-through")
        return session.plays[n]

    def play_view(session, n):
        """The human-visible view; identical field shape for both hidden
        partner assignments."""
        play = get_play(session, n)
        to_act = (not play.state.terminal
                  and play.state.to_act == play.human_seat)
        return {
            "session": session.id,
            "play": n,
            "deal_index": play.deal_index,
            "seat": SEAT_NAMES[play.human_seat],
            "hand": [card_name(c) for c in play.deal.hand(play.human_seat)],
            "history": [{"call": c, "name": call_name(c)}
                        for c in play.state.history],
            "version": len(play.state.history),
            "to_act": to_act,
            "legal_calls": sorted(legal_calls(play.state)) if to_act else [],
            "complete": play.complete,
            "ns_score": play.score,
        }

    def session_view(session):
        return {
            "session": session.id,
            "deal_count": len(session.deals),
            "plays": len(session.plays),
            "completed": session.completed,
            "current_play": session.current,
            "state": "complete" if session.complete else "active",
        }

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        if req.deal_count < 1:
            raise HTTPException(status_code=422, detail="deal_count must be >= 1")
        try:
            agent = resolve_policy(req.agent)
            baseline = resolve_policy(req.baseline)
        except (OSError, ValueError) as e:
            raise HTTPException(status_code=422,
                                detail=f"bad policy spec: {e}") from e
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, req.deal_count, req.seed, agent, baseline)
        with session.lock:
            events = []
            _advance_bots(session, session.plays[0], events)
        sessions[session_id] = session
        log_event(session_id, {"event": "created", "deal_count": req.deal_count,
                               "seed": req.seed, "agent": req.agent,
                               "baseline": req.baseline})
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session_state(session_id: str):
        return session_view(get_session(session_id))

    @app.get("/sessions/{session_id}/plays/{n}")
    def get_play_state(session_id: str, n: int):
        return play_view(get_session(session_id), n)

    @app.post("/sessions/{session_id}/plays/{n}/call")
    def post_call(session_id: str, n: int, req: CallRequest):
        session = get_session(session_id)
        with session.lock:
            play = get_play(session, n)
            if session.current != n:
                raise HTTPException(
                    status_code=409,
                    detail=f"play-throughs run in order; current is "
                           f"{session.current}")
            if req.version is not None and \
                    req.version != len(play.state.history):
                raise HTTPException(status_code=409,
                                    detail="stale auction version")
            if play.state.terminal or play.state.to_act != play.human_seat:
                raise HTTPException(status_code=409, detail="not your turn")
            legal = legal_calls(play.state)
            if req.call_id not in legal:
                raise HTTPException(
                    status_code=422,
                    detail={"error": "illegal call",
                            "legal_calls": sorted(legal)})
            events = [{"event": "call", "seat": play.human_seat,
                       "call": req.call_id, "human": True}]
            try:
                play.state = apply_call(play.state, req.call_id)
            except IllegalCallError as e:  # unreachable after the check
                raise HTTPException(status_code=422, detail=str(e)) from e
            _advance_bots(session, play, events)
            nxt = session.current
            if nxt is not None and nxt != n:
                more = []
                _advance_bots(session, session.plays[nxt], more)
                events.extend({"play": nxt, **e} for e in more)
        for e in events:
            log_event(session_id, {"play": e.pop("play", n), **e})
        return play_view(session, n)

    @app.get("/sessions/{session_id}/summary")
    def summary(session_id: str):
        session = get_session(session_id)
        if not session.complete:
            remaining = [n for n, p in enumerate(session.plays)
                         if not p.complete]
            raise HTTPException(
                status_code=409,
                detail={"error": "session incomplete",
                        "remaining_plays": remaining})
        per_deal = []
        values = []
        for d in range(len(session.deals)):
            scores = {}
            assignments = []
            for n, play in enumerate(session.plays):
                if play.deal_index != d:
                    continue
                agent_pat, base_pat = _PATTERNS[play.human_seat]
                pattern = agent_pat if play.partner_is_agent else base_pat
                scores[pattern] = play.score
                assignments.append({
                    "play": n, "seat": SEAT_NAMES[play.human_seat],
                    "partner": "agent" if play.partner_is_agent
                    else "baseline",
                    "ns_score": play.score})
            value = human_eval_metric(scores)
            values.append(value)
            per_deal.append({"deal_index": d, "imp": value,
                             "plays": assignments})
        report = EvalReport(tuple(values))
        log_event(session_id, {"event": "summary", "mean": report.mean,
                               "sem": report.sem})
        return {"session": session.id, "deals": per_deal,
                "mean_imp": report.mean, "sem": report.sem, "n": report.n}

    return app


def serve(host="127.0.0.1", port=None, log_dir=None):
    """Run the service with uvicorn; port defaults to $BIDKIT_PORT or 8000."""
    import uvicorn

    if port is None:
        port = int(os.environ.get("BIDKIT_PORT", "8000"))
    uvicorn.run(create_app(log_dir=log_dir), host=host, port=port)
