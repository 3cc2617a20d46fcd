/**
 * Session flow shared by the browser app and the scripted tests: a
 * single active play-through advanced by polling, with stale writes
 * surfaced as a "table moved on" condition rather than an error.
 */

import { ApiError, SessionClient } from "./api.js";
import type { PlayView, SessionView } from "./api.js";

export interface CallOutcome {
  view: PlayView;
  /** Set when the server rejected the write because the table state
   * changed (409): the UI shows a banner and re-renders `view`. */
  tableMovedOn: boolean;
  /** Set when the call was refused as illegal (422); the palette is
   * rebuilt from this list. */
  legalCalls: number[] | null;
}

export class SessionFlow {
  constructor(
    readonly client: SessionClient,
    readonly sessionId: string,
  ) {}

  status(): Promise<SessionView> {
    return this.client.getSession(this.sessionId);
  }

  /** The current play-through's view, or null once the session is done. */
  async currentPlay(): Promise<PlayView | null> {
    const session = await this.status();
    if (session.current_play === null) return null;
    return this.client.getPlay(this.sessionId, session.current_play);
  }

  /** Poll the active play-through until the human is to act or it
   * completes.  The service resolves bot calls synchronously, so this
   * normally returns on the first probe. */
  async waitForTurn(play: number, delayMs = 250): Promise<PlayView> {
    for (;;) {
      const view = await this.client.getPlay(this.sessionId, play);
      if (view.to_act || view.complete) return view;
      await new Promise((resolve) => setTimeout(resolve, delayMs));
    }
  }

  /** Submit a call against the version the caller last rendered. */
  async submitCall(view: PlayView, callId: number): Promise<CallOutcome> {
    try {
      const next = await this.client.postCall(
        this.sessionId,
        view.play,
        callId,
        view.version,
      );
      return { view: next, tableMovedOn: false, legalCalls: null };
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      const fresh = await this.client.getPlay(this.sessionId, view.play);
      if (err.tableMovedOn) {
        return { view: fresh, tableMovedOn: true, legalCalls: null };
      }
      if (err.legalCalls !== null) {
        return { view: fresh, tableMovedOn: false, legalCalls: err.legalCalls };
      }
      throw err;
    }
  }

  /** Drive the whole session with a scripted chooser; used by tests and
   * demos.  `choose` sees each view where the human is to act and
   * returns the call to make. */
  async runScripted(
    choose: (view: PlayView) => number,
    onView?: (view: PlayView) => void,
  ): Promise<void> {
    for (;;) {
      let view = await this.currentPlay();
      if (view === null) return;
      view = await this.waitForTurn(view.play);
      onView?.(view);
      while (!view.complete) {
        const outcome = await this.submitCall(view, choose(view));
        view = outcome.view.to_act || outcome.view.complete
          ? outcome.view
          : await this.waitForTurn(outcome.view.play);
        onView?.(view);
      }
    }
  }
}
