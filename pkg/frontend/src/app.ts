/**
 * Browser bidding table.  One active play-through per tab; everything
 * rendered comes straight from the service responses.
 */

import { SessionClient } from "./api.js";
import type { PlayView, SessionSummary } from "./api.js";
import { SessionFlow } from "./flow.js";
import {
  GUIDANCE,
  auctionGrid,
  buildPalette,
  groupHand,
  progressLabel,
  runningMean,
} from "./table.js";

const SUIT_GLYPHS = { S: "♠", H: "♥", D: "♦", C: "♣" };

function el(
  tag: string,
  className: string,
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class App {
  private flow: SessionFlow | null = null;
  private banner = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly client: SessionClient,
  ) {}

  renderStart(): void {
    this.root.replaceChildren();
    const intro = el("div", "guidance", GUIDANCE);
    const form = el("div", "start-form");
    const deals = document.createElement("input");
    deals.type = "number";
    deals.value = "2";
    deals.min = "1";
    const seed = document.createElement("input");
    seed.type = "number";
    seed.value = "0";
    const start = el("button", "start", "Start session") as HTMLButtonElement;
    start.onclick = () => {
      void this.start(Number(deals.value), Number(seed.value));
    };
    form.append("Boards:", deals, "Seed:", seed, start);
    this.root.append(intro, form);
  }

  async start(dealCount: number, seed: number): Promise<void> {
    const session = await this.client.createSession({
      deal_count: dealCount,
      seed,
    });
    this.flow = new SessionFlow(this.client, session.session);
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.flow) return;
    const status = await this.flow.status();
    if (status.state === "complete") {
      this.renderSummary(await this.client.getSummary(this.flow.sessionId));
      return;
    }
    const view = await this.flow.waitForTurn(status.current_play!);
    this.renderTable(view, status.completed, status.plays);
  }

  renderTable(view: PlayView, completed: number, total: number): void {
    this.root.replaceChildren();
    if (this.banner) {
      this.root.append(el("div", "banner", this.banner));
      this.banner = "";
    }
    this.root.append(
      el("div", "progress",
         `${progressLabel(completed, total)} — you are ${view.seat}`),
    );

    const hand = el("div", "hand");
    for (const group of groupHand(view.hand)) {
      hand.append(
        el("span", `suit suit-${group.suit}`,
           `${SUIT_GLYPHS[group.suit]} ${group.ranks.join(" ") || "—"}`),
      );
    }
    this.root.append(hand);

    const grid = el("table", "auction");
    const head = document.createElement("tr");
    for (const seat of ["N", "E", "S", "W"]) {
      head.append(el("th", "seat-head", seat));
    }
    grid.append(head);
    for (const row of auctionGrid(view)) {
      const tr = document.createElement("tr");
      for (const cell of row) tr.append(el("td", "call-cell", cell ?? ""));
      grid.append(tr);
    }
    this.root.append(grid);

    if (view.complete) {
      this.root.append(el("div", "done", "Play-through complete."));
      const next = el("button", "next", "Next play-through");
      next.onclick = () => void this.refresh();
      this.root.append(next);
      return;
    }

    const palette = buildPalette(view.legal_calls);
    const controls = el("div", "palette");
    const buttons = [palette.pass, palette.double, palette.redouble,
                     ...palette.ladder];
    for (const spec of buttons) {
      const button = el("button", "call", spec.label) as HTMLButtonElement;
      button.disabled = !spec.enabled;
      button.onclick = () => void this.makeCall(view, spec.call);
      controls.append(button);
    }
    this.root.append(controls);
  }

  async makeCall(view: PlayView, callId: number): Promise<void> {
    if (!this.flow) return;
    const outcome = await this.flow.submitCall(view, callId);
    if (outcome.tableMovedOn) this.banner = "The table moved on — refreshed.";
    await this.refresh();
  }

  renderSummary(summary: SessionSummary): void {
    this.root.replaceChildren();
    this.root.append(
      el("h2", "summary-title", "Session report"),
      el("div", "summary-stats",
         `mean ${summary.mean_imp.toFixed(2)} ± ${summary.sem.toFixed(2)} ` +
         `IMPs/board over ${summary.n} boards`),
    );
    const means = runningMean(summary);
    for (const deal of summary.deals) {
      const section = el("div", "deal-summary");
      section.append(
        el("h3", "deal-head",
           `Board ${deal.deal_index + 1}: ${deal.imp.toFixed(1)} IMPs ` +
           `(running mean ${means[deal.deal_index].toFixed(2)})`),
      );
      for (const play of deal.plays) {
        section.append(
          el("div", "assignment",
             `play ${play.play}: you sat ${play.seat} with the ` +
             `${play.partner} partner, N-S score ${play.ns_score}`),
        );
      }
      this.root.append(section);
    }
  }
}

export function mount(root: HTMLElement, baseUrl: string): App {
  const app = new App(root, new SessionClient(baseUrl));
  app.renderStart();
  return app;
}
