/**
 * Pure view logic for the bidding table.
 *
 * Nothing here re-derives bidding rules: the enabled calls are exactly
 * the server's legal set, and every other function is presentation —
 * grouping a hand by suit, laying the auction out on a N/E/S/W grid,
 * naming calls for display.
 */

import type { PlayView, SessionSummary } from "./api.js";

export const PASS = 0;
export const DOUBLE = 1;
export const REDOUBLE = 2;
export const NUM_CALLS = 38;

export const SEATS = ["N", "E", "S", "W"] as const;
const STRAINS = ["C", "D", "H", "S", "NT"] as const;
const RANK_ORDER = "AKQJT98765432";

export function callName(call: number): string {
  if (call === PASS) return "P";
  if (call === DOUBLE) return "X";
  if (call === REDOUBLE) return "XX";
  const bid = call - 3;
  return `${Math.floor(bid / 5) + 1}${STRAINS[bid % 5]}`;
}

export interface PaletteButton {
  call: number;
  label: string;
  enabled: boolean;
}

export interface Palette {
  /** 35 bids, lowest first: 1C 1D ... 7NT. */
  ladder: PaletteButton[];
  pass: PaletteButton;
  double: PaletteButton;
  redouble: PaletteButton;
}

/** Build the call palette: a button per call, enabled exactly when the
 * server listed it as legal (the complement is disabled). */
export function buildPalette(legal: number[]): Palette {
  const legalSet = new Set(legal);
  const button = (call: number): PaletteButton => ({
    call,
    label: callName(call),
    enabled: legalSet.has(call),
  });
  return {
    ladder: Array.from({ length: 35 }, (_, i) => button(i + 3)),
    pass: button(PASS),
    double: button(DOUBLE),
    redouble: button(REDOUBLE),
  };
}

export interface SuitGroup {
  suit: "S" | "H" | "D" | "C";
  ranks: string[];
}

/** Group a served hand (names like "SA", "H7", "NT" never appears) into
 * the conventional spades-first display, high cards first. */
export function groupHand(hand: string[]): SuitGroup[] {
  return (["S", "H", "D", "C"] as const).map((suit) => ({
    suit,
    ranks: hand
      .filter((c) => c.startsWith(suit))
      .map((c) => c.slice(1))
      .sort((a, b) => RANK_ORDER.indexOf(a) - RANK_ORDER.indexOf(b)),
  }));
}

/** Lay the auction out on the conventional 4-column grid. North always
 * deals, so row 0 column 0 is the first call; trailing cells are null. */
export function auctionGrid(view: PlayView): (string | null)[][] {
  const names = view.history.map((h) => h.name);
  const rows: (string | null)[][] = [];
  for (let i = 0; i < Math.max(1, Math.ceil(names.length / 4)); i++) {
    rows.push(
      Array.from({ length: 4 }, (_, j) => names[i * 4 + j] ?? null),
    );
  }
  return rows;
}

export function progressLabel(completed: number, total: number): string {
  return `play-through ${Math.min(completed + 1, total)} of ${total}`;
}

/** Running mean +/- SEM series for the summary chart, one point per
 * deal in order. */
export function runningMean(summary: SessionSummary): number[] {
  const out: number[] = [];
  let acc = 0;
  summary.deals.forEach((d, i) => {
    acc += d.imp;
    out.push(acc / (i + 1));
  });
  return out;
}

/** Guidance shown before the first play-through. */
export const GUIDANCE =
  "You will bid each board several times from different seats, " +
  "selecting the calls you would make at the table. Your partner is a " +
  "computer player whose identity stays hidden until the whole session " +
  "is complete, so just bid naturally; results and partner assignments " +
  "are revealed in the final report.";
