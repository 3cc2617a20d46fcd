import { describe, expect, it } from "vitest";

import type { PlayView, SessionSummary } from "../src/api.js";
import {
  DOUBLE,
  NUM_CALLS,
  PASS,
  REDOUBLE,
  auctionGrid,
  buildPalette,
  callName,
  groupHand,
  progressLabel,
  runningMean,
} from "../src/table.js";

function viewWith(history: string[]): PlayView {
  return {
    session: "s",
    play: 0,
    deal_index: 0,
    seat: "N",
    hand: [],
    history: history.map((name, i) => ({ call: i, name })),
    version: history.length,
    to_act: true,
    legal_calls: [],
    complete: false,
    ns_score: null,
  };
}

describe("call naming", () => {
  it("names the special calls and the ladder endpoints", () => {
    expect(callName(PASS)).toBe("P");
    expect(callName(DOUBLE)).toBe("X");
    expect(callName(REDOUBLE)).toBe("XX");
    expect(callName(3)).toBe("1C");
    expect(callName(7)).toBe("1NT");
    expect(callName(37)).toBe("7NT");
  });
});

describe("palette", () => {
  it("enables exactly the server's legal set", () => {
    const legal = [PASS, DOUBLE, 10, 11, 37];
    const palette = buildPalette(legal);
    const all = [palette.pass, palette.double, palette.redouble,
                 ...palette.ladder];
    expect(all).toHaveLength(NUM_CALLS);
    for (const button of all) {
      expect(button.enabled).toBe(legal.includes(button.call));
    }
  });

  it("lays the ladder out lowest bid first", () => {
    const ladder = buildPalette([]).ladder;
    expect(ladder[0].label).toBe("1C");
    expect(ladder[4].label).toBe("1NT");
    expect(ladder[34].label).toBe("7NT");
  });
});

describe("hand display", () => {
  it("groups by suit, spades first, high cards first", () => {
    const groups = groupHand(["C2", "SA", "ST", "HK", "CQ", "SK"]);
    expect(groups.map((g) => g.suit)).toEqual(["S", "H", "D", "C"]);
    expect(groups[0].ranks).toEqual(["A", "K", "T"]);
    expect(groups[1].ranks).toEqual(["K"]);
    expect(groups[2].ranks).toEqual([]);
    expect(groups[3].ranks).toEqual(["Q", "2"]);
  });
});

describe("auction grid", () => {
  it("fills four columns in call order with trailing blanks", () => {
    const grid = auctionGrid(viewWith(["1H", "P", "2H", "P", "P", "P"]));
    expect(grid).toEqual([
      ["1H", "P", "2H", "P"],
      ["P", "P", null, null],
    ]);
  });

  it("renders one empty row before any call", () => {
    expect(auctionGrid(viewWith([]))).toEqual([[null, null, null, null]]);
  });
});

describe("summary helpers", () => {
  it("reports progress one-based and clamps at the end", () => {
    expect(progressLabel(0, 16)).toBe("play-through 1 of 16");
    expect(progressLabel(15, 16)).toBe("play-through 16 of 16");
    expect(progressLabel(16, 16)).toBe("play-through 16 of 16");
  });

  it("computes the running mean per deal", () => {
    const summary: SessionSummary = {
      session: "s",
      deals: [
        { deal_index: 0, imp: 4, plays: [] },
        { deal_index: 1, imp: -2, plays: [] },
        { deal_index: 2, imp: 1, plays: [] },
      ],
      mean_imp: 1,
      sem: 1,
      n: 3,
    };
    expect(runningMean(summary)).toEqual([4, 1, 1]);
  });
});
