import { describe, expect, it } from "vitest";

import { renderTurn, toChatTurnView } from "../src/view.js";
import {
  EVACUATION_QUERY,
  FLOOD_PREDICTION_QUERY,
  RANKING_SQL,
  followUpResponse,
  structuredResponse,
  webResponse,
} from "./fixtures.js";

// fixed structural labels the UI is allowed to add
const UI_LABELS = new Set(["You", "Sources", "SQL", "Rewritten query", "degraded"]);

function textNodes(root: HTMLElement): string[] {
  const out: string[] = [];
  const walker = document.createTreeWalker(root, NodeFilter.SHOW_TEXT);
  for (let node = walker.nextNode(); node; node = walker.nextNode()) {
    const text = node.textContent?.trim();
    if (text) {
      out.push(text);
    }
  }
  return out;
}

describe("structured turn (evacuation-ranking case)", () => {
  const turn = renderTurn(toChatTurnView(EVACUATION_QUERY, structuredResponse));

  it("renders the Structured badge", () => {
    expect(turn.querySelector(".badge")?.textContent).toBe("Structured");
  });

  it("renders the SQL in a collapsible block", () => {
    const block = turn.querySelector("details.sql-block");
    expect(block).not.toBeNull();
    expect(block?.querySelector(".sql-text")?.textContent).toBe(RANKING_SQL);
  });

  it("answer names the top-ranked zip code", () => {
    expect(turn.querySelector(".answer-text")?.textContent).toContain("77061");
  });

  it("adds no content beyond response fields and fixed labels", () => {
    const allowed = new Set([
      ...UI_LABELS,
      EVACUATION_QUERY,
      structuredResponse.answer_text,
      "Structured",
      RANKING_SQL,
      ...structuredResponse.sources,
    ]);
    for (const text of textNodes(turn)) {
      expect(allowed).toContain(text);
    }
  });
});

describe("web turn (flood-prediction case)", () => {
  const turn = renderTurn(toChatTurnView(FLOOD_PREDICTION_QUERY, webResponse));

  it("renders the Web badge", () => {
    expect(turn.querySelector(".badge")?.textContent).toBe("Web");
  });

  it("renders all sources as links in response order", () => {
    const links = [...turn.querySelectorAll(".source-item a")];
    expect(links.map((a) => a.textContent)).toEqual(webResponse.sources);
    expect(links.map((a) => a.getAttribute("href"))).toEqual(webResponse.sources);
  });

  it("has no SQL block", () => {
    expect(turn.querySelector(".sql-block")).toBeNull();
  });
});

describe("follow-up turn", () => {
  const userText = "What about evacuation there?";
  const turn = renderTurn(toChatTurnView(userText, followUpResponse));

  it("shows the rewritten query in an expandable detail row", () => {
    const detail = turn.querySelector("details.rewrite-detail");
    expect(detail).not.toBeNull();
    expect(detail?.querySelector(".rewrite-text")?.textContent).toBe(
      followUpResponse.rewritten_query,
    );
  });

  it("omits the detail row when the query was not rewritten", () => {
    const plain = renderTurn(
      toChatTurnView(EVACUATION_QUERY, structuredResponse),
    );
    expect(plain.querySelector(".rewrite-detail")).toBeNull();
  });
});

describe("degraded indicator", () => {
  it("is shown only for degraded answers", () => {
    const degraded = renderTurn(
      toChatTurnView("q", { ...webResponse, degraded: true }),
    );
    expect(degraded.querySelector(".degraded-indicator")).not.toBeNull();
    const healthy = renderTurn(toChatTurnView("q", webResponse));
    expect(healthy.querySelector(".degraded-indicator")).toBeNull();
  });
});

describe("value insertion is text-only", () => {
  it("never interprets response values as markup", () => {
    const hostile = {
      ...webResponse,
      answer_text: "<img src=x onerror=alert(1)>",
      sources: ["<script>alert(1)</script>"],
    };
    const turn = renderTurn(toChatTurnView("q", hostile));
    expect(turn.querySelector("img")).toBeNull();
    expect(turn.querySelector("script")).toBeNull();
    expect(turn.querySelector(".answer-text")?.textContent).toBe(hostile.answer_text);
  });
});
