// DOM rendering for chat turns. Every displayed value comes verbatim from
// the service response; the UI contributes only fixed structural labels.
// All values are inserted via textContent, never markup.

import type { QueryResponse } from "./api.js";

export type PathwayBadge = "Document" | "Structured" | "Web";

export interface ChatTurnView {
  userText: string;
  answerText: string;
  pathwayBadge: PathwayBadge;
  sources: string[];
  sqlDisplay: string | null;
  degradedIndicator: boolean;
  rewrittenQuery: string;
}

const BADGES: Record<QueryResponse["pathway"], PathwayBadge> = {
  document: "Document",
  structured: "Structured",
  web: "Web",
};

export function toChatTurnView(userText: string, response: QueryResponse): ChatTurnView {
  return {
    userText,
    answerText: response.answer_text,
    pathwayBadge: BADGES[response.pathway],
    sources: response.sources,
    sqlDisplay: response.sql,
    degradedIndicator: response.degraded,
    rewrittenQuery: response.rewritten_query,
  };
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderSources(sources: string[]): HTMLElement {
  const wrap = el("div", "sources");
  wrap.appendChild(el("span", "sources-label", "Sources"));
  const list = el("ul", "sources-list");
  for (const source of sources) {
    const item = el("li", "source-item");
    if (/^https?:\/\//.test(source)) {
      const link = el("a", "source-link", source);
      link.setAttribute("href", source);
      link.setAttribute("rel", "noreferrer");
      link.setAttribute("target", "_blank");
      item.appendChild(link);
    } else {
      item.textContent = source;
    }
    list.appendChild(item);
  }
  wrap.appendChild(list);
  return wrap;
}

export function renderTurn(turn: ChatTurnView): HTMLElement {
  const root = el("article", "turn");

  const user = el("div", "user-row");
  user.appendChild(el("span", "user-label", "You"));
  user.appendChild(el("p", "user-text", turn.userText));
  root.appendChild(user);

  const answer = el("div", "answer-row");
  const badge = el("span", `badge badge-${turn.pathwayBadge.toLowerCase()}`, turn.pathwayBadge);
  answer.appendChild(badge);
  if (turn.degradedIndicator) {
    const degraded = el("span", "degraded-indicator", "degraded");
    degraded.setAttribute("title", "Answer produced with incomplete or uncertain evidence");
    answer.appendChild(degraded);
  }
  answer.appendChild(el("p", "answer-text", turn.answerText));
  root.appendChild(answer);

  if (turn.sqlDisplay !== null) {
    const details = el("details", "sql-block");
    details.appendChild(el("summary", "sql-summary", "SQL"));
    const code = el("code", "sql-text", turn.sqlDisplay);
    const pre = el("pre", "sql-pre");
    pre.appendChild(code);
    details.appendChild(pre);
    root.appendChild(details);
  }

  if (turn.rewrittenQuery !== turn.userText) {
    const details = el("details", "rewrite-detail");
    details.appendChild(el("summary", "rewrite-summary", "Rewritten query"));
    details.appendChild(el("p", "rewrite-text", turn.rewrittenQuery));
    root.appendChild(details);
  }

  if (turn.sources.length > 0) {
    root.appendChild(renderSources(turn.sources));
  }
  return root;
}

export function renderHistoryTurn(userQuery: string, answer: string): HTMLElement {
  const root = el("article", "turn turn-history");
  const user = el("div", "user-row");
  user.appendChild(el("span", "user-label", "You"));
  user.appendChild(el("p", "user-text", userQuery));
  root.appendChild(user);
  const answerRow = el("div", "answer-row");
  answerRow.appendChild(el("p", "answer-text", answer));
  root.appendChild(answerRow);
  return root;
}

export function renderInlineError(message: string): HTMLElement {
  return el("div", "inline-error", message);
}
