// Single-page chat application: session bootstrap, send loop, history view.
// One request is in flight per session at a time; the send control is
// disabled while awaiting a response, and failed sends keep the input so
// the user can retry.

import { HazardQaClient, SessionNotFoundError } from "./api.js";
import {
  renderHistoryTurn,
  renderInlineError,
  renderTurn,
  toChatTurnView,
} from "./view.js";

export interface AppElements {
  turns: HTMLElement;
  form: HTMLFormElement;
  input: HTMLInputElement;
  send: HTMLButtonElement;
  status: HTMLElement;
}

export class ChatApp {
  private sessionId: string | null = null;
  private inFlight = false;

  constructor(
    private readonly client: HazardQaClient,
    private readonly elements: AppElements,
  ) {
    elements.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.send();
    });
  }

  get busy(): boolean {
    return this.inFlight;
  }

  get session(): string | null {
    return this.sessionId;
  }

  async ensureSession(): Promise<string> {
    if (this.sessionId === null) {
      this.sessionId = await this.client.createSession();
      this.elements.status.textContent = "new session";
    }
    return this.sessionId;
  }

  async loadHistory(): Promise<void> {
    if (this.sessionId === null) {
      return;
    }
    let entries;
    try {
      entries = await this.client.fetchHistory(this.sessionId);
    } catch (err) {
      if (err instanceof SessionNotFoundError) {
        this.sessionId = null;
        this.elements.status.textContent = "new session";
        return;
      }
      throw err;
    }
    this.elements.turns.replaceChildren();
    for (const entry of entries) {
      this.elements.turns.appendChild(renderHistoryTurn(entry.user_query, entry.answer));
    }
  }

  async send(): Promise<void> {
    const text = this.elements.input.value.trim();
    if (text === "" || this.inFlight) {
      return;
    }
    this.inFlight = true;
    this.elements.send.disabled = true;
    try {
      const sessionId = await this.ensureSession();
      const response = await this.client.sendQuery(sessionId, text);
      this.elements.turns.appendChild(renderTurn(toChatTurnView(text, response)));
      this.elements.input.value = "";
      this.elements.status.textContent = "";
    } catch (err) {
      // input is preserved for retry; no turn is appended
      this.elements.turns.appendChild(
        renderInlineError(err instanceof Error ? err.message : String(err)),
      );
    } finally {
      this.inFlight = false;
      this.elements.send.disabled = false;
    }
  }
}

export function mount(root: Document, baseUrl: string = ""): ChatApp {
  const elements: AppElements = {
    turns: root.getElementById("turns") as HTMLElement,
    form: root.getElementById("composer") as HTMLFormElement,
    input: root.getElementById("query-input") as HTMLInputElement,
    send: root.getElementById("send-button") as HTMLButtonElement,
    status: root.getElementById("status") as HTMLElement,
  };
  return new ChatApp(new HazardQaClient(baseUrl), elements);
}
