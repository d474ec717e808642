// Browser bootstrap: wires the form, result cards, and history buttons to
// the client and state transitions. All rendering goes through render.ts
// so the tested pure functions are exactly what the page shows.

import { ServiceClient, ServiceError } from "./api";
import { renderApp } from "./render";
import {
  SessionState,
  beginRequest,
  closeEvidence,
  completeRequest,
  evidenceError,
  failRequest,
  initialState,
  showEvidence,
  validateQuery,
} from "./state";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8040";

const client = new ServiceClient(SERVICE_URL);
let state: SessionState = initialState();

function redraw(): void {
  const root = document.getElementById("app");
  if (root) root.innerHTML = renderApp(state);
}

function setState(next: SessionState): void {
  state = next;
  redraw();
}

async function submit(query: string): Promise<void> {
  const validation = validateQuery(query);
  if (validation) {
    setState({ ...state, error: validation });
    return;
  }
  const next = beginRequest(state, query);
  const requestId = next.pendingRequest;
  setState(next);
  try {
    const payload = await client.recommend(query, state.options.k);
    setState(completeRequest(state, requestId, payload));
  } catch (err) {
    const message =
      err instanceof ServiceError
        ? `Service error (${err.status}): ${err.message}`
        : `Service unreachable: ${String(err)}`;
    setState(failRequest(state, requestId, message));
  }
}

async function inspect(spanId: number): Promise<void> {
  try {
    setState(showEvidence(state, await client.evidence(spanId)));
  } catch (err) {
    const message =
      err instanceof ServiceError && err.status === 404
        ? "Evidence not found."
        : `Could not load evidence: ${String(err)}`;
    setState(evidenceError(state, message));
  }
}

function onReady(): void {
  const form = document.getElementById("query-form") as HTMLFormElement | null;
  const input = document.getElementById("query-input") as HTMLInputElement | null;
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit(input?.value ?? "");
  });

  const root = document.getElementById("app");
  root?.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const historyItem = target.closest<HTMLElement>(".history-item");
    if (historyItem?.dataset.query) {
      if (input) input.value = historyItem.dataset.query;
      void submit(historyItem.dataset.query);
      return;
    }
    if (target.closest(".close-evidence")) {
      setState(closeEvidence(state));
      return;
    }
    const card = target.closest<HTMLElement>(".result-card");
    if (card?.dataset.spanId) {
      void inspect(Number(card.dataset.spanId));
    }
  });

  redraw();
}

document.addEventListener("DOMContentLoaded", onReady);
