// Session state and its transitions. The console keeps an append-only
// query history for the session; a failed or superseded request never
// erases what the user already has on screen.

import type { DisplayOptions, EvidenceDetail, RecommendPayload } from "./types";

export interface SessionState {
  readonly history: readonly string[];
  readonly results: RecommendPayload | null;
  readonly evidence: EvidenceDetail | null;
  readonly error: string | null;
  readonly pendingRequest: number; // id of the newest in-flight request, 0 = idle
  readonly options: DisplayOptions;
}

export function initialState(options?: Partial<DisplayOptions>): SessionState {
  return {
    history: [],
    results: null,
    evidence: null,
    error: null,
    pendingRequest: 0,
    options: { k: 10, showScores: true, showRouteBadge: true, ...options },
  };
}

export function validateQuery(text: string): string | null {
  return text.trim().length === 0 ? "Enter a query before searching." : null;
}

/** A submission supersedes any earlier in-flight request. */
export function beginRequest(state: SessionState, query: string): SessionState {
  return {
    ...state,
    history: [...state.history, query],
    error: null,
    pendingRequest: state.pendingRequest + 1,
  };
}

/** Ignore responses for anything but the newest request. */
export function completeRequest(
  state: SessionState,
  requestId: number,
  payload: RecommendPayload,
): SessionState {
  if (requestId !== state.pendingRequest) return state;
  return { ...state, results: payload, evidence: null, error: null, pendingRequest: 0 };
}

export function failRequest(
  state: SessionState,
  requestId: number,
  message: string,
): SessionState {
  if (requestId !== state.pendingRequest) return state;
  return { ...state, error: message, pendingRequest: 0 };
}

export function showEvidence(state: SessionState, detail: EvidenceDetail): SessionState {
  return { ...state, evidence: detail };
}

export function evidenceError(state: SessionState, message: string): SessionState {
  return { ...state, error: message };
}

export function closeEvidence(state: SessionState): SessionState {
  return { ...state, evidence: null };
}
