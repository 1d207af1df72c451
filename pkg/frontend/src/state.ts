/** UI session state and its pure transitions.
 *
 * Turns are appended only after the server acknowledges them, so the
 * transcript always equals the server-side history. A failed send leaves
 * the transcript untouched and raises an inline banner whose retry
 * carries the original text.
 */

import type {
  ConversationLevel,
  ExplanationReport,
  GeneratorKind,
} from "./types.js";

export type Speaker = "user" | "bot";

export interface ChatTurn {
  speaker: Speaker;
  text: string;
  /** Present on bot turns; keys the turn's explanation report. */
  response_id?: string;
}

export interface Banner {
  message: string;
  /** Message text to resend when the user hits retry, if any. */
  retry_text: string | null;
}

export interface UiSessionState {
  session_id: string | null;
  level: ConversationLevel;
  topic: string | null;
  generator: GeneratorKind;
  transcript: ChatTurn[];
  /** When set, always the response_id of a bot turn in the transcript. */
  selected_response_id: string | null;
  reports: Record<string, ExplanationReport>;
  banner: Banner | null;
  toast: string | null;
}

export function initialState(
  level: ConversationLevel = "l3",
  topic: string | null = null,
  generator: GeneratorKind = "retrieval",
): UiSessionState {
  return {
    session_id: null,
    level,
    topic,
    generator,
    transcript: [],
    selected_response_id: null,
    reports: {},
    banner: null,
    toast: null,
  };
}

export function sessionStarted(
  state: UiSessionState, sessionId: string,
): UiSessionState {
  return { ...state, session_id: sessionId, banner: null };
}

/** Append the acknowledged user turn and the bot reply it produced. */
export function turnCompleted(
  state: UiSessionState,
  userText: string,
  botText: string,
  responseId: string,
): UiSessionState {
  return {
    ...state,
    transcript: [
      ...state.transcript,
      { speaker: "user", text: userText },
      { speaker: "bot", text: botText, response_id: responseId },
    ],
    banner: null,
  };
}

export function sendFailed(
  state: UiSessionState, message: string, retryText: string | null,
): UiSessionState {
  return { ...state, banner: { message, retry_text: retryText } };
}

export function bannerDismissed(state: UiSessionState): UiSessionState {
  return { ...state, banner: null };
}

function botTurnExists(state: UiSessionState, responseId: string): boolean {
  return state.transcript.some(
    (turn) => turn.speaker === "bot" && turn.response_id === responseId);
}

/** Select a bot turn; rejects ids that are not in the transcript so
 * selected_response_id can never dangle. */
export function selectResponse(
  state: UiSessionState, responseId: string,
): UiSessionState {
  if (!botTurnExists(state, responseId)) {
    throw new Error(`no bot turn with response id ${responseId}`);
  }
  return { ...state, selected_response_id: responseId };
}

export function clearSelection(state: UiSessionState): UiSessionState {
  return { ...state, selected_response_id: null };
}

/** Cache a fetched report and select its turn. */
export function reportLoaded(
  state: UiSessionState, report: ExplanationReport,
): UiSessionState {
  const cached = {
    ...state,
    reports: { ...state.reports, [report.response_id]: report },
  };
  return selectResponse(cached, report.response_id);
}

export function selectedReport(state: UiSessionState): ExplanationReport | null {
  if (state.selected_response_id === null) return null;
  return state.reports[state.selected_response_id] ?? null;
}

export function toastShown(state: UiSessionState, message: string): UiSessionState {
  return { ...state, toast: message };
}

export function toastCleared(state: UiSessionState): UiSessionState {
  return { ...state, toast: null };
}
