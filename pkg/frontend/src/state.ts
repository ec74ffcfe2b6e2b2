/**
 * Pure annotation-session state machine.
 *
 * The DOM layer renders states and forwards events; every transition lives
 * here so the legality rules are testable without a browser. The central
 * invariant: a submission body carries a stance exactly when the chosen
 * presence is "present" or "suggestive", so no reachable state can emit a
 * request the server would reject as inconsistent.
 */

export type PresenceLabel = "present" | "suggestive" | "not_present" | "cant_tell";
export type StanceLabel = "supporting" | "contradicting" | "neutral" | "cant_tell";

export const PRESENCE_LABELS: PresenceLabel[] = [
  "present",
  "suggestive",
  "not_present",
  "cant_tell",
];
export const STANCE_LABELS: StanceLabel[] = [
  "supporting",
  "contradicting",
  "neutral",
  "cant_tell",
];

export interface HighlightSpan {
  sentence: number;
  start: number;
  end: number;
}

export interface PairPayload {
  pair_id: string;
  claim: { id: string; statement: string };
  article: { id: string; title: string; body: string };
  highlights: HighlightSpan[];
}

export interface AnnotationBody {
  pair_id: string;
  annotator: string;
  presence: PresenceLabel;
  stance?: StanceLabel;
}

export type SessionState =
  | { kind: "need_annotator" }
  | { kind: "loading"; annotator: string }
  | {
      kind: "annotating";
      annotator: string;
      pair: PairPayload;
      presence: PresenceLabel | null;
      stance: StanceLabel | null;
      message: string | null;
    }
  | { kind: "submitting"; annotator: string; pair: PairPayload; body: AnnotationBody }
  | { kind: "done"; annotator: string }
  | { kind: "error"; annotator: string; message: string };

export function stanceRequired(presence: PresenceLabel | null): boolean {
  return presence === "present" || presence === "suggestive";
}

export function initialState(): SessionState {
  return { kind: "need_annotator" };
}

export function enterAnnotator(state: SessionState, annotator: string): SessionState {
  const trimmed = annotator.trim();
  if (state.kind !== "need_annotator" || trimmed === "") return state;
  return { kind: "loading", annotator: trimmed };
}

export function pairLoaded(state: SessionState, pair: PairPayload): SessionState {
  if (state.kind !== "loading") return state;
  return {
    kind: "annotating",
    annotator: state.annotator,
    pair,
    presence: null,
    stance: null,
    message: null,
  };
}

export function noPairsLeft(state: SessionState): SessionState {
  if (state.kind !== "loading") return state;
  return { kind: "done", annotator: state.annotator };
}

export function fetchFailed(state: SessionState, message: string): SessionState {
  if (state.kind !== "loading" && state.kind !== "submitting") return state;
  return { kind: "error", annotator: state.annotator, message };
}

/** Retry after a network failure: back to loading, nothing else lost. */
export function retry(state: SessionState): SessionState {
  if (state.kind !== "error") return state;
  return { kind: "loading", annotator: state.annotator };
}

export function selectPresence(state: SessionState, presence: PresenceLabel): SessionState {
  if (state.kind !== "annotating") return state;
  // changing presence away from present/suggestive clears any stale stance
  const stance = stanceRequired(presence) ? state.stance : null;
  return { ...state, presence, stance, message: null };
}

export function selectStance(state: SessionState, stance: StanceLabel): SessionState {
  if (state.kind !== "annotating") return state;
  // stance controls are unreachable until presence is present/suggestive
  if (!stanceRequired(state.presence)) return state;
  return { ...state, stance, message: null };
}

export function stanceVisible(state: SessionState): boolean {
  return state.kind === "annotating" && stanceRequired(state.presence);
}

export function canSubmit(state: SessionState): boolean {
  if (state.kind !== "annotating" || state.presence === null) return false;
  if (stanceRequired(state.presence)) return state.stance !== null;
  return true;
}

/**
 * Begin submission. Returns the unchanged state with an inline message when
 * the selection is incomplete; the emitted body otherwise satisfies the
 * annotation invariants by construction.
 */
export function beginSubmit(state: SessionState): SessionState {
  if (state.kind !== "annotating") return state;
  if (state.presence === null) {
    return { ...state, message: "Choose a claim presence label first." };
  }
  if (stanceRequired(state.presence) && state.stance === null) {
    return { ...state, message: "Choose the article's stance toward the claim." };
  }
  const body: AnnotationBody = {
    pair_id: state.pair.pair_id,
    annotator: state.annotator,
    presence: state.presence,
  };
  if (stanceRequired(state.presence) && state.stance !== null) {
    body.stance = state.stance;
  }
  return { kind: "submitting", annotator: state.annotator, pair: state.pair, body };
}

export function submitSucceeded(state: SessionState): SessionState {
  if (state.kind !== "submitting") return state;
  return { kind: "loading", annotator: state.annotator };
}

/** 400 from the server: show the message, let the annotator relabel. */
export function submitRejected(state: SessionState, message: string): SessionState {
  if (state.kind !== "submitting") return state;
  return {
    kind: "annotating",
    annotator: state.annotator,
    pair: state.pair,
    presence: null,
    stance: null,
    message,
  };
}

/** 409 (duplicate or closed pair): relabeling cannot succeed, move on. */
export function submitConflicted(state: SessionState): SessionState {
  if (state.kind !== "submitting") return state;
  return { kind: "loading", annotator: state.annotator };
}
