/**
 * DOM layer: renders the session state and forwards user events to the
 * state machine. Keeps exactly one request in flight; buttons disable
 * optimistically while a submission runs. The annotator id is entered
 * once and kept in localStorage.
 */
import { AnnotationApi } from "./api.js";
import {
  AnnotationBody,
  HighlightSpan,
  PRESENCE_LABELS,
  STANCE_LABELS,
  SessionState,
  beginSubmit,
  canSubmit,
  enterAnnotator,
  fetchFailed,
  initialState,
  noPairsLeft,
  pairLoaded,
  retry,
  selectPresence,
  selectStance,
  stanceVisible,
  submitConflicted,
  submitRejected,
  submitSucceeded,
} from "./state.js";

const LABEL_TEXT: Record<string, string> = {
  present: "Present",
  suggestive: "Suggestive",
  not_present: "Not present",
  cant_tell: "Can't tell",
  supporting: "Supporting",
  contradicting: "Contradicting",
  neutral: "Neutral",
};

const api = new AnnotationApi("");
let state: SessionState = initialState();
let notice: string | null = null;

function setState(next: SessionState): void {
  state = next;
  render();
  if (state.kind === "loading") void loadNext();
}

async function loadNext(): Promise<void> {
  if (state.kind !== "loading") return;
  const result = await api.fetchNext(state.annotator);
  if (result.kind === "pair") setState(pairLoaded(state, result.pair));
  else if (result.kind === "done") setState(noPairsLeft(state));
  else setState(fetchFailed(state, result.message));
}

async function runSubmit(body: AnnotationBody): Promise<void> {
  const result = await api.submit(body);
  if (result.kind === "created") {
    notice = null;
    setState(submitSucceeded(state));
  } else if (result.kind === "rejected") {
    setState(submitRejected(state, result.message));
  } else if (result.kind === "conflict") {
    notice = `Pair was finished elsewhere: ${result.message}`;
    setState(submitConflicted(state));
  } else {
    setState(fetchFailed(state, result.message));
  }
}

function highlightedBody(body: string, spans: HighlightSpan[]): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const ordered = [...spans].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const span of ordered) {
    if (span.start < cursor || span.end > body.length) continue; // defensive: skip overlaps
    if (span.start > cursor) {
      fragment.append(document.createTextNode(body.slice(cursor, span.start)));
    }
    const mark = document.createElement("mark");
    mark.textContent = body.slice(span.start, span.end);
    fragment.append(mark);
    cursor = span.end;
  }
  if (cursor < body.length) fragment.append(document.createTextNode(body.slice(cursor)));
  return fragment;
}

function button(text: string, onClick: () => void, opts: { active?: boolean; disabled?: boolean } = {}) {
  const el = document.createElement("button");
  el.type = "button";
  el.textContent = text;
  el.disabled = Boolean(opts.disabled);
  if (opts.active) el.classList.add("active");
  el.addEventListener("click", onClick);
  return el;
}

function render(): void {
  const root = document.getElementById("app");
  if (!root) return;
  root.replaceChildren();

  if (notice) {
    const banner = document.createElement("div");
    banner.className = "notice";
    banner.textContent = notice;
    root.append(banner);
  }

  if (state.kind === "need_annotator") {
    const saved = window.localStorage.getItem("annotator") ?? "";
    if (saved) {
      setState(enterAnnotator(state, saved));
      return;
    }
    const form = document.createElement("form");
    form.className = "card";
    const label = document.createElement("label");
    label.textContent = "Annotator id";
    const input = document.createElement("input");
    input.required = true;
    input.placeholder = "e.g. annotator-042";
    label.append(input);
    const go = document.createElement("button");
    go.textContent = "Start annotating";
    form.append(label, go);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const id = input.value.trim();
      if (!id) return;
      window.localStorage.setItem("annotator", id);
      setState(enterAnnotator(state, id));
    });
    root.append(form);
    return;
  }

  if (state.kind === "loading") {
    const p = document.createElement("p");
    p.className = "status";
    p.textContent = "Loading next pair…";
    root.append(p);
    return;
  }

  if (state.kind === "done") {
    const card = document.createElement("div");
    card.className = "card";
    card.innerHTML = "<h2>All done</h2><p>No pairs remaining for you. Thank you!</p>";
    root.append(card);
    return;
  }

  if (state.kind === "error") {
    const card = document.createElement("div");
    card.className = "card error";
    const p = document.createElement("p");
    p.textContent = state.message;
    card.append(p, button("Retry", () => setState(retry(state))));
    root.append(card);
    return;
  }

  // annotating / submitting
  const pair = state.pair;
  const busy = state.kind === "submitting";

  const claimBox = document.createElement("section");
  claimBox.className = "claim";
  const claimHeading = document.createElement("h2");
  claimHeading.textContent = "Claim";
  const claimText = document.createElement("p");
  claimText.textContent = pair.claim.statement;
  claimBox.append(claimHeading, claimText);

  const articleBox = document.createElement("article");
  const title = document.createElement("h1");
  title.textContent = pair.article.title;
  const body = document.createElement("div");
  body.className = "body";
  body.append(highlightedBody(pair.article.body, pair.highlights));
  articleBox.append(title, body);

  const controls = document.createElement("section");
  controls.className = "controls";

  const presenceRow = document.createElement("div");
  presenceRow.className = "button-row";
  const presenceLabel = document.createElement("h3");
  presenceLabel.textContent = "Is the claim present in the article?";
  for (const value of PRESENCE_LABELS) {
    presenceRow.append(
      button(LABEL_TEXT[value], () => setState(selectPresence(state, value)), {
        active: state.kind === "annotating" && state.presence === value,
        disabled: busy,
      }),
    );
  }
  controls.append(presenceLabel, presenceRow);

  if (stanceVisible(state) || (state.kind === "submitting" && state.body.stance !== undefined)) {
    const stanceLabel = document.createElement("h3");
    stanceLabel.textContent = "What is the article's stance toward the claim?";
    const stanceRow = document.createElement("div");
    stanceRow.className = "button-row";
    for (const value of STANCE_LABELS) {
      stanceRow.append(
        button(LABEL_TEXT[value] ?? "Can't tell", () => setState(selectStance(state, value)), {
          active: state.kind === "annotating" && state.stance === value,
          disabled: busy,
        }),
      );
    }
    controls.append(stanceLabel, stanceRow);
  }

  if (state.kind === "annotating" && state.message) {
    const warning = document.createElement("p");
    warning.className = "inline-error";
    warning.textContent = state.message;
    controls.append(warning);
  }

  const submit = button(
    busy ? "Submitting…" : "Submit",
    () => {
      const next = beginSubmit(state);
      setState(next);
      if (next.kind === "submitting") void runSubmit(next.body);
    },
    { disabled: busy || !canSubmit(state) },
  );
  submit.classList.add("submit");
  controls.append(submit);

  root.append(claimBox, articleBox, controls);
}

render();
