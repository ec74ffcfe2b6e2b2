/**
 * Thin client over the annotation REST API. No DOM dependencies, so the
 * live integration test can drive it from node.
 */
import type { AnnotationBody, PairPayload } from "./state.js";

export type FetchNextResult =
  | { kind: "pair"; pair: PairPayload }
  | { kind: "done" }
  | { kind: "failure"; message: string };

export type SubmitResult =
  | { kind: "created"; pairStatus: string }
  | { kind: "rejected"; message: string }   // 400: label combination invalid
  | { kind: "conflict"; message: string }   // 409: duplicate or closed pair
  | { kind: "failure"; message: string };

export class AnnotationApi {
  constructor(private readonly baseUrl: string = "") {}

  async fetchNext(annotator: string): Promise<FetchNextResult> {
    let response: Response;
    try {
      response = await fetch(
        `${this.baseUrl}/api/pairs/next?annotator=${encodeURIComponent(annotator)}`,
      );
    } catch (err) {
      return { kind: "failure", message: `network failure: ${String(err)}` };
    }
    if (response.status === 204) return { kind: "done" };
    if (!response.ok) {
      return { kind: "failure", message: `server returned ${response.status}` };
    }
    return { kind: "pair", pair: (await response.json()) as PairPayload };
  }

  async submit(body: AnnotationBody): Promise<SubmitResult> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/api/annotations`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      return { kind: "failure", message: `network failure: ${String(err)}` };
    }
    if (response.status === 201) {
      const payload = (await response.json()) as { pair_status: string };
      return { kind: "created", pairStatus: payload.pair_status };
    }
    const message = await response
      .json()
      .then((p: { error?: string }) => p.error ?? `status ${response.status}`)
      .catch(() => `status ${response.status}`);
    if (response.status === 400) return { kind: "rejected", message };
    if (response.status === 409) return { kind: "conflict", message };
    return { kind: "failure", message };
  }
}
