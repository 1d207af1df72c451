/** Controller tying the API client to the UI state.
 *
 * Owns the session state, the fetched-document cache, and the graph view.
 * All methods mutate `this.state` through the pure transition functions
 * and never touch the DOM; rendering is a separate read via renderHtml().
 */

import { ApiClient, ApiRequestError } from "./api.js";
import { layoutGraph } from "./layout.js";
import {
  bannerDismissed,
  initialState,
  reportLoaded,
  selectResponse,
  selectedReport,
  sendFailed,
  sessionStarted,
  toastCleared,
  toastShown,
  turnCompleted,
  type UiSessionState,
} from "./state.js";
import type {
  ConversationLevel,
  DocumentRecord,
  GeneratorKind,
  NeighborhoodDepth,
} from "./types.js";
import { renderApp, type GraphViewModel } from "./views.js";

export interface AppOptions {
  level?: ConversationLevel;
  topic?: string | null;
  generator?: GeneratorKind;
  layoutSeed?: number;
}

function describe(err: unknown): string {
  if (err instanceof ApiRequestError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

export class AppController {
  state: UiSessionState;
  docs: Record<string, DocumentRecord> = {};
  graph: GraphViewModel | null = null;
  private readonly layoutSeed: number;

  constructor(private readonly client: ApiClient, options: AppOptions = {}) {
    this.state = initialState(
      options.level ?? "l3", options.topic ?? null,
      options.generator ?? "retrieval");
    this.layoutSeed = options.layoutSeed ?? 42;
  }

  async start(sessionId?: string): Promise<void> {
    const created = await this.client.createSession({
      level: this.state.level,
      generator: this.state.generator,
      ...(this.state.topic !== null ? { topic: this.state.topic } : {}),
      ...(sessionId !== undefined ? { session_id: sessionId } : {}),
    });
    this.state = sessionStarted(this.state, created.session_id);
  }

  /** Send a user message; on success both turns join the transcript, on
   * failure the transcript is left alone and a retryable banner is shown. */
  async send(text: string): Promise<void> {
    if (this.state.session_id === null) {
      throw new Error("send before start()");
    }
    try {
      const reply = await this.client.sendMessage(this.state.session_id, text);
      this.state = turnCompleted(
        this.state, text, reply.response, reply.response_id);
    } catch (err) {
      this.state = sendFailed(this.state, describe(err), text);
    }
  }

  async retry(): Promise<void> {
    const pending = this.state.banner?.retry_text ?? null;
    this.state = bannerDismissed(this.state);
    if (pending !== null) await this.send(pending);
  }

  dismissBanner(): void {
    this.state = bannerDismissed(this.state);
  }

  /** Load (or reuse) the explanation report behind a bot turn and pull
   * the provenance documents it cites. */
  async selectTurn(responseId: string): Promise<void> {
    if (this.state.reports[responseId] !== undefined) {
      this.state = selectResponse(this.state, responseId);
      return;
    }
    try {
      const report = await this.client.getExplanation(responseId);
      this.state = reportLoaded(this.state, report);
    } catch (err) {
      this.state = sendFailed(this.state, describe(err), null);
      return;
    }
    const wanted = this.state.reports[responseId]!.provenance
      .map((hit) => hit.doc_id)
      .filter((docId) => this.docs[docId] === undefined);
    await Promise.all(wanted.map(async (docId) => {
      try {
        this.docs[docId] = await this.client.getDocument(docId);
      } catch {
        // leave the hit rendered by id; the panel still works without text
      }
    }));
  }

  /** Center the graph view on an entity at the given (or current) depth. */
  async showGraph(entity: string, depth?: NeighborhoodDepth): Promise<void> {
    const useDepth = depth ?? this.graph?.depth ?? 1;
    try {
      const subgraph = await this.client.neighborhood(entity, useDepth);
      this.graph = {
        entity,
        depth: useDepth,
        subgraph,
        placed: layoutGraph(subgraph.nodes, subgraph.edges, subgraph.center,
                            { seed: this.layoutSeed }),
      };
      this.state = toastCleared(this.state);
    } catch (err) {
      this.state = toastShown(this.state, describe(err));
    }
  }

  /** Open the graph for the selected report's best alignment; an empty
   * report clears the view without making any request. */
  async showGraphForSelection(): Promise<void> {
    const report = selectedReport(this.state);
    const first = report?.alignments[0];
    if (first === undefined) {
      this.graph = null;
      return;
    }
    await this.showGraph(first.graph_triple.object, this.graph?.depth ?? 1);
  }

  async setDepth(depth: NeighborhoodDepth): Promise<void> {
    if (this.graph === null) return;
    await this.showGraph(this.graph.entity, depth);
  }

  renderHtml(): string {
    return renderApp(this.state, this.docs, this.graph);
  }
}
