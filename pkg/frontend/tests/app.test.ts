import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppController } from "../src/app.js";
import type {
  DocumentRecord,
  ExplanationReport,
  GraphNeighborhood,
} from "../src/types.js";
import { loadFixture } from "./helpers.js";

const report = loadFixture<ExplanationReport>("explanation_report.json");
const doc = loadFixture<DocumentRecord>("document.json");
const subgraph1 = loadFixture<GraphNeighborhood>("subgraph_depth1.json");
const subgraph2 = loadFixture<GraphNeighborhood>("subgraph_depth2.json");

type Handler = (init?: RequestInit) => { status: number; body: unknown };

/** Routed fake fetch; records every request it serves. */
function fakeService(routes: Record<string, Handler>) {
  const calls: string[] = [];
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const path = url.replace("http://fake", "");
    const key = `${init?.method ?? "GET"} ${path}`;
    calls.push(key);
    const handler = routes[key];
    if (handler === undefined) {
      return new Response(JSON.stringify({
        code: "unknown_route", message: key,
      }), { status: 404 });
    }
    const { status, body } = handler(init);
    return new Response(JSON.stringify(body), { status });
  };
  return { calls, client: new ApiClient("http://fake", fetchImpl) };
}

const happyRoutes: Record<string, Handler> = {
  "POST /api/sessions": () => ({ status: 200, body: { session_id: "ui-1" } }),
  "POST /api/sessions/ui-1/messages": () => ({
    status: 200,
    body: { response: report.response_text, response_id: report.response_id },
  }),
  [`GET /api/responses/${encodeURIComponent(report.response_id)}/explanation`]: () => ({
    status: 200, body: report,
  }),
  [`GET /api/documents/${doc.doc_id}`]: () => ({ status: 200, body: doc }),
  "GET /api/graph/neighborhood?entity=them&depth=1": () => ({
    status: 200, body: subgraph1,
  }),
  "GET /api/graph/neighborhood?entity=them&depth=2": () => ({
    status: 200, body: subgraph2,
  }),
};

async function startedController(routes = happyRoutes) {
  const service = fakeService(routes);
  const controller = new AppController(service.client);
  await controller.start();
  return { ...service, controller };
}

describe("conversation flow", () => {
  it("sends the session settings when starting", async () => {
    const service = fakeService(happyRoutes);
    const controller = new AppController(service.client, {
      level: "l2", topic: "animals", generator: "retrieval",
    });
    await controller.start();
    expect(controller.state.session_id).toBe("ui-1");
    expect(service.calls).toEqual(["POST /api/sessions"]);
  });

  it("appends both turns after the server ack", async () => {
    const { controller } = await startedController();
    await controller.send("do you like animals?");
    expect(controller.state.transcript).toHaveLength(2);
    expect(controller.state.transcript[1]).toMatchObject({
      speaker: "bot",
      text: report.response_text,
      response_id: report.response_id,
    });
    expect(controller.state.banner).toBeNull();
  });

  it("keeps the transcript and offers retry when the service is down", async () => {
    const routes = { ...happyRoutes };
    delete routes["POST /api/sessions/ui-1/messages"];
    const { controller, client } = await startedController(routes);
    await controller.send("first");
    expect(controller.state.transcript).toHaveLength(0);
    expect(controller.state.banner?.retry_text).toBe("first");

    // service comes back; retry resends the failed text
    routes["POST /api/sessions/ui-1/messages"] =
      happyRoutes["POST /api/sessions/ui-1/messages"]!;
    void client; // routes object is shared with the fake
    await controller.retry();
    expect(controller.state.banner).toBeNull();
    expect(controller.state.transcript).toHaveLength(2);
    expect(controller.state.transcript[0]).toMatchObject({ text: "first" });
  });

  it("surfaces transport failures as a banner, not an exception", async () => {
    const client = new ApiClient("http://fake", async () => {
      throw new TypeError("fetch failed");
    });
    const controller = new AppController(client);
    controller.state = { ...controller.state, session_id: "ui-1" };
    await controller.send("hello");
    expect(controller.state.banner?.message).toContain("connection_failed");
    expect(controller.state.transcript).toHaveLength(0);
  });
});

describe("explanation loading", () => {
  it("fetches the report and its provenance documents once", async () => {
    const { controller, calls } = await startedController();
    await controller.send("do you like animals?");
    await controller.selectTurn(report.response_id);
    expect(controller.state.selected_response_id).toBe(report.response_id);
    expect(controller.docs[doc.doc_id]).toEqual(doc);

    await controller.selectTurn(report.response_id);
    const reportCalls = calls.filter((c) => c.includes("/explanation"));
    const docCalls = calls.filter((c) => c.includes("/documents/"));
    expect(reportCalls).toHaveLength(1);
    expect(docCalls).toHaveLength(1);
  });

  it("banners a failed report fetch without breaking the transcript", async () => {
    const routes = { ...happyRoutes };
    delete routes[`GET /api/responses/${encodeURIComponent(report.response_id)}/explanation`];
    const { controller } = await startedController(routes);
    await controller.send("do you like animals?");
    await controller.selectTurn(report.response_id);
    expect(controller.state.banner).not.toBeNull();
    expect(controller.state.selected_response_id).toBeNull();
    expect(controller.state.transcript).toHaveLength(2);
  });
});

describe("graph view", () => {
  it("loads the neighborhood for the first alignment", async () => {
    const { controller } = await startedController();
    await controller.send("do you like animals?");
    await controller.selectTurn(report.response_id);
    await controller.showGraphForSelection();
    expect(controller.graph?.entity).toBe("them");
    expect(controller.graph?.subgraph.center).toBe(subgraph1.center);
    expect(controller.graph?.placed).toHaveLength(subgraph1.nodes.length);
  });

  it("makes no request for a report with no alignments", async () => {
    const bare: ExplanationReport = { ...report, alignments: [] };
    const routes: Record<string, Handler> = {
      ...happyRoutes,
      [`GET /api/responses/${encodeURIComponent(report.response_id)}/explanation`]:
        () => ({ status: 200, body: bare }),
    };
    const { controller, calls } = await startedController(routes);
    await controller.send("do you like animals?");
    await controller.selectTurn(report.response_id);
    await controller.showGraphForSelection();
    expect(controller.graph).toBeNull();
    expect(calls.filter((c) => c.includes("neighborhood"))).toHaveLength(0);
  });

  it("changes depth by refetching the same center", async () => {
    const { controller } = await startedController();
    await controller.showGraph("them", 1);
    expect(controller.graph?.depth).toBe(1);
    await controller.setDepth(2);
    expect(controller.graph?.depth).toBe(2);
    expect(controller.graph?.subgraph.nodes.length)
      .toBe(subgraph2.nodes.length);
  });

  it("toasts an unknown entity and keeps the old view", async () => {
    const routes: Record<string, Handler> = {
      ...happyRoutes,
      "GET /api/graph/neighborhood?entity=zzz&depth=1": () => ({
        status: 404,
        body: { code: "unknown_entity", message: "no entity 'zzz'" },
      }),
    };
    const { controller } = await startedController(routes);
    await controller.showGraph("them", 1);
    const before = controller.graph;
    await controller.showGraph("zzz", 1);
    expect(controller.state.toast).toContain("unknown_entity");
    expect(controller.graph).toBe(before);
  });
});
