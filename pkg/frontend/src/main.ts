/** Browser entry point: render loop and event delegation. */

import { ApiClient } from "./api.js";
import { AppController } from "./app.js";
import type { ConversationLevel, GeneratorKind, NeighborhoodDepth } from "./types.js";

declare global {
  interface Window {
    XCHAT_API_URL?: string;
  }
}

function el<T extends HTMLElement>(selector: string): T {
  const found = document.querySelector<T>(selector);
  if (found === null) throw new Error(`missing element ${selector}`);
  return found;
}

async function boot(): Promise<void> {
  const baseUrl = window.XCHAT_API_URL ?? "http://127.0.0.1:8080";
  const root = el<HTMLDivElement>("#app");
  const form = el<HTMLFormElement>("#composer");
  const input = el<HTMLInputElement>("#message");
  const levelSelect = el<HTMLSelectElement>("#level");
  const topicInput = el<HTMLInputElement>("#topic");
  const generatorSelect = el<HTMLSelectElement>("#generator");

  let controller: AppController;

  const render = (): void => {
    root.innerHTML = controller.renderHtml();
  };

  const startSession = async (): Promise<void> => {
    const level = levelSelect.value as ConversationLevel;
    const topic = topicInput.value.trim();
    controller = new AppController(new ApiClient(baseUrl), {
      level,
      topic: level === "l2" && topic !== "" ? topic : null,
      generator: generatorSelect.value as GeneratorKind,
    });
    try {
      await controller.start();
    } catch (err) {
      controller.state = {
        ...controller.state,
        banner: {
          message: err instanceof Error ? err.message : String(err),
          retry_text: null,
        },
      };
    }
    render();
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text === "") return;
    input.value = "";
    void controller.send(text).then(render);
  });

  levelSelect.addEventListener("change", () => void startSession());
  generatorSelect.addEventListener("change", () => void startSession());
  topicInput.addEventListener("change", () => {
    if (levelSelect.value === "l2") void startSession();
  });

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (target === null) return;
    const action = target.dataset.action;
    if (action === "select-turn" && target.dataset.responseId) {
      void controller
        .selectTurn(target.dataset.responseId)
        .then(() => controller.showGraphForSelection())
        .then(render);
    } else if (action === "show-graph" && target.dataset.entity) {
      void controller.showGraph(target.dataset.entity).then(render);
    } else if (action === "recenter" && target.dataset.entity) {
      void controller.showGraph(target.dataset.entity).then(render);
    } else if (action === "retry") {
      void controller.retry().then(render);
    } else if (action === "dismiss-banner") {
      controller.dismissBanner();
      render();
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "set-depth") {
      const depth = Number((target as HTMLSelectElement).value) as NeighborhoodDepth;
      void controller.setDepth(depth).then(render);
    }
  });

  await startSession();
}

document.addEventListener("DOMContentLoaded", () => void boot());
