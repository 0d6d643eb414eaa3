import { ApiClient, ApiError } from "./api.js";
import type { AppState } from "./ui.js";
import { renderCase, renderLint, renderLogin, renderPublic, renderQueues } from "./ui.js";

const BASE_URL = (window as unknown as { REGISTRY_URL?: string }).REGISTRY_URL ?? "";

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const state: AppState = {
    api: new ApiClient(BASE_URL, sessionStorage.getItem("token")),
    session: null,
    table: null,
  };

  async function establishSession(token: string): Promise<void> {
    state.api = new ApiClient(BASE_URL, token || null);
    if (token) {
      try {
        state.session = await state.api.whoami();
        sessionStorage.setItem("token", token);
      } catch (error) {
        state.session = null;
        sessionStorage.removeItem("token");
        if (error instanceof ApiError && error.klass === "permission") {
          renderLogin(root!, (t) => void establishSession(t));
          return;
        }
        throw error;
      }
    } else {
      state.session = null;
    }
    state.table = await state.api.transitionTable();
    window.location.hash = "#/queues";
    route();
  }

  function route(): void {
    const hash = window.location.hash || "#/queues";
    const caseMatch = /^#\/case\/(.+)$/.exec(hash);
    if (caseMatch) {
      void renderCase(root!, state, caseMatch[1]);
    } else if (hash === "#/public") {
      void renderPublic(root!, state);
    } else if (hash === "#/lint") {
      renderLint(root!, state);
    } else if (state.session || state.api.token === null) {
      void renderQueues(root!, state);
    } else {
      renderLogin(root!, (t) => void establishSession(t));
    }
  }

  window.addEventListener("hashchange", route);
  const saved = sessionStorage.getItem("token");
  if (saved) {
    await establishSession(saved);
  } else {
    renderLogin(root, (t) => void establishSession(t));
  }
}

void start();
