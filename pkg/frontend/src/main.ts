import { ApiClient } from "./api.js";
import { JudgingSession } from "./judging.js";
import { renderJudging, renderResults } from "./render.js";

/**
 * Browser wiring: binds the judging state machine and the results renderer
 * to a root element. The pure modules stay importable outside a browser;
 * only these mount helpers touch the DOM.
 */

export interface MountConfig {
  baseUrl: string;
  sessionId: string;
  judgeId: string;
  token?: string;
}

export async function mountJudging(root: HTMLElement, config: MountConfig): Promise<void> {
  const client = new ApiClient({ baseUrl: config.baseUrl, token: config.token });
  // Mode, criteria and budget come back from the server on every load, so a
  // reload mid-session resumes cleanly from the pending pair.
  const payload = await client.results(config.sessionId);
  const session = new JudgingSession(client, config.sessionId, config.judgeId, {
    mode: payload.mode,
    criteria: payload.criteria,
    max_comparisons: payload.budget.max_comparisons,
  });

  const redraw = (): void => {
    root.innerHTML = renderJudging(session.view());
  };

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset["action"];
    const item = target.dataset["item"];
    const criterion = target.dataset["criterion"];
    if (action === "choose" && item) {
      void session.choose(item).then(redraw);
    } else if (action === "select" && item && criterion) {
      session.select(criterion, item);
      redraw();
    } else if (action === "submit") {
      void session.submit().then(redraw);
    } else if (action === "open-results") {
      event.preventDefault();
      void mountResults(root, config);
    }
  });

  await session.start();
  redraw();
}

export async function mountResults(root: HTMLElement, config: MountConfig): Promise<void> {
  const client = new ApiClient({ baseUrl: config.baseUrl, token: config.token });
  root.innerHTML = renderResults(await client.results(config.sessionId));
}
