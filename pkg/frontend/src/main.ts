/** Wire the controller to the page. */

import { SessionApi } from "./api.js";
import { SessionController } from "./controller.js";
import { renderError, renderEstimate, renderFinished, renderQueryView } from "./view.js";

const params = new URLSearchParams(window.location.search);
const rounds = Number(params.get("rounds") ?? "10");
const api = new SessionApi("");
const controller = new SessionController(api, rounds);

const queryRoot = document.getElementById("query-root")!;
const estimateRoot = document.getElementById("estimate-root")!;
const statusLine = document.getElementById("status")!;

function bindHandlers(): void {
  const slider = document.getElementById("slider") as HTMLInputElement | null;
  if (slider) {
    slider.addEventListener("input", () => {
      controller.setSliderIndex(Number(slider.value));
      const readout = document.getElementById("slider-value");
      if (readout) {
        readout.textContent = controller.sliderValue().toFixed(1);
      }
    });
  }
  document.getElementById("submit")?.addEventListener("click", () => {
    void controller.submit();
  });
  for (const button of queryRoot.querySelectorAll<HTMLButtonElement>("[data-grid-index]")) {
    button.addEventListener("click", () => {
      controller.setSliderIndex(Number(button.dataset.gridIndex));
      void controller.submit();
    });
  }
  document.getElementById("sync-videos")?.addEventListener("click", () => {
    for (const video of queryRoot.querySelectorAll("video")) {
      video.currentTime = 0;
      void video.play();
    }
  });
  document.getElementById("retry")?.addEventListener("click", () => {
    void controller.retry();
  });
}

controller.subscribe((state) => {
  statusLine.textContent = state.phase;
  if (state.phase === "error") {
    renderError(queryRoot, state);
  } else if (state.phase === "finished") {
    renderFinished(queryRoot, state);
  } else if (state.query) {
    renderQueryView(queryRoot, state);
  }
  renderEstimate(estimateRoot, state);
  bindHandlers();
});

async function boot(): Promise<void> {
  const storedSession = window.sessionStorage.getItem("scalefb-session");
  if (storedSession) {
    // refreshing mid-session resumes from the pending query
    await controller.start("", {}, storedSession);
    return;
  }
  const sets = await api.listSets();
  const first = sets.sets[0];
  if (!first) {
    statusLine.textContent = "no trajectory sets registered";
    return;
  }
  const epsilon = Number(params.get("epsilon") ?? "0.1");
  const policyKind = params.get("policy") ?? "info_gain";
  await controller.start(first.set_id, { epsilon, policyKind, candidateBudget: 500 });
  const sessionId = controller.getState().sessionId;
  if (sessionId) {
    window.sessionStorage.setItem("scalefb-session", sessionId);
  }
}

void boot();
