/** DOM rendering: option panels, the tick-marked slider, and the summary. */

import { TrajectoryPayload } from "./api.js";
import { UiState } from "./controller.js";

function featureBars(traj: TrajectoryPayload): string {
  const maxAbs = Math.max(1e-9, ...traj.features.map((v) => Math.abs(v)));
  const rows = traj.features
    .map((value, i) => {
      const width = (Math.abs(value) / maxAbs) * 100;
      const side = value >= 0 ? "pos" : "neg";
      return `<div class="feature-row">
        <span class="feature-name">f${i}</span>
        <div class="feature-track"><div class="feature-fill ${side}" style="width:${width.toFixed(1)}%"></div></div>
        <span class="feature-value">${value.toFixed(2)}</span>
      </div>`;
    })
    .join("");
  return `<div class="feature-bars">${rows}</div>`;
}

function optionPanel(traj: TrajectoryPayload, side: "left" | "right"): string {
  const media = traj.media_ref
    ? `<video class="option-video" src="${traj.media_ref}" muted loop playsinline></video>`
    : "";
  return `<div class="option" data-side="${side}">
    <h3>${side === "left" ? "Option A" : "Option B"}</h3>
    <p class="option-label">${traj.label ?? traj.id}</p>
    ${media}
    ${featureBars(traj)}
  </div>`;
}

export function renderQueryView(root: HTMLElement, state: UiState): void {
  const query = state.query;
  if (!query) {
    return;
  }
  const [left, right] = query.trajectories;
  const hasMedia = Boolean(left.media_ref || right.media_ref);
  const softChoice = state.grid.length === 3;
  const answer = softChoice
    ? `<div class="soft-buttons">
         <button data-grid-index="0">Prefer B</button>
         <button data-grid-index="1">About equal</button>
         <button data-grid-index="2">Prefer A</button>
       </div>`
    : `<div class="slider-block">
         <input id="slider" type="range" min="0" max="${state.grid.length - 1}"
                step="1" value="${state.sliderIndex}" list="slider-ticks" />
         <datalist id="slider-ticks">
           ${state.grid.map((_, i) => `<option value="${i}"></option>`).join("")}
         </datalist>
         <div class="slider-ends">
           <span>prefer B</span><span>no preference</span><span>prefer A</span>
         </div>
         <p class="slider-readout">slider: <strong id="slider-value">${state.grid[state.sliderIndex]!.toFixed(1)}</strong></p>
         <button id="submit" ${state.phase !== "answering" ? "disabled" : ""}>Submit</button>
       </div>`;
  root.innerHTML = `
    <p class="round-counter">Question ${query.iteration} of ${state.rounds}</p>
    <div class="options">${optionPanel(left, "left")}${optionPanel(right, "right")}</div>
    ${hasMedia ? '<button id="sync-videos">Sync videos</button>' : ""}
    ${answer}
  `;
}

export function renderEstimate(root: HTMLElement, state: UiState): void {
  const estimate = state.estimate;
  if (!estimate) {
    root.innerHTML = "";
    return;
  }
  const weights = estimate.w_hat.map((v) => v.toFixed(2)).join(", ");
  root.innerHTML = `
    <h3>Current estimate</h3>
    <p>answers so far: ${estimate.iteration}</p>
    <p>weights: [${weights}]</p>
    <p>saturation: ${estimate.alpha_hat.toFixed(2)}</p>
  `;
}

export function renderFinished(root: HTMLElement, state: UiState): void {
  const best = state.estimate?.best_trajectory;
  root.innerHTML = `
    <h2>All ${state.rounds} questions answered</h2>
    <p>The trajectory below best fits the learned preferences:</p>
    ${best ? optionPanel(best, "left") : ""}
  `;
}

export function renderError(root: HTMLElement, state: UiState): void {
  root.innerHTML = `
    <div class="error-banner">
      <p>Something went wrong: ${state.error ?? "unknown error"}</p>
      <button id="retry">Retry</button>
    </div>
  `;
}
