import { ApiClient, ApiError } from "./api.js";
import { barFromPoint, type Bar } from "./composition.js";
import { renderCompositionSvg } from "./composition-view.js";
import { renderFrontierSvg, type RectangleState } from "./frontier-view.js";
import { RequestSequencer, debounce } from "./sequence.js";
import { toleranceFromOffset, zoneDescription } from "./zones.js";
import type { ConstrainedPoint, PenaltyPoint, SolvePoint, Universe } from "./types.js";

interface AppState {
  universe: Universe | null;
  baselines: Map<number, SolvePoint>;
  selectedW: number | null;
  wd: number;
  penalty: PenaltyPoint | null;
  cloud: ConstrainedPoint[];
  rectangle: RectangleState;
}

const state: AppState = {
  universe: null,
  baselines: new Map(),
  selectedW: null,
  wd: 0,
  penalty: null,
  cloud: [],
  rectangle: { a: 0.1, b: 0.1, dx: 0.45, dy: -0.45, zone: "s1" },
};

const api = new ApiClient("");
const penaltySeq = new RequestSequencer();
const constrainedSeq = new RequestSequencer();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function toast(message: string): void {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.hidden = false;
  setTimeout(() => {
    box.hidden = true;
  }, 4000);
}

function gridValues(): number[] {
  return state.universe?.w_grid ?? [1.0, 0.8, 0.6, 0.4, 0.2];
}

function renderPlot(): void {
  const model = {
    baselines: [...state.baselines.values()],
    selectedW: state.selectedW,
    penalty: state.penalty,
    cloud: state.cloud,
    rectangle: state.rectangle,
  };
  el<HTMLDivElement>("frontier-container").innerHTML = renderFrontierSvg(model);
  attachPlotHandlers();
}

function renderComposition(): void {
  const labels = state.universe?.assets.map((a) => a.label) ?? [];
  const bars: Bar[] = [];
  if (state.selectedW !== null) {
    const baseline = state.baselines.get(state.selectedW);
    if (baseline) {
      bars.push(barFromPoint("baseline", `optimal w=${state.selectedW}`, baseline, labels, true));
    }
  }
  if (state.penalty && state.penalty.w === state.selectedW && state.wd > 0) {
    bars.push(barFromPoint("penalty", `wd=${state.wd.toFixed(2)}`, state.penalty, labels));
  }
  for (const point of state.cloud) {
    if (point.w === state.selectedW && point.feasible) {
      bars.push(
        barFromPoint(
          `cloud-${point.dp.toFixed(4)}-${point.dr.toFixed(4)}`,
          `dp=${point.dp.toFixed(2)} dr=${point.dr.toFixed(2)}`,
          point,
          labels,
        ),
      );
    }
  }
  el<HTMLDivElement>("composition-container").innerHTML = renderCompositionSvg(bars, labels);
}

function renderReadouts(): void {
  const baseline = state.selectedW !== null ? state.baselines.get(state.selectedW) : undefined;
  const readout = el<HTMLDivElement>("metric-readout");
  if (!baseline) {
    readout.textContent = "select a baseline point";
  } else {
    readout.textContent =
      `w=${baseline.w}  ROI=${baseline.roi.toFixed(4)}  Risk=${baseline.risk.toFixed(4)}  HHI=${baseline.hhi.toFixed(4)}`;
  }
  const tol = toleranceFromOffset(
    state.rectangle.dx,
    state.rectangle.dy,
    state.rectangle.a,
    state.rectangle.b,
  );
  state.rectangle.zone = tol.zone;
  el<HTMLDivElement>("zone-readout").textContent =
    `dp=${tol.dp.toFixed(3)} dr=${tol.dr.toFixed(3)} | ${zoneDescription(tol.zone)}`;
  el<HTMLButtonElement>("resolve-button").disabled = tol.zone === null || baseline === undefined;
}

function renderAll(): void {
  renderReadouts();
  renderPlot();
  renderComposition();
}

function selectW(w: number): void {
  state.selectedW = w;
  state.penalty = null;
  if (state.wd > 0) requestPenalty();
  renderAll();
}

function requestPenalty(): void {
  if (state.selectedW === null) return;
  const w = state.selectedW;
  const wd = state.wd;
  const id = penaltySeq.next();
  api
    .solvePenalty(w, wd)
    .then((point) => {
      if (!penaltySeq.accept(id)) return;
      state.penalty = point;
      renderAll();
    })
    .catch((error: unknown) => {
      if (error instanceof ApiError) toast(`penalty solve failed: ${error.message}`);
      else toast(`penalty solve failed: ${String(error)}`);
    });
}

const requestPenaltyDebounced = debounce(requestPenalty, 250);

export function constrainedRequestFromState(): { w: number; dp: number; dr: number } | null {
  if (state.selectedW === null) return null;
  const tol = toleranceFromOffset(
    state.rectangle.dx,
    state.rectangle.dy,
    state.rectangle.a,
    state.rectangle.b,
  );
  if (tol.zone === null) return null;
  return { w: state.selectedW, dp: tol.dp, dr: tol.dr };
}

function requestConstrained(): void {
  const body = constrainedRequestFromState();
  if (body === null) return;
  const id = constrainedSeq.next();
  el<HTMLButtonElement>("resolve-button").classList.add("busy");
  api
    .solveConstrained(body)
    .then((point) => {
      if (!constrainedSeq.accept(id)) return;
      state.cloud.push(point);
      if (!point.feasible) toast("pair infeasible: shown hollow red");
      renderAll();
    })
    .catch((error: unknown) => {
      if (error instanceof ApiError) toast(`perturbation solve failed: ${error.message}`);
      else toast(`perturbation solve failed: ${String(error)}`);
    })
    .finally(() => el<HTMLButtonElement>("resolve-button").classList.remove("busy"));
}

function attachPlotHandlers(): void {
  const container = el<HTMLDivElement>("frontier-container");
  const svg = container.querySelector<SVGSVGElement>("#frontier-plot");
  if (!svg) return;
  svg.querySelectorAll<SVGCircleElement>(".baseline-point").forEach((node) => {
    node.addEventListener("click", () => {
      const w = Number(node.dataset.w);
      if (Number.isFinite(w)) selectW(w);
      const slider = el<HTMLInputElement>("w-slider");
      slider.value = String(gridValues().indexOf(w));
    });
  });
  const rect = svg.querySelector<SVGGElement>("#tolerance-rect");
  if (!rect) return;
  const cx = Number(rect.dataset.cx);
  const cy = Number(rect.dataset.cy);
  const hw = Number(rect.dataset.hw);
  const hh = Number(rect.dataset.hh);
  let dragging = false;

  const toOffset = (event: PointerEvent) => {
    const box = svg.getBoundingClientRect();
    const px = ((event.clientX - box.left) / box.width) * svg.viewBox.baseVal.width;
    const py = ((event.clientY - box.top) / box.height) * svg.viewBox.baseVal.height;
    return {
      dx: Math.max(-1, Math.min(1, (px - cx) / hw)),
      dy: Math.max(-1, Math.min(1, (cy - py) / hh)),
    };
  };
  rect.addEventListener("pointerdown", (event) => {
    dragging = true;
    (event.target as Element).setPointerCapture?.(event.pointerId);
    const offset = toOffset(event);
    state.rectangle.dx = offset.dx;
    state.rectangle.dy = offset.dy;
    renderAll();
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const offset = toOffset(event);
    state.rectangle.dx = offset.dx;
    state.rectangle.dy = offset.dy;
    renderAll();
  });
  svg.addEventListener("pointerup", () => {
    dragging = false;
  });
}

function wireControls(): void {
  const slider = el<HTMLInputElement>("w-slider");
  slider.addEventListener("input", () => {
    const grid = gridValues();
    const index = Math.max(0, Math.min(grid.length - 1, Number(slider.value)));
    el<HTMLSpanElement>("w-value").textContent = String(grid[index]);
    selectW(grid[index]);
  });
  const wdSlider = el<HTMLInputElement>("wd-slider");
  wdSlider.addEventListener("input", () => {
    state.wd = Number(wdSlider.value);
    el<HTMLSpanElement>("wd-value").textContent = state.wd.toFixed(2);
    if (state.wd === 0) {
      state.penalty = null;
      renderAll();
    } else {
      requestPenaltyDebounced();
    }
  });
  el<HTMLButtonElement>("resolve-button").addEventListener("click", requestConstrained);
}

async function loadBaselines(): Promise<void> {
  for (const w of gridValues()) {
    try {
      const point = await api.solveBaseline(w);
      state.baselines.set(w, point);
      if (state.selectedW === null) {
        state.selectedW = w;
        el<HTMLSpanElement>("w-value").textContent = String(w);
      }
      renderAll();
    } catch (error) {
      toast(`baseline w=${w} failed: ${error instanceof Error ? error.message : error}`);
    }
  }
}

export async function start(): Promise<void> {
  wireControls();
  renderAll();
  try {
    state.universe = await api.universe();
    const slider = el<HTMLInputElement>("w-slider");
    slider.max = String(gridValues().length - 1);
    el<HTMLDivElement>("universe-readout").textContent =
      `${state.universe.n} assets x ${state.universe.m} scenarios, beta=${state.universe.beta}`;
  } catch (error) {
    toast(
      error instanceof ApiError && error.status === 409
        ? error.message
        : `cannot reach the solve API: ${error instanceof Error ? error.message : error}`,
    );
    return;
  }
  await loadBaselines();
}

if (typeof document !== "undefined" && document.getElementById("frontier-container")) {
  void start();
}
