/** Optimizing menu: the what-if slider panel, weighted multi-objective
 * optimization and the optimum report with active-bound highlights,
 * plus a 2-factor contour sampled entirely by the service. */

import type { WorkbenchClient } from "../api";
import { display } from "../audit";
import { drawContour } from "../charts";
import { banner, button, clear, el, grid, labeled } from "../dom";
import type { FittedModel } from "../types";
import { WhatIfPanel } from "../whatif";
import { describe } from "./modification";

export function renderOptimizing(root: HTMLElement, client: WorkbenchClient): void {
  clear(root).append(el("h2", {}, "Optimizing"));
  const box = el("div");
  root.append(box);
  void (async () => {
    try {
      const models = await client.listModels();
      if (models.count === 0) {
        box.append(
          banner(
            "info",
            "No fitted model yet. Fit one first: Processing -> One- or Multi-variable modeling.",
          ),
        );
        return;
      }
      renderPicker(box, client, models.records as unknown as FittedModel[]);
    } catch (err) {
      box.append(banner("error", describe(err)));
    }
  })();
}

function renderPicker(box: HTMLElement, client: WorkbenchClient, models: FittedModel[]): void {
  const select = el("select", { multiple: "multiple", size: "4" }) as HTMLSelectElement;
  for (const m of models) {
    select.append(el("option", { value: m.id }, `${m.id} ${m.formula}`));
  }
  (select.options[0] as HTMLOptionElement).selected = true;
  const panelBox = el("div");
  box.append(
    labeled("fitted models (multi-select for several objectives)", select),
    button("open what-if panel", () => {
      const chosen = [...select.selectedOptions].map((o) => o.value);
      const selected = models.filter((m) => chosen.includes(m.id));
      if (selected.length) renderPanel(panelBox, client, selected);
    }),
    panelBox,
  );
}

export function renderPanel(
  box: HTMLElement,
  client: WorkbenchClient,
  models: FittedModel[],
): void {
  const panel = new WhatIfPanel(client, models);
  const sliders = el("div", { class: "sliders" });
  const predictionsBox = el("div");
  const reportBox = el("div");
  const chartBox = el("div");

  const sliderInputs: Record<string, HTMLInputElement> = {};
  for (const code of panel.factorCodes) {
    const [low, high] = panel.domainOf(code);
    const input = el("input", {
      type: "range",
      min: String(low),
      max: String(high),
      step: String((high - low) / 200),
      value: String(panel.settings[code] ?? low),
    }) as HTMLInputElement;
    const readout = el("span", { class: "readout" }, input.value);
    input.addEventListener("input", () => {
      readout.textContent = input.value;
      panel.setFactor(code, Number(input.value));
    });
    sliderInputs[code] = input;
    sliders.append(labeled(code, el("div", { class: "slider-row" }, input, readout)));
  }

  const weightsBox = el("div", { class: "weights" });
  for (const m of models) {
    const weight = el("input", { type: "number", value: "1", step: "0.1" }) as HTMLInputElement;
    weight.addEventListener("change", () => panel.setWeight(m.id, Number(weight.value)));
    const sense = el("select") as HTMLSelectElement;
    sense.append(el("option", { value: "minimize" }, "minimize"));
    sense.append(el("option", { value: "maximize" }, "maximize"));
    sense.addEventListener("change", () => panel.setSense(m.id, sense.value));
    weightsBox.append(labeled(`${m.id} (${m.output_code})`, el("div", {}, sense, weight)));
  }

  panel.onUpdate = () => {
    clear(predictionsBox);
    if (panel.lastError) {
      predictionsBox.append(banner("stale", `stale values: ${panel.lastError}`));
    }
    predictionsBox.append(
      grid(
        ["model", "output", "prediction", "flags"],
        panel.predictions.map((p) => [
          p.model_id,
          p.output_code,
          p.value,
          [p.extrapolated ? "extrapolated" : "", p.stale ? "stale" : ""]
            .filter(Boolean)
            .join(" ") || "-",
        ]),
      ),
    );
    if (panel.report) {
      clear(reportBox).append(renderReport(panel));
      void renderContourChart(chartBox, client, panel);
    }
  };

  clear(box).append(
    el("h3", {}, "What-if panel"),
    sliders,
    el("h4", {}, "Objectives"),
    weightsBox,
    button("optimize", () =>
      void panel
        .optimizeNow()
        .then(() => {
          for (const [code, input] of Object.entries(sliderInputs)) {
            const setting = panel.report?.settings[code];
            if (setting !== undefined) input.value = String(setting);
          }
        })
        .catch((err) => clear(reportBox).append(banner("error", describe(err)))),
    ),
    predictionsBox,
    reportBox,
    chartBox,
  );
  panel.refresh();
}

function renderReport(panel: WhatIfPanel): HTMLElement {
  const report = panel.report;
  if (!report) return el("div");
  const settingsRows = Object.entries(report.settings).map(([code, value]) => [
    code,
    value,
    panel.isActiveBound(code) ? "AT BOUND" : "-",
  ]);
  return el(
    "div",
    { class: "optimum" },
    el("h4", {}, `Optimum ${report.id}`),
    grid(["factor", "setting", "bound"], settingsRows),
    grid(
      ["output", "sense", "predicted", "extrapolated"],
      report.objective_values.map((o) => [o.output_code, o.sense, o.value, o.extrapolated]),
    ),
    el("div", {}, `scalarized value: ${display(report.scalarized_value)}`),
    el("div", {}, `evaluations: ${display(report.iterations)}`),
  );
}

async function renderContourChart(
  chartBox: HTMLElement,
  client: WorkbenchClient,
  panel: WhatIfPanel,
): Promise<void> {
  const model = panel.models[0];
  const report = panel.report;
  if (!model || model.factor_codes.length !== 2 || !report) {
    clear(chartBox);
    return;
  }
  const [cx, cy] = model.factor_codes as [string, string];
  const [xLo, xHi] = model.domain[cx] ?? [0, 1];
  const [yLo, yHi] = model.domain[cy] ?? [0, 1];
  const n = 15;
  const xs = Array.from({ length: n }, (_, i) => xLo + ((xHi - xLo) * i) / (n - 1));
  const ys = Array.from({ length: n }, (_, j) => yLo + ((yHi - yLo) * j) / (n - 1));
  const settingsList = ys.flatMap((y) => xs.map((x) => ({ [cx]: x, [cy]: y })));
  const sampled = await client.whatIfBatch([model.id], settingsList);
  const values = ys.map((_, j) =>
    xs.map((_, i) => sampled.predictions_list[j * n + i]?.[0]?.value ?? 0),
  );
  const canvas = el("canvas", { width: "460", height: "360" }) as HTMLCanvasElement;
  clear(chartBox).append(
    el("h4", {}, `response surface: ${model.output_code} over (${cx}, ${cy})`),
    canvas,
  );
  drawContour(canvas, xs, ys, values, {
    x: report.settings[cx] ?? xLo,
    y: report.settings[cy] ?? yLo,
  });
}
