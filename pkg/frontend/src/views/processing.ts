/** Processing menu: data entry, statistic processing with the elimination
 * dialog, dispersion analyses, modeling, simulation (model ranking),
 * comparative determination and economic calculus. */

import type { WorkbenchClient } from "../api";
import { display } from "../audit";
import { drawScatterWithCurve } from "../charts";
import { banner, button, clear, el, grid, labeled } from "../dom";
import { EliminationDialog } from "../state";
import type { AnovaResponse, RankingResponse } from "../types";
import { describe } from "./modification";

export const PROCESSING_OPTIONS = [
  "Select data",
  "Statistic processing",
  "One-factor dispersion analysis",
  "Two-factor dispersion analysis",
  "One-variable modeling",
  "Multi-variable modeling",
  "One-variable simulation",
  "Multi-variable simulation",
  "Comparative determination",
  "Economic calculus",
] as const;

export interface ProcessingContext {
  client: WorkbenchClient;
  experiment: () => string;
  output: () => string;
}

export function renderProcessing(root: HTMLElement, client: WorkbenchClient): void {
  const experiment = el("input", { value: "E1", placeholder: "experiment id" }) as HTMLInputElement;
  const output = el("input", { value: "vw", placeholder: "output code" }) as HTMLInputElement;
  const optionsBox = el("div", { class: "options" });
  const workArea = el("div", { class: "work-area" });
  const ctx: ProcessingContext = {
    client,
    experiment: () => experiment.value.trim(),
    output: () => output.value.trim(),
  };

  const renderers: Record<string, (area: HTMLElement, ctx: ProcessingContext) => void> = {
    "Select data": renderSelectData,
    "Statistic processing": renderStatisticProcessing,
    "One-factor dispersion analysis": (a, c) => renderAnova(a, c, 1),
    "Two-factor dispersion analysis": (a, c) => renderAnova(a, c, 2),
    "One-variable modeling": (a, c) => renderModeling(a, c, "mono"),
    "Multi-variable modeling": (a, c) => renderModeling(a, c, "multi"),
    "One-variable simulation": (a, c) => renderSimulation(a, c, "mono"),
    "Multi-variable simulation": (a, c) => renderSimulation(a, c, "multi"),
    "Comparative determination": renderCompare,
    "Economic calculus": renderCost,
  };

  for (const option of PROCESSING_OPTIONS) {
    optionsBox.append(
      button(option, () => renderers[option]?.(workArea, ctx), "btn option"),
    );
  }

  clear(root).append(
    el("h2", {}, "Processing"),
    el("div", { class: "selectors" }, labeled("experiment", experiment), labeled("output", output)),
    optionsBox,
    workArea,
  );
  renderStatisticProcessing(workArea, ctx);
}

function renderSelectData(area: HTMLElement, ctx: ProcessingContext): void {
  const editor = el("textarea", { rows: "6", class: "record-editor" }) as HTMLTextAreaElement;
  editor.value = JSON.stringify(
    [
      {
        experiment_id: ctx.experiment(),
        run_index: 1,
        replicate_index: 1,
        factor_values: { I: 2 },
        output_values: { vw: 4.1 },
      },
    ],
    null,
    2,
  );
  const status = el("div");
  clear(area).append(
    el("h3", {}, "Select data: load measured runs"),
    editor,
    button("ingest observations", () => {
      clear(status);
      void (async () => {
        try {
          const rows = JSON.parse(editor.value) as Record<string, unknown>[];
          const result = await ctx.client.ingest(rows);
          status.append(banner("info", `ingested ${result.ingested} observation(s)`));
        } catch (err) {
          status.append(banner("error", describe(err)));
        }
      })();
    }),
    status,
  );
}

function renderStatisticProcessing(area: HTMLElement, ctx: ProcessingContext): void {
  const dialog = new EliminationDialog(ctx.client, ctx.experiment(), ctx.output());
  const body = el("div");
  dialog.onUpdate = () => paint();

  function paint(): void {
    clear(body);
    const analysis = dialog.analysis;
    if (!analysis) return;
    const h = analysis.homogeneity;
    body.append(
      el(
        "div",
        { class: h.homogeneous ? "verdict ok" : "verdict bad" },
        `groups: ${display(h.group_count)}  C = ${display(h.cochran_c)}  ` +
          `critical = ${display(h.cochran_critical)}  -> ` +
          (h.homogeneous ? "homogeneous" : "NOT homogeneous"),
      ),
    );
    if (dialog.entries.length) {
      body.append(el("h4", {}, "Suggested eliminations (your decision)"));
      dialog.entries.forEach((entry, i) => {
        const s = entry.suggestion;
        const line = el(
          "div",
          { class: `suggestion ${entry.decision}` },
          `run ${display(s.run_reference.run_index)} replicate ` +
            `${display(s.run_reference.replicate_index)}: value ${display(s.value)}, ` +
            `G = ${display(s.statistic)} > ${display(s.critical_value)}`,
        );
        if (entry.decision === "pending") {
          line.append(
            button("exclude", () => void dialog.accept(i).catch(console.error), "btn small"),
            button("keep", () => void dialog.reject(i).catch(console.error), "btn small"),
          );
        } else {
          line.append(el("em", {}, ` ${entry.decision}`));
        }
        body.append(line);
      });
    } else if (!h.homogeneous) {
      body.append(banner("info", "no single-outlier suggestion for these groups"));
    }
    if (dialog.rerunCount > 0) {
      body.append(el("div", { class: "count" }, `re-analysis runs: ${dialog.rerunCount}`));
    }
  }

  clear(area).append(
    el("h3", {}, "Statistic processing: homogeneity of replicate groups"),
    button("analyze", () =>
      void dialog.analyze().catch((err) => {
        clear(body).append(banner("error", describe(err)));
      }),
    ),
    body,
  );
}

function renderAnova(area: HTMLElement, ctx: ProcessingContext, nFactors: 1 | 2): void {
  const factorA = el("input", { value: "I", placeholder: "factor code" }) as HTMLInputElement;
  const factorB = el("input", { value: "H", placeholder: "second factor" }) as HTMLInputElement;
  const result = el("div");

  async function run(): Promise<void> {
    clear(result);
    try {
      const codes = nFactors === 1 ? [factorA.value] : [factorA.value, factorB.value];
      const kind = nFactors === 1 ? "anova1" : "anova2";
      const response = await ctx.client.anova(kind, ctx.experiment(), ctx.output(), codes);
      result.append(renderAnovaTable(response));
    } catch (err) {
      result.append(banner("error", describe(err)));
    }
  }

  const fields = [labeled("factor", factorA)];
  if (nFactors === 2) fields.push(labeled("factor B", factorB));
  clear(area).append(
    el("h3", {}, nFactors === 1 ? "One-factor dispersion analysis" : "Two-factor dispersion analysis"),
    ...fields,
    button("analyze", () => void run()),
    result,
  );
}

export function renderAnovaTable(response: AnovaResponse): HTMLElement {
  const t = response.table;
  const rows = t.rows.map((r) => [
    r.source,
    r.sum_squares,
    r.df,
    r.mean_square,
    r.f_statistic,
    r.p_value,
  ]);
  const verdicts = Object.entries(t.significant).map(([source, sig]) =>
    el("div", {}, `${source}: ${sig ? "significant" : "not significant"} at alpha=${display(t.alpha)}`),
  );
  return el("div", {}, grid(["source", "SS", "df", "MS", "F", "p"], rows), ...verdicts);
}

function renderModeling(area: HTMLElement, ctx: ProcessingContext, kind: "mono" | "multi"): void {
  const factors = el("input", {
    value: kind === "mono" ? "I" : "I,H",
    placeholder: "factor code(s), comma separated",
  }) as HTMLInputElement;
  const family = el("select") as HTMLSelectElement;
  const families =
    kind === "mono"
      ? ["poly1", "poly2", "poly3", "poly4", "power", "exponential", "logarithmic", "hyperbolic"]
      : ["rs_linear", "rs_quadratic"];
  for (const f of families) family.append(el("option", { value: f }, f));
  const result = el("div");

  async function fit(): Promise<void> {
    clear(result);
    try {
      const codes = factors.value.split(",").map((s) => s.trim()).filter(Boolean);
      const model = await ctx.client.fitModel({
        experiment_id: ctx.experiment(),
        output_code: ctx.output(),
        factor_codes: codes,
        family: family.value,
      });
      result.append(
        el("div", { class: "formula" }, `${model.id}: ${model.formula}`),
        el(
          "div",
          {},
          `r2 = ${display(model.metrics.r2)}  adj = ${display(model.metrics.adj_r2)}  ` +
            `rmse = ${display(model.metrics.rmse)}  n = ${display(model.metrics.n_points)}`,
        ),
      );
      if (model.shared_curvature) {
        result.append(banner("info", "two-level design: one shared curvature coefficient"));
      }
      if (kind === "mono") {
        await drawMonoChart(result, ctx, model.id, codes[0] ?? "");
      }
    } catch (err) {
      result.append(banner("error", describe(err)));
    }
  }

  clear(area).append(
    el("h3", {}, kind === "mono" ? "One-variable modeling" : "Multi-variable modeling"),
    labeled("factors", factors),
    labeled("family", family),
    button("fit model", () => void fit()),
    result,
  );
}

async function drawMonoChart(
  result: HTMLElement,
  ctx: ProcessingContext,
  modelId: string,
  factorCode: string,
): Promise<void> {
  const outcome = await ctx.client.report("outcome", { experiment_id: ctx.experiment() });
  const points = outcome.records
    .filter((r) => !r["excluded"])
    .map((r) => {
      const fv = r["factor_values"] as Record<string, number>;
      const ov = r["output_values"] as Record<string, number>;
      return { x: fv[factorCode] ?? 0, y: ov[ctx.output()] ?? 0 };
    });
  if (!points.length) return;
  const xs = points.map((p) => p.x);
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const span = hi - lo || 1;
  const settings = Array.from({ length: 41 }, (_, i) => ({
    [factorCode]: lo + (span * i) / 40,
  }));
  // curve sampled by the service; the client never evaluates the model
  const sampled = await ctx.client.whatIfBatch([modelId], settings);
  const curve = sampled.predictions_list.map((preds, i) => ({
    x: settings[i]?.[factorCode] ?? 0,
    y: preds[0]?.value ?? 0,
  }));
  const canvas = el("canvas", { width: "520", height: "300" }) as HTMLCanvasElement;
  result.append(canvas);
  drawScatterWithCurve(canvas, points, curve);
}

function renderSimulation(area: HTMLElement, ctx: ProcessingContext, kind: "mono" | "multi"): void {
  const factors = el("input", {
    value: kind === "mono" ? "I" : "I,H",
    placeholder: "factor code(s), comma separated",
  }) as HTMLInputElement;
  const result = el("div");
  let ranking: RankingResponse | null = null;
  let sortSign = 1;

  function paint(): void {
    if (!ranking) return;
    clear(result);
    const entries = [...ranking.entries];
    if (sortSign < 0) entries.reverse();
    result.append(
      el("h4", {}, `ranked by ${ranking.criterion} (click header to flip)`),
      grid(
        ["rank", "family", ranking.criterion, "r2", "rmse", "formula"],
        entries.map((e, i) => [
          i + 1,
          e.model.family,
          e.criterion_value,
          e.model.metrics.r2,
          e.model.metrics.rmse,
          e.model.formula,
        ]),
      ),
    );
    const header = result.querySelector("th:nth-child(3)");
    header?.addEventListener("click", () => {
      sortSign = -sortSign;
      paint();
    });
    for (const [familyName, reason] of Object.entries(ranking.skipped)) {
      result.append(el("div", { class: "skipped" }, `skipped ${familyName}: ${reason}`));
    }
  }

  async function run(): Promise<void> {
    clear(result);
    try {
      const codes = factors.value.split(",").map((s) => s.trim()).filter(Boolean);
      ranking = await ctx.client.simulate({
        experiment_id: ctx.experiment(),
        output_code: ctx.output(),
        factor_codes: codes,
      });
      sortSign = 1;
      paint();
    } catch (err) {
      result.append(banner("error", describe(err)));
    }
  }

  clear(area).append(
    el("h3", {}, kind === "mono" ? "One-variable simulation" : "Multi-variable simulation"),
    labeled("factors", factors),
    button("rank the model class", () => void run()),
    result,
  );
}

function renderCompare(area: HTMLElement, ctx: ProcessingContext): void {
  const minutes = el("input", { type: "number", value: "30" }) as HTMLInputElement;
  const material = el("input", { value: "steel" }) as HTMLInputElement;
  const operation = el("input", { value: "drilling" }) as HTMLInputElement;
  const result = el("div");

  async function run(): Promise<void> {
    clear(result);
    try {
      const c = await ctx.client.compare({
        minutes: Number(minutes.value),
        material: material.value,
        operation: operation.value,
      });
      result.append(
        grid(
          ["unconventional (min)", "conventional (min)", "method", "ratio", "verdict"],
          [[c.unconventional_time, c.classic_time, c.classic_method, c.ratio, c.verdict]],
        ),
      );
    } catch (err) {
      result.append(banner("error", describe(err)));
    }
  }

  clear(area).append(
    el("h3", {}, "Comparative determination"),
    labeled("measured minutes", minutes),
    labeled("material", material),
    labeled("operation", operation),
    button("compare", () => void run()),
    result,
  );
}

function renderCost(area: HTMLElement, ctx: ProcessingContext): void {
  const fields: Record<string, HTMLInputElement> = {
    minutes: el("input", { type: "number", value: "90" }) as HTMLInputElement,
    machine_rate: el("input", { type: "number", value: "40" }) as HTMLInputElement,
    labor_rate: el("input", { type: "number", value: "0" }) as HTMLInputElement,
    electrode_wear_cost: el("input", { type: "number", value: "3" }) as HTMLInputElement,
    dielectric_cost: el("input", { type: "number", value: "0" }) as HTMLInputElement,
    energy_rate: el("input", { type: "number", value: "0.2" }) as HTMLInputElement,
    power_draw: el("input", { type: "number", value: "5" }) as HTMLInputElement,
    electrode_wear_volume: el("input", { type: "number", value: "2" }) as HTMLInputElement,
  };
  const result = el("div");

  async function run(): Promise<void> {
    clear(result);
    try {
      const body: Record<string, number> = {};
      for (const [k, input] of Object.entries(fields)) body[k] = Number(input.value);
      const cost = await ctx.client.cost(body);
      result.append(
        grid(
          ["machine", "labor", "electrode", "dielectric", "energy", "total"],
          [[cost.machine, cost.labor, cost.electrode, cost.dielectric, cost.energy, cost.total]],
        ),
      );
    } catch (err) {
      result.append(banner("error", describe(err)));
    }
  }

  clear(area).append(
    el("h3", {}, "Economic calculus"),
    ...Object.entries(fields).map(([name, input]) => labeled(name.replaceAll("_", " "), input)),
    button("compute cost", () => void run()),
    result,
  );
}
