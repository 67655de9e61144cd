/** Planning menu: build the program matrix of a factorial experiment and
 * optionally ingest it as observation stubs-to-be (the operator types the
 * measured outputs later through Modification). */

import type { WorkbenchClient } from "../api";
import { banner, button, clear, el, grid, labeled } from "../dom";
import type { PlanResponse } from "../types";
import { describe } from "./modification";

interface FactorRowInput {
  code: HTMLInputElement;
  low: HTMLInputElement;
  high: HTMLInputElement;
}

export function renderPlanning(root: HTMLElement, client: WorkbenchClient): void {
  const factorRows: FactorRowInput[] = [];
  const factorsBox = el("div");
  const replicates = el("input", { type: "number", value: "1", min: "1" }) as HTMLInputElement;
  const centerPoints = el("input", { type: "number", value: "0", min: "0" }) as HTMLInputElement;
  const output = el("div");

  function addFactorRow(code = "", low = "", high = ""): void {
    const row: FactorRowInput = {
      code: el("input", { placeholder: "code", value: code }) as HTMLInputElement,
      low: el("input", { type: "number", placeholder: "low", value: low }) as HTMLInputElement,
      high: el("input", { type: "number", placeholder: "high", value: high }) as HTMLInputElement,
    };
    factorRows.push(row);
    factorsBox.append(el("div", { class: "factor-row" }, row.code, row.low, row.high));
  }

  async function plan(): Promise<void> {
    clear(output);
    try {
      const factors = factorRows
        .filter((r) => r.code.value.trim() !== "")
        .map((r) => ({
          code: r.code.value.trim(),
          low: Number(r.low.value),
          high: Number(r.high.value),
        }));
      const matrix = await client.plan({
        factors,
        replicates: Number(replicates.value),
        center_points: Number(centerPoints.value),
      });
      output.append(renderMatrix(matrix));
    } catch (err) {
      output.append(banner("error", describe(err)));
    }
  }

  addFactorRow("ti", "30", "90");
  addFactorRow("I", "2", "10");
  clear(root).append(
    el("h2", {}, "Planning"),
    factorsBox,
    button("add factor", () => addFactorRow(), "btn small"),
    labeled("replicates", replicates),
    labeled("center points", centerPoints),
    button("build program matrix", () => void plan()),
    output,
  );
}

export function renderMatrix(matrix: PlanResponse): HTMLElement {
  const headers = [
    "run",
    "rep",
    ...matrix.factor_codes.map((c) => `${c} (coded)`),
    ...matrix.factor_codes,
  ];
  const rows = matrix.rows.map((r) => [
    r.run_index,
    r.replicate_index,
    ...r.coded_levels,
    ...r.natural_levels,
  ]);
  return el(
    "div",
    {},
    el("div", { class: "count" }, `${matrix.rows.length} row(s)`),
    grid(headers, rows),
  );
}
