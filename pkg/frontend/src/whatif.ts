/** What-if panel state: factor sliders, live predictions, weights and the
 * optimize action. Every displayed prediction is a service response; a
 * failed request leaves the previous value visibly stale instead of
 * fabricating a number. */

import type { WorkbenchClient } from "./api";
import { LatestWins } from "./coalesce";
import type { FittedModel, OptimumReport, WhatIfPrediction } from "./types";

export interface PanelPrediction extends WhatIfPrediction {
  stale: boolean;
}

export class WhatIfPanel {
  settings: Record<string, number> = {};
  weights: Record<string, number> = {};
  senses: Record<string, string> = {};
  predictions: PanelPrediction[] = [];
  report: OptimumReport | null = null;
  lastError: string | null = null;
  onUpdate: () => void = () => {};

  private coalescer: LatestWins<Record<string, number>, WhatIfPrediction[]>;

  constructor(
    private client: WorkbenchClient,
    public models: FittedModel[],
  ) {
    if (models.length === 0) {
      throw new Error("what-if panel needs at least one fitted model");
    }
    for (const model of models) {
      this.weights[model.id] = 1;
      this.senses[model.id] = "minimize";
      for (const code of model.factor_codes) {
        const [low, high] = model.domain[code] ?? [0, 1];
        // midpoint start; a pure display default, never shown as a prediction
        this.settings[code] = (low + high) / 2;
      }
    }
    this.coalescer = new LatestWins(
      (settings) =>
        this.client
          .whatIf(models.map((m) => m.id), settings)
          .then((r) => r.predictions),
      (predictions) => {
        this.predictions = predictions.map((p) => ({ ...p, stale: false }));
        this.lastError = null;
        this.onUpdate();
      },
      (err) => {
        // stale-value indicator: keep old numbers, mark them untrusted
        this.predictions = this.predictions.map((p) => ({ ...p, stale: true }));
        this.lastError = String(err);
        this.onUpdate();
      },
    );
  }

  get factorCodes(): string[] {
    return [...new Set(this.models.flatMap((m) => m.factor_codes))];
  }

  domainOf(code: string): [number, number] {
    for (const model of this.models) {
      const box = model.domain[code];
      if (box) return box;
    }
    return [0, 1];
  }

  /** Slider movement: one coalesced request per settled value. */
  setFactor(code: string, value: number): void {
    this.settings = { ...this.settings, [code]: value };
    this.coalescer.submit(this.settings);
  }

  setWeight(modelId: string, weight: number): void {
    this.weights[modelId] = weight;
  }

  setSense(modelId: string, sense: string): void {
    this.senses[modelId] = sense;
  }

  refresh(): void {
    this.coalescer.submit(this.settings);
  }

  async optimizeNow(fixed?: Record<string, number>): Promise<OptimumReport> {
    const report = await this.client.optimize({
      objectives: this.models.map((m) => ({
        model_id: m.id,
        sense: this.senses[m.id],
        weight: this.weights[m.id],
      })),
      ...(fixed && Object.keys(fixed).length ? { fixed_factors: fixed } : {}),
    });
    this.report = report;
    this.onUpdate();
    return report;
  }

  isActiveBound(code: string): boolean {
    return this.report !== null && this.report.active_bounds.includes(code);
  }
}
