/** Typed client for the edmlab HTTP service. Every response body is run
 * through the display audit before anything else sees it. */

import { registerResponse } from "./audit";
import type {
  AnovaResponse,
  CompareResponse,
  CostResponse,
  EntityRecord,
  ErrorBody,
  FittedModel,
  HomogeneityResponse,
  InitResponse,
  ListResponse,
  OptimumReport,
  PlanResponse,
  RankingResponse,
  RunReference,
  TableName,
  WhatIfBatchResponse,
  WhatIfResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public field: string | null = null,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  constructor(
    private base: string = "/api",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.base}${path}`, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    const payload = (await response.json()) as unknown;
    if (!response.ok) {
      const { error } = payload as ErrorBody;
      throw new ApiError(response.status, error.code, error.message, error.field);
    }
    registerResponse(payload);
    return payload as T;
  }

  // initialization -----------------------------------------------------------

  initialize(): Promise<InitResponse> {
    return this.request("POST", "/init");
  }

  // modification -------------------------------------------------------------

  listEntities(table: TableName, filters?: Record<string, string>): Promise<ListResponse> {
    const query = filters ? `?${new URLSearchParams(filters)}` : "";
    return this.request("GET", `/${table}${query}`);
  }

  getEntity(table: TableName, key: (string | number)[]): Promise<{ record: EntityRecord }> {
    return this.request("GET", `/${table}/${key.map(encodeURIComponent).join("/")}`);
  }

  upsertEntity(table: TableName, record: EntityRecord): Promise<{ record: EntityRecord }> {
    return this.request("PUT", `/${table}`, record);
  }

  deleteEntity(table: TableName, key: (string | number)[]): Promise<{ deleted: boolean }> {
    return this.request("DELETE", `/${table}/${key.map(encodeURIComponent).join("/")}`);
  }

  // planning / ingestion -------------------------------------------------------

  plan(body: {
    factors: { code: string; low: number; high: number }[];
    replicates: number;
    center_points: number;
  }): Promise<PlanResponse> {
    return this.request("POST", "/plan", body);
  }

  ingest(observations: EntityRecord[]): Promise<{ ingested: number }> {
    return this.request("POST", "/observations", observations);
  }

  setExclusion(ref: RunReference, excluded: boolean, reason: string): Promise<unknown> {
    return this.request("POST", "/observations/exclude", { ...ref, excluded, reason });
  }

  // processing -----------------------------------------------------------------

  homogeneity(experiment_id: string, output_code: string): Promise<HomogeneityResponse> {
    return this.request("POST", "/analysis/homogeneity", { experiment_id, output_code });
  }

  anova(
    kind: "anova1" | "anova2",
    experiment_id: string,
    output_code: string,
    factor_codes: string[],
  ): Promise<AnovaResponse> {
    return this.request("POST", `/analysis/${kind}`, {
      experiment_id,
      output_code,
      factor_codes,
    });
  }

  fitModel(body: {
    experiment_id: string;
    output_code: string;
    factor_codes: string[];
    family: string;
  }): Promise<FittedModel> {
    return this.request("POST", "/models/fit", body);
  }

  simulate(body: {
    experiment_id: string;
    output_code: string;
    factor_codes: string[];
    criterion?: string;
  }): Promise<RankingResponse> {
    return this.request("POST", "/models/simulate", body);
  }

  listModels(): Promise<ListResponse> {
    return this.request("GET", "/models");
  }

  getModel(id: string): Promise<FittedModel> {
    return this.request("GET", `/models/${encodeURIComponent(id)}`);
  }

  // optimizing -----------------------------------------------------------------

  optimize(body: {
    objectives?: { model_id: string; sense?: string; weight?: number }[];
    model_id?: string;
    sense?: string;
    bounds?: Record<string, [number, number]>;
    fixed_factors?: Record<string, number>;
  }): Promise<OptimumReport> {
    return this.request("POST", "/optimize", body);
  }

  whatIf(model_ids: string[], settings: Record<string, number>): Promise<WhatIfResponse> {
    return this.request("POST", "/whatif", { model_ids, settings });
  }

  whatIfBatch(
    model_ids: string[],
    settings_list: Record<string, number>[],
  ): Promise<WhatIfBatchResponse> {
    return this.request("POST", "/whatif", { model_ids, settings_list });
  }

  compare(body: Record<string, unknown>): Promise<CompareResponse> {
    return this.request("POST", "/compare", body);
  }

  cost(body: Record<string, unknown>): Promise<CostResponse> {
    return this.request("POST", "/cost", body);
  }

  // listing ----------------------------------------------------------------------

  report(kind: string, filters?: Record<string, string>): Promise<ListResponse> {
    const query = filters ? `?${new URLSearchParams(filters)}` : "";
    return this.request("GET", `/reports/${kind}${query}`);
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }
}
