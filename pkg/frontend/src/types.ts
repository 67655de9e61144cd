/** Wire types for the edmlab HTTP service (JSON, UTF-8).
 *
 * Money travels as decimal strings; an infinite F statistic arrives as the
 * string "Infinity". The UI renders these payloads as-is and never derives
 * new numbers from them.
 */

export type Menu =
  | "initialization"
  | "modification"
  | "planning"
  | "processing"
  | "optimizing"
  | "listing"
  | "ending";

export const MENUS: Menu[] = [
  "initialization",
  "modification",
  "planning",
  "processing",
  "optimizing",
  "listing",
  "ending",
];

export type TableName =
  | "po"
  | "poproperties"
  | "to"
  | "toproperties"
  | "outcome"
  | "inputs"
  | "outputs"
  | "we"
  | "machine"
  | "classic";

export const TABLE_NAMES: TableName[] = [
  "po",
  "poproperties",
  "to",
  "toproperties",
  "outcome",
  "inputs",
  "outputs",
  "we",
  "machine",
  "classic",
];

export type Scalar = number | string | boolean | null;
export type EntityRecord = Record<string, unknown>;

export interface ErrorBody {
  error: { code: string; message: string; field: string | null };
}

export interface ListResponse {
  kind: string;
  count: number;
  records: EntityRecord[];
}

export interface RunReference {
  experiment_id: string;
  run_index: number;
  replicate_index: number;
}

export interface OutlierSuggestion {
  index: number;
  value: number;
  statistic: number;
  critical_value: number;
  alpha: number;
  verdict: "suggest_eliminate" | "keep";
  run_reference: RunReference;
}

export interface HomogeneityResponse {
  experiment_id: string;
  output_code: string;
  homogeneity: {
    group_count: number;
    cochran_c: number;
    cochran_critical: number | null;
    homogeneous: boolean;
    per_group_variances: number[];
    alpha: number;
  };
  suggestions: OutlierSuggestion[];
}

export interface AnovaRow {
  source: string;
  sum_squares: number;
  df: number;
  mean_square: number | null;
  f_statistic: number | string | null;
  p_value: number | null;
}

export interface AnovaResponse {
  experiment_id: string;
  output_code: string;
  factor_codes: string[];
  levels: Record<string, unknown>;
  table: {
    alpha: number;
    factor_codes: string[];
    rows: AnovaRow[];
    significant: Record<string, boolean>;
  };
}

export interface ModelMetrics {
  r2: number;
  adj_r2: number | null;
  rmse: number;
  n_points: number;
}

export interface FittedModel {
  id: string;
  family: string;
  coefficients: number[];
  factor_codes: string[];
  output_code: string;
  domain: Record<string, [number, number]>;
  metrics: ModelMetrics;
  center: number[];
  half_range: number[];
  coded_coefficients: number[];
  shared_curvature: boolean;
  formula: string;
  experiment_id?: string;
}

export interface RankingEntry {
  model: Omit<FittedModel, "id">;
  criterion_value: number;
}

export interface RankingResponse {
  criterion: "adj_r2" | "rmse";
  entries: RankingEntry[];
  skipped: Record<string, string>;
  experiment_id: string;
  output_code: string;
}

export interface ObjectiveValue {
  output_code: string;
  sense: "minimize" | "maximize";
  weight: number;
  value: number;
  extrapolated: boolean;
}

export interface OptimumReport {
  id: string;
  settings: Record<string, number>;
  objective_values: ObjectiveValue[];
  scalarized_value: number;
  iterations: number;
  trace: { settings: Record<string, number>; value: number }[];
  active_bounds: string[];
  objectives: { model_id: string; sense: string; weight: number }[];
}

export interface WhatIfPrediction {
  output_code: string;
  family: string;
  value: number;
  extrapolated: boolean;
  model_id: string;
}

export interface WhatIfResponse {
  settings: Record<string, number>;
  predictions: WhatIfPrediction[];
}

export interface WhatIfBatchResponse {
  settings_list: Record<string, number>[];
  predictions_list: WhatIfPrediction[][];
}

export interface MatrixRow {
  run_index: number;
  replicate_index: number;
  coded_levels: number[];
  natural_levels: number[];
  is_center: boolean;
}

export interface PlanResponse {
  factor_codes: string[];
  replicates: number;
  center_points: number;
  levels: Record<string, [number, number]>;
  rows: MatrixRow[];
}

export interface CostResponse {
  machine: string;
  labor: string;
  electrode: string;
  dielectric: string;
  energy: string;
  total: string;
}

export interface CompareResponse {
  unconventional_time: number;
  classic_time: number;
  ratio: number;
  classic_method: string;
  verdict: string;
  provenance: string;
}

export interface InitResponse {
  initialized: boolean;
  tables: Record<string, number>;
}
