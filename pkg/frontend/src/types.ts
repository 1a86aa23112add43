/** Response payloads of the ranking service, mirrored field for field. */

export interface SummaryPayload {
  n_papers: number;
  n_authors: number;
  n_units: number;
  n_journals: number;
  n_downloads: number;
  disciplines: string[];
  criteria_disciplines: string[];
  snapshot_date: string | null;
}

export interface MetricMatrixPayload {
  level: string;
  discipline_id: string;
  row_ids: string[];
  metric_names: string[];
  values: (number | null)[][];
}

export interface RegressionModelPayload {
  discipline_id: string;
  metric_names: string[];
  beta: number[];
  intercept: number;
  r_squared: number;
  adjusted_r_squared: number;
  ridge_lambda: number;
  condition_number: number | null;
  residuals: number[];
  dropped_columns: string[];
  imputed_cells: [string, string][];
}

export interface RankingRowPayload {
  unit_id: string;
  composite_score: number;
  rank: number;
}

export interface RankingResultPayload {
  discipline_id: string;
  rows: RankingRowPayload[];
  spearman_vs_criterion: number | null;
}

export interface CorrelatorResultPayload {
  r: number;
  n: number;
  points: [string, number, number][];
  dl_window: [number, number];
  cit_window: [number, number | null];
}

/** One settled API call: parsed body on success, surfaced detail on failure. */
export type ApiResult<T> =
  | { ok: true; body: T }
  | { ok: false; status: number; error: string };
