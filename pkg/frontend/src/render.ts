/** Snapshot to view model.
 *
 * Every analytical value is rendered with String() straight off the
 * response payload, so a rendered cell always equals the server's field.
 * The one derived display is the R^2 delta between the fitted and the
 * constrained model; everything else is a transcription.
 */

import type { Snapshot } from "./state.js";
import { normalizeL1 } from "./weights.js";

export function num(value: number | null | undefined): string {
  return value === null || value === undefined ? "n/a" : String(value);
}

export interface SliderVM {
  name: string;
  value: number;
  normalized: string;
  disabled: boolean;
}

export interface RankRowVM {
  unitId: string;
  score: string;
  rank: string;
  tied: boolean;
}

export interface ModelVM {
  rows: { name: string; beta: string }[];
  rSquared: string;
  adjusted: string;
  ridgeLambda: string;
  conditionNumber: string;
  dropped: string[];
}

export interface CalibrationVM {
  rows: { name: string; fitted: string; constrained: string }[];
  fitR2: string;
  constrainedR2: string;
  delta: string;
}

export interface CorrelatorVM {
  r: string;
  n: string;
  dlWindow: string;
  citWindow: string;
  points: { id: string; downloads: number; citations: number; label: string }[];
}

export interface ViewModel {
  discipline: string | null;
  banner: string | null;
  note: string | null;
  controlsDisabled: boolean;
  sliders: SliderVM[];
  badge: string;
  rankStatus: string;
  rankError: string | null;
  rankingRows: RankRowVM[];
  model: ModelVM | null;
  calibration: CalibrationVM | null;
  calibrateError: string | null;
  correlator: CorrelatorVM | null;
  correlatorError: string | null;
}

function windowText(window: [number, number | null]): string {
  const to = window[1] === null ? "inf)" : `${String(window[1])})`;
  return `[${String(window[0])}, ${to}`;
}

function modelVm(model: Snapshot["model"]): ModelVM | null {
  if (model === null) return null;
  return {
    rows: model.metric_names.map((name, i) => ({
      name,
      beta: num(model.beta[i]),
    })),
    rSquared: num(model.r_squared),
    adjusted: num(model.adjusted_r_squared),
    ridgeLambda: num(model.ridge_lambda),
    conditionNumber: num(model.condition_number),
    dropped: [...model.dropped_columns],
  };
}

export function view(s: Snapshot): ViewModel {
  const normalized = normalizeL1(s.sliders);
  const sliders: SliderVM[] = s.batteryNames.map((name) => {
    const enabled = s.sliders.has(name);
    return {
      name,
      value: enabled ? s.sliders.get(name)! : 0,
      normalized: enabled ? String(normalized.get(name)!) : "",
      disabled: !enabled,
    };
  });

  const rankCounts = new Map<string, number>();
  if (s.ranking !== null) {
    for (const row of s.ranking.rows) {
      const key = String(row.rank);
      rankCounts.set(key, (rankCounts.get(key) ?? 0) + 1);
    }
  }
  const rankingRows: RankRowVM[] = (s.ranking?.rows ?? []).map((row) => {
    const rank = String(row.rank);
    return {
      unitId: row.unit_id,
      score: String(row.composite_score),
      rank,
      tied: (rankCounts.get(rank) ?? 0) > 1,
    };
  });

  let calibration: CalibrationVM | null = null;
  if (s.model !== null && s.constrained !== null) {
    calibration = {
      rows: s.model.metric_names.map((name, i) => ({
        name,
        fitted: num(s.model!.beta[i]),
        constrained: num(s.constrained!.beta[i]),
      })),
      fitR2: num(s.model.r_squared),
      constrainedR2: num(s.constrained.r_squared),
      delta: String(s.model.r_squared - s.constrained.r_squared),
    };
  }

  let correlator: CorrelatorVM | null = null;
  if (s.correlator !== null) {
    correlator = {
      r: num(s.correlator.r),
      n: String(s.correlator.n),
      dlWindow: windowText(s.correlator.dl_window),
      citWindow: windowText(s.correlator.cit_window),
      points: s.correlator.points.map(([id, downloads, citations]) => ({
        id,
        downloads,
        citations,
        label: `${id}: downloads ${String(downloads)}, citations ${String(citations)}`,
      })),
    };
  }

  return {
    discipline: s.discipline,
    banner: s.banner,
    note: s.note,
    controlsDisabled: s.discipline === null || s.batteryNames.length === 0,
    sliders,
    badge: s.ranking === null ? "n/a" : num(s.ranking.spearman_vs_criterion),
    rankStatus: s.rankStatus,
    rankError: s.rankError,
    rankingRows,
    model: modelVm(s.model),
    calibration,
    calibrateError: s.calibrateError,
    correlator,
    correlatorError: s.correlatorError,
  };
}
