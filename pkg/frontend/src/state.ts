/** Client state machine.
 *
 * Holds the control state (discipline, sliders, windows) and the last
 * server responses. All analytical numbers displayed downstream live in
 * those responses untouched; the store never derives one. Ranking calls
 * are debounced, keyed to a single in-flight request, and skipped whole
 * when the normalized weights are unchanged, which is what makes
 * "doubling every slider changes nothing" structural rather than lucky.
 */

import { ApiClient, Superseded } from "./api.js";
import { realScheduler, type Scheduler } from "./debounce.js";
import {
  DEFAULT_CIT_WINDOW,
  DEFAULT_DL_WINDOW,
  encodeState,
} from "./urlstate.js";
import type {
  CorrelatorResultPayload,
  RankingResultPayload,
  RegressionModelPayload,
} from "./types.js";
import { clampSlider, normalizeL1, weightsParam } from "./weights.js";

export const DEBOUNCE_MS = 150;
export const RETRY_MS = 1000;

export type RankStatus = "idle" | "pending" | "retrying";

export interface StoreOptions {
  api: ApiClient;
  scheduler?: Scheduler;
  onUrlChange?: (query: string) => void;
  onChange?: () => void;
}

export interface Snapshot {
  discipline: string | null;
  batteryNames: readonly string[];
  sliders: ReadonlyMap<string, number>;
  disabledMetrics: readonly string[];
  model: RegressionModelPayload | null;
  constrained: RegressionModelPayload | null;
  ranking: RankingResultPayload | null;
  correlator: CorrelatorResultPayload | null;
  dlWindow: [number, number];
  citWindow: [number, number | null];
  banner: string | null;
  note: string | null;
  rankStatus: RankStatus;
  rankError: string | null;
  calibrateError: string | null;
  correlatorError: string | null;
}

/** A window pair the correlator endpoint would reject outright. */
export function degenerateWindows(
  dl: [number, number],
  cit: [number, number | null],
): boolean {
  return dl[0] >= dl[1] || (cit[1] !== null && cit[0] >= cit[1]);
}

export class Store {
  private readonly api: ApiClient;
  private readonly scheduler: Scheduler;
  private readonly onUrlChange: (query: string) => void;
  private readonly onChange: () => void;

  private discipline: string | null = null;
  private batteryNames: string[] = [];
  private sliders = new Map<string, number>();
  private disabledMetrics: string[] = [];
  private model: RegressionModelPayload | null = null;
  private constrained: RegressionModelPayload | null = null;
  private ranking: RankingResultPayload | null = null;
  private correlator: CorrelatorResultPayload | null = null;
  private dlWindow: [number, number] = [...DEFAULT_DL_WINDOW];
  private citWindow: [number, number | null] = [...DEFAULT_CIT_WINDOW];
  private banner: string | null = null;
  private note: string | null = null;
  private rankStatus: RankStatus = "idle";
  private rankError: string | null = null;
  private calibrateError: string | null = null;
  private correlatorError: string | null = null;

  // the normalized weights the displayed ranking answers for
  private lastRankParam: string | null = null;
  private rankTimer: number | null = null;
  private readonly inflight = new Set<Promise<unknown>>();

  constructor(options: StoreOptions) {
    this.api = options.api;
    this.scheduler = options.scheduler ?? realScheduler;
    this.onUrlChange = options.onUrlChange ?? (() => {});
    this.onChange = options.onChange ?? (() => {});
  }

  snapshot(): Snapshot {
    return {
      discipline: this.discipline,
      batteryNames: this.batteryNames,
      sliders: this.sliders,
      disabledMetrics: this.disabledMetrics,
      model: this.model,
      constrained: this.constrained,
      ranking: this.ranking,
      correlator: this.correlator,
      dlWindow: [...this.dlWindow],
      citWindow: [...this.citWindow],
      banner: this.banner,
      note: this.note,
      rankStatus: this.rankStatus,
      rankError: this.rankError,
      calibrateError: this.calibrateError,
      correlatorError: this.correlatorError,
    };
  }

  /** Resolves once every started request has settled (including retries
   * already scheduled by the time the last one settles). */
  async idle(): Promise<void> {
    while (this.inflight.size > 0) {
      await Promise.allSettled([...this.inflight]);
    }
  }

  private track<T>(task: Promise<T>): Promise<T> {
    this.inflight.add(task);
    void task.finally(() => this.inflight.delete(task));
    return task;
  }

  private emit(): void {
    this.onChange();
  }

  private touchUrl(): void {
    this.onUrlChange(
      encodeState(this.discipline, this.discipline ? this.sliders : null,
                  this.dlWindow, this.citWindow),
    );
  }

  rankParam(): string {
    return weightsParam(normalizeL1(this.sliders));
  }

  windows(): { dl: [number, number]; cit: [number, number | null] } {
    return { dl: [...this.dlWindow], cit: [...this.citWindow] };
  }

  /** Adopt windows from a shared URL before the first fetch. */
  applyWindows(dl: [number, number], cit: [number, number | null]): void {
    if (degenerateWindows(dl, cit)) return;
    this.dlWindow = [...dl];
    this.citWindow = [...cit];
  }

  /** Populate the view for one discipline; slider presets (from a shared
   * URL) win over the fitted betas they would otherwise initialize to. */
  async loadDiscipline(
    id: string,
    presetSliders?: ReadonlyMap<string, number> | null,
  ): Promise<void> {
    this.banner = null;
    this.note = null;
    this.rankError = null;
    this.calibrateError = null;
    const metrics = await this.track(this.api.metrics(id));
    if (!metrics.ok) {
      // unknown discipline: error banner and nothing stale underneath
      this.banner = metrics.error;
      this.discipline = null;
      this.batteryNames = [];
      this.sliders = new Map();
      this.disabledMetrics = [];
      this.model = null;
      this.constrained = null;
      this.ranking = null;
      this.lastRankParam = null;
      this.emit();
      return;
    }
    this.discipline = id;
    this.batteryNames = metrics.body.metric_names;
    this.constrained = null;
    this.ranking = null;
    this.lastRankParam = null;
    if (this.batteryNames.length === 0) {
      this.note = "battery is empty for this discipline; nothing to weight";
      this.sliders = new Map();
      this.disabledMetrics = [];
      this.model = null;
      this.touchUrl();
      this.emit();
      return;
    }
    const fit = await this.track(this.api.fit(id));
    if (fit.ok) {
      this.model = fit.body;
      this.disabledMetrics = [...fit.body.dropped_columns];
      const betas = new Map<string, number>();
      fit.body.metric_names.forEach((name, i) => betas.set(name, fit.body.beta[i]));
      this.sliders = normalizeL1(betas);
    } else {
      // no fitted model (say, no criterion); exploration still works
      this.model = null;
      this.banner = fit.error;
      this.disabledMetrics = [];
      this.sliders = new Map(
        this.batteryNames.map((name) => [name, 1 / this.batteryNames.length]),
      );
    }
    if (presetSliders) {
      for (const [name, value] of presetSliders) {
        if (this.sliders.has(name)) this.sliders.set(name, clampSlider(value));
      }
    }
    this.touchUrl();
    this.emit();
    await Promise.all([this.fetchRank(), this.fetchCorrelator()]);
  }

  /** Move one slider; the ranking refresh is debounced at DEBOUNCE_MS and
   * skipped entirely when the normalized weights did not change. */
  adjustWeight(metric: string, value: number): void {
    if (!this.sliders.has(metric)) return;
    this.sliders.set(metric, clampSlider(value));
    this.touchUrl();
    if (this.rankParam() === this.lastRankParam && this.ranking !== null) {
      // back on the displayed weights: drop any pending refresh too, so a
      // doubled weight vector provably produces zero requests
      if (this.rankTimer !== null) {
        this.scheduler.cancel(this.rankTimer);
        this.rankTimer = null;
      }
      this.rankStatus = "idle";
      this.emit();
      return;
    }
    this.scheduleRank(DEBOUNCE_MS, "pending");
    this.emit();
  }

  private scheduleRank(ms: number, status: RankStatus): void {
    if (this.rankTimer !== null) this.scheduler.cancel(this.rankTimer);
    this.rankStatus = status;
    this.rankTimer = this.scheduler.schedule(() => {
      this.rankTimer = null;
      void this.fetchRank();
    }, ms);
  }

  private fetchRank(): Promise<void> {
    const discipline = this.discipline;
    if (discipline === null || this.sliders.size === 0) return Promise.resolve();
    const param = this.rankParam();
    const task = this.api
      .rank(discipline, param)
      .then((res) => {
        if (res.ok) {
          this.ranking = res.body;
          this.lastRankParam = param;
          this.rankStatus = "idle";
          this.rankError = null;
        } else {
          // the server rejected this particular query; say so verbatim
          // and keep showing the last good ranking
          this.rankError = res.error;
          this.rankStatus = "idle";
        }
        this.emit();
      })
      .catch((exc) => {
        if (exc instanceof Superseded) return;
        // transient transport failure: retry indicator, last good
        // ranking stays on screen
        this.rankError = null;
        this.scheduleRank(RETRY_MS, "retrying");
        this.emit();
      });
    return this.track(task);
  }

  /** Ask for a constrained refit; {} means plain fit, and the server then
   * answers with the unconstrained model itself. */
  async calibrate(constraints: Record<string, number>): Promise<void> {
    if (this.discipline === null) return;
    const task = this.api
      .calibrate(this.discipline, constraints)
      .then((res) => {
        if (res.ok) {
          this.constrained = res.body;
          this.calibrateError = null;
        } else {
          this.calibrateError = res.error;
        }
        this.emit();
      })
      .catch((exc) => {
        if (exc instanceof Superseded) return;
        this.calibrateError = "service unreachable";
        this.emit();
      });
    await this.track(task);
  }

  /** Fetch the correlator for new windows. Degenerate windows never leave
   * the client; the submit control is disabled for them as well. */
  async exploreCorrelator(
    dl: [number, number],
    cit: [number, number | null],
  ): Promise<void> {
    if (degenerateWindows(dl, cit)) return;
    this.dlWindow = [...dl];
    this.citWindow = [...cit];
    this.touchUrl();
    await this.fetchCorrelator();
  }

  private fetchCorrelator(): Promise<void> {
    if (degenerateWindows(this.dlWindow, this.citWindow)) return Promise.resolve();
    const task = this.api
      .correlator(this.dlWindow, this.citWindow)
      .then((res) => {
        if (res.ok) {
          this.correlator = res.body;
          this.correlatorError = null;
        } else {
          this.correlatorError = res.error;
        }
        this.emit();
      })
      .catch((exc) => {
        if (exc instanceof Superseded) return;
        this.correlatorError = "service unreachable";
        this.emit();
      });
    return this.track(task);
  }
}
