/** Typed client for the ranking service.
 *
 * Every call resolves to an ApiResult instead of throwing on HTTP errors,
 * so callers surface the server's own detail text verbatim. Requests are
 * keyed per control: starting a new rank request aborts the previous one,
 * keeping at most one in flight per key.
 */

import type {
  ApiResult,
  CorrelatorResultPayload,
  MetricMatrixPayload,
  RankingResultPayload,
  RegressionModelPayload,
  SummaryPayload,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string; signal?: AbortSignal },
) => Promise<{ ok: boolean; status: number; statusText: string; text(): Promise<string> }>;

/** Raised for a request cancelled in favor of a newer one. */
export class Superseded extends Error {
  constructor() {
    super("superseded");
  }
}

async function settle<T>(
  response: { ok: boolean; status: number; statusText: string; text(): Promise<string> },
): Promise<ApiResult<T>> {
  const text = await response.text();
  if (response.ok) {
    return { ok: true, body: JSON.parse(text) as T };
  }
  let error = response.statusText || `HTTP ${response.status}`;
  try {
    const parsed = JSON.parse(text) as { detail?: unknown };
    if (typeof parsed.detail === "string") error = parsed.detail;
  } catch {
    if (text) error = text;
  }
  return { ok: false, status: response.status, error };
}

export class ApiClient {
  private readonly inFlight = new Map<string, AbortController>();

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** Abort whatever request currently owns `key` and register a new one. */
  private claim(key: string): AbortController {
    this.inFlight.get(key)?.abort();
    const controller = new AbortController();
    this.inFlight.set(key, controller);
    return controller;
  }

  private async get<T>(path: string, key?: string): Promise<ApiResult<T>> {
    const controller = key ? this.claim(key) : undefined;
    try {
      const response = await this.fetchFn(this.base + path, {
        signal: controller?.signal,
      });
      return await settle<T>(response);
    } catch (exc) {
      if (controller?.signal.aborted) throw new Superseded();
      throw exc;
    } finally {
      if (key && this.inFlight.get(key) === controller) this.inFlight.delete(key);
    }
  }

  private async post<T>(path: string, payload: unknown, key?: string): Promise<ApiResult<T>> {
    const controller = key ? this.claim(key) : undefined;
    try {
      const response = await this.fetchFn(this.base + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
        signal: controller?.signal,
      });
      return await settle<T>(response);
    } catch (exc) {
      if (controller?.signal.aborted) throw new Superseded();
      throw exc;
    } finally {
      if (key && this.inFlight.get(key) === controller) this.inFlight.delete(key);
    }
  }

  summary(): Promise<ApiResult<SummaryPayload>> {
    return this.get("/api/summary");
  }

  metrics(discipline: string): Promise<ApiResult<MetricMatrixPayload>> {
    return this.get(`/api/metrics?discipline=${encodeURIComponent(discipline)}`);
  }

  fit(discipline: string): Promise<ApiResult<RegressionModelPayload>> {
    return this.post("/api/fit", { discipline });
  }

  calibrate(
    discipline: string,
    constraints: Record<string, number>,
  ): Promise<ApiResult<RegressionModelPayload>> {
    return this.post("/api/calibrate", { discipline, constraints }, "calibrate");
  }

  rank(discipline: string, weightsParam: string): Promise<ApiResult<RankingResultPayload>> {
    const q = `discipline=${encodeURIComponent(discipline)}&weights=${encodeURIComponent(weightsParam)}`;
    return this.get(`/api/rank?${q}`, "rank");
  }

  correlator(
    dlWindow: [number, number],
    citWindow: [number, number | null],
  ): Promise<ApiResult<CorrelatorResultPayload>> {
    const parts = [
      `dl_from=${dlWindow[0]}`,
      `dl_to=${dlWindow[1]}`,
      `cit_from=${citWindow[0]}`,
    ];
    if (citWindow[1] !== null) parts.push(`cit_to=${citWindow[1]}`);
    return this.get(`/api/correlator?${parts.join("&")}`, "correlator");
  }
}
