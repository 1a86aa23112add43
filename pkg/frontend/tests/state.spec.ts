/** Behavior of the client state machine against a scripted service.
 *
 * The fake fetch honors AbortSignal and can hang, fail, or answer with
 * canned bodies, which is enough to pin down display fidelity, debounce,
 * cancellation, and every error path without a network.
 */

import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { ManualScheduler } from "../src/debounce.js";
import { view } from "../src/render.js";
import { scatterSvg } from "../src/scatter.js";
import { DEBOUNCE_MS, RETRY_MS, Store, degenerateWindows } from "../src/state.js";
import { decodeState } from "../src/urlstate.js";
import type {
  CorrelatorResultPayload,
  RankingResultPayload,
  RegressionModelPayload,
} from "../src/types.js";

type RouteResult =
  | { status: number; body: unknown }
  | "fail"
  | Promise<{ status: number; body: unknown }>;

interface Service {
  metrics(url: string): RouteResult;
  fit(): RouteResult;
  calibrate(body: { constraints?: Record<string, number> }): RouteResult;
  rank(url: string): RouteResult;
  correlator(url: string): RouteResult;
}

const BATTERY = ["citation_count", "download_count", "h_index"];

const FIT: RegressionModelPayload = {
  discipline_id: "disc00",
  metric_names: BATTERY,
  beta: [0.5, 0.3, 0.2],
  intercept: 0.0123456789,
  r_squared: 0.845716947,
  adjusted_r_squared: 0.839102216,
  ridge_lambda: 0.000001,
  condition_number: 14.2071533,
  residuals: [],
  dropped_columns: [],
  imputed_cells: [],
};

const RANK: RankingResultPayload = {
  discipline_id: "disc00",
  rows: [
    { unit_id: "u2", composite_score: 0.912345678, rank: 1 },
    { unit_id: "u1", composite_score: 0.300000004, rank: 2 },
    { unit_id: "u3", composite_score: -0.512345679, rank: 3 },
  ],
  spearman_vs_criterion: 0.866025404,
};

const TIED: RankingResultPayload = {
  discipline_id: "disc00",
  rows: [
    { unit_id: "u1", composite_score: 0, rank: 2 },
    { unit_id: "u2", composite_score: 0, rank: 2 },
    { unit_id: "u3", composite_score: 0, rank: 2 },
  ],
  spearman_vs_criterion: null,
};

const CORR: CorrelatorResultPayload = {
  r: 0.708039383,
  n: 1503,
  points: [
    ["p1", 12, 30],
    ["p2", 3.5, 7],
  ],
  dl_window: [0, 6],
  cit_window: [12, null],
};

function queryOf(url: string): URLSearchParams {
  return new URL(`http://host${url}`).searchParams;
}

function urlWeights(url: string): number[] {
  const raw = queryOf(url).get("weights") ?? "";
  return raw.split(",").map((token) => Number(token.split(":")[1]));
}

function defaultService(): Service {
  return {
    metrics: (url) => {
      const discipline = queryOf(url).get("discipline");
      if (discipline !== "disc00") {
        return { status: 404, body: { detail: `unknown discipline '${discipline}'` } };
      }
      return {
        status: 200,
        body: {
          level: "unit",
          discipline_id: "disc00",
          row_ids: ["u1", "u2", "u3"],
          metric_names: BATTERY,
          values: [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
        },
      };
    },
    fit: () => ({ status: 200, body: FIT }),
    calibrate: (body) =>
      Object.keys(body.constraints ?? {}).length === 0
        ? { status: 200, body: FIT }
        : { status: 200, body: { ...FIT, beta: [0.71, 0.29, 0], r_squared: 0.807512345 } },
    rank: (url) =>
      urlWeights(url).every((w) => w === 0)
        ? { status: 200, body: TIED }
        : { status: 200, body: RANK },
    correlator: () => ({ status: 200, body: CORR }),
  };
}

function makeFetch(svc: Service): { fetchFn: FetchLike; calls: string[] } {
  const calls: string[] = [];
  const fetchFn: FetchLike = (url, init) => {
    calls.push(url);
    return new Promise((resolve, reject) => {
      init?.signal?.addEventListener("abort", () => {
        reject(new DOMException("aborted", "AbortError"));
      });
      const path = url.split("?")[0];
      let out: RouteResult;
      if (path === "/api/metrics") out = svc.metrics(url);
      else if (path === "/api/fit") out = svc.fit();
      else if (path === "/api/calibrate") out = svc.calibrate(JSON.parse(init?.body ?? "{}"));
      else if (path === "/api/rank") out = svc.rank(url);
      else if (path === "/api/correlator") out = svc.correlator(url);
      else {
        reject(new Error(`unrouted ${url}`));
        return;
      }
      if (out === "fail") {
        reject(new TypeError("fetch failed"));
        return;
      }
      Promise.resolve(out).then((res) => {
        resolve({
          ok: res.status >= 200 && res.status < 300,
          status: res.status,
          statusText: "",
          text: () => Promise.resolve(JSON.stringify(res.body)),
        });
      }, reject);
    });
  };
  return { fetchFn, calls };
}

function harness(svc: Service = defaultService()) {
  const { fetchFn, calls } = makeFetch(svc);
  const scheduler = new ManualScheduler();
  const urls: string[] = [];
  const store = new Store({
    api: new ApiClient("", fetchFn),
    scheduler,
    onUrlChange: (query) => urls.push(query),
  });
  const rankCalls = () => calls.filter((u) => u.startsWith("/api/rank")).length;
  const corrCalls = () => calls.filter((u) => u.startsWith("/api/correlator")).length;
  return { svc, store, scheduler, calls, urls, rankCalls, corrCalls };
}

describe("loading a discipline", () => {
  it("initializes sliders to the normalized betas and renders served numbers verbatim", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();

    const snap = h.store.snapshot();
    const total = Math.abs(FIT.beta[0]) + Math.abs(FIT.beta[1]) + Math.abs(FIT.beta[2]);
    expect(snap.sliders.get("citation_count")).toBe(FIT.beta[0] / total);
    expect(snap.sliders.get("h_index")).toBe(FIT.beta[2] / total);

    const vm = view(snap);
    expect(vm.discipline).toBe("disc00");
    expect(vm.controlsDisabled).toBe(false);
    expect(vm.rankingRows.map((r) => [r.unitId, r.score, r.rank])).toEqual([
      ["u2", String(0.912345678), "1"],
      ["u1", String(0.300000004), "2"],
      ["u3", String(-0.512345679), "3"],
    ]);
    expect(vm.rankingRows.every((r) => !r.tied)).toBe(true);
    expect(vm.badge).toBe(String(0.866025404));
    expect(vm.model!.rSquared).toBe(String(0.845716947));
    expect(vm.model!.rows.map((r) => r.beta)).toEqual(FIT.beta.map(String));
    expect(vm.correlator!.r).toBe(String(0.708039383));
    expect(vm.correlator!.n).toBe("1503");
    expect(vm.correlator!.dlWindow).toBe("[0, 6)");
    expect(vm.correlator!.citWindow).toBe("[12, inf)");
  });

  it("shows the error banner for an unknown discipline with nothing stale underneath", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    expect(view(h.store.snapshot()).rankingRows.length).toBe(3);

    await h.store.loadDiscipline("nope");
    const vm = view(h.store.snapshot());
    expect(vm.banner).toBe("unknown discipline 'nope'");
    expect(vm.discipline).toBeNull();
    expect(vm.sliders).toEqual([]);
    expect(vm.rankingRows).toEqual([]);
    expect(vm.model).toBeNull();
    expect(vm.controlsDisabled).toBe(true);
  });

  it("notes an empty battery and never asks for a fit or ranking", async () => {
    const h = harness();
    h.svc.metrics = () => ({
      status: 200,
      body: {
        level: "unit",
        discipline_id: "disc00",
        row_ids: [],
        metric_names: [],
        values: [],
      },
    });
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    const vm = view(h.store.snapshot());
    expect(vm.note).toContain("battery is empty");
    expect(vm.controlsDisabled).toBe(true);
    expect(vm.sliders).toEqual([]);
    expect(h.calls.some((u) => u.startsWith("/api/fit"))).toBe(false);
    expect(h.rankCalls()).toBe(0);
  });

  it("falls back to uniform sliders when the fit fails, surfacing the reason", async () => {
    const h = harness();
    h.svc.fit = () => ({ status: 422, body: { detail: "criterion ranking is degenerate" } });
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    const snap = h.store.snapshot();
    expect(snap.banner).toBe("criterion ranking is degenerate");
    for (const name of BATTERY) {
      expect(snap.sliders.get(name)).toBeCloseTo(1 / 3, 12);
    }
    expect(snap.ranking).not.toBeNull();
    expect(view(snap).model).toBeNull();
  });

  it("marks a dropped column's slider disabled", async () => {
    const h = harness();
    h.svc.fit = () => ({
      status: 200,
      body: {
        ...FIT,
        metric_names: ["citation_count", "download_count"],
        beta: [0.6, 0.4],
        dropped_columns: ["h_index"],
      },
    });
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    const vm = view(h.store.snapshot());
    const byName = new Map(vm.sliders.map((s) => [s.name, s]));
    expect(byName.get("h_index")!.disabled).toBe(true);
    expect(byName.get("citation_count")!.disabled).toBe(false);
  });
});

describe("weight adjustments", () => {
  async function loaded() {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    return h;
  }

  it("debounces several movements into one request for the final weights", async () => {
    const h = await loaded();
    const before = h.rankCalls();

    h.store.adjustWeight("citation_count", 0.9);
    expect(view(h.store.snapshot()).rankStatus).toBe("pending");
    h.scheduler.advance(DEBOUNCE_MS - 50);
    h.store.adjustWeight("download_count", -0.2);
    h.scheduler.advance(DEBOUNCE_MS - 50);
    h.store.adjustWeight("h_index", 0.1);
    expect(h.rankCalls()).toBe(before);

    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();
    expect(h.rankCalls()).toBe(before + 1);
    expect(view(h.store.snapshot()).rankStatus).toBe("idle");

    const last = decodeURIComponent(h.calls[h.calls.length - 1]);
    // 0.9, -0.2, 0.1 normalized by the accumulated total |w|
    const total = 0.9 + 0.2 + 0.1;
    expect(last).toContain(`citation_count:${String(0.9 / total)}`);
    expect(last).toContain(`download_count:${String(-0.2 / total)}`);
  });

  it("treats doubling every weight as no change: zero requests, identical view", async () => {
    const h = await loaded();
    h.store.adjustWeight("citation_count", 0.4);
    h.store.adjustWeight("download_count", 0.25);
    h.store.adjustWeight("h_index", 0.1);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();

    const before = view(h.store.snapshot());
    const calls = h.rankCalls();
    h.store.adjustWeight("citation_count", 0.8);
    h.store.adjustWeight("download_count", 0.5);
    h.store.adjustWeight("h_index", 0.2);
    h.scheduler.advance(DEBOUNCE_MS * 10);
    await h.store.idle();

    expect(h.rankCalls()).toBe(calls);
    expect(h.scheduler.pending).toBe(0);
    const after = view(h.store.snapshot());
    expect(after.rankingRows).toEqual(before.rankingRows);
    expect(after.badge).toBe(before.badge);
    expect(after.rankStatus).toBe("idle");
    // the sliders themselves did move; only the normalized view is frozen
    expect(h.store.snapshot().sliders.get("citation_count")).toBe(0.8);
    expect(after.sliders.map((s) => s.normalized)).toEqual(
      before.sliders.map((s) => s.normalized),
    );
  });

  it("renders the all-tied ranking when every weight is zero", async () => {
    const h = await loaded();
    for (const name of BATTERY) h.store.adjustWeight(name, 0);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();

    const vm = view(h.store.snapshot());
    expect(vm.rankingRows.length).toBe(3);
    for (const row of vm.rankingRows) {
      expect(row.tied).toBe(true);
      expect(row.rank).toBe("2");
      expect(row.score).toBe("0");
    }
    expect(vm.badge).toBe("n/a");
  });

  it("ignores sliders that are not part of the battery", async () => {
    const h = await loaded();
    const before = h.store.snapshot();
    h.store.adjustWeight("made_up_metric", 1);
    expect(h.store.snapshot().sliders).toEqual(before.sliders);
  });

  it("keeps the last good ranking and the verbatim reason when the server rejects", async () => {
    const h = await loaded();
    h.svc.rank = () => ({ status: 400, body: { detail: "weight on missing column 'x'" } });
    h.store.adjustWeight("citation_count", 0.9);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();

    const vm = view(h.store.snapshot());
    expect(vm.rankError).toBe("weight on missing column 'x'");
    expect(vm.rankingRows.map((r) => r.unitId)).toEqual(["u2", "u1", "u3"]);
    expect(vm.rankStatus).toBe("idle");
  });

  it("turns a transport failure into a retry that keeps the last good ranking", async () => {
    const h = await loaded();
    const good = view(h.store.snapshot()).rankingRows;

    h.svc.rank = () => "fail";
    h.store.adjustWeight("citation_count", 0.9);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();
    let vm = view(h.store.snapshot());
    expect(vm.rankStatus).toBe("retrying");
    expect(vm.rankError).toBeNull();
    expect(vm.rankingRows).toEqual(good);

    h.svc.rank = defaultService().rank;
    h.scheduler.advance(RETRY_MS);
    await h.store.idle();
    vm = view(h.store.snapshot());
    expect(vm.rankStatus).toBe("idle");
    expect(vm.rankingRows.length).toBe(3);
  });

  it("aborts a superseded rank request so only the newest lands", async () => {
    const h = await loaded();
    let hung = 0;
    h.svc.rank = (url) => {
      if (hung === 0) {
        hung++;
        return new Promise(() => {});
      }
      const w = queryOf(url).get("weights")!;
      return {
        status: 200,
        body: {
          discipline_id: "disc00",
          rows: [{ unit_id: w, composite_score: 1, rank: 1 }],
          spearman_vs_criterion: null,
        } satisfies RankingResultPayload,
      };
    };

    h.store.adjustWeight("citation_count", 0.9);
    h.scheduler.advance(DEBOUNCE_MS);
    h.store.adjustWeight("citation_count", -0.9);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();

    const vm = view(h.store.snapshot());
    expect(vm.rankingRows.length).toBe(1);
    expect(vm.rankingRows[0].unitId).toContain("citation_count:-");
    expect(vm.rankError).toBeNull();
  });
});

describe("calibration", () => {
  async function loaded() {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    return h;
  }

  it("renders the pinned coefficient exactly as served and the R^2 delta", async () => {
    const h = await loaded();
    await h.store.calibrate({ h_index: 0 });
    const vm = view(h.store.snapshot());
    const rows = new Map(vm.calibration!.rows.map((r) => [r.name, r]));
    expect(rows.get("h_index")!.constrained).toBe("0");
    expect(rows.get("citation_count")!.fitted).toBe(String(0.5));
    expect(vm.calibration!.fitR2).toBe(String(0.845716947));
    expect(vm.calibration!.constrainedR2).toBe(String(0.807512345));
    expect(vm.calibration!.delta).toBe(String(0.845716947 - 0.807512345));
  });

  it("reproduces the fitted view when no constraints are given", async () => {
    const h = await loaded();
    await h.store.calibrate({});
    const vm = view(h.store.snapshot());
    for (const row of vm.calibration!.rows) {
      expect(row.constrained).toBe(row.fitted);
    }
    expect(vm.calibration!.delta).toBe("0");
  });

  it("surfaces a rejected constraint verbatim and keeps the previous result", async () => {
    const h = await loaded();
    await h.store.calibrate({ h_index: 0 });
    const shown = view(h.store.snapshot()).calibration;

    h.svc.calibrate = () => ({
      status: 400,
      body: { detail: "constraint on dropped column 'student_count'" },
    });
    await h.store.calibrate({ student_count: 0 });
    const vm = view(h.store.snapshot());
    expect(vm.calibrateError).toBe("constraint on dropped column 'student_count'");
    expect(vm.calibration).toEqual(shown);
  });

  it("reports an unreachable service without clearing the panel", async () => {
    const h = await loaded();
    await h.store.calibrate({ h_index: 0 });
    h.svc.calibrate = () => "fail";
    await h.store.calibrate({ download_count: 0 });
    const vm = view(h.store.snapshot());
    expect(vm.calibrateError).toBe("service unreachable");
    expect(vm.calibration).not.toBeNull();
  });
});

describe("correlator exploration", () => {
  it("classifies degenerate windows", () => {
    expect(degenerateWindows([6, 6], [12, null])).toBe(true);
    expect(degenerateWindows([3, 1], [12, null])).toBe(true);
    expect(degenerateWindows([0, 6], [12, 12])).toBe(true);
    expect(degenerateWindows([0, 6], [24, 12])).toBe(true);
    expect(degenerateWindows([0, 6], [12, null])).toBe(false);
    expect(degenerateWindows([0, 6], [12, 24])).toBe(false);
  });

  it("never sends a degenerate window to the service", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    const before = h.corrCalls();
    await h.store.exploreCorrelator([6, 6], [12, null]);
    await h.store.exploreCorrelator([0, 6], [12, 12]);
    expect(h.corrCalls()).toBe(before);
    expect(h.store.windows().dl).toEqual([0, 6]);
    expect(h.store.windows().cit).toEqual([12, null]);
  });

  it("keeps only the newest of two racing window changes", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();

    let nth = 0;
    h.svc.correlator = (url) => {
      nth++;
      if (nth === 1) return new Promise(() => {});
      const q = queryOf(url);
      return {
        status: 200,
        body: {
          ...CORR,
          r: 0.5,
          dl_window: [Number(q.get("dl_from")), Number(q.get("dl_to"))],
        },
      };
    };
    void h.store.exploreCorrelator([0, 3], [12, null]);
    void h.store.exploreCorrelator([0, 4], [12, null]);
    await h.store.idle();

    const vm = view(h.store.snapshot());
    expect(vm.correlator!.r).toBe("0.5");
    expect(vm.correlator!.dlWindow).toBe("[0, 4)");
    expect(vm.correlatorError).toBeNull();
  });

  it("surfaces a correlator failure while keeping the last result", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    h.svc.correlator = () => ({
      status: 422,
      body: { detail: "fewer than 3 eligible papers" },
    });
    await h.store.exploreCorrelator([0, 0.001], [12, null]);
    const vm = view(h.store.snapshot());
    expect(vm.correlatorError).toBe("fewer than 3 eligible papers");
    expect(vm.correlator!.r).toBe(String(CORR.r));
  });
});

describe("shareable URLs", () => {
  function echoingService(): Service {
    const svc = defaultService();
    svc.rank = (url) => {
      const w = queryOf(url).get("weights")!;
      return {
        status: 200,
        body: {
          discipline_id: "disc00",
          rows: [{ unit_id: w, composite_score: w.length, rank: 1 }],
          spearman_vs_criterion: null,
        } satisfies RankingResultPayload,
      };
    };
    svc.correlator = (url) => {
      const q = queryOf(url);
      const citTo = q.get("cit_to");
      return {
        status: 200,
        body: {
          r: Number(q.get("dl_to")),
          n: Number(q.get("cit_from")),
          points: [],
          dl_window: [Number(q.get("dl_from")), Number(q.get("dl_to"))],
          cit_window: [Number(q.get("cit_from")), citTo === null ? null : Number(citTo)],
        } satisfies CorrelatorResultPayload,
      };
    };
    return svc;
  }

  it("reloading the encoded state reproduces the exact view", async () => {
    const first = harness(echoingService());
    await first.store.loadDiscipline("disc00");
    await first.store.idle();
    first.store.adjustWeight("citation_count", 0.9);
    first.store.adjustWeight("download_count", -0.35);
    first.scheduler.advance(DEBOUNCE_MS);
    await first.store.idle();
    await first.store.exploreCorrelator([0, 3], [18, 30]);
    await first.store.idle();

    const query = first.urls[first.urls.length - 1];
    expect(query).toContain("d=disc00");

    const second = harness(echoingService());
    const restored = decodeState(query);
    second.store.applyWindows(restored.dlWindow, restored.citWindow);
    await second.store.loadDiscipline(restored.discipline!, restored.sliders);
    await second.store.idle();

    expect(view(second.store.snapshot())).toEqual(view(first.store.snapshot()));
  });

  it("stores raw slider positions, not the normalized view", async () => {
    const h = harness();
    await h.store.loadDiscipline("disc00");
    await h.store.idle();
    h.store.adjustWeight("citation_count", 0.9);
    h.scheduler.advance(DEBOUNCE_MS);
    await h.store.idle();

    const restored = decodeState(h.urls[h.urls.length - 1]);
    expect(restored.sliders!.get("citation_count")).toBe(0.9);
  });
});

describe("scatter svg", () => {
  it("draws one labeled point per pair", () => {
    const svg = scatterSvg([
      { downloads: 12, citations: 30, label: "p1: downloads 12, citations 30" },
      { downloads: 3.5, citations: 7, label: "p2: downloads 3.5, citations 7" },
    ]);
    expect(svg.match(/<circle/g)!.length).toBe(2);
    expect(svg).toContain("p1: downloads 12, citations 30");
    expect(svg).toContain("p2: downloads 3.5, citations 7");
  });
});
