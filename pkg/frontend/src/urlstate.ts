/** Shareable view state in the URL query string.
 *
 * The query stores raw slider positions (not the normalized view) so a
 * reload reconstructs the exact controls, re-derives the same normalized
 * weights, and therefore issues the same requests.
 */

import { parseWeightsParam, weightsParam, type Weights } from "./weights.js";

export interface UrlState {
  discipline: string | null;
  sliders: Map<string, number> | null;
  dlWindow: [number, number];
  citWindow: [number, number | null];
}

export const DEFAULT_DL_WINDOW: [number, number] = [0, 6];
export const DEFAULT_CIT_WINDOW: [number, number | null] = [12, null];

export function encodeState(
  discipline: string | null,
  sliders: Weights | null,
  dlWindow: [number, number],
  citWindow: [number, number | null],
): string {
  const params = new URLSearchParams();
  if (discipline !== null) params.set("d", discipline);
  if (sliders !== null) params.set("w", weightsParam(sliders));
  if (dlWindow[0] !== DEFAULT_DL_WINDOW[0] || dlWindow[1] !== DEFAULT_DL_WINDOW[1]) {
    params.set("dl", `${dlWindow[0]}:${dlWindow[1]}`);
  }
  if (citWindow[0] !== DEFAULT_CIT_WINDOW[0] || citWindow[1] !== DEFAULT_CIT_WINDOW[1]) {
    params.set("cit", `${citWindow[0]}:${citWindow[1] === null ? "" : citWindow[1]}`);
  }
  return params.toString();
}

function parseWindow(text: string): [number, number | null] | null {
  const sep = text.indexOf(":");
  if (sep < 0) return null;
  const from = Number(text.slice(0, sep));
  const toText = text.slice(sep + 1);
  const to = toText === "" ? null : Number(toText);
  if (!Number.isFinite(from)) return null;
  if (to !== null && !Number.isFinite(to)) return null;
  return [from, to];
}

/** Decode a query string; malformed pieces fall back to defaults. */
export function decodeState(query: string): UrlState {
  const params = new URLSearchParams(query);
  const state: UrlState = {
    discipline: params.get("d"),
    sliders: null,
    dlWindow: [...DEFAULT_DL_WINDOW],
    citWindow: [...DEFAULT_CIT_WINDOW],
  };
  const w = params.get("w");
  if (w !== null) state.sliders = parseWeightsParam(w);
  const dl = params.get("dl");
  if (dl !== null) {
    const parsed = parseWindow(dl);
    if (parsed !== null && parsed[1] !== null) state.dlWindow = [parsed[0], parsed[1]];
  }
  const cit = params.get("cit");
  if (cit !== null) {
    const parsed = parseWindow(cit);
    if (parsed !== null) state.citWindow = parsed;
  }
  return state;
}
