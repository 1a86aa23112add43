/** Page wiring: controls in, view model out. No analysis happens here. */

import { ApiClient } from "./api.js";
import { view, type ViewModel } from "./render.js";
import { scatterSvg } from "./scatter.js";
import { degenerateWindows, Store } from "./state.js";
import { decodeState } from "./urlstate.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function setText(id: string, text: string): void {
  el(id).textContent = text;
}

function setBanner(id: string, text: string | null): void {
  const node = el(id);
  node.textContent = text ?? "";
  node.classList.toggle("hidden", text === null);
}

function renderSliders(vm: ViewModel): void {
  const host = el("sliders");
  const known = new Set<string>();
  for (const slider of vm.sliders) {
    known.add(slider.name);
    let row = host.querySelector<HTMLElement>(`[data-metric="${slider.name}"]`);
    if (row === null) {
      row = document.createElement("div");
      row.className = "slider-row";
      row.dataset.metric = slider.name;
      row.innerHTML =
        `<label>${escapeHtml(slider.name)}</label>` +
        `<input type="range" min="-1" max="1" step="any">` +
        `<span class="raw"></span><span class="norm"></span>`;
      const input = row.querySelector("input")!;
      input.addEventListener("input", () => {
        store.adjustWeight(slider.name, Number(input.value));
      });
      host.appendChild(row);
    }
    const input = row.querySelector("input")!;
    if (document.activeElement !== input) input.value = String(slider.value);
    input.disabled = slider.disabled || vm.controlsDisabled;
    row.querySelector(".raw")!.textContent = slider.disabled
      ? "dropped"
      : String(slider.value);
    row.querySelector(".norm")!.textContent = slider.normalized;
  }
  for (const row of [...host.querySelectorAll<HTMLElement>("[data-metric]")]) {
    if (!known.has(row.dataset.metric!)) row.remove();
  }
}

function renderRanking(vm: ViewModel): void {
  const body = el<HTMLTableSectionElement>("ranking-body");
  body.innerHTML = vm.rankingRows
    .map(
      (row) =>
        `<tr><td>${row.tied ? "=" : ""}${escapeHtml(row.rank)}</td>` +
        `<td>${escapeHtml(row.unitId)}</td>` +
        `<td class="num">${escapeHtml(row.score)}</td></tr>`,
    )
    .join("");
  setText("badge", vm.badge);
  setText(
    "rank-status",
    vm.rankStatus === "idle" ? "" : vm.rankStatus === "pending" ? "updating" : "retrying",
  );
  setBanner("rank-error", vm.rankError);
}

function renderModel(vm: ViewModel): void {
  const host = el("model");
  if (vm.model === null) {
    host.innerHTML = "<p class='note'>no fitted model</p>";
  } else {
    const rows = vm.model.rows
      .map(
        (row) =>
          `<tr><td>${escapeHtml(row.name)}</td>` +
          `<td class="num">${escapeHtml(row.beta)}</td></tr>`,
      )
      .join("");
    const dropped = vm.model.dropped.length
      ? `<p class="note">dropped: ${escapeHtml(vm.model.dropped.join(", "))}</p>`
      : "";
    host.innerHTML =
      `<table><thead><tr><th>metric</th><th>beta</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>` +
      `<p>R&sup2; <span class="num">${escapeHtml(vm.model.rSquared)}</span>` +
      ` adjusted <span class="num">${escapeHtml(vm.model.adjusted)}</span>` +
      ` lambda <span class="num">${escapeHtml(vm.model.ridgeLambda)}</span>` +
      ` condition <span class="num">${escapeHtml(vm.model.conditionNumber)}</span></p>` +
      dropped;
  }
  const select = el<HTMLSelectElement>("constraint-metric");
  const names = vm.model?.rows.map((row) => row.name) ?? [];
  if (
    names.length !== select.options.length ||
    names.some((name, i) => select.options[i].value !== name)
  ) {
    select.innerHTML = names
      .map((name) => `<option value="${escapeHtml(name)}">${escapeHtml(name)}</option>`)
      .join("");
  }
  el<HTMLButtonElement>("calibrate-apply").disabled = vm.model === null;
  el<HTMLButtonElement>("calibrate-clear").disabled = vm.model === null;
}

function renderCalibration(vm: ViewModel): void {
  const host = el("calibration");
  if (vm.calibration === null) {
    host.innerHTML = "";
  } else {
    const rows = vm.calibration.rows
      .map(
        (row) =>
          `<tr><td>${escapeHtml(row.name)}</td>` +
          `<td class="num">${escapeHtml(row.fitted)}</td>` +
          `<td class="num">${escapeHtml(row.constrained)}</td></tr>`,
      )
      .join("");
    host.innerHTML =
      `<table><thead><tr><th>metric</th><th>fitted</th><th>constrained</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>` +
      `<p>R&sup2; <span class="num">${escapeHtml(vm.calibration.fitR2)}</span>` +
      ` &rarr; <span class="num">${escapeHtml(vm.calibration.constrainedR2)}</span>` +
      ` (delta <span class="num">${escapeHtml(vm.calibration.delta)}</span>)</p>`;
  }
  setBanner("calibrate-error", vm.calibrateError);
}

function renderCorrelator(vm: ViewModel): void {
  if (vm.correlator === null) {
    setText("correlator-r", "n/a");
    setText("correlator-n", "");
    setText("correlator-windows", "");
    el("scatter-host").innerHTML = "";
  } else {
    setText("correlator-r", vm.correlator.r);
    setText("correlator-n", `n = ${vm.correlator.n}`);
    setText(
      "correlator-windows",
      `downloads ${vm.correlator.dlWindow} months vs citations ${vm.correlator.citWindow} months`,
    );
    el("scatter-host").innerHTML = scatterSvg(vm.correlator.points);
  }
  setBanner("correlator-error", vm.correlatorError);
}

function render(): void {
  const vm = view(store.snapshot());
  setText("discipline-label", vm.discipline ?? "none");
  setBanner("banner", vm.banner);
  setBanner("note", vm.note);
  renderSliders(vm);
  renderRanking(vm);
  renderModel(vm);
  renderCalibration(vm);
  renderCorrelator(vm);
}

function correlatorForm(): { dl: [number, number]; cit: [number, number | null] } {
  const dlFrom = Number(el<HTMLInputElement>("dl-from").value);
  const dlTo = Number(el<HTMLInputElement>("dl-to").value);
  const citFrom = Number(el<HTMLInputElement>("cit-from").value);
  const citToText = el<HTMLInputElement>("cit-to").value.trim();
  const citTo = citToText === "" ? null : Number(citToText);
  return { dl: [dlFrom, dlTo], cit: [citFrom, citTo] };
}

function refreshCorrelatorSubmit(): void {
  const { dl, cit } = correlatorForm();
  const bad =
    [dl[0], dl[1], cit[0]].some((x) => !Number.isFinite(x)) ||
    (cit[1] !== null && !Number.isFinite(cit[1])) ||
    degenerateWindows(dl, cit);
  el<HTMLButtonElement>("correlator-apply").disabled = bad;
}

const store = new Store({
  api,
  onChange: render,
  onUrlChange: (query) => {
    history.replaceState(null, "", query ? `?${query}` : location.pathname);
  },
});

function wire(): void {
  const disciplineInput = el<HTMLInputElement>("discipline-input");
  el("load-button").addEventListener("click", () => {
    void store.loadDiscipline(disciplineInput.value.trim());
  });
  disciplineInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") void store.loadDiscipline(disciplineInput.value.trim());
  });

  el("calibrate-apply").addEventListener("click", () => {
    const metric = el<HTMLSelectElement>("constraint-metric").value;
    const value = Number(el<HTMLInputElement>("constraint-value").value);
    if (metric && Number.isFinite(value)) void store.calibrate({ [metric]: value });
  });
  el("calibrate-clear").addEventListener("click", () => {
    void store.calibrate({});
  });

  for (const id of ["dl-from", "dl-to", "cit-from", "cit-to"]) {
    el(id).addEventListener("input", refreshCorrelatorSubmit);
  }
  el("correlator-apply").addEventListener("click", () => {
    const { dl, cit } = correlatorForm();
    void store.exploreCorrelator(dl, cit);
  });
}

async function boot(): Promise<void> {
  wire();
  const summary = await api.summary();
  if (summary.ok) {
    setText(
      "corpus-line",
      `${summary.body.n_papers} papers, ${summary.body.n_units} units, ` +
        `snapshot ${summary.body.snapshot_date ?? "n/a"}; disciplines: ` +
        summary.body.disciplines.join(", "),
    );
  } else {
    setText("corpus-line", summary.error);
  }

  const initial = decodeState(location.search.replace(/^\?/, ""));
  store.applyWindows(initial.dlWindow, initial.citWindow);
  el<HTMLInputElement>("dl-from").value = String(initial.dlWindow[0]);
  el<HTMLInputElement>("dl-to").value = String(initial.dlWindow[1]);
  el<HTMLInputElement>("cit-from").value = String(initial.citWindow[0]);
  el<HTMLInputElement>("cit-to").value =
    initial.citWindow[1] === null ? "" : String(initial.citWindow[1]);
  refreshCorrelatorSubmit();
  if (initial.discipline !== null) {
    el<HTMLInputElement>("discipline-input").value = initial.discipline;
    await store.loadDiscipline(initial.discipline, initial.sliders);
  } else if (summary.ok && summary.body.disciplines.length > 0) {
    const first = summary.body.disciplines[0];
    el<HTMLInputElement>("discipline-input").value = first;
    await store.loadDiscipline(first);
  } else {
    render();
  }
}

void boot();
