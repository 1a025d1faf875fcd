// Console wiring: tenant picker, schema sidebar, editor, results pane.
// One query in flight at a time; submissions while busy queue behind a
// visible spinner.

import { ApiClient, NetworkFailure, QueryFailure } from "./api.js";
import { caretLine } from "./caret.js";
import { renderJson, renderTable } from "./resultsTable.js";
import { renderSidebar } from "./schemaSidebar.js";
import { ConsoleState, initialState, pushHistory, recallHistory } from "./state.js";

const api = new ApiClient("");
const state: ConsoleState = initialState();
let pages = 1;
let view: "table" | "json" = "table";
let busy = false;
let queued: string | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function refreshTenants(): Promise<void> {
  const select = el<HTMLSelectElement>("tenant-select");
  const names = await api.tenants();
  select.textContent = "";
  for (const name of names) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  if (names.length && !names.includes(state.tenant)) {
    state.tenant = names[0];
  }
  select.value = state.tenant;
}

async function refreshSchema(): Promise<void> {
  const sidebar = el<HTMLElement>("sidebar");
  try {
    state.schema = await api.schema(state.tenant);
    renderSidebar(sidebar, state.schema, (template) => {
      const editor = el<HTMLTextAreaElement>("editor");
      editor.value = template;
      state.editorText = template;
      editor.focus();
    });
    hideBanner();
  } catch (err) {
    showBanner(`schema fetch failed: ${err instanceof Error ? err.message : err}`);
  }
}

function showBanner(message: string): void {
  const banner = el<HTMLElement>("banner");
  banner.textContent = message;
  banner.hidden = false;
}

function hideBanner(): void {
  el<HTMLElement>("banner").hidden = true;
}

function renderError(code: string, message: string, line?: number, column?: number): void {
  const pane = el<HTMLElement>("results");
  pane.textContent = "";
  const box = document.createElement("div");
  box.className = code.startsWith("http-") || code === "network" ? "error network-error" : "error query-error";
  const title = document.createElement("strong");
  title.textContent = code;
  box.appendChild(title);
  box.appendChild(document.createTextNode(` ${message}`));
  if (line !== undefined && column !== undefined) {
    const editor = el<HTMLTextAreaElement>("editor");
    const source = editor.value.split("\n")[line - 1] ?? "";
    const pre = document.createElement("pre");
    pre.className = "error-caret";
    pre.textContent = `${source}\n${caretLine(editor.value, line, column)}`;
    box.appendChild(pre);
  }
  pane.appendChild(box);
}

function renderResult(): void {
  if (!state.lastResult) return;
  const pane = el<HTMLElement>("results");
  if (view === "json") {
    renderJson(pane, state.lastResult);
  } else {
    renderTable(pane, state.lastResult, pages, () => {
      pages += 1;
      renderResult();
    });
  }
}

function renderHistory(): void {
  const list = el<HTMLElement>("history");
  list.textContent = "";
  state.history.forEach((entry, index) => {
    const li = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.className = entry.ok ? "history-ok" : "history-err";
    button.textContent = entry.query.length > 60 ? entry.query.slice(0, 57) + "..." : entry.query;
    button.title = entry.query;
    button.addEventListener("click", () => {
      const text = recallHistory(state.history, index);
      if (text !== null) {
        const editor = el<HTMLTextAreaElement>("editor");
        editor.value = text;
        state.editorText = text;
      }
    });
    li.appendChild(button);
    list.appendChild(li);
  });
}

async function runQuery(text: string): Promise<void> {
  if (!text.trim()) return;
  if (busy) {
    queued = text;
    return;
  }
  busy = true;
  el<HTMLElement>("spinner").hidden = false;
  try {
    const result = await api.query(state.tenant, text);
    state.lastResult = result;
    state.lastError = null;
    pages = 1;
    state.history = pushHistory(state.history, {
      query: text,
      tenant: state.tenant,
      at: Date.now(),
      ok: true,
      rowCount: result.rows.length,
      latencyMs: result.latency_ms,
    });
    renderResult();
  } catch (err) {
    if (err instanceof QueryFailure) {
      state.lastError = err.detail;
      renderError(err.detail.code, err.detail.message, err.detail.line, err.detail.column);
    } else if (err instanceof NetworkFailure) {
      renderError("network", err.message);
    } else {
      renderError("error", String(err));
    }
    state.history = pushHistory(state.history, {
      query: text,
      tenant: state.tenant,
      at: Date.now(),
      ok: false,
    });
  } finally {
    busy = false;
    el<HTMLElement>("spinner").hidden = true;
    renderHistory();
    if (queued !== null) {
      const next = queued;
      queued = null;
      void runQuery(next);
    }
  }
}

async function runExplain(text: string): Promise<void> {
  if (!text.trim()) return;
  try {
    const plan = await api.explain(state.tenant, text);
    const pane = el<HTMLElement>("results");
    pane.textContent = "";
    const pre = document.createElement("pre");
    pre.className = "plan-view";
    pre.textContent = plan;
    pane.appendChild(pre);
  } catch (err) {
    if (err instanceof QueryFailure) {
      renderError(err.detail.code, err.detail.message, err.detail.line, err.detail.column);
    } else {
      renderError("network", String(err));
    }
  }
}

export async function boot(): Promise<void> {
  await refreshTenants();
  await refreshSchema();
  const editor = el<HTMLTextAreaElement>("editor");
  editor.addEventListener("input", () => {
    state.editorText = editor.value;
  });
  editor.addEventListener("keydown", (event) => {
    if ((event.ctrlKey || event.metaKey) && event.key === "Enter") {
      event.preventDefault();
      void runQuery(editor.value);
    }
  });
  el<HTMLButtonElement>("run-btn").addEventListener("click", () => void runQuery(editor.value));
  el<HTMLButtonElement>("explain-btn").addEventListener("click", () => void runExplain(editor.value));
  el<HTMLSelectElement>("tenant-select").addEventListener("change", (event) => {
    state.tenant = (event.target as HTMLSelectElement).value;
    void refreshSchema();
  });
  el<HTMLButtonElement>("view-table").addEventListener("click", () => {
    view = "table";
    renderResult();
  });
  el<HTMLButtonElement>("view-json").addEventListener("click", () => {
    view = "json";
    renderResult();
  });
}

if (typeof document !== "undefined" && document.getElementById("editor")) {
  void boot();
}
