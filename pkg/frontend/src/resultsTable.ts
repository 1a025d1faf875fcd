// Result rendering: table with virtualization past 200 rows, plus a JSON view.

import type { QueryResult } from "./api.js";

export const PAGE_SIZE = 200;

export function cellText(value: unknown): string {
  if (value === null || value === undefined) return "";
  if (typeof value === "object") return JSON.stringify(value);
  return String(value);
}

export function visibleRows(result: QueryResult, pages: number): unknown[][] {
  return result.rows.slice(0, pages * PAGE_SIZE);
}

export function hiddenCount(result: QueryResult, pages: number): number {
  return Math.max(0, result.rows.length - pages * PAGE_SIZE);
}

export function renderTable(
  container: HTMLElement,
  result: QueryResult,
  pages = 1,
  onMore?: () => void,
): void {
  container.textContent = "";
  const meta = document.createElement("div");
  meta.className = "result-meta";
  meta.textContent = `${result.rows.length} rows`;
  const badge = document.createElement("span");
  badge.className = "latency-badge";
  badge.textContent = `${result.latency_ms.toFixed(1)} ms`;
  meta.appendChild(badge);
  container.appendChild(meta);

  const table = document.createElement("table");
  table.className = "results";
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const column of result.columns) {
    const th = document.createElement("th");
    th.textContent = column;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement("tbody");
  for (const row of visibleRows(result, pages)) {
    const tr = document.createElement("tr");
    for (const value of row) {
      const td = document.createElement("td");
      td.textContent = cellText(value);
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  container.appendChild(table);

  const hidden = hiddenCount(result, pages);
  if (hidden > 0) {
    const more = document.createElement("button");
    more.className = "show-more";
    more.textContent = `show ${Math.min(hidden, PAGE_SIZE)} more (${hidden} hidden)`;
    if (onMore) more.addEventListener("click", onMore);
    container.appendChild(more);
  }
}

export function renderJson(container: HTMLElement, result: QueryResult): void {
  container.textContent = "";
  const pre = document.createElement("pre");
  pre.className = "json-view";
  pre.textContent = JSON.stringify(result, null, 1);
  container.appendChild(pre);
}
