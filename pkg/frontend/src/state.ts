// Console session state: active tenant, schema, editor text, query history.
// History is append-only within a session and capped at the last 50 entries.

import type { QueryResult, SchemaDoc } from "./api.js";

export const HISTORY_LIMIT = 50;

export interface HistoryEntry {
  query: string;
  tenant: string;
  at: number;
  ok: boolean;
  rowCount?: number;
  latencyMs?: number;
}

export interface ConsoleState {
  tenant: string;
  schema: SchemaDoc | null;
  editorText: string;
  history: HistoryEntry[];
  lastResult: QueryResult | null;
  lastError: { code: string; message: string; line?: number; column?: number } | null;
}

export function initialState(tenant = "default"): ConsoleState {
  return {
    tenant,
    schema: null,
    editorText: "",
    history: [],
    lastResult: null,
    lastError: null,
  };
}

export function pushHistory(history: HistoryEntry[], entry: HistoryEntry): HistoryEntry[] {
  // newest first; never mutate the input array
  const next = [entry, ...history];
  return next.length > HISTORY_LIMIT ? next.slice(0, HISTORY_LIMIT) : next;
}

export function recallHistory(history: HistoryEntry[], index: number): string | null {
  if (index < 0 || index >= history.length) return null;
  return history[index].query;
}
