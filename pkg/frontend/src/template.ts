// Query templates inserted when a schema entry is clicked.

import type { EdgeTypeEntry, LabelEntry } from "./api.js";

// Display property rule shared with the server's auto tools: first present
// of name/title/term, else the first identifier-ish property, else "name".
export function displayProperty(entry: LabelEntry): string {
  for (const candidate of ["name", "title", "term"]) {
    if (entry.properties.includes(candidate)) return candidate;
  }
  const idProp = [...entry.properties].sort().find((p) => p.endsWith("_id") || p.endsWith("_name"));
  if (idProp) return idProp;
  return entry.properties[0] ?? "name";
}

export function labelTemplate(entry: LabelEntry): string {
  return `MATCH (n:${entry.name}) RETURN n.${displayProperty(entry)} LIMIT 25`;
}

export function edgeTypeTemplate(entry: EdgeTypeEntry): string {
  const src = entry.src_label ? `:${entry.src_label}` : "";
  const dst = entry.dst_label ? `:${entry.dst_label}` : "";
  return `MATCH (a${src})-[:${entry.name}]->(b${dst}) RETURN a, b LIMIT 25`;
}
