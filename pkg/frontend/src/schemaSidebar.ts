// Schema sidebar: one entry per label and edge type with live counts.
// Clicking an entry inserts a MATCH template into the editor.

import type { SchemaDoc } from "./api.js";
import { edgeTypeTemplate, labelTemplate } from "./template.js";

export function renderSidebar(
  container: HTMLElement,
  schema: SchemaDoc,
  onTemplate: (template: string) => void,
): void {
  container.textContent = "";
  if (schema.labels.length === 0 && schema.edge_types.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "This tenant is empty. Import a snapshot or run a load to see its schema here.";
    container.appendChild(empty);
    return;
  }
  const labelHead = document.createElement("h3");
  labelHead.textContent = `Labels (${schema.labels.length})`;
  container.appendChild(labelHead);
  const labelList = document.createElement("ul");
  labelList.className = "schema-labels";
  for (const entry of schema.labels) {
    const li = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = entry.name;
    button.addEventListener("click", () => onTemplate(labelTemplate(entry)));
    const count = document.createElement("span");
    count.className = "count";
    count.textContent = entry.count.toLocaleString();
    li.appendChild(button);
    li.appendChild(count);
    labelList.appendChild(li);
  }
  container.appendChild(labelList);

  const edgeHead = document.createElement("h3");
  edgeHead.textContent = `Edge types (${schema.edge_types.length})`;
  container.appendChild(edgeHead);
  const edgeList = document.createElement("ul");
  edgeList.className = "schema-edges";
  for (const entry of schema.edge_types) {
    const li = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = entry.name;
    button.addEventListener("click", () => onTemplate(edgeTypeTemplate(entry)));
    const count = document.createElement("span");
    count.className = "count";
    count.textContent = entry.count.toLocaleString();
    li.appendChild(button);
    li.appendChild(count);
    edgeList.appendChild(li);
  }
  container.appendChild(edgeList);
}
