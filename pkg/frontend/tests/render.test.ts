// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import type { QueryResult, SchemaDoc } from "../src/api.js";
import { caretLine, caretOffset } from "../src/caret.js";
import { PAGE_SIZE, cellText, hiddenCount, renderTable, visibleRows } from "../src/resultsTable.js";
import { renderSidebar } from "../src/schemaSidebar.js";
import { displayProperty, labelTemplate } from "../src/template.js";

const DRUG_SCHEMA: SchemaDoc = {
  labels: [
    { name: "Drug", count: 300, properties: ["drugbank_id", "name", "synonyms"], indexed: ["drugbank_id", "name", "synonyms"] },
    { name: "Gene", count: 80, properties: ["gene_name"], indexed: ["gene_name"] },
    { name: "Indication", count: 40, properties: ["meddra_id", "name"], indexed: ["meddra_id", "name"] },
    { name: "SideEffect", count: 60, properties: ["meddra_id", "name"], indexed: ["meddra_id", "name"] },
  ],
  edge_types: [
    { name: "HAS_INDICATION", count: 200, src_label: "Drug", dst_label: "Indication" },
    { name: "HAS_SIDE_EFFECT", count: 900, src_label: "Drug", dst_label: "SideEffect" },
    { name: "INTERACTS_WITH_GENE", count: 600, src_label: "Drug", dst_label: "Gene" },
  ],
};

describe("templates", () => {
  it("clicking Drug inserts the documented MATCH template", () => {
    expect(labelTemplate(DRUG_SCHEMA.labels[0])).toBe(
      "MATCH (n:Drug) RETURN n.name LIMIT 25",
    );
  });

  it("falls back to identifier-ish properties when no display name exists", () => {
    expect(displayProperty(DRUG_SCHEMA.labels[1])).toBe("gene_name");
  });
});

describe("schema sidebar", () => {
  it("lists every label and edge type with counts", () => {
    const host = document.createElement("div");
    const inserted: string[] = [];
    renderSidebar(host, DRUG_SCHEMA, (t) => inserted.push(t));
    const labels = host.querySelectorAll(".schema-labels li");
    const edges = host.querySelectorAll(".schema-edges li");
    expect(labels).toHaveLength(4);
    expect(edges).toHaveLength(3);
    expect(host.textContent).toContain("Labels (4)");
    expect(host.textContent).toContain("Edge types (3)");
    (labels[0].querySelector("button") as HTMLButtonElement).click();
    expect(inserted).toEqual(["MATCH (n:Drug) RETURN n.name LIMIT 25"]);
  });

  it("shows an empty-state message for an empty tenant", () => {
    const host = document.createElement("div");
    renderSidebar(host, { labels: [], edge_types: [] }, () => {});
    expect(host.querySelector(".empty-state")).not.toBeNull();
  });
});

describe("error caret", () => {
  it("maps a 1-based line:column onto the editor text", () => {
    const text = "MATCH (d:Drug)\nWHERE d.name == 1\nRETURN d.name";
    expect(caretOffset(text, 1, 1)).toBe(0);
    expect(caretOffset(text, 2, 14)).toBe(15 + 13);
  });

  it("renders a caret under the reported column", () => {
    expect(caretLine("MATCH (d:Drug RETURN d", 1, 15)).toBe(" ".repeat(14) + "^");
  });
});

describe("results table", () => {
  function result(n: number): QueryResult {
    return {
      columns: ["value"],
      rows: Array.from({ length: n }, (_, i) => [i]),
      latency_ms: 1.5,
    };
  }

  it("virtualizes beyond 200 rows", () => {
    const big = result(450);
    expect(visibleRows(big, 1)).toHaveLength(PAGE_SIZE);
    expect(hiddenCount(big, 1)).toBe(250);
    expect(visibleRows(big, 3)).toHaveLength(450);
    const host = document.createElement("div");
    renderTable(host, big, 1);
    expect(host.querySelectorAll("tbody tr")).toHaveLength(200);
    expect(host.querySelector(".show-more")?.textContent).toContain("250 hidden");
  });

  it("renders headers, latency badge, and null as empty", () => {
    const host = document.createElement("div");
    renderTable(host, { columns: ["a", "b"], rows: [[null, "x"]], latency_ms: 3.25 }, 1);
    expect(host.querySelector(".latency-badge")?.textContent).toBe("3.3 ms");
    const cells = host.querySelectorAll("tbody td");
    expect(cells[0].textContent).toBe("");
    expect(cells[1].textContent).toBe("x");
  });

  it("renders node projections as JSON", () => {
    expect(cellText({ id: 1, labels: ["Drug"] })).toBe('{"id":1,"labels":["Drug"]}');
  });
});
