"""Benchmark suites: single-graph lookups and cross-graph federation joins.

Each query runs five times; the median latency is reported. The report
path writes a delimited latency table and a matplotlib bar chart next to
it when an output directory is given.
"""

from __future__ import annotations

import csv
import os
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .cypher import execute, parse
from .cypher.planner import plan as build_plan
from .store import Tenant

RUNS = 5

SINGLE_SUITE: List[Tuple[str, str]] = [
    (
        "drug_gene_targets",
        "MATCH (d:Drug {name: 'Metformin'})-[:INTERACTS_WITH_GENE]->(g:Gene) "
        "RETURN g.gene_name LIMIT 10",
    ),
    (
        "shared_gene_targets",
        "MATCH (a:Drug {name: 'Warfarin'})-[:INTERACTS_WITH_GENE]->(g:Gene)"
        "<-[:INTERACTS_WITH_GENE]-(b:Drug {name: 'Aspirin'}) "
        "RETURN g.gene_name LIMIT 10",
    ),
    (
        "top_pathways_by_proteins",
        "MATCH (p:Protein)-[:PARTICIPATES_IN]->(pw:Pathway) "
        "RETURN pw.name, count(p) AS proteins ORDER BY proteins DESC LIMIT 10",
    ),
    (
        "ppi_partners_tp53",
        "MATCH (a:Protein {name: 'TP53'})-[:INTERACTS_WITH]-(b:Protein) "
        "RETURN b.name LIMIT 10",
    ),
    (
        "warfarin_side_effects",
        "MATCH (d:Drug {name: 'Warfarin'})-[:HAS_SIDE_EFFECT]->(se:SideEffect) "
        "RETURN se.name LIMIT 10",
    ),
]

FEDERATION_SUITE: List[Tuple[str, str]] = [
    (
        "drug_gene_pathways",
        "MATCH (d:Drug {name: 'Metformin'})-[:INTERACTS_WITH_GENE]->(g:Gene) "
        "MATCH (p:Protein)-[:PARTICIPATES_IN]->(pw:Pathway) "
        "WHERE p.name = g.gene_name "
        "RETURN g.gene_name, pw.name",
    ),
    (
        "drug_trials",
        "MATCH (d:Drug {name: 'Warfarin'}) "
        "MATCH (i:Intervention)<-[:TESTS]-(ct:ClinicalTrial) "
        "WHERE i.name = d.name "
        "RETURN ct.nct_id, ct.phase",
    ),
    (
        "indication_chain",
        "MATCH (d:Drug)-[:HAS_INDICATION]->(i:Indication {name: 'Type 2 Diabetes Mellitus'}) "
        "MATCH (d)-[:INTERACTS_WITH_GENE]->(g:Gene) "
        "MATCH (p:Protein)-[:PARTICIPATES_IN]->(pw:Pathway) "
        "WHERE p.name = g.gene_name "
        "RETURN d.name, g.gene_name, pw.name",
    ),
]

SUITES: Dict[str, List[Tuple[str, str]]] = {
    "single": SINGLE_SUITE,
    "federation": FEDERATION_SUITE,
}


@dataclass(slots=True)
class BenchResult:
    name: str
    query: str
    row_count: int
    runs_ms: List[float]
    rows: List[Tuple] = field(default_factory=list)

    @property
    def median_ms(self) -> float:
        return statistics.median(self.runs_ms)


def run_suite(tenant: Tenant, suite: str, runs: int = RUNS) -> List[BenchResult]:
    queries = SUITES[suite]
    results = []
    for name, text in queries:
        ast = parse(text)
        plan_ = build_plan(ast, tenant.schema())
        timings = []
        table = None
        for _ in range(runs):
            table = execute(tenant, plan_)
            timings.append(table.latency_ms)
        results.append(
            BenchResult(name, text, len(table.rows), timings, rows=list(table.rows))
        )
    return results


def render_table(results: List[BenchResult]) -> str:
    headers = ("query", "rows", "median_ms")
    rows = [
        (r.name, str(r.row_count), f"{r.median_ms:.1f}")
        for r in results
    ]
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) for i in range(3)
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(3)),
    ]
    for row in rows:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(3)))
    return "\n".join(lines)


def write_report(results: List[BenchResult], outdir: str, suite: str) -> List[str]:
    """Write <suite>_latency.csv and <suite>_latency.png into outdir."""
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{suite}_latency.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["query", "rows", "median_ms"] + [f"run{i + 1}_ms" for i in range(len(results[0].runs_ms))])
        for r in results:
            writer.writerow(
                [r.name, r.row_count, f"{r.median_ms:.3f}"] + [f"{t:.3f}" for t in r.runs_ms]
            )
    png_path = os.path.join(outdir, f"{suite}_latency.png")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 0.6 * len(results) + 1.5))
    names = [r.name for r in results]
    medians = [r.median_ms for r in results]
    ax.barh(names, medians, color="#4878a8")
    ax.set_xlabel("median latency (ms), %d runs" % len(results[0].runs_ms))
    ax.set_title(f"{suite} suite")
    ax.invert_yaxis()
    for i, value in enumerate(medians):
        ax.text(value, i, f" {value:.1f}", va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
