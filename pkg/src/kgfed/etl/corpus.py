"""Seeded synthetic corpus generator.

Emits three source-file sets shaped like public biomedical downloads:

- ``drugs/``: drug vocabulary CSV (drugbank_id, name, pipe-separated
  synonyms), drug-gene TSV, and side-effect/indication TSVs keyed by
  compound synonym;
- ``pathways/``: GO terms with an is_a/part_of/regulates hierarchy,
  proteins, complexes, reactions, pathways, annotation/participation
  files, and a STRING-style interaction TSV with 0-999 scores;
- ``trials/``: trial records (nct_id, phase, title, status, sponsor)
  plus per-trial condition and intervention files.

Each set ships a mapping.yaml for the loaders. ``manifest.json`` records
expected label/edge-type counts and the planted cross-corpus bridges: a
known subset of gene names appears both as drug-gene targets and as
protein names, and a known subset of drug names appears as trial
intervention names. The manifest also carries the three federation
queries with their expected result rows, enumerated directly from the
emitted file contents. Output is byte-deterministic per (seed, scale).
"""

from __future__ import annotations

import csv
import json
import os
import random
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from ..errors import KgError

DIABETES_INDICATION = "Type 2 Diabetes Mellitus"

SCALES: Dict[str, Dict[str, int]] = {
    "small": dict(
        drugs=300, genes=80, side_effects=60, indications=40,
        dg_rows=600, se_rows=900, ind_rows=200,
        go_terms=60, proteins=120, complexes=40, reactions=30, pathways=25,
        annotation_rows=300, interaction_rows=250, interaction_low_rows=100,
        participation_rows=260, catalysis_rows=60, component_rows=80,
        go_is_a=60, go_part_of=20, go_regulates=12, pathway_children=15,
        trials=150, conditions=40, interventions=70, sponsors=15,
        studies_rows=220, tests_rows=200,
        bridge_genes=40, bridge_drugs=15, diabetes_drugs=5,
    ),
    # The drug corpus mirrors the published Drug Interactions KG exactly:
    # 19,842 / 4,182 / 5,858 / 2,844 nodes and 38,033 / 139,193 / 14,744
    # edges (32,726 nodes, 191,970 edges). The three corpora together
    # total 150,000 nodes.
    "medium": dict(
        drugs=19842, genes=4182, side_effects=5858, indications=2844,
        dg_rows=38033, se_rows=139193, ind_rows=14744,
        go_terms=33000, proteins=24000, complexes=10000, reactions=6274, pathways=2000,
        annotation_rows=100000, interaction_rows=90000, interaction_low_rows=38571,
        participation_rows=60000, catalysis_rows=12000, component_rows=15000,
        go_is_a=36000, go_part_of=3000, go_regulates=1500, pathway_children=1800,
        trials=30000, conditions=3000, interventions=8200, sponsors=800,
        studies_rows=45000, tests_rows=35000,
        bridge_genes=400, bridge_drugs=150, diabetes_drugs=25,
    ),
}

CURATED_DRUGS = [
    "Metformin", "Warfarin", "Aspirin", "Atorvastatin", "Lisinopril",
    "Omeprazole", "Gliclazide", "Sitagliptin", "Ibuprofen", "Amoxicillin",
    "Clopidogrel", "Simvastatin", "Levothyroxine", "Amlodipine", "Losartan",
]
CURATED_GENES = [
    "HNF1B", "SLC22A1", "PRKAB1", "SERPINE1", "PTGS1", "VKORC1", "TP53",
    "EGFR", "BRCA1", "GCK", "ABCB1", "CYP2C9", "CYP3A4", "KCNJ11", "PPARG",
    "DPP4", "HMGCR", "ACE", "AGTR1", "ADRB1", "INSR", "IRS1", "AKT1", "MTOR",
]
CURATED_PATHWAYS = [
    "Developmental Biology", "Circadian Clock", "Dissolution of Fibrin Clot",
    "Signal Transduction", "Hemostasis", "Metabolism of Lipids",
    "Gene Expression", "Cell Cycle", "Immune System", "Glucose Metabolism",
]
CURATED_CONDITIONS = [
    "Breast Cancer", "Metastatic Breast Cancer", "Breast Neoplasm",
    "Triple Negative Breast Cancer", DIABETES_INDICATION, "Hypertension",
    "Atrial Fibrillation", "Deep Vein Thrombosis", "Coronary Artery Disease",
    "Chronic Kidney Disease",
]
CURATED_INDICATIONS = [
    DIABETES_INDICATION, "Hypertension", "Hyperlipidemia",
    "Atrial Fibrillation", "Venous Thromboembolism", "Gastroesophageal Reflux",
    "Rheumatoid Arthritis", "Hypothyroidism",
]
CURATED_SIDE_EFFECTS = [
    "Nausea", "Headache", "Dizziness", "Fatigue", "Rash", "Diarrhoea",
    "Vomiting", "Pruritus", "Insomnia", "Arthralgia",
]
NONDRUG_INTERVENTIONS = [
    "Placebo", "Standard of Care", "Lifestyle Counseling", "Physical Therapy",
    "Cognitive Behavioral Therapy", "Dietary Supplement", "Exercise Program",
]
DRUG_STARTS = [
    "Al", "Bec", "Cor", "Dal", "Eri", "Fen", "Gla", "Hex", "Ina", "Jas",
    "Kel", "Lor", "Mav", "Nor", "Oxi", "Pra", "Quin", "Rov", "Sel", "Tri",
    "Ulo", "Vex", "Wil", "Xan", "Yel", "Zol", "Bro", "Cla", "Dro", "Fla",
    "Gre", "Hu", "Ive", "Jo", "Kra", "Lu", "Mo", "Ne", "Ora", "Pe",
]
DRUG_MIDS = [
    "va", "mi", "lo", "ra", "ti", "ne", "do", "sa", "pe", "ku", "zo", "bi",
    "fa", "ga", "ha", "ja", "ka", "la", "ma", "na", "qui", "re", "si", "ta", "vi",
]
DRUG_ENDS = [
    "statin", "mab", "cillin", "prazole", "formin", "arin", "olol", "pine",
    "sartan", "micin", "zide", "tide", "caine", "dronate", "parin", "zumab",
    "tinib", "gliptin", "oxacin", "azole", "idone", "afil", "erol", "amine",
    "azepam", "profen", "coxib", "mycin", "bital", "codone",
]
SYNONYM_SUFFIXES = [
    "HCl", "Sodium", "Citrate", "ER", "XR", "Maleate", "Tartrate",
    "Succinate", "Acetate", "Mesylate",
]
TERM_ADJECTIVES = [
    "positive regulation of", "negative regulation of", "regulation of",
    "activation of", "assembly of", "transport of", "binding of",
    "catabolism of", "biosynthesis of", "phosphorylation of",
]
TERM_NOUNS = [
    "glucose import", "lipid storage", "apoptotic signaling", "DNA repair",
    "membrane fusion", "protein folding", "ion transport", "cell adhesion",
    "autophagy", "chromatin remodeling", "receptor recycling",
    "mitotic spindle", "ribosome assembly", "vesicle docking",
]
CONDITION_ROOTS = [
    "Anemia", "Dermatitis", "Neuropathy", "Carcinoma", "Fibrosis",
    "Arthritis", "Colitis", "Nephropathy", "Retinopathy", "Myopathy",
    "Sclerosis", "Stenosis", "Melanoma", "Lymphoma", "Asthma",
]
CONDITION_MODS = [
    "Chronic", "Acute", "Recurrent", "Idiopathic", "Congenital", "Advanced",
    "Refractory", "Early Stage", "Late Stage", "Secondary", "Primary",
    "Pediatric", "Adult", "Severe", "Mild",
]
SPONSOR_ROOTS = [
    "Helix", "Nova", "Cascade", "Summit", "Beacon", "Aurora", "Vertex",
    "Quantum", "Atlas", "Meridian", "Polaris", "Zenith",
]
SPONSOR_KINDS = ["Therapeutics", "Biosciences", "Pharma", "Medical Center", "University Hospital", "Research Institute"]
INTERACTION_TYPES = ["inhibitor", "activator", "agonist", "antagonist", "substrate", "modulator"]
PHASES = ["PHASE1", "PHASE2", "PHASE3", "PHASE4", "NA"]
STATUSES = ["RECRUITING", "COMPLETED", "ACTIVE_NOT_RECRUITING", "TERMINATED"]
EVIDENCE_CODES = ["EXP", "IDA", "IEA", "IMP", "TAS"]
GO_NAMESPACES = ["biological_process", "molecular_function", "cellular_component"]


@dataclass(slots=True)
class CorpusManifest:
    seed: int
    scale: str
    corpora: Dict[str, Dict[str, Any]]
    totals: Dict[str, int]
    bridges: Dict[str, List[str]]
    federation_queries: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "scale": self.scale,
            "corpora": self.corpora,
            "totals": self.totals,
            "bridges": self.bridges,
            "federation_queries": self.federation_queries,
        }


def load_manifest(path: str) -> CorpusManifest:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return CorpusManifest(**doc)


# ---------------------------------------------------------------------------
# Name pools
# ---------------------------------------------------------------------------

def _unique_names(rng: random.Random, count: int, make, taken: Optional[set] = None) -> List[str]:
    seen = set(taken or ())
    out: List[str] = []
    while len(out) < count:
        name = make(rng)
        if name not in seen:
            seen.add(name)
            out.append(name)
    return out


def _drug_names(rng: random.Random, count: int) -> List[str]:
    combos = [
        s + m + e for s in DRUG_STARTS for m in DRUG_MIDS for e in DRUG_ENDS
    ]
    rng.shuffle(combos)
    names = list(CURATED_DRUGS)
    for candidate in combos:
        if len(names) >= count:
            break
        names.append(candidate)
    if len(names) < count:
        raise KgError(f"drug name space exhausted at {len(names)}")
    return names[:count]


def _gene_symbol(rng: random.Random) -> str:
    letters = "".join(rng.choice("ABCDEFGHIKLMNPRSTUVWXYZ") for _ in range(3))
    return f"{letters}{rng.randint(1, 99)}"


def _gene_names(rng: random.Random, count: int) -> List[str]:
    names = list(CURATED_GENES[: min(len(CURATED_GENES), count)])
    names.extend(_unique_names(rng, count - len(names), _gene_symbol, set(names)))
    return names


def _mk_condition(rng: random.Random) -> str:
    return f"{rng.choice(CONDITION_MODS)} {rng.choice(CONDITION_ROOTS)} Type {rng.randint(1, 40)}"


def _mk_term(rng: random.Random) -> str:
    return f"{rng.choice(TERM_ADJECTIVES)} {rng.choice(TERM_NOUNS)} {rng.randint(1, 999)}"


def _mk_pathway(rng: random.Random) -> str:
    return f"{rng.choice(TERM_NOUNS).title()} Pathway {rng.randint(1, 999)}"


def _mk_sponsor(rng: random.Random) -> str:
    return f"{rng.choice(SPONSOR_ROOTS)} {rng.choice(SPONSOR_KINDS)} {rng.randint(1, 99)}"


def _mk_side_effect(rng: random.Random) -> str:
    return f"{rng.choice(CONDITION_MODS)} {rng.choice(CURATED_SIDE_EFFECTS)} {rng.randint(1, 99)}"


def _mk_protocol(rng: random.Random) -> str:
    return f"Protocol Regimen {rng.randint(1, 9999)}"


# ---------------------------------------------------------------------------
# Generator
# ---------------------------------------------------------------------------

def _write_table(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]], delimiter: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_yaml(path: str, doc: Dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def gen_corpus(seed: int, scale: str, outdir: str) -> CorpusManifest:
    """Generate the three corpora plus mapping configs and manifest."""
    if scale not in SCALES:
        raise KgError(f"unknown scale {scale!r}; expected one of {sorted(SCALES)}")
    sizes = SCALES[scale]
    rng = random.Random(seed)
    os.makedirs(outdir, exist_ok=True)
    for sub in ("drugs", "pathways", "trials"):
        os.makedirs(os.path.join(outdir, sub), exist_ok=True)

    # ---- shared pools -----------------------------------------------------
    drug_names = _drug_names(rng, sizes["drugs"])
    gene_names = _gene_names(rng, sizes["genes"])
    bridge_genes = gene_names[: sizes["bridge_genes"]]
    bridge_drugs = drug_names[: sizes["bridge_drugs"]]  # includes the curated set
    diabetes_drugs = [d for d in ("Metformin", "Gliclazide", "Sitagliptin") if d in drug_names]
    extra_diabetes = [d for d in drug_names[3 : 3 + sizes["diabetes_drugs"]] if d not in diabetes_drugs]
    diabetes_drugs = (diabetes_drugs + extra_diabetes)[: sizes["diabetes_drugs"]]

    synonyms: Dict[str, List[str]] = {}
    for name in drug_names:
        extra = rng.sample(SYNONYM_SUFFIXES, rng.randint(1, 3))
        synonyms[name] = [name] + [f"{name} {suffix}" for suffix in extra]

    # ---- drugs corpus -----------------------------------------------------
    drug_rows = [
        (f"DB{i:05d}", name, "|".join(synonyms[name]))
        for i, name in enumerate(drug_names, start=1)
    ]

    dg_rows: List[Tuple[str, str, str]] = []
    planted_targets = {
        "Metformin": ["HNF1B", "SLC22A1", "PRKAB1", "GCK"],
        "Warfarin": ["VKORC1", "PTGS1", "CYP2C9"],
        "Aspirin": ["PTGS1", "SERPINE1"],
    }
    for drug, genes in planted_targets.items():
        for gene in genes:
            if drug in drug_names and gene in gene_names:
                dg_rows.append((drug, gene, rng.choice(INTERACTION_TYPES)))
    for drug in diabetes_drugs:
        for gene in rng.sample(bridge_genes, min(3, len(bridge_genes))):
            dg_rows.append((drug, gene, rng.choice(INTERACTION_TYPES)))
    planted_pairs = {(d, g) for d, g, _ in dg_rows}
    for gene in gene_names:  # every gene appears at least once
        drug = rng.choice(drug_names)
        if (drug, gene) not in planted_pairs:
            dg_rows.append((drug, gene, rng.choice(INTERACTION_TYPES)))
    seen_pairs = {(d, g) for d, g, _ in dg_rows}
    while len(dg_rows) < sizes["dg_rows"]:
        drug = rng.choice(drug_names)
        gene = rng.choice(gene_names)
        if (drug, gene) in seen_pairs:
            continue
        seen_pairs.add((drug, gene))
        dg_rows.append((drug, gene, rng.choice(INTERACTION_TYPES)))
    if len(dg_rows) > sizes["dg_rows"]:
        raise KgError("planted drug-gene rows exceed the configured row count")
    rng.shuffle(dg_rows)

    se_names = list(CURATED_SIDE_EFFECTS[: min(len(CURATED_SIDE_EFFECTS), sizes["side_effects"])])
    se_names.extend(
        _unique_names(rng, sizes["side_effects"] - len(se_names), _mk_side_effect, set(se_names))
    )
    se_ids = [f"C{i:07d}" for i in range(1, sizes["side_effects"] + 1)]
    se_rows: List[Tuple[str, str, str]] = []
    seen_se = set()
    for idx, mid in enumerate(se_ids):  # every side effect appears at least once
        drug = rng.choice(drug_names)
        se_rows.append((rng.choice(synonyms[drug]), mid, se_names[idx]))
        seen_se.add((drug, mid))
    while len(se_rows) < sizes["se_rows"]:
        drug = rng.choice(drug_names)
        idx = rng.randrange(sizes["side_effects"])
        if (drug, se_ids[idx]) in seen_se:
            continue
        seen_se.add((drug, se_ids[idx]))
        se_rows.append((rng.choice(synonyms[drug]), se_ids[idx], se_names[idx]))
    rng.shuffle(se_rows)

    ind_names = list(CURATED_INDICATIONS[: min(len(CURATED_INDICATIONS), sizes["indications"])])
    ind_names.extend(
        _unique_names(rng, sizes["indications"] - len(ind_names), _mk_condition, set(ind_names))
    )
    ind_ids = [f"I{i:07d}" for i in range(1, sizes["indications"] + 1)]
    diabetes_id = ind_ids[ind_names.index(DIABETES_INDICATION)]
    ind_rows: List[Tuple[str, str, str]] = []
    seen_ind = set()
    for drug in diabetes_drugs:  # planted: the three-KG chain starts here
        ind_rows.append((rng.choice(synonyms[drug]), diabetes_id, DIABETES_INDICATION))
        seen_ind.add((drug, diabetes_id))
    for idx, mid in enumerate(ind_ids):
        if mid == diabetes_id:
            continue
        drug = rng.choice(drug_names)
        ind_rows.append((rng.choice(synonyms[drug]), mid, ind_names[idx]))
        seen_ind.add((drug, mid))
    while len(ind_rows) < sizes["ind_rows"]:
        drug = rng.choice(drug_names)
        idx = rng.randrange(sizes["indications"])
        if (drug, ind_ids[idx]) in seen_ind:
            continue
        seen_ind.add((drug, ind_ids[idx]))
        ind_rows.append((rng.choice(synonyms[drug]), ind_ids[idx], ind_names[idx]))
    rng.shuffle(ind_rows)

    drugs_dir = os.path.join(outdir, "drugs")
    _write_table(os.path.join(drugs_dir, "drugs.csv"), ("drugbank_id", "name", "synonyms"), drug_rows, ",")
    _write_table(os.path.join(drugs_dir, "drug_gene.tsv"), ("drug_name", "gene_name", "interaction_type"), dg_rows, "\t")
    _write_table(os.path.join(drugs_dir, "side_effects.tsv"), ("compound_synonym", "meddra_id", "effect_name"), se_rows, "\t")
    _write_table(os.path.join(drugs_dir, "indications.tsv"), ("compound_synonym", "meddra_id", "indication_name"), ind_rows, "\t")
    _write_yaml(os.path.join(drugs_dir, "mapping.yaml"), _drugs_mapping())

    # ---- pathways corpus ---------------------------------------------------
    protein_names = list(bridge_genes)
    gene_set = set(gene_names)
    protein_names.extend(
        _unique_names(
            rng,
            sizes["proteins"] - len(protein_names),
            _gene_symbol,
            gene_set | set(protein_names),
        )
    )
    uniprot_ids = [f"P{i:05d}" for i in range(1, sizes["proteins"] + 1)]
    uniprot_of = dict(zip(protein_names, uniprot_ids))
    protein_rows = list(zip(uniprot_ids, protein_names))

    go_ids = [f"GO:{i:07d}" for i in range(1000, 1000 + sizes["go_terms"])]
    go_rows = [
        (gid, term, rng.choice(GO_NAMESPACES))
        for gid, term in zip(go_ids, _unique_names(rng, sizes["go_terms"], _mk_term))
    ]
    complex_ids = [f"R-HSA-C{i:06d}" for i in range(1, sizes["complexes"] + 1)]
    complex_rows = [(cid, f"Complex {i}") for i, cid in enumerate(complex_ids, start=1)]
    reaction_ids = [f"R-HSA-R{i:06d}" for i in range(1, sizes["reactions"] + 1)]
    reaction_rows = [(rid, f"Reaction {i}") for i, rid in enumerate(reaction_ids, start=1)]
    pathway_ids = [f"R-HSA-P{i:06d}" for i in range(1, sizes["pathways"] + 1)]
    pathway_names = list(CURATED_PATHWAYS[: min(len(CURATED_PATHWAYS), sizes["pathways"])])
    pathway_names.extend(
        _unique_names(rng, sizes["pathways"] - len(pathway_names), _mk_pathway, set(pathway_names))
    )
    pathway_rows = list(zip(pathway_ids, pathway_names))
    pathway_id_of = dict(zip(pathway_names, pathway_ids))
    pathway_name_of = dict(zip(pathway_ids, pathway_names))

    participation_rows: List[Tuple[str, str, str]] = []
    seen_part = set()
    planted_participation = {
        "HNF1B": ["Developmental Biology", "Circadian Clock"],
        "SLC22A1": ["Glucose Metabolism"],
        "PRKAB1": ["Glucose Metabolism", "Signal Transduction"],
        "GCK": ["Glucose Metabolism"],
        "SERPINE1": ["Circadian Clock", "Dissolution of Fibrin Clot"],
        "VKORC1": ["Hemostasis"],
        "PTGS1": ["Hemostasis", "Immune System"],
        "CYP2C9": ["Metabolism of Lipids"],
        "TP53": ["Cell Cycle", "Gene Expression"],
    }
    for pname, pws in planted_participation.items():
        uid = uniprot_of.get(pname)
        if uid is None:
            continue
        for pw in pws:
            pid = pathway_id_of.get(pw)
            if pid is not None and (uid, pid) not in seen_part:
                seen_part.add((uid, pid))
                participation_rows.append((uid, pid, rng.choice(EVIDENCE_CODES)))
    for pname in bridge_genes:  # every bridge protein reaches some pathway
        uid = uniprot_of[pname]
        pid = rng.choice(pathway_ids)
        if (uid, pid) not in seen_part:
            seen_part.add((uid, pid))
            participation_rows.append((uid, pid, rng.choice(EVIDENCE_CODES)))
    while len(participation_rows) < sizes["participation_rows"]:
        uid = rng.choice(uniprot_ids)
        pid = rng.choice(pathway_ids)
        if (uid, pid) in seen_part:
            continue
        seen_part.add((uid, pid))
        participation_rows.append((uid, pid, rng.choice(EVIDENCE_CODES)))
    rng.shuffle(participation_rows)

    annotation_rows = []
    seen_ann = set()
    while len(annotation_rows) < sizes["annotation_rows"]:
        uid = rng.choice(uniprot_ids)
        gid = rng.choice(go_ids)
        if (uid, gid) in seen_ann:
            continue
        seen_ann.add((uid, gid))
        annotation_rows.append((uid, gid, rng.choice(EVIDENCE_CODES)))
    rng.shuffle(annotation_rows)

    interaction_rows = []
    seen_int = set()
    target_high = sizes["interaction_rows"]
    target_low = sizes["interaction_low_rows"]
    highs = 0
    tp53 = uniprot_of.get("TP53")
    if tp53 is not None:  # planted PPI neighborhood for traversal queries
        for other in rng.sample(uniprot_ids, min(6, len(uniprot_ids))):
            if other != tp53 and (tp53, other) not in seen_int:
                seen_int.add((tp53, other))
                interaction_rows.append((tp53, other, rng.randint(700, 999)))
                highs += 1
    while highs < target_high:
        a, b = rng.choice(uniprot_ids), rng.choice(uniprot_ids)
        if a == b or (a, b) in seen_int:
            continue
        seen_int.add((a, b))
        interaction_rows.append((a, b, rng.randint(700, 999)))
        highs += 1
    lows = 0
    while lows < target_low:
        a, b = rng.choice(uniprot_ids), rng.choice(uniprot_ids)
        if a == b or (a, b) in seen_int:
            continue
        seen_int.add((a, b))
        interaction_rows.append((a, b, rng.randint(0, 699)))
        lows += 1
    rng.shuffle(interaction_rows)

    component_rows = []
    seen_comp = set()
    while len(component_rows) < sizes["component_rows"]:
        uid, cid = rng.choice(uniprot_ids), rng.choice(complex_ids)
        if (uid, cid) in seen_comp:
            continue
        seen_comp.add((uid, cid))
        component_rows.append((uid, cid))
    catalysis_rows = []
    seen_cat = set()
    while len(catalysis_rows) < sizes["catalysis_rows"]:
        cid, rid = rng.choice(complex_ids), rng.choice(reaction_ids)
        if (cid, rid) in seen_cat:
            continue
        seen_cat.add((cid, rid))
        catalysis_rows.append((cid, rid))

    go_rel_rows = []
    seen_go_rel = set()
    for relation, target in (
        ("is_a", sizes["go_is_a"]),
        ("part_of", sizes["go_part_of"]),
        ("regulates", sizes["go_regulates"]),
    ):
        added = 0
        while added < target:
            child, parent = rng.choice(go_ids), rng.choice(go_ids)
            if child == parent or (child, parent, relation) in seen_go_rel:
                continue
            seen_go_rel.add((child, parent, relation))
            go_rel_rows.append((child, parent, relation))
            added += 1
    rng.shuffle(go_rel_rows)

    pathway_child_rows = []
    seen_pc = set()
    while len(pathway_child_rows) < sizes["pathway_children"]:
        child, parent = rng.choice(pathway_ids), rng.choice(pathway_ids)
        if child == parent or (child, parent) in seen_pc:
            continue
        seen_pc.add((child, parent))
        pathway_child_rows.append((child, parent))

    pathways_dir = os.path.join(outdir, "pathways")
    _write_table(os.path.join(pathways_dir, "go_terms.tsv"), ("go_id", "term", "namespace"), go_rows, "\t")
    _write_table(os.path.join(pathways_dir, "proteins.tsv"), ("uniprot_id", "name"), protein_rows, "\t")
    _write_table(os.path.join(pathways_dir, "complexes.tsv"), ("reactome_id", "name"), complex_rows, "\t")
    _write_table(os.path.join(pathways_dir, "reactions.tsv"), ("reactome_id", "name"), reaction_rows, "\t")
    _write_table(os.path.join(pathways_dir, "pathways.tsv"), ("reactome_id", "name"), pathway_rows, "\t")
    _write_table(os.path.join(pathways_dir, "annotations.tsv"), ("uniprot_id", "go_id", "evidence"), annotation_rows, "\t")
    _write_table(os.path.join(pathways_dir, "interactions.tsv"), ("protein_a", "protein_b", "combined_score"), interaction_rows, "\t")
    _write_table(os.path.join(pathways_dir, "participation.tsv"), ("uniprot_id", "pathway_id", "evidence"), participation_rows, "\t")
    _write_table(os.path.join(pathways_dir, "complex_components.tsv"), ("uniprot_id", "complex_id"), component_rows, "\t")
    _write_table(os.path.join(pathways_dir, "catalysis.tsv"), ("complex_id", "reaction_id"), catalysis_rows, "\t")
    _write_table(os.path.join(pathways_dir, "go_hierarchy.tsv"), ("child_id", "parent_id", "relation"), go_rel_rows, "\t")
    _write_table(os.path.join(pathways_dir, "pathway_hierarchy.tsv"), ("child_id", "parent_id"), pathway_child_rows, "\t")
    _write_yaml(os.path.join(pathways_dir, "mapping.yaml"), _pathways_mapping())

    # ---- trials corpus ------------------------------------------------------
    sponsor_names = _unique_names(rng, sizes["sponsors"], _mk_sponsor)
    condition_names = list(CURATED_CONDITIONS[: min(len(CURATED_CONDITIONS), sizes["conditions"])])
    condition_names.extend(
        _unique_names(rng, sizes["conditions"] - len(condition_names), _mk_condition, set(condition_names))
    )
    intervention_names = list(bridge_drugs) + list(
        NONDRUG_INTERVENTIONS[: min(len(NONDRUG_INTERVENTIONS), max(0, sizes["interventions"] - len(bridge_drugs)))]
    )
    drug_set = set(drug_names)
    intervention_names.extend(
        _unique_names(
            rng,
            sizes["interventions"] - len(intervention_names),
            _mk_protocol,
            drug_set | set(intervention_names),
        )
    )

    nct_ids = [f"NCT{i:08d}" for i in range(1, sizes["trials"] + 1)]
    trial_rows = []
    for i, nct in enumerate(nct_ids):
        phase = "PHASE2" if i == 0 else rng.choice(PHASES)  # planted PHASE2 anchor
        trial_rows.append(
            (
                nct,
                f"Study of {rng.choice(intervention_names)} in {rng.choice(condition_names)}",
                phase,
                rng.choice(STATUSES),
                rng.randint(1999, 2025),
                sponsor_names[i % len(sponsor_names)],
            )
        )

    studies_rows = []
    seen_studies = set()
    for idx, cond in enumerate(condition_names):  # every condition studied
        nct = rng.choice(nct_ids)
        studies_rows.append((nct, cond))
        seen_studies.add((nct, cond))
    while len(studies_rows) < sizes["studies_rows"]:
        nct = rng.choice(nct_ids)
        cond = rng.choice(condition_names)
        if (nct, cond) in seen_studies:
            continue
        seen_studies.add((nct, cond))
        studies_rows.append((nct, cond))
    rng.shuffle(studies_rows)

    tests_rows = []
    seen_tests = set()
    tests_rows.append((nct_ids[0], "Warfarin", "DRUG"))  # planted PHASE2 Warfarin trial
    seen_tests.add((nct_ids[0], "Warfarin"))
    for name in intervention_names:  # every intervention appears
        nct = rng.choice(nct_ids)
        if (nct, name) not in seen_tests:
            seen_tests.add((nct, name))
            tests_rows.append((nct, name, "DRUG" if name in drug_set else "OTHER"))
    while len(tests_rows) < sizes["tests_rows"]:
        nct = rng.choice(nct_ids)
        name = rng.choice(intervention_names)
        if (nct, name) in seen_tests:
            continue
        seen_tests.add((nct, name))
        tests_rows.append((nct, name, "DRUG" if name in drug_set else "OTHER"))
    rng.shuffle(tests_rows)

    trials_dir = os.path.join(outdir, "trials")
    _write_table(
        os.path.join(trials_dir, "trials.tsv"),
        ("nct_id", "title", "phase", "status", "start_year", "sponsor_name"),
        trial_rows,
        "\t",
    )
    _write_table(os.path.join(trials_dir, "trial_conditions.tsv"), ("nct_id", "condition_name"), studies_rows, "\t")
    _write_table(
        os.path.join(trials_dir, "trial_interventions.tsv"),
        ("nct_id", "intervention_name", "intervention_type"),
        tests_rows,
        "\t",
    )
    _write_yaml(os.path.join(trials_dir, "mapping.yaml"), _trials_mapping())

    # ---- ground truth -------------------------------------------------------
    federation_queries = _federation_ground_truth(
        dg_rows, ind_rows, tests_rows, trial_rows, synonyms,
        uniprot_of, participation_rows, pathway_name_of, diabetes_id,
    )

    manifest = CorpusManifest(
        seed=seed,
        scale=scale,
        corpora={
            "drugs": {
                "dir": "drugs",
                "mapping": "drugs/mapping.yaml",
                "labels": {
                    "Drug": sizes["drugs"],
                    "Gene": sizes["genes"],
                    "SideEffect": sizes["side_effects"],
                    "Indication": sizes["indications"],
                },
                "edge_types": {
                    "INTERACTS_WITH_GENE": sizes["dg_rows"],
                    "HAS_SIDE_EFFECT": sizes["se_rows"],
                    "HAS_INDICATION": sizes["ind_rows"],
                },
            },
            "pathways": {
                "dir": "pathways",
                "mapping": "pathways/mapping.yaml",
                "labels": {
                    "GOTerm": sizes["go_terms"],
                    "Protein": sizes["proteins"],
                    "Complex": sizes["complexes"],
                    "Reaction": sizes["reactions"],
                    "Pathway": sizes["pathways"],
                },
                "edge_types": {
                    "ANNOTATED_WITH": sizes["annotation_rows"],
                    "INTERACTS_WITH": sizes["interaction_rows"],
                    "PARTICIPATES_IN": sizes["participation_rows"],
                    "CATALYZES": sizes["catalysis_rows"],
                    "IS_A": sizes["go_is_a"],
                    "COMPONENT_OF": sizes["component_rows"],
                    "PART_OF": sizes["go_part_of"],
                    "REGULATES": sizes["go_regulates"],
                    "CHILD_OF": sizes["pathway_children"],
                },
            },
            "trials": {
                "dir": "trials",
                "mapping": "trials/mapping.yaml",
                "labels": {
                    "ClinicalTrial": sizes["trials"],
                    "Condition": sizes["conditions"],
                    "Intervention": sizes["interventions"],
                    "Sponsor": sizes["sponsors"],
                },
                "edge_types": {
                    "STUDIES": sizes["studies_rows"],
                    "TESTS": sizes["tests_rows"],
                    "SPONSORED_BY": sizes["trials"],
                },
            },
        },
        totals={
            "nodes": sizes["drugs"] + sizes["genes"] + sizes["side_effects"] + sizes["indications"]
            + sizes["go_terms"] + sizes["proteins"] + sizes["complexes"] + sizes["reactions"] + sizes["pathways"]
            + sizes["trials"] + sizes["conditions"] + sizes["interventions"] + sizes["sponsors"],
            "edges": sizes["dg_rows"] + sizes["se_rows"] + sizes["ind_rows"]
            + sizes["annotation_rows"] + sizes["interaction_rows"] + sizes["participation_rows"]
            + sizes["catalysis_rows"] + sizes["go_is_a"] + sizes["component_rows"]
            + sizes["go_part_of"] + sizes["go_regulates"] + sizes["pathway_children"]
            + sizes["studies_rows"] + sizes["tests_rows"] + sizes["trials"],
        },
        bridges={"gene_names": bridge_genes, "drug_names": bridge_drugs},
        federation_queries=federation_queries,
    )
    with open(os.path.join(outdir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=1)
        fh.write("\n")
    _self_check(outdir, manifest)
    return manifest


def _federation_ground_truth(
    dg_rows, ind_rows, tests_rows, trial_rows, synonyms,
    uniprot_of, participation_rows, pathway_name_of, diabetes_id,
) -> List[Dict[str, Any]]:
    """Expected rows for the three cross-corpus queries, enumerated
    directly from the emitted rows (bag semantics)."""
    drug_of_synonym = {}
    for name, syns in synonyms.items():
        for syn in syns:
            drug_of_synonym[syn] = name
    pathways_of_protein: Dict[str, List[str]] = {}
    for uid, pid, _ in participation_rows:
        pathways_of_protein.setdefault(uid, []).append(pathway_name_of[pid])

    def gene_pathway_rows(drug: str) -> List[List[str]]:
        rows = []
        for d, gene, _ in dg_rows:
            if d != drug:
                continue
            uid = uniprot_of.get(gene)
            if uid is None:
                continue
            for pw in pathways_of_protein.get(uid, ()):
                rows.append([gene, pw])
        return rows

    metformin_rows = gene_pathway_rows("Metformin")

    phase_of = {row[0]: row[2] for row in trial_rows}
    warfarin_rows = [
        [nct, phase_of[nct]]
        for nct, name, _ in tests_rows
        if name == "Warfarin"
    ]

    chain_rows = []
    for syn, mid, _ in ind_rows:
        if mid != diabetes_id:
            continue
        drug = drug_of_synonym[syn]
        for d, gene, _ in dg_rows:
            if d != drug:
                continue
            uid = uniprot_of.get(gene)
            if uid is None:
                continue
            for pw in pathways_of_protein.get(uid, ()):
                chain_rows.append([drug, gene, pw])

    return [
        {
            "name": "drug_gene_pathways",
            "query": (
                "MATCH (d:Drug {name: 'Metformin'})-[:INTERACTS_WITH_GENE]->(g:Gene) "
                "MATCH (p:Protein)-[:PARTICIPATES_IN]->(pw:Pathway) "
                "WHERE p.name = g.gene_name "
                "RETURN g.gene_name, pw.name"
            ),
            "params": {},
            "columns": ["g.gene_name", "pw.name"],
            "rows": sorted(metformin_rows),
        },
        {
            "name": "drug_trials",
            "query": (
                "MATCH (d:Drug {name: 'Warfarin'}) "
                "MATCH (i:Intervention)<-[:TESTS]-(ct:ClinicalTrial) "
                "WHERE i.name = d.name "
                "RETURN ct.nct_id, ct.phase"
            ),
            "params": {},
            "columns": ["ct.nct_id", "ct.phase"],
            "rows": sorted(warfarin_rows),
        },
        {
            "name": "indication_chain",
            "query": (
                "MATCH (d:Drug)-[:HAS_INDICATION]->(i:Indication {name: '%s'}) "
                "MATCH (d)-[:INTERACTS_WITH_GENE]->(g:Gene) "
                "MATCH (p:Protein)-[:PARTICIPATES_IN]->(pw:Pathway) "
                "WHERE p.name = g.gene_name "
                "RETURN d.name, g.gene_name, pw.name" % DIABETES_INDICATION
            ),
            "params": {},
            "columns": ["d.name", "g.gene_name", "pw.name"],
            "rows": sorted(chain_rows),
        },
    ]


# ---------------------------------------------------------------------------
# Mapping configs
# ---------------------------------------------------------------------------

def _drugs_mapping() -> Dict[str, Any]:
    return {
        "nodes": [
            {
                "file": "drugs.csv",
                "delimiter": ",",
                "label": "Drug",
                "key": {"column": "drugbank_id", "property": "drugbank_id"},
                "properties": [
                    {"column": "name", "property": "name", "type": "string"},
                    {"column": "synonyms", "property": "synonyms", "type": "string_list", "separator": "|"},
                ],
                "index": ["drugbank_id", "name", "synonyms"],
            },
            {
                "file": "drug_gene.tsv",
                "delimiter": "\t",
                "label": "Gene",
                "key": {"column": "gene_name", "property": "gene_name"},
                "properties": [],
                "index": ["gene_name"],
            },
            {
                "file": "side_effects.tsv",
                "delimiter": "\t",
                "label": "SideEffect",
                "key": {"column": "meddra_id", "property": "meddra_id"},
                "properties": [{"column": "effect_name", "property": "name", "type": "string"}],
                "index": ["meddra_id", "name"],
            },
            {
                "file": "indications.tsv",
                "delimiter": "\t",
                "label": "Indication",
                "key": {"column": "meddra_id", "property": "meddra_id"},
                "properties": [{"column": "indication_name", "property": "name", "type": "string"}],
                "index": ["meddra_id", "name"],
            },
        ],
        "edges": [
            {
                "file": "drug_gene.tsv",
                "delimiter": "\t",
                "type": "INTERACTS_WITH_GENE",
                "src": {"label": "Drug", "property": "name", "column": "drug_name"},
                "dst": {"label": "Gene", "property": "gene_name", "column": "gene_name"},
                "properties": [{"column": "interaction_type", "property": "type", "type": "string"}],
                "on_missing": "skip",
            },
            {
                "file": "side_effects.tsv",
                "delimiter": "\t",
                "type": "HAS_SIDE_EFFECT",
                "src": {"label": "Drug", "property": "synonyms", "column": "compound_synonym"},
                "dst": {"label": "SideEffect", "property": "meddra_id", "column": "meddra_id"},
                "properties": [],
                "on_missing": "skip",
            },
            {
                "file": "indications.tsv",
                "delimiter": "\t",
                "type": "HAS_INDICATION",
                "src": {"label": "Drug", "property": "synonyms", "column": "compound_synonym"},
                "dst": {"label": "Indication", "property": "meddra_id", "column": "meddra_id"},
                "properties": [],
                "on_missing": "skip",
            },
        ],
    }


def _pathways_mapping() -> Dict[str, Any]:
    tsv = {"delimiter": "\t"}
    return {
        "nodes": [
            {
                "file": "go_terms.tsv", **tsv, "label": "GOTerm",
                "key": {"column": "go_id", "property": "go_id"},
                "properties": [
                    {"column": "term", "property": "term", "type": "string"},
                    {"column": "namespace", "property": "namespace", "type": "string"},
                ],
                "index": ["go_id"],
            },
            {
                "file": "proteins.tsv", **tsv, "label": "Protein",
                "key": {"column": "uniprot_id", "property": "uniprot_id"},
                "properties": [{"column": "name", "property": "name", "type": "string"}],
                "index": ["uniprot_id", "name"],
            },
            {
                # second source of proteins: everything here deduplicates
                # against proteins.tsv through the registry
                "file": "complex_components.tsv", **tsv, "label": "Protein",
                "key": {"column": "uniprot_id", "property": "uniprot_id"},
                "properties": [],
                "index": ["uniprot_id"],
            },
            {
                "file": "complexes.tsv", **tsv, "label": "Complex",
                "key": {"column": "reactome_id", "property": "reactome_id"},
                "properties": [{"column": "name", "property": "name", "type": "string"}],
                "index": ["reactome_id"],
            },
            {
                "file": "reactions.tsv", **tsv, "label": "Reaction",
                "key": {"column": "reactome_id", "property": "reactome_id"},
                "properties": [{"column": "name", "property": "name", "type": "string"}],
                "index": ["reactome_id"],
            },
            {
                "file": "pathways.tsv", **tsv, "label": "Pathway",
                "key": {"column": "reactome_id", "property": "reactome_id"},
                "properties": [{"column": "name", "property": "name", "type": "string"}],
                "index": ["reactome_id", "name"],
            },
        ],
        "edges": [
            {
                "file": "annotations.tsv", **tsv, "type": "ANNOTATED_WITH",
                "src": {"label": "Protein", "property": "uniprot_id", "column": "uniprot_id"},
                "dst": {"label": "GOTerm", "property": "go_id", "column": "go_id"},
                "properties": [{"column": "evidence", "property": "evidence", "type": "string"}],
                "on_missing": "skip",
            },
            {
                # STRING-style: only high-confidence rows become edges
                "file": "interactions.tsv", **tsv, "type": "INTERACTS_WITH",
                "src": {"label": "Protein", "property": "uniprot_id", "column": "protein_a"},
                "dst": {"label": "Protein", "property": "uniprot_id", "column": "protein_b"},
                "properties": [{"column": "combined_score", "property": "score", "type": "int"}],
                "on_missing": "skip",
                "filter": {"column": "combined_score", "op": ">=", "value": 700},
            },
            {
                "file": "participation.tsv", **tsv, "type": "PARTICIPATES_IN",
                "src": {"label": "Protein", "property": "uniprot_id", "column": "uniprot_id"},
                "dst": {"label": "Pathway", "property": "reactome_id", "column": "pathway_id"},
                "properties": [{"column": "evidence", "property": "evidence", "type": "string"}],
                "on_missing": "skip",
            },
            {
                "file": "complex_components.tsv", **tsv, "type": "COMPONENT_OF",
                "src": {"label": "Protein", "property": "uniprot_id", "column": "uniprot_id"},
                "dst": {"label": "Complex", "property": "reactome_id", "column": "complex_id"},
                "properties": [],
                "on_missing": "skip",
            },
            {
                "file": "catalysis.tsv", **tsv, "type": "CATALYZES",
                "src": {"label": "Complex", "property": "reactome_id", "column": "complex_id"},
                "dst": {"label": "Reaction", "property": "reactome_id", "column": "reaction_id"},
                "properties": [],
                "on_missing": "skip",
            },
            {
                "file": "go_hierarchy.tsv", **tsv, "type": "IS_A",
                "src": {"label": "GOTerm", "property": "go_id", "column": "child_id"},
                "dst": {"label": "GOTerm", "property": "go_id", "column": "parent_id"},
                "properties": [],
                "on_missing": "skip",
                "filter": {"column": "relation", "op": "=", "value": "is_a"},
            },
            {
                "file": "go_hierarchy.tsv", **tsv, "type": "PART_OF",
                "src": {"label": "GOTerm", "property": "go_id", "column": "child_id"},
                "dst": {"label": "GOTerm", "property": "go_id", "column": "parent_id"},
                "properties": [],
                "on_missing": "skip",
                "filter": {"column": "relation", "op": "=", "value": "part_of"},
            },
            {
                "file": "go_hierarchy.tsv", **tsv, "type": "REGULATES",
                "src": {"label": "GOTerm", "property": "go_id", "column": "child_id"},
                "dst": {"label": "GOTerm", "property": "go_id", "column": "parent_id"},
                "properties": [],
                "on_missing": "skip",
                "filter": {"column": "relation", "op": "=", "value": "regulates"},
            },
            {
                "file": "pathway_hierarchy.tsv", **tsv, "type": "CHILD_OF",
                "src": {"label": "Pathway", "property": "reactome_id", "column": "child_id"},
                "dst": {"label": "Pathway", "property": "reactome_id", "column": "parent_id"},
                "properties": [],
                "on_missing": "skip",
            },
        ],
    }


def _trials_mapping() -> Dict[str, Any]:
    tsv = {"delimiter": "\t"}
    return {
        "nodes": [
            {
                "file": "trials.tsv", **tsv, "label": "ClinicalTrial",
                "key": {"column": "nct_id", "property": "nct_id"},
                "properties": [
                    {"column": "title", "property": "title", "type": "string"},
                    {"column": "phase", "property": "phase", "type": "string"},
                    {"column": "status", "property": "status", "type": "string"},
                    {"column": "start_year", "property": "start_year", "type": "int"},
                ],
                "index": ["nct_id"],
            },
            {
                "file": "trials.tsv", **tsv, "label": "Sponsor",
                "key": {"column": "sponsor_name", "property": "name"},
                "properties": [],
                "index": ["name"],
            },
            {
                "file": "trial_conditions.tsv", **tsv, "label": "Condition",
                "key": {"column": "condition_name", "property": "name"},
                "properties": [],
                "index": ["name"],
            },
            {
                "file": "trial_interventions.tsv", **tsv, "label": "Intervention",
                "key": {"column": "intervention_name", "property": "name"},
                "properties": [{"column": "intervention_type", "property": "type", "type": "string"}],
                "index": ["name"],
            },
        ],
        "edges": [
            {
                "file": "trial_conditions.tsv", **tsv, "type": "STUDIES",
                "src": {"label": "ClinicalTrial", "property": "nct_id", "column": "nct_id"},
                "dst": {"label": "Condition", "property": "name", "column": "condition_name"},
                "properties": [],
                "on_missing": "skip",
            },
            {
                "file": "trial_interventions.tsv", **tsv, "type": "TESTS",
                "src": {"label": "ClinicalTrial", "property": "nct_id", "column": "nct_id"},
                "dst": {"label": "Intervention", "property": "name", "column": "intervention_name"},
                "properties": [],
                "on_missing": "skip",
            },
            {
                "file": "trials.tsv", **tsv, "type": "SPONSORED_BY",
                "src": {"label": "ClinicalTrial", "property": "nct_id", "column": "nct_id"},
                "dst": {"label": "Sponsor", "property": "name", "column": "sponsor_name"},
                "properties": [],
                "on_missing": "skip",
            },
        ],
    }


# ---------------------------------------------------------------------------
# Self-check
# ---------------------------------------------------------------------------

def _count_rows(path: str, delimiter: str) -> List[List[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        next(reader)
        return list(reader)


def _self_check(outdir: str, manifest: CorpusManifest) -> None:
    """Counts in the manifest must equal counts derivable from the files."""
    checks: List[Tuple[str, int, int]] = []
    drugs = manifest.corpora["drugs"]
    d = os.path.join(outdir, "drugs")
    drug_rows = _count_rows(os.path.join(d, "drugs.csv"), ",")
    dg = _count_rows(os.path.join(d, "drug_gene.tsv"), "\t")
    se = _count_rows(os.path.join(d, "side_effects.tsv"), "\t")
    ind = _count_rows(os.path.join(d, "indications.tsv"), "\t")
    checks.append(("Drug", drugs["labels"]["Drug"], len(drug_rows)))
    checks.append(("Gene", drugs["labels"]["Gene"], len({r[1] for r in dg})))
    checks.append(("SideEffect", drugs["labels"]["SideEffect"], len({r[1] for r in se})))
    checks.append(("Indication", drugs["labels"]["Indication"], len({r[1] for r in ind})))
    checks.append(("INTERACTS_WITH_GENE", drugs["edge_types"]["INTERACTS_WITH_GENE"], len(dg)))
    checks.append(("HAS_SIDE_EFFECT", drugs["edge_types"]["HAS_SIDE_EFFECT"], len(se)))
    checks.append(("HAS_INDICATION", drugs["edge_types"]["HAS_INDICATION"], len(ind)))

    p = os.path.join(outdir, "pathways")
    pathways = manifest.corpora["pathways"]
    interactions = _count_rows(os.path.join(p, "interactions.tsv"), "\t")
    high = sum(1 for r in interactions if int(r[2]) >= 700)
    checks.append(("Protein", pathways["labels"]["Protein"], len(_count_rows(os.path.join(p, "proteins.tsv"), "\t"))))
    checks.append(("GOTerm", pathways["labels"]["GOTerm"], len(_count_rows(os.path.join(p, "go_terms.tsv"), "\t"))))
    checks.append(("INTERACTS_WITH", pathways["edge_types"]["INTERACTS_WITH"], high))
    checks.append(
        ("PARTICIPATES_IN", pathways["edge_types"]["PARTICIPATES_IN"], len(_count_rows(os.path.join(p, "participation.tsv"), "\t")))
    )

    t = os.path.join(outdir, "trials")
    trials = manifest.corpora["trials"]
    trial_rows = _count_rows(os.path.join(t, "trials.tsv"), "\t")
    tests = _count_rows(os.path.join(t, "trial_interventions.tsv"), "\t")
    studies = _count_rows(os.path.join(t, "trial_conditions.tsv"), "\t")
    checks.append(("ClinicalTrial", trials["labels"]["ClinicalTrial"], len(trial_rows)))
    checks.append(("Sponsor", trials["labels"]["Sponsor"], len({r[5] for r in trial_rows})))
    checks.append(("Intervention", trials["labels"]["Intervention"], len({r[1] for r in tests})))
    checks.append(("Condition", trials["labels"]["Condition"], len({r[1] for r in studies})))
    checks.append(("TESTS", trials["edge_types"]["TESTS"], len(tests)))
    checks.append(("STUDIES", trials["edge_types"]["STUDIES"], len(studies)))

    for name, expected, actual in checks:
        if expected != actual:
            raise KgError(
                f"corpus self-check failed for {name}: manifest {expected}, files {actual}"
            )
