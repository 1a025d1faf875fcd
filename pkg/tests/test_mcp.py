"""MCP catalog generation, JSON-RPC handling, call/query equivalence."""

import io
import json
import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kgfed.mcp.server as mcp_server_mod
from kgfed.cypher import execute, parse
from kgfed.cypher.planner import plan as build_plan
from kgfed.errors import ToolConfigError
from kgfed.mcp import McpServer, discover_tools, load_domain_config, serve_stdio
from kgfed.store import GraphSchema, EdgeTypeStats, LabelStats

CONFIG_DIR = os.path.join(os.path.dirname(mcp_server_mod.__file__), "configs")


def config(name):
    return load_domain_config(os.path.join(CONFIG_DIR, name))


@pytest.fixture(scope="module")
def drug_catalog(small_drug_tenant):
    tenant, _ = small_drug_tenant
    return discover_tools(
        tenant.schema(),
        config("drug_interactions.yaml"),
        key_overrides={"Gene": "gene_name"},
    )


@pytest.fixture(scope="module")
def fed_catalog(small_federated):
    tenant, _ = small_federated
    merged = {"tools": []}
    for name in ("pathways.yaml", "drug_interactions.yaml", "clinical_trials.yaml"):
        merged["tools"].extend(config(name)["tools"])
    return discover_tools(tenant.schema(), merged, key_overrides={"Gene": "gene_name"})


class TestCatalog:
    def test_drug_kg_tool_count_formula(self, drug_catalog):
        # 4 labels, 3 edge types, 12 domain tools -> 4*3 + 3 + 12 = 27
        assert len(drug_catalog) == 27

    def test_shipped_config_sizes(self):
        assert len(config("pathways.yaml")["tools"]) == 12
        assert len(config("drug_interactions.yaml")["tools"]) == 12
        assert len(config("clinical_trials.yaml")["tools"]) == 15

    def test_auto_tools_named_after_schema(self, drug_catalog):
        names = {t.name for t in drug_catalog.tools}
        for label in ("drug", "gene", "sideeffect", "indication"):
            assert {f"search_{label}", f"get_{label}", f"count_{label}"} <= names
        assert "find_interacts_with_gene" in names

    def test_empty_schema_empty_catalog(self):
        catalog = discover_tools(GraphSchema([], []), None)
        assert len(catalog) == 0

    def test_domain_shadows_auto(self):
        schema = GraphSchema(
            [LabelStats("Drug", 1, ["name"], ["name"])],
            [],
        )
        domain = {
            "tools": [
                {
                    "name": "search_drug",
                    "description": "custom",
                    "params": [{"name": "query", "type": "string", "required": True}],
                    "cypher": "MATCH (d:Drug) WHERE d.name CONTAINS $query RETURN d.name",
                }
            ]
        }
        catalog = discover_tools(schema, domain)
        assert len(catalog) == 3  # collision counted once
        assert catalog.get("search_drug").origin == "domain"

    def test_pathway_members_description_preserved(self, fed_catalog):
        tool = fed_catalog.get("pathway_members")
        assert tool is not None
        assert tool.description == "List proteins in a pathway (search by name)"

    def test_generated_templates_reference_only_schema(self, fed_catalog, small_federated):
        tenant, _ = small_federated
        schema = tenant.schema()
        labels = {l.name for l in schema.labels}
        etypes = {e.name for e in schema.edge_types}
        for tool in fed_catalog.tools:
            if tool.origin == "domain":
                continue
            ast = parse(tool.template)
            for path in ast.matches:
                for node in path.nodes:
                    if node.label is not None:
                        assert node.label in labels, tool.name
                for rel in path.rels:
                    assert rel.etype in etypes, tool.name

    @settings(max_examples=50, deadline=None)
    @given(
        labels=st.lists(
            st.sampled_from(["Alpha", "Beta", "Gamma", "Delta", "Node5"]),
            unique=True,
            max_size=5,
        ),
        etypes=st.lists(
            st.sampled_from(["REL_A", "REL_B", "REL_C", "LINKS"]),
            unique=True,
            max_size=4,
        ),
        n_domain=st.integers(min_value=0, max_value=4),
    )
    def test_count_formula_over_random_schemas(self, labels, etypes, n_domain):
        label_stats = [
            LabelStats(name, 3, ["name", f"{name.lower()}_id"], ["name"])
            for name in labels
        ]
        etype_stats = [
            EdgeTypeStats(name, 2, labels[0] if labels else None, labels[-1] if labels else None)
            for name in etypes
        ]
        domain = {
            "tools": [
                {
                    "name": f"domain_tool_{i}",
                    "description": "d",
                    "params": [{"name": "q", "type": "string", "required": True}],
                    "cypher": "MATCH (n:Thing) WHERE n.name CONTAINS $q RETURN n.name",
                }
                for i in range(n_domain)
            ]
        }
        catalog = discover_tools(GraphSchema(label_stats, etype_stats), domain)
        assert len(catalog) == 3 * len(labels) + len(etypes) + n_domain


class TestDomainValidation:
    def test_unknown_param_type(self):
        domain = {"tools": [{"name": "bad", "params": [{"name": "x", "type": "date"}], "cypher": "MATCH (n:X) RETURN n"}]}
        with pytest.raises(ToolConfigError) as err:
            discover_tools(GraphSchema([], []), domain)
        assert err.value.tool == "bad"

    def test_orphan_placeholder(self):
        domain = {"tools": [{"name": "orphan", "params": [], "cypher": "MATCH (n:X {k: $missing}) RETURN n"}]}
        with pytest.raises(ToolConfigError) as err:
            discover_tools(GraphSchema([], []), domain)
        assert "missing" in str(err.value)

    def test_unused_param(self):
        domain = {
            "tools": [
                {
                    "name": "unused",
                    "params": [{"name": "x", "type": "string", "required": True}],
                    "cypher": "MATCH (n:X) RETURN n",
                }
            ]
        }
        with pytest.raises(ToolConfigError):
            discover_tools(GraphSchema([], []), domain)

    def test_template_parse_failure(self):
        domain = {"tools": [{"name": "broken", "params": [], "cypher": "MATCH (n:X RETURN n"}]}
        with pytest.raises(ToolConfigError) as err:
            discover_tools(GraphSchema([], []), domain)
        assert err.value.tool == "broken"

    def test_required_with_default_rejected(self):
        domain = {
            "tools": [
                {
                    "name": "clash",
                    "params": [{"name": "x", "type": "int", "required": True, "default": 3}],
                    "cypher": "MATCH (n:X) RETURN n.name LIMIT $x",
                }
            ]
        }
        with pytest.raises(ToolConfigError):
            discover_tools(GraphSchema([], []), domain)


class TestToolsList:
    def test_rendering(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        server = McpServer(drug_catalog, tenant)
        listing = server.tools_list()["tools"]
        assert len(listing) == 27
        search = next(t for t in listing if t["name"] == "search_drug")
        assert search["inputSchema"]["required"] == ["query"]
        limit = search["inputSchema"]["properties"]["limit"]
        assert limit == {"type": "integer", "description": "max rows", "default": 25}

    def test_stable_ordering(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        server = McpServer(drug_catalog, tenant)
        first = [t["name"] for t in server.tools_list()["tools"]]
        second = [t["name"] for t in server.tools_list()["tools"]]
        assert first == second


def call_rows(server, name, arguments):
    result = server.tools_call(name, arguments)
    payload = json.loads(result["content"][0]["text"])
    return payload


@pytest.fixture(scope="module")
def server(small_federated, fed_catalog):
    tenant, _ = small_federated
    return McpServer(fed_catalog, tenant)


class TestToolsCall:
    def test_search_contains(self, server, small_federated):
        tenant, _ = small_federated
        payload = call_rows(server, "search_drug", {"query": "etfo"})
        names = [row[1] for row in payload["rows"]]
        assert "Metformin" in names
        for name in names:
            assert "etfo" in name

    def test_call_equals_direct_execution(self, server, small_federated, fed_catalog):
        tenant, _ = small_federated
        cases = [
            ("pathway_members", {"pathway_name": "Glucose Metabolism"}),
            ("drug_side_effects", {"drug_name": "Metformin"}),
            ("get_drug", {"value": "DB00001"}),
            ("count_protein", {}),
            ("trials_testing", {"intervention": "Warfarin"}),
            ("drug_trial_bridge", {"drug_name": "Warfarin"}),
        ]
        for name, args in cases:
            tool = fed_catalog.get(name)
            bound = server.bind_arguments(tool, args)
            direct = execute(
                tenant, build_plan(parse(tool.template), tenant.schema()), bound
            )
            payload = call_rows(server, name, args)
            expected = [[_plain(v) for v in row] for row in direct.rows][:200]
            assert payload["rows"] == expected, name

    def test_fuzzed_args_equivalence(self, server, fed_catalog, small_federated):
        tenant, _ = small_federated
        rng = random.Random(7)
        strings = ["Metformin", "Warfarin", "a", "Nau", "Breast", "XYZ", "%", "Glucose"]
        checked = 0
        for tool in fed_catalog.tools:
            args = {}
            for p in tool.params:
                if p.type == "string":
                    args[p.name] = rng.choice(strings)
                elif p.type == "int":
                    args[p.name] = rng.randint(0, 30)
                elif p.type == "float":
                    args[p.name] = rng.random()
                else:
                    args[p.name] = rng.random() < 0.5
            bound = server.bind_arguments(tool, args)
            direct = execute(
                tenant, build_plan(parse(tool.template), tenant.schema()), bound
            )
            payload = call_rows(server, tool.name, args)
            expected = [[_plain(v) for v in row] for row in direct.rows][:200]
            assert payload["rows"] == expected, tool.name
            checked += 1
        assert checked == len(fed_catalog)

    def test_unknown_tool(self, server):
        with pytest.raises(mcp_server_mod.ToolError) as err:
            server.tools_call("no_such_tool", {})
        assert "unknown tool" in str(err.value)

    def test_missing_required_arg(self, server):
        with pytest.raises(mcp_server_mod.ToolError) as err:
            server.tools_call("search_drug", {})
        assert "query" in str(err.value)

    def test_arg_type_mismatch_no_crash(self, server):
        with pytest.raises(mcp_server_mod.ToolError) as err:
            server.tools_call("search_drug", {"query": "x", "limit": "abc"})
        assert "limit" in str(err.value)
        # server still serves afterwards
        assert call_rows(server, "count_drug", {})["rows"]

    def test_int_from_whole_float(self, server):
        payload = call_rows(server, "search_drug", {"query": "a", "limit": 3.0})
        assert len(payload["rows"]) <= 3

    def test_row_cap(self, server):
        payload = call_rows(server, "search_drug", {"query": "a", "limit": 1000})
        assert len(payload["rows"]) <= 200


def _plain(value):
    from kgfed.cypher.values import NodeVal

    if isinstance(value, NodeVal):
        return value.to_json()
    return value


class TestInjectionSafety:
    ADVERSARIAL = [
        "x' RETURN n --",
        "'; CREATE (:Evil) //",
        "\\' OR 1=1",
        "MATCH (n) RETURN n",
        "}) CREATE (:Pwned {x: '",
        "$limit",
        "Robert'); DROP TABLE students;--",
        "*1..8",
        "\" OR \"\" = \"",
        "' AND d.name <> '",
    ]

    def test_arguments_never_reach_statement_text(
        self, small_federated, fed_catalog, monkeypatch
    ):
        tenant, _ = small_federated
        server = McpServer(fed_catalog, tenant)
        parsed_texts = []
        real_parse = mcp_server_mod.parse

        def spy(text):
            parsed_texts.append(text)
            return real_parse(text)

        monkeypatch.setattr(mcp_server_mod, "parse", spy)
        rng = random.Random(99)
        string_tools = [
            t for t in fed_catalog.tools if any(p.type == "string" for p in t.params)
        ]
        checked = 0
        while checked < 1000:
            tool = rng.choice(string_tools)
            args = {}
            for p in tool.params:
                if p.type == "string":
                    args[p.name] = rng.choice(self.ADVERSARIAL)
                elif p.type == "int":
                    args[p.name] = rng.randint(0, 10)
            parsed_texts.clear()
            server.tools_call(tool.name, args)  # must never raise a syntax error
            assert parsed_texts == [tool.template], tool.name
            checked += 1

    def test_ast_fingerprint_stable_across_args(self, small_federated, fed_catalog):
        tenant, _ = small_federated
        server = McpServer(fed_catalog, tenant)
        tool = fed_catalog.get("search_drug")
        baseline = _fingerprint(parse(tool.template))
        for arg in self.ADVERSARIAL:
            server.tools_call("search_drug", {"query": arg})
            assert _fingerprint(parse(tool.template)) == baseline


def _fingerprint(query) -> str:
    parts = []
    for path in query.matches:
        for node in path.nodes:
            parts.append(f"n:{node.label}:{sorted(node.props)}")
        for rel in path.rels:
            parts.append(f"r:{rel.etype}:{rel.direction}:{rel.min_len}:{rel.max_len}")
    for cmp_ in query.where:
        parts.append(f"w:{cmp_.op}:{type(cmp_.left).__name__}:{type(cmp_.right).__name__}")
    for item in query.returns:
        parts.append(f"ret:{item.column_name}")
    return "|".join(parts)


class TestStdioLoop:
    def run_session(self, lines, tenant, catalog):
        instream = io.StringIO("\n".join(json.dumps(l) if isinstance(l, dict) else l for l in lines) + "\n")
        outstream = io.StringIO()
        serve_stdio(catalog, tenant, instream, outstream)
        return [json.loads(l) for l in outstream.getvalue().splitlines()]

    def test_initialize(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        out = self.run_session(
            [{"jsonrpc": "2.0", "id": 1, "method": "initialize", "params": {}}],
            tenant,
            drug_catalog,
        )
        assert out[0]["result"]["serverInfo"]["name"] == "kgfed-mcp"
        assert out[0]["result"]["capabilities"] == {"tools": {}}

    def test_garbage_then_valid(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        out = self.run_session(
            [
                "this is not json",
                {"jsonrpc": "2.0", "id": 2, "method": "tools/list"},
            ],
            tenant,
            drug_catalog,
        )
        assert out[0]["error"]["code"] == -32700
        assert len(out[1]["result"]["tools"]) == 27

    def test_unknown_method(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        out = self.run_session(
            [{"jsonrpc": "2.0", "id": 3, "method": "resources/list"}],
            tenant,
            drug_catalog,
        )
        assert out[0]["error"]["code"] == -32601

    def test_notification_gets_no_response(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        out = self.run_session(
            [
                {"jsonrpc": "2.0", "method": "notifications/initialized"},
                {"jsonrpc": "2.0", "id": 4, "method": "tools/list"},
            ],
            tenant,
            drug_catalog,
        )
        assert len(out) == 1 and out[0]["id"] == 4

    def test_golden_transcript(self, small_drug_tenant, drug_catalog):
        tenant, _ = small_drug_tenant
        golden_path = os.path.join(os.path.dirname(__file__), "golden", "mcp_session.jsonl")
        lines = [
            {"jsonrpc": "2.0", "id": 1, "method": "initialize", "params": {}},
            {"jsonrpc": "2.0", "id": 2, "method": "tools/list"},
            {"jsonrpc": "2.0", "id": 3, "method": "tools/call", "params": {"name": "count_drug", "arguments": {}}},
            {"jsonrpc": "2.0", "id": 4, "method": "tools/call", "params": {"name": "get_drug", "arguments": {"value": "DB00001"}}},
            {"jsonrpc": "2.0", "id": 5, "method": "tools/call", "params": {"name": "drug_side_effects", "arguments": {"drug_name": "Metformin", "limit": 5}}},
        ]
        instream = io.StringIO("\n".join(json.dumps(l) for l in lines) + "\n")
        outstream = io.StringIO()
        serve_stdio(drug_catalog, tenant, instream, outstream)
        got = outstream.getvalue()
        if not os.path.exists(golden_path):  # pragma: no cover - first run only
            os.makedirs(os.path.dirname(golden_path), exist_ok=True)
            with open(golden_path, "w", encoding="utf-8") as fh:
                fh.write(got)
            pytest.fail("golden transcript written; review and re-run")
        with open(golden_path, "r", encoding="utf-8") as fh:
            assert got == fh.read()
