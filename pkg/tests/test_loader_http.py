"""HTTP batched loader vs. native loader: isomorphism and batching."""

import os

import pytest

from kgfed.errors import LoadError
from kgfed.etl import DedupRegistry, load_cypher, load_mapping, load_native
from kgfed.isomorph import isomorphic
from kgfed.store import GraphStore


@pytest.fixture(scope="module")
def drug_mapping(small_corpus):
    outdir, _ = small_corpus
    return load_mapping(os.path.join(outdir, "drugs", "mapping.yaml"))


class TestLoaderEquivalence:
    def test_small_drug_corpus_isomorphic(self, shared_server, drug_mapping, small_corpus):
        _, manifest = small_corpus
        native_tenant = GraphStore().create_tenant("native")
        native_stats = load_native(native_tenant, drug_mapping, DedupRegistry())

        shared_server.store.create_tenant("via-http")
        http_stats = load_cypher(
            shared_server.url, drug_mapping, DedupRegistry(), batch_size=100, tenant="via-http"
        )
        http_tenant = shared_server.store.get_tenant("via-http")

        assert isomorphic(native_tenant, http_tenant)
        assert native_stats.nodes_created == http_stats.nodes_created
        assert native_stats.edges_created == http_stats.edges_created
        drugs = manifest.corpora["drugs"]
        assert native_stats.nodes_created == sum(drugs["labels"].values())
        assert native_stats.edges_created == sum(drugs["edge_types"].values())

    def test_batch_size_transparent(self, shared_server, drug_mapping):
        shared_server.store.create_tenant("batch1")
        stats1 = load_cypher(
            shared_server.url, drug_mapping, DedupRegistry(), batch_size=1, tenant="batch1"
        )
        shared_server.store.create_tenant("batch250")
        stats250 = load_cypher(
            shared_server.url, drug_mapping, DedupRegistry(), batch_size=250, tenant="batch250"
        )
        a = shared_server.store.get_tenant("batch1")
        b = shared_server.store.get_tenant("batch250")
        assert isomorphic(a, b)
        assert stats1.requests > stats250.requests

    def test_all_three_corpora_isomorphic(self, shared_server, small_corpus):
        outdir, manifest = small_corpus
        for name, corpus in manifest.corpora.items():
            mapping = load_mapping(os.path.join(outdir, corpus["mapping"]))
            native_tenant = GraphStore().create_tenant("n")
            load_native(native_tenant, mapping, DedupRegistry())
            shared_server.store.create_tenant(f"http-{name}")
            load_cypher(
                shared_server.url, mapping, DedupRegistry(), tenant=f"http-{name}"
            )
            assert isomorphic(
                native_tenant, shared_server.store.get_tenant(f"http-{name}")
            ), name

    def test_bad_batch_size_rejected(self, shared_server, drug_mapping):
        with pytest.raises(LoadError):
            load_cypher(shared_server.url, drug_mapping, batch_size=0)
        with pytest.raises(LoadError):
            load_cypher(shared_server.url, drug_mapping, batch_size=1001)

    def test_unreachable_endpoint(self, drug_mapping):
        with pytest.raises(LoadError) as err:
            load_cypher("http://127.0.0.1:9", drug_mapping, DedupRegistry())
        assert "unreachable" in str(err.value)


class TestMissingEndpointPolicies:
    @pytest.fixture
    def gapped_sources(self, tmp_path):
        (tmp_path / "nodes.csv").write_text(
            "nid,name\nA,Alpha\nB,Beta\n", encoding="utf-8"
        )
        (tmp_path / "edges.csv").write_text(
            "src,dst\nA,B\nA,MISSING\n", encoding="utf-8"
        )
        return tmp_path

    def doc(self, policy):
        return {
            "nodes": [
                {
                    "file": "nodes.csv",
                    "delimiter": ",",
                    "label": "Item",
                    "key": {"column": "nid", "property": "nid"},
                    "properties": [{"column": "name", "property": "name"}],
                    "index": ["nid"],
                }
            ],
            "edges": [
                {
                    "file": "edges.csv",
                    "delimiter": ",",
                    "type": "LINKS",
                    "src": {"label": "Item", "property": "nid", "column": "src"},
                    "dst": {"label": "Item", "property": "nid", "column": "dst"},
                    "on_missing": policy,
                }
            ],
        }

    def test_skip_policy_matches_native(self, shared_server, gapped_sources):
        from kgfed.etl.mapping import parse_mapping

        mapping = parse_mapping(self.doc("skip"), base_dir=str(gapped_sources))
        native = GraphStore().create_tenant("n")
        ns = load_native(native, mapping, DedupRegistry())
        shared_server.store.create_tenant("skip-http")
        hs = load_cypher(shared_server.url, mapping, DedupRegistry(), tenant="skip-http")
        assert isomorphic(native, shared_server.store.get_tenant("skip-http"))
        assert ns.edges_created == hs.edges_created == 1
        assert hs.rows_skipped == ns.rows_skipped == 1

    def test_create_policy_matches_native(self, shared_server, gapped_sources):
        from kgfed.etl.mapping import parse_mapping

        mapping = parse_mapping(self.doc("create"), base_dir=str(gapped_sources))
        native = GraphStore().create_tenant("n")
        ns = load_native(native, mapping, DedupRegistry())
        shared_server.store.create_tenant("create-http")
        hs = load_cypher(shared_server.url, mapping, DedupRegistry(), tenant="create-http")
        assert isomorphic(native, shared_server.store.get_tenant("create-http"))
        assert ns.edges_created == hs.edges_created == 2
        assert ns.nodes_created == hs.nodes_created == 3

    def test_error_policy(self, shared_server, gapped_sources):
        from kgfed.etl.mapping import parse_mapping

        mapping = parse_mapping(self.doc("error"), base_dir=str(gapped_sources))
        shared_server.store.create_tenant("err-http")
        with pytest.raises(LoadError):
            load_cypher(shared_server.url, mapping, DedupRegistry(), tenant="err-http")
