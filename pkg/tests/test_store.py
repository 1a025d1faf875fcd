"""Graph store: tenants, CRUD, indexes, schema statistics, locking."""

import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgfed.errors import (
    DuplicateTenantError,
    PropertyValueError,
    UnknownEndpointError,
    UnknownNodeError,
    UnknownTenantError,
)
from kgfed.store import GraphStore, Tenant, property_matches, values_equal


@pytest.fixture
def store():
    return GraphStore()


@pytest.fixture
def tenant(store):
    return store.create_tenant("default")


class TestTenantRegistry:
    def test_create_empty_tenant(self, store):
        t = store.create_tenant("default")
        schema = t.schema()
        assert schema.labels == [] and schema.edge_types == []

    def test_duplicate_tenant_rejected(self, store):
        store.create_tenant("pathways")
        with pytest.raises(DuplicateTenantError):
            store.create_tenant("pathways")

    def test_list_tenants(self, store):
        store.create_tenant("a")
        store.create_tenant("b")
        assert store.list_tenants() == ["a", "b"]

    def test_unknown_tenant(self, store):
        with pytest.raises(UnknownTenantError):
            store.get_tenant("nope")

    def test_empty_name_rejected(self, store):
        with pytest.raises(PropertyValueError):
            store.create_tenant("")


class TestNodes:
    def test_single_insert_and_index_lookup(self, tenant):
        nid = tenant.create_node(
            ["Drug"],
            {"drugbank_id": "DB00001", "name": "Lepirudin"},
            indexed=("drugbank_id", "name"),
        )
        assert nid == 0
        assert tenant.nodes_by_label_prop("Drug", "drugbank_id", "DB00001") == {0}

    def test_list_property_indexed_per_element(self, tenant):
        nid = tenant.create_node(
            ["Drug"],
            {"name": "Metformin", "synonyms": ["Glucophage", "Metformin HCl"]},
            indexed=("name", "synonyms"),
        )
        assert tenant.nodes_by_label_prop("Drug", "synonyms", "Glucophage") == {nid}
        assert tenant.nodes_by_label_prop("Drug", "synonyms", "Metformin HCl") == {nid}
        assert tenant.nodes_by_label_prop("Drug", "synonyms", "nope") == set()

    def test_node_requires_label(self, tenant):
        with pytest.raises(PropertyValueError):
            tenant.create_node([], {"name": "x"})

    def test_ids_monotonic(self, tenant):
        ids = [tenant.create_node(["N"], {}) for _ in range(10)]
        assert ids == sorted(ids) and len(set(ids)) == 10

    def test_unindexed_lookup_falls_back_to_scan(self, tenant):
        a = tenant.create_node(["Protein"], {"name": "TP53"})
        tenant.create_node(["Protein"], {"name": "BRCA1"})
        assert tenant.nodes_by_label_prop("Protein", "name", "TP53") == {a}
        assert tenant.nodes_by_label_prop("Protein", "name", "NO_SUCH") == set()

    def test_bool_and_int_index_entries_distinct(self, tenant):
        yes = tenant.create_node(["T"], {"v": True}, indexed=("v",))
        one = tenant.create_node(["T"], {"v": 1}, indexed=("v",))
        assert tenant.nodes_by_label_prop("T", "v", True) == {yes}
        assert tenant.nodes_by_label_prop("T", "v", 1) == {one}

    def test_int_float_numeric_equality_in_index(self, tenant):
        a = tenant.create_node(["T"], {"v": 2}, indexed=("v",))
        b = tenant.create_node(["T"], {"v": 2.0}, indexed=("v",))
        assert tenant.nodes_by_label_prop("T", "v", 2) == {a, b}
        assert tenant.nodes_by_label_prop("T", "v", 2.0) == {a, b}

    def test_invalid_property_values(self, tenant):
        with pytest.raises(PropertyValueError):
            tenant.create_node(["T"], {"v": {"nested": 1}})
        with pytest.raises(PropertyValueError):
            tenant.create_node(["T"], {"v": ["ok", ""]})
        with pytest.raises(PropertyValueError):
            tenant.create_node(["T"], {"v": float("nan")})
        with pytest.raises(PropertyValueError):
            tenant.create_node(["T"], {"v": 2**63})

    def test_late_index_declaration_backfills(self, tenant):
        a = tenant.create_node(["Drug"], {"name": "Aspirin"})
        b = tenant.create_node(["Drug"], {"name": "Warfarin"}, indexed=("name",))
        assert tenant.nodes_by_label_prop("Drug", "name", "Aspirin") == {a}
        assert tenant.nodes_by_label_prop("Drug", "name", "Warfarin") == {b}


class TestEdges:
    def test_adjacency(self, tenant):
        d = tenant.create_node(["Drug"], {"name": "Metformin"})
        g = tenant.create_node(["Gene"], {"gene_name": "HNF1B"})
        eid = tenant.create_edge(d, g, "INTERACTS_WITH_GENE", {"type": "inhibitor"})
        assert tenant.neighbors(d, "out", "INTERACTS_WITH_GENE") == [(eid, g)]
        assert tenant.neighbors(g, "in") == [(eid, d)]

    def test_unknown_endpoint(self, tenant):
        d = tenant.create_node(["Drug"], {})
        with pytest.raises(UnknownEndpointError):
            tenant.create_edge(d, 999, "X")
        with pytest.raises(UnknownEndpointError):
            tenant.create_edge(998, d, "X")

    def test_parallel_edges_permitted(self, tenant):
        a = tenant.create_node(["N"], {})
        b = tenant.create_node(["N"], {})
        e1 = tenant.create_edge(a, b, "R")
        e2 = tenant.create_edge(a, b, "R")
        assert e1 != e2
        assert len(tenant.neighbors(a, "out", "R")) == 2

    def test_neighbors_filters_and_order(self, tenant):
        a = tenant.create_node(["N"], {})
        others = [tenant.create_node(["N"], {}) for _ in range(3)]
        tenant.create_edge(a, others[0], "X")
        tenant.create_edge(a, others[1], "TESTS")
        tenant.create_edge(a, others[2], "X")
        assert tenant.neighbors(a, "out", "TESTS") == [(1, others[1])]
        eids = [e for e, _ in tenant.neighbors(a, "out")]
        assert eids == sorted(eids)

    def test_isolated_node_has_no_neighbors(self, tenant):
        a = tenant.create_node(["N"], {})
        assert tenant.neighbors(a, "both") == []

    def test_both_direction_dedupes_self_loop(self, tenant):
        a = tenant.create_node(["N"], {})
        eid = tenant.create_edge(a, a, "LOOP")
        assert tenant.neighbors(a, "both") == [(eid, a)]

    def test_unknown_node_neighbors(self, tenant):
        with pytest.raises(UnknownNodeError):
            tenant.neighbors(42, "out")


class TestSchema:
    def test_empty(self, tenant):
        s = tenant.schema()
        assert s.labels == [] and s.edge_types == []

    def test_counts_increment(self, tenant):
        tenant.create_node(["Drug"], {"name": "a"})
        assert tenant.schema().label("Drug").count == 1
        tenant.create_node(["Drug"], {"name": "b"})
        assert tenant.schema().label("Drug").count == 2

    def test_property_keys_and_indexed(self, tenant):
        tenant.create_node(["Drug"], {"name": "a", "code": 1}, indexed=("name",))
        entry = tenant.schema().label("Drug")
        assert entry.properties == ["code", "name"]
        assert entry.indexed == ["name"]

    def test_edge_type_stats_with_endpoints(self, tenant):
        d = tenant.create_node(["Drug"], {})
        g = tenant.create_node(["Gene"], {})
        tenant.create_edge(d, g, "INTERACTS_WITH_GENE")
        et = tenant.schema().edge_types[0]
        assert (et.name, et.count) == ("INTERACTS_WITH_GENE", 1)
        assert (et.src_label, et.dst_label) == ("Drug", "Gene")

    def test_schema_counts_match_full_scan(self, tenant):
        for i in range(25):
            tenant.create_node(["A" if i % 3 else "B"], {"i": i})
        schema = tenant.schema()
        for entry in schema.labels:
            scanned = sum(
                1
                for nid in tenant.node_ids()
                if entry.name in tenant.get_node(nid).labels
            )
            assert entry.count == scanned


# ---------------------------------------------------------------------------
# Property-based: index/scan equivalence, referential integrity, schema truth
# ---------------------------------------------------------------------------

_VALUES = st.one_of(
    st.booleans(),
    st.integers(min_value=-(2**62), max_value=2**62),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
    st.text(min_size=0, max_size=6),
    st.lists(st.text(min_size=1, max_size=4), min_size=1, max_size=3),
)

_GRAPH = st.lists(
    st.tuples(
        st.sampled_from(["A", "B", "C"]),
        st.dictionaries(st.sampled_from(["p", "q", "r"]), _VALUES, max_size=3),
    ),
    min_size=1,
    max_size=60,
)


@settings(max_examples=60, deadline=None)
@given(data=st.data(), spec=_GRAPH)
def test_index_equals_scan_on_random_graphs(data, spec):
    tenant = Tenant("t")
    for label, props in spec:
        tenant.create_node([label], props, indexed=("p", "q"))
    label = data.draw(st.sampled_from(["A", "B", "C"]))
    prop = data.draw(st.sampled_from(["p", "q", "r"]))
    value = data.draw(_VALUES)
    via_lookup = tenant.nodes_by_label_prop(label, prop, value)
    brute = set()
    for nid in tenant.node_ids():
        node = tenant.get_node(nid)
        if label in node.labels and prop in node.properties:
            if property_matches(node.properties[prop], value):
                brute.add(nid)
    assert via_lookup == brute


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=20),
    edges=st.lists(st.tuples(st.integers(0, 19), st.integers(0, 19)), max_size=40),
)
def test_referential_integrity_and_id_monotonicity(n, edges):
    tenant = Tenant("t")
    ids = [tenant.create_node(["N"], {"i": i}) for i in range(n)]
    assert ids == list(range(n))
    for s, d in edges:
        if s < n and d < n:
            tenant.create_edge(s, d, "R")
        else:
            with pytest.raises(UnknownEndpointError):
                tenant.create_edge(s, d, "R")
    for eid in tenant.edge_ids():
        edge = tenant.get_edge(eid)
        assert tenant.has_node(edge.src) and tenant.has_node(edge.dst)


def test_values_equal_semantics():
    assert values_equal(2, 2.0)
    assert not values_equal(True, 1)
    assert not values_equal(1, "1")
    assert values_equal(["a", "b"], ["a", "b"])
    assert not values_equal(["a"], ["a", "b"])
    assert property_matches(["x", "y"], "y")
    assert not property_matches(["x", "y"], "z")


# ---------------------------------------------------------------------------
# Concurrency
# ---------------------------------------------------------------------------

class TestLocking:
    def test_concurrent_readers_allowed(self, tenant):
        tenant.create_node(["N"], {})
        inside = threading.Barrier(4, timeout=5)
        results = []

        def reader():
            with tenant.lock.read():
                inside.wait()  # all four readers hold the lock simultaneously
                results.append(len(list(tenant.node_ids())))

        threads = [threading.Thread(target=reader) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=10)
        assert results == [1, 1, 1, 1]

    def test_writer_excludes_readers(self, tenant):
        order = []
        entered = threading.Event()
        release = threading.Event()

        def writer():
            with tenant.lock.write():
                order.append("w-in")
                entered.set()
                release.wait(timeout=5)
                order.append("w-out")

        def reader():
            entered.wait(timeout=5)
            with tenant.lock.read():
                order.append("r")

        wt = threading.Thread(target=writer)
        rt = threading.Thread(target=reader)
        wt.start()
        rt.start()
        entered.wait(timeout=5)
        release.set()
        wt.join(timeout=10)
        rt.join(timeout=10)
        assert order == ["w-in", "w-out", "r"]

    def test_writer_reentrant(self, tenant):
        with tenant.lock.write():
            nid = tenant.create_node(["N"], {})  # nested public call
            with tenant.lock.read():
                assert tenant.has_node(nid)
