"""CLI: subcommand flows, formats, exit codes."""

import gzip
import json
import os
import subprocess
import sys

import pytest

BIN = [sys.executable, "-m", "kgfed"]


def run(args, cwd=None, env_extra=None, input_=None):
    env = dict(os.environ)
    env.pop("KGFED_DATA", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        BIN + args,
        capture_output=True,
        text=True,
        cwd=cwd,
        env=env,
        input=input_,
        timeout=300,
    )


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, small_corpus):
    """Data dir with the three small corpora loaded and exported."""
    outdir, manifest = small_corpus
    work = tmp_path_factory.mktemp("cli-work")
    data = work / "data"
    for name, corpus in manifest.corpora.items():
        res = run(
            [
                "load",
                "--mapping",
                os.path.join(outdir, corpus["mapping"]),
                "--tenant",
                name,
                "--data",
                str(data),
            ]
        )
        assert res.returncode == 0, res.stderr
    return {"data": str(data), "corpus": outdir, "manifest": manifest}


class TestFlags:
    def test_http_batch_default_is_100(self):
        res = run(["load", "--help"])
        assert res.returncode == 0
        assert "default: 100" in res.stdout

    def test_env_var_overrides_data_flag(self, workspace, tmp_path):
        res = run(
            [
                "query",
                "MATCH (d:Drug) RETURN count(*) AS n",
                "--tenant",
                "drugs",
                "--data",
                str(tmp_path / "nowhere"),
                "--format",
                "json",
            ],
            env_extra={"KGFED_DATA": workspace["data"]},
        )
        assert res.returncode == 0, res.stderr
        assert json.loads(res.stdout)["rows"] == [[300]]


class TestGenCorpus:
    def test_generate_and_self_check(self, tmp_path):
        res = run(["gen-corpus", "--seed", "7", "--scale", "small", "-o", str(tmp_path / "c")])
        assert res.returncode == 0, res.stderr
        doc = json.loads(res.stdout)
        assert doc["nodes"] > 900
        assert os.path.exists(tmp_path / "c" / "manifest.json")

    def test_determinism(self, tmp_path):
        run(["gen-corpus", "--seed", "9", "-o", str(tmp_path / "a")])
        run(["gen-corpus", "--seed", "9", "-o", str(tmp_path / "b")])
        a = (tmp_path / "a" / "drugs" / "drugs.csv").read_bytes()
        b = (tmp_path / "b" / "drugs" / "drugs.csv").read_bytes()
        assert a == b


class TestLoadAndQuery:
    def test_load_wrote_snapshots(self, workspace):
        for name in ("drugs", "pathways", "trials"):
            assert os.path.exists(os.path.join(workspace["data"], f"{name}.sgsnap"))

    def test_query_table_format(self, workspace):
        res = run(
            [
                "query",
                "MATCH (d:Drug {name: 'Metformin'}) RETURN d.name, d.drugbank_id",
                "--tenant",
                "drugs",
                "--data",
                workspace["data"],
            ]
        )
        assert res.returncode == 0, res.stderr
        assert "Metformin" in res.stdout and "DB00001" in res.stdout
        assert "rows in" in res.stderr  # latency on stderr

    def test_query_csv_quoting(self, workspace):
        res = run(
            [
                "query",
                "MATCH (ct:ClinicalTrial {nct_id: 'NCT00000001'}) RETURN ct.nct_id, ct.title",
                "--tenant",
                "trials",
                "--data",
                workspace["data"],
                "--format",
                "csv",
            ]
        )
        assert res.returncode == 0, res.stderr
        import csv as csv_mod
        import io as io_mod

        rows = list(csv_mod.reader(io_mod.StringIO(res.stdout)))
        assert rows[0] == ["ct.nct_id", "ct.title"]
        assert rows[1][0] == "NCT00000001"

    def test_query_json_format(self, workspace):
        res = run(
            [
                "query",
                "MATCH (d:Drug) RETURN count(*) AS n",
                "--tenant",
                "drugs",
                "--data",
                workspace["data"],
                "--format",
                "json",
            ]
        )
        doc = json.loads(res.stdout)
        assert doc["rows"] == [[300]]

    def test_syntax_error_exit_2(self, workspace):
        res = run(
            ["query", "MATCH (d:Drug RETURN d", "--tenant", "drugs", "--data", workspace["data"]]
        )
        assert res.returncode == 2
        assert "syntax-error" in res.stderr
        assert "1:" in res.stderr  # line:column

    def test_unknown_tenant_exit_2(self, workspace):
        res = run(["query", "MATCH (n:X) RETURN n", "--tenant", "ghost", "--data", workspace["data"]])
        assert res.returncode == 2

    def test_usage_error_exit_1(self):
        res = run(["query"])  # missing argument
        assert res.returncode == 1

    def test_breast_landscape_top_k(self, workspace):
        res = run(
            [
                "query",
                "MATCH (ct:ClinicalTrial)-[:STUDIES]->(c:Condition) "
                "WHERE c.name CONTAINS 'Breast' "
                "RETURN c.name, count(ct) AS trials ORDER BY trials DESC LIMIT 5",
                "--tenant",
                "trials",
                "--data",
                workspace["data"],
                "--format",
                "json",
            ]
        )
        doc = json.loads(res.stdout)
        assert 0 < len(doc["rows"]) <= 5
        counts = [r[1] for r in doc["rows"]]
        assert counts == sorted(counts, reverse=True)


class TestImportExport:
    def test_import_three_snapshots_totals(self, workspace, tmp_path):
        data2 = tmp_path / "fed-data"
        total = 0
        for name in ("drugs", "pathways", "trials"):
            res = run(
                [
                    "import",
                    os.path.join(workspace["data"], f"{name}.sgsnap"),
                    "--tenant",
                    "federated",
                    "--data",
                    str(data2),
                ]
            )
            assert res.returncode == 0, res.stderr
            total += json.loads(res.stdout)["nodes_imported"]
        assert total == workspace["manifest"].totals["nodes"]
        res = run(
            [
                "query",
                "MATCH (d:Drug {name: 'Warfarin'}) MATCH (i:Intervention)<-[:TESTS]-(ct:ClinicalTrial) "
                "WHERE i.name = d.name RETURN ct.nct_id, ct.phase",
                "--tenant",
                "federated",
                "--data",
                str(data2),
                "--format",
                "json",
            ]
        )
        got = sorted(json.loads(res.stdout)["rows"])
        expected = next(
            q for q in workspace["manifest"].federation_queries if q["name"] == "drug_trials"
        )["rows"]
        assert got == expected

    def test_export_byte_stable_modulo_timestamp(self, workspace, tmp_path):
        out1 = tmp_path / "a.sgsnap"
        out2 = tmp_path / "b.sgsnap"
        for out in (out1, out2):
            res = run(
                ["export", "--tenant", "drugs", "--data", workspace["data"], "-o", str(out)]
            )
            assert res.returncode == 0, res.stderr
            header = json.loads(res.stdout)
            assert header["nodes"] == 480
        lines1 = gzip.decompress(out1.read_bytes()).decode().splitlines()
        lines2 = gzip.decompress(out2.read_bytes()).decode().splitlines()
        assert lines1[1:] == lines2[1:]

    def test_export_empty_tenant(self, tmp_path):
        data = tmp_path / "data"
        data.mkdir()
        res = run(["import", "--tenant", "hollow", "--data", str(data)])
        assert res.returncode == 1  # missing FILE argument: usage
        # create empty tenant by importing an empty snapshot
        from kgfed.snapshot import export_snapshot
        from kgfed.store import Tenant

        empty = Tenant("hollow")
        with open(data / "hollow.sgsnap", "wb") as fh:
            export_snapshot(empty, fh)
        out = tmp_path / "out.sgsnap"
        res = run(["export", "--tenant", "hollow", "--data", str(data), "-o", str(out)])
        assert res.returncode == 0
        assert len(gzip.decompress(out.read_bytes()).decode().splitlines()) == 1

    def test_malformed_snapshot_exit_2(self, tmp_path):
        bad = tmp_path / "bad.sgsnap"
        bad.write_bytes(gzip.compress(b"not a snapshot\n"))
        res = run(["import", str(bad), "--tenant", "x", "--data", str(tmp_path / "d")])
        assert res.returncode == 2

    def test_missing_mapping_file_exit(self, tmp_path):
        res = run(["load", "--mapping", str(tmp_path / "nope.yaml"), "--data", str(tmp_path)])
        assert res.returncode == 1  # click validates the path: usage error


class TestBench:
    def test_single_suite_runs(self, workspace, tmp_path):
        # build a federated tenant first
        data2 = tmp_path / "bench-data"
        for name in ("drugs", "pathways", "trials"):
            run(
                [
                    "import",
                    os.path.join(workspace["data"], f"{name}.sgsnap"),
                    "--tenant",
                    "fed",
                    "--data",
                    str(data2),
                ]
            )
        report = tmp_path / "report"
        res = run(
            [
                "bench",
                "--tenant",
                "fed",
                "--suite",
                "single",
                "--data",
                str(data2),
                "-o",
                str(report),
            ]
        )
        assert res.returncode == 0, res.stderr
        assert "median_ms" in res.stdout
        assert (report / "single_latency.csv").exists()
        assert (report / "single_latency.png").exists()
        lines = res.stdout.splitlines()
        assert len(lines) == 2 + 5  # header + rule + five queries

    def test_federation_suite_rows_match_manifest(self, workspace, tmp_path):
        data2 = tmp_path / "bench-fed"
        for name in ("drugs", "pathways", "trials"):
            run(
                [
                    "import",
                    os.path.join(workspace["data"], f"{name}.sgsnap"),
                    "--tenant",
                    "fed",
                    "--data",
                    str(data2),
                ]
            )
        res = run(["bench", "--tenant", "fed", "--suite", "federation", "--data", str(data2)])
        assert res.returncode == 0, res.stderr
        assert "indication_chain" in res.stdout

    def test_bench_on_empty_tenant_exit_0(self, tmp_path):
        from kgfed.snapshot import export_snapshot
        from kgfed.store import Tenant

        data = tmp_path / "data"
        data.mkdir()
        with open(data / "empty.sgsnap", "wb") as fh:
            export_snapshot(Tenant("empty"), fh)
        res = run(["bench", "--tenant", "empty", "--suite", "single", "--data", str(data)])
        assert res.returncode == 0, res.stderr


class TestServe:
    def test_serve_health_and_schema(self, workspace):
        import time

        import httpx

        # pick a free port
        import socket as socket_mod

        probe = socket_mod.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()

        proc = subprocess.Popen(
            BIN
            + [
                "serve",
                "--http",
                f"127.0.0.1:{port}",
                "--data",
                workspace["data"],
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
        try:
            deadline = time.time() + 30
            last_err = None
            while time.time() < deadline:
                try:
                    resp = httpx.get(f"http://127.0.0.1:{port}/health", timeout=2)
                    if resp.status_code == 200:
                        break
                except httpx.HTTPError as exc:
                    last_err = exc
                    time.sleep(0.2)
            else:
                raise AssertionError(f"server never came up: {last_err}")
            doc = httpx.get(f"http://127.0.0.1:{port}/api/schema", params={"tenant": "drugs"}).json()
            assert len(doc["labels"]) == 4 and len(doc["edge_types"]) == 3
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_port_in_use_exit_3(self, tmp_path):
        import socket as socket_mod

        holder = socket_mod.socket()
        holder.bind(("127.0.0.1", 0))
        port = holder.getsockname()[1]
        holder.listen(1)
        try:
            res = run(["serve", "--http", f"127.0.0.1:{port}", "--data", str(tmp_path)])
            assert res.returncode == 3
        finally:
            holder.close()

    def test_serve_mcp_stdio(self, workspace):
        import socket as socket_mod

        probe = socket_mod.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
        request = json.dumps({"jsonrpc": "2.0", "id": 1, "method": "tools/list"}) + "\n"
        res = run(
            [
                "serve",
                "--http",
                f"127.0.0.1:{port}",
                "--data",
                workspace["data"],
                "--mcp",
                "--tenant",
                "drugs",
            ],
            input_=request,
        )
        assert res.returncode == 0, res.stderr
        out = json.loads(res.stdout.splitlines()[0])
        # 4 labels * 3 + 3 edge types, no domain config
        assert len(out["result"]["tools"]) == 15

    def test_serve_mcp_bad_config_exit_2(self, workspace, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text(
            "tools:\n  - name: broken\n    params: []\n    cypher: 'MATCH (n:X RETURN n'\n",
            encoding="utf-8",
        )
        import socket as socket_mod

        probe = socket_mod.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
        res = run(
            [
                "serve",
                "--http",
                f"127.0.0.1:{port}",
                "--data",
                workspace["data"],
                "--mcp",
                "--mcp-config",
                str(bad),
            ],
            input_="",
        )
        assert res.returncode == 2
        assert "broken" in res.stderr
