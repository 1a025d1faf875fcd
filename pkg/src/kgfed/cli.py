"""Command-line entry point.

Subcommands: serve, query, import, export, load, gen-corpus, bench.
Data-touching commands work either against a running server (--server URL)
or against a snapshot directory (--data DIR, default $KGFED_DATA or
./data) where each tenant persists as <tenant>.sgsnap.

Exit codes: 0 ok, 1 usage error, 2 data/parse fault, 3 runtime fault.
"""

from __future__ import annotations

import csv as csv_mod
import io
import json
import os
import socket
import sys
import threading
from typing import Optional

import click

from . import __version__
from .bench import SUITES, render_table, run_suite, write_report
from .cypher import execute_text
from .cypher.executor import ResultTable
from .errors import (
    CypherSyntaxError,
    KgError,
    LoadError,
    MappingError,
    SnapshotFormatError,
    ToolConfigError,
    UnknownTenantError,
)
from .etl import DedupRegistry, gen_corpus, load_cypher, load_mapping, load_native
from .snapshot import export_snapshot, import_snapshot
from .store import GraphStore, Tenant

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

_DATA_FAULTS = (
    SnapshotFormatError,
    CypherSyntaxError,
    MappingError,
    LoadError,
    ToolConfigError,
    UnknownTenantError,
    FileNotFoundError,
)


def data_dir(value: Optional[str]) -> str:
    return os.environ.get("KGFED_DATA") or value or "./data"


def snap_path(directory: str, tenant: str) -> str:
    return os.path.join(directory, f"{tenant}.sgsnap")


def load_tenant_from_dir(directory: str, name: str, must_exist: bool = True) -> Tenant:
    tenant = Tenant(name)
    path = snap_path(directory, name)
    if os.path.exists(path):
        with open(path, "rb") as fh:
            import_snapshot(tenant, fh)
    elif must_exist:
        raise UnknownTenantError(f"no snapshot for tenant {name!r} at {path}")
    return tenant


def save_tenant_to_dir(tenant: Tenant, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = snap_path(directory, tenant.name)
    with open(path, "wb") as fh:
        export_snapshot(tenant, fh)
    return path


def print_table(table: ResultTable, fmt: str) -> None:
    doc = table.to_dict()
    if fmt == "json":
        click.echo(json.dumps(doc, ensure_ascii=False, indent=1))
        return
    rows = [
        ["" if v is None else (json.dumps(v) if isinstance(v, (dict, list)) else str(v)) for v in row]
        for row in doc["rows"]
    ]
    if fmt == "csv":
        writer = csv_mod.writer(sys.stdout)
        writer.writerow(doc["columns"])
        writer.writerows(rows)
        return
    columns = doc["columns"]
    widths = [len(c) for c in columns]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    click.echo("  ".join(c.ljust(widths[i]) for i, c in enumerate(columns)))
    click.echo("  ".join("-" * w for w in widths))
    for row in rows:
        click.echo("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))


@click.group()
@click.version_option(version=__version__, prog_name="kgfed")
def cli() -> None:
    """Property-graph engine with snapshot federation and MCP tooling."""


@cli.command()
@click.option("--http", "address", default="127.0.0.1:7474", show_default=True, help="HOST:PORT to listen on")
@click.option("--data", "data", default=None, help="snapshot directory (env KGFED_DATA overrides)")
@click.option("--mcp", is_flag=True, help="also serve MCP tools over stdio")
@click.option("--mcp-config", default=None, type=click.Path(), help="domain tool YAML for the MCP server")
@click.option("--tenant", default="default", show_default=True, help="tenant the MCP server binds to")
@click.option("--console-dir", default=None, type=click.Path(), help="static console assets to serve at /console")
def serve(address, data, mcp, mcp_config, tenant, console_dir):
    """Start the HTTP service (and optionally the stdio MCP loop)."""
    import uvicorn

    from .service import create_app

    host, _, port_s = address.partition(":")
    try:
        port = int(port_s)
    except ValueError:
        raise click.UsageError(f"--http expects HOST:PORT, got {address!r}")
    directory = data_dir(data)
    store = GraphStore()
    if os.path.isdir(directory):
        for fname in sorted(os.listdir(directory)):
            if fname.endswith(".sgsnap"):
                name = fname[: -len(".sgsnap")]
                handle = store.create_tenant(name)
                with open(os.path.join(directory, fname), "rb") as fh:
                    stats = import_snapshot(handle, fh)
                click.echo(
                    f"loaded tenant {name!r}: {stats.nodes_imported} nodes, "
                    f"{stats.edges_imported} edges",
                    err=True,
                )
    if not store.has_tenant("default"):
        store.create_tenant("default")
    app = create_app(store, console_dir=console_dir)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        click.echo(f"cannot bind {address}: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)
    finally:
        probe.close()

    if mcp:
        from .mcp import discover_tools, load_domain_config, serve_stdio

        domain = load_domain_config(mcp_config) if mcp_config else None
        handle = store.get_tenant(tenant)
        catalog = discover_tools(handle.schema(), domain)
        click.echo(f"mcp: {len(catalog)} tools on tenant {tenant!r}", err=True)
        server_thread = threading.Thread(
            target=uvicorn.run,
            args=(app,),
            kwargs={"host": host, "port": port, "log_level": "warning"},
            daemon=True,
        )
        server_thread.start()
        serve_stdio(catalog, handle)
    else:
        uvicorn.run(app, host=host, port=port, log_level="info")


@cli.command("query")
@click.argument("text")
@click.option("--tenant", default="default", show_default=True)
@click.option("--data", default=None)
@click.option("--server", default=None, help="query a running server instead of the data dir")
@click.option("--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True)
@click.option("--params", default=None, help="query parameters as JSON")
def query_cmd(text, tenant, data, server, fmt, params):
    """Run a query and print the rows."""
    bound = json.loads(params) if params else {}
    if server:
        import httpx

        resp = httpx.post(
            f"{server.rstrip('/')}/api/query",
            json={"tenant": tenant, "query": text, "params": bound},
            timeout=120,
        )
        if resp.status_code != 200:
            err = resp.json().get("error", {})
            click.echo(f"error: {err.get('code')}: {err.get('message')}", err=True)
            sys.exit(EXIT_DATA)
        doc = resp.json()
        table = ResultTable(doc["columns"], [tuple(r) for r in doc["rows"]], doc["latency_ms"])
    else:
        handle = load_tenant_from_dir(data_dir(data), tenant)
        table = execute_text(handle, text, bound)
    print_table(table, fmt)
    click.echo(f"{len(table.rows)} rows in {table.latency_ms:.1f} ms", err=True)


@cli.command("import")
@click.argument("file", type=click.Path(exists=True))
@click.option("--tenant", default="default", show_default=True)
@click.option("--data", default=None)
@click.option("--server", default=None)
def import_cmd(file, tenant, data, server):
    """Append a snapshot file into a tenant; prints import stats as JSON."""
    if server:
        import httpx

        with open(file, "rb") as fh:
            resp = httpx.post(
                f"{server.rstrip('/')}/api/snapshot/import",
                params={"tenant": tenant},
                content=fh.read(),
                timeout=600,
            )
        if resp.status_code != 200:
            click.echo(json.dumps(resp.json()), err=True)
            sys.exit(EXIT_DATA)
        click.echo(json.dumps(resp.json(), indent=1))
        return
    directory = data_dir(data)
    handle = load_tenant_from_dir(directory, tenant, must_exist=False)
    with open(file, "rb") as fh:
        stats = import_snapshot(handle, fh)
    save_tenant_to_dir(handle, directory)
    click.echo(json.dumps(stats.to_dict(), indent=1))


@cli.command("export")
@click.option("--tenant", default="default", show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--data", default=None)
@click.option("--server", default=None)
def export_cmd(tenant, output, data, server):
    """Export a tenant to a snapshot file; prints the header as JSON."""
    if server:
        import httpx

        resp = httpx.get(
            f"{server.rstrip('/')}/api/snapshot/export",
            params={"tenant": tenant},
            timeout=600,
        )
        if resp.status_code != 200:
            click.echo(json.dumps(resp.json()), err=True)
            sys.exit(EXIT_DATA)
        with open(output, "wb") as fh:
            fh.write(resp.content)
        from .snapshot import read_header

        header = read_header(io.BytesIO(resp.content))
    else:
        handle = load_tenant_from_dir(data_dir(data), tenant)
        with open(output, "wb") as fh:
            header = export_snapshot(handle, fh)
    click.echo(json.dumps(header.to_dict(), indent=1))


@cli.command("load")
@click.option("--mapping", "mapping_path", required=True, type=click.Path(exists=True))
@click.option("--tenant", default="default", show_default=True)
@click.option("--via", type=click.Choice(["native", "http"]), default="native", show_default=True)
@click.option("--batch", default=100, show_default=True, help="entities per request on the http path")
@click.option("--strict", is_flag=True, help="abort on the first malformed row")
@click.option("--data", default=None)
@click.option("--server", default=None, help="target server for --via http")
def load_cmd(mapping_path, tenant, via, batch, strict, data, server):
    """Run an ETL load from a mapping config; prints load stats as JSON."""
    mapping = load_mapping(mapping_path)
    if via == "http":
        if not server:
            raise click.UsageError("--via http requires --server URL")
        stats = load_cypher(
            server, mapping, DedupRegistry(), batch_size=batch, tenant=tenant, strict=strict
        )
    else:
        directory = data_dir(data)
        handle = load_tenant_from_dir(directory, tenant, must_exist=False)
        stats = load_native(handle, mapping, DedupRegistry(), strict=strict)
        save_tenant_to_dir(handle, directory)
    click.echo(json.dumps(stats.to_dict(), indent=1))


@cli.command("gen-corpus")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--scale", type=click.Choice(["small", "medium"]), default="small", show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
def gen_corpus_cmd(seed, scale, output):
    """Generate the synthetic corpora, mapping configs, and manifest."""
    manifest = gen_corpus(seed, scale, output)
    click.echo(
        json.dumps(
            {
                "outdir": output,
                "scale": scale,
                "seed": seed,
                "nodes": manifest.totals["nodes"],
                "edges": manifest.totals["edges"],
            },
            indent=1,
        )
    )


@cli.command("bench")
@click.option("--tenant", default="default", show_default=True)
@click.option("--suite", type=click.Choice(sorted(SUITES)), default="single", show_default=True)
@click.option("--data", default=None)
@click.option("-o", "--report-dir", default=None, type=click.Path(), help="write latency CSV and chart here")
def bench_cmd(tenant, suite, data, report_dir):
    """Run a benchmark suite and print the latency table (median of 5)."""
    handle = load_tenant_from_dir(data_dir(data), tenant)
    try:
        results = run_suite(handle, suite)
    except KgError as exc:
        click.echo(f"benchmark query failed: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)
    click.echo(render_table(results))
    if report_dir:
        for path in write_report(results, report_dir, suite):
            click.echo(f"wrote {path}", err=True)


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except _DATA_FAULTS as exc:
        code = getattr(exc, "code", "error")
        click.echo(f"error: {code}: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except KgError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    main()
