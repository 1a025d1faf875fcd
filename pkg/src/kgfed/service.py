"""HTTP facade over the graph store.

Endpoints:
    POST /api/query            {tenant?, query, params?, explain?}
    GET  /api/schema?tenant=T
    POST /api/snapshot/import?tenant=T   (body: gzip snapshot bytes)
    GET  /api/snapshot/export?tenant=T
    POST /api/tenants          {name}
    GET  /api/tenants
    GET  /health

Errors use a JSON envelope {"error": {"code", "message", "line"?, "column"?}}.
Handlers are stateless; per-tenant reader/writer discipline comes from the
store, so an import on one tenant never blocks reads on another. When a
console asset directory is configured (KGFED_CONSOLE_DIR or ./frontend/dist),
it is served under /console.
"""

from __future__ import annotations

import io
import os
from typing import Any, Dict, Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .cypher import execute, explain as explain_query, parse
from .cypher.executor import ExecutionError
from .cypher.planner import plan as build_plan
from .errors import (
    CypherSyntaxError,
    DuplicateTenantError,
    KgError,
    MissingParameterError,
    SnapshotFormatError,
    UnknownTenantError,
)
from .snapshot import export_snapshot, import_snapshot
from .store import GraphStore


class QueryRequest(BaseModel):
    tenant: str = "default"
    query: str
    params: Dict[str, Any] = {}
    explain: bool = False


class TenantRequest(BaseModel):
    name: str


class IndexRequest(BaseModel):
    tenant: str = "default"
    label: str
    properties: list[str]


def _error_response(status: int, code: str, message: str, **extra: Any) -> JSONResponse:
    body = {"error": {"code": code, "message": message, **extra}}
    return JSONResponse(status_code=status, content=body)


def create_app(store: Optional[GraphStore] = None, console_dir: Optional[str] = None) -> FastAPI:
    store = store if store is not None else GraphStore()
    app = FastAPI(title="kgfed", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(UnknownTenantError)
    async def _unknown_tenant(_req: Request, exc: UnknownTenantError):
        return _error_response(404, exc.code, str(exc))

    @app.exception_handler(KgError)
    async def _kg_error(_req: Request, exc: KgError):
        return _error_response(400, exc.code, str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "tenants": len(store)}

    @app.post("/api/tenants")
    def create_tenant(body: TenantRequest):
        try:
            store.create_tenant(body.name)
        except DuplicateTenantError as exc:
            return _error_response(409, exc.code, str(exc))
        return {"name": body.name, "created": True}

    @app.get("/api/tenants")
    def list_tenants():
        return {"tenants": store.list_tenants()}

    @app.get("/api/schema")
    def schema(tenant: str = Query(default="default")):
        return store.get_tenant(tenant).schema().to_dict()

    @app.post("/api/schema/index")
    def declare_index(body: IndexRequest):
        # loaders push their mapping's index declarations ahead of the data
        handle = store.get_tenant(body.tenant)
        for prop in body.properties:
            handle.declare_index(body.label, prop)
        return {"label": body.label, "indexed": sorted(handle.indexed_properties(body.label))}

    @app.post("/api/query")
    def query(body: QueryRequest):
        if not body.query.strip():
            return _error_response(400, "empty-query", "query must be non-empty")
        handle = store.get_tenant(body.tenant)
        try:
            if body.explain:
                return {"plan": explain_query(handle, body.query)}
            ast = parse(body.query)
            plan_ = build_plan(ast, handle.schema())
            table = execute(handle, plan_, body.params)
        except CypherSyntaxError as exc:
            return _error_response(
                400, exc.code, str(exc), line=exc.line, column=exc.column
            )
        except MissingParameterError as exc:
            return _error_response(422, exc.code, str(exc))
        except ExecutionError as exc:
            return _error_response(400, exc.code, str(exc))
        return table.to_dict()

    @app.post("/api/snapshot/import")
    async def snapshot_import(request: Request, tenant: str = Query(default="default")):
        handle = store.get_tenant(tenant)
        body = await request.body()
        if not body:
            return _error_response(400, "malformed-snapshot", "empty request body")
        try:
            stats = import_snapshot(handle, io.BytesIO(body))
        except SnapshotFormatError as exc:
            return _error_response(400, exc.fault, str(exc), line=exc.line)
        return stats.to_dict()

    @app.get("/api/snapshot/export")
    def snapshot_export(tenant: str = Query(default="default")):
        handle = store.get_tenant(tenant)
        buf = io.BytesIO()
        export_snapshot(handle, buf)
        buf.seek(0)
        headers = {
            "Content-Disposition": f'attachment; filename="{tenant}.sgsnap"'
        }
        return StreamingResponse(buf, media_type="application/gzip", headers=headers)

    console = console_dir or os.environ.get("KGFED_CONSOLE_DIR")
    if console is None and os.path.isdir(os.path.join("frontend", "dist")):
        console = os.path.join("frontend", "dist")
    if console and os.path.isdir(console):
        app.mount("/console", StaticFiles(directory=console, html=True), name="console")

    return app
