// Typed client for the kgfed HTTP service. The console only ever talks to
// the documented endpoints: /api/schema, /api/query, /api/tenants.

export interface LabelEntry {
  name: string;
  count: number;
  properties: string[];
  indexed: string[];
}

export interface EdgeTypeEntry {
  name: string;
  count: number;
  src_label: string | null;
  dst_label: string | null;
}

export interface SchemaDoc {
  labels: LabelEntry[];
  edge_types: EdgeTypeEntry[];
}

export interface QueryResult {
  columns: string[];
  rows: unknown[][];
  latency_ms: number;
}

export interface ApiError {
  code: string;
  message: string;
  line?: number;
  column?: number;
}

export class QueryFailure extends Error {
  constructor(public status: number, public detail: ApiError) {
    super(detail.message);
  }
}

export class NetworkFailure extends Error {}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = await resp.json();
    if (body && body.error) return body.error as ApiError;
  } catch {
    /* non-JSON error body */
  }
  return { code: `http-${resp.status}`, message: resp.statusText };
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path);
    } catch (err) {
      throw new NetworkFailure(String(err));
    }
    if (!resp.ok) throw new QueryFailure(resp.status, await parseError(resp));
    return (await resp.json()) as T;
  }

  async tenants(): Promise<string[]> {
    const doc = await this.get<{ tenants: string[] }>("/api/tenants");
    return doc.tenants;
  }

  async schema(tenant: string): Promise<SchemaDoc> {
    return this.get<SchemaDoc>(`/api/schema?tenant=${encodeURIComponent(tenant)}`);
  }

  async query(
    tenant: string,
    query: string,
    params: Record<string, unknown> = {},
  ): Promise<QueryResult> {
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + "/api/query", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ tenant, query, params }),
      });
    } catch (err) {
      throw new NetworkFailure(String(err));
    }
    if (!resp.ok) throw new QueryFailure(resp.status, await parseError(resp));
    return (await resp.json()) as QueryResult;
  }

  async explain(tenant: string, query: string): Promise<string> {
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + "/api/query", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ tenant, query, explain: true }),
      });
    } catch (err) {
      throw new NetworkFailure(String(err));
    }
    if (!resp.ok) throw new QueryFailure(resp.status, await parseError(resp));
    const doc = (await resp.json()) as { plan: string };
    return doc.plan;
  }
}
