/** Typed client for the statistics HTTP API. */

export interface TableResponse {
    columns: string[];
    rows: Record<string, unknown>[];
    params: Record<string, string | number>;
}

export interface DatasetEntry {
    algorithm: string;
    function_id: number;
    dimension: number;
    runs: number;
    parameters: string[];
}

export interface DatasetInfo {
    id: string;
    source: string;
    efficient: boolean;
    cap: number | null;
    entries: DatasetEntry[];
    warnings: string[];
}

export interface UploadResponse {
    id: string;
    report: DatasetInfo;
}

export class ApiError extends Error {
    constructor(message: string, readonly detail: string = "") {
        super(message);
    }
}

async function parseError(response: Response): Promise<never> {
    let message = `${response.status} ${response.statusText}`;
    let detail = "";
    try {
        const body = await response.json();
        if (body && typeof body.error === "string") {
            message = body.error;
            detail = typeof body.detail === "string" ? body.detail : "";
        }
    } catch {
        // non-JSON error body; keep the status line
    }
    throw new ApiError(message, detail);
}

export type QueryParams = Record<string, string>;

export class ApiClient {
    constructor(private readonly base: string = "") {}

    private url(path: string, params?: QueryParams): string {
        const query = params ? new URLSearchParams(params).toString() : "";
        return this.base + path + (query ? `?${query}` : "");
    }

    async listDatasets(): Promise<DatasetInfo[]> {
        const response = await fetch(this.url("/api/datasets"));
        if (!response.ok) await parseError(response);
        return (await response.json()).datasets;
    }

    async uploadArchive(file: File): Promise<UploadResponse> {
        const form = new FormData();
        form.append("file", file, file.name);
        const response = await fetch(this.url("/api/datasets"), {
            method: "POST",
            body: form,
        });
        if (!response.ok) await parseError(response);
        return response.json();
    }

    async registerPath(path: string): Promise<UploadResponse> {
        const response = await fetch(this.url("/api/datasets"), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ path }),
        });
        if (!response.ok) await parseError(response);
        return response.json();
    }

    async deleteDataset(id: string): Promise<void> {
        const response = await fetch(this.url(`/api/datasets/${id}`), { method: "DELETE" });
        if (!response.ok) await parseError(response);
    }

    async setEfficient(id: string, enabled: boolean, cap: number): Promise<DatasetInfo> {
        const response = await fetch(this.url(`/api/datasets/${id}/efficient`), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ enabled, cap }),
        });
        if (!response.ok) await parseError(response);
        return response.json();
    }

    async query(id: string, statistic: string, params: QueryParams): Promise<TableResponse> {
        const response = await fetch(this.url(`/api/datasets/${id}/${statistic}`, params));
        if (!response.ok) await parseError(response);
        return response.json();
    }

    /** Raw CSV bytes of a statistic, exactly as the export command writes them. */
    async queryCsv(id: string, statistic: string, params: QueryParams): Promise<Blob> {
        const response = await fetch(
            this.url(`/api/datasets/${id}/${statistic}`, { ...params, format: "csv" }),
        );
        if (!response.ok) await parseError(response);
        return response.blob();
    }
}
