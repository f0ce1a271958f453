/** Fake fetch backed by responses recorded from the live service. */

import fs from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

interface ManifestEntry {
    fixture: string;
    method: string;
    path: string;
    params: Record<string, string>;
    status: number;
    contentType: string;
}

export function fixtureBytes(name: string): Buffer {
    return fs.readFileSync(path.join(FIXTURES, name));
}

export function fixtureJson<T = any>(name: string): T {
    return JSON.parse(fixtureBytes(name).toString("utf-8"));
}

function sortedParams(params: Record<string, string> | URLSearchParams): string {
    const entries = params instanceof URLSearchParams
        ? [...params.entries()]
        : Object.entries(params);
    return entries
        .map(([k, v]) => `${k}=${v}`)
        .sort()
        .join("&");
}

export interface RecordedCall {
    method: string;
    url: string;
    pathname: string;
}

export class FakeFetch {
    readonly calls: RecordedCall[] = [];
    private readonly manifest: ManifestEntry[];
    private readonly original = globalThis.fetch;

    constructor() {
        this.manifest = fixtureJson<ManifestEntry[]>("manifest.json");
    }

    install(): void {
        globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
            const url = typeof input === "string" ? input : input instanceof URL
                ? input.toString()
                : input.url;
            const method = (init?.method ?? "GET").toUpperCase();
            const parsed = new URL(url, "http://localhost");
            this.calls.push({ method, url, pathname: parsed.pathname });
            const wanted = sortedParams(parsed.searchParams);
            const match = this.manifest.find(
                (entry) =>
                    entry.method === method &&
                    entry.path === parsed.pathname &&
                    sortedParams(entry.params) === wanted,
            );
            if (!match) {
                return new Response(
                    JSON.stringify({ error: `no fixture for ${method} ${url}` }),
                    { status: 404, headers: { "content-type": "application/json" } },
                );
            }
            return new Response(new Uint8Array(fixtureBytes(match.fixture)), {
                status: match.status,
                headers: { "content-type": match.contentType },
            });
        }) as typeof fetch;
    }

    restore(): void {
        globalThis.fetch = this.original;
    }

    /** Calls that hit statistic or listing endpoints (network queries). */
    queryCount(): number {
        return this.calls.filter((c) => c.method === "GET").length;
    }
}

export function flushMicrotasks(): Promise<void> {
    return new Promise((resolve) => {
        setTimeout(resolve, 0);
    });
}
