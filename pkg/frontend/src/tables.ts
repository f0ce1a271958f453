/** Table grid rendering and CSV download plumbing. */

import type { TableResponse } from "./api";

export function formatCell(value: unknown): string {
    if (value === null || value === undefined) return "";
    if (typeof value === "number") {
        if (Number.isInteger(value)) return String(value);
        return String(Math.round(value * 1e6) / 1e6);
    }
    return String(value);
}

/**
 * Render a response as a plain table. Every cell carries the raw service
 * value in data-value, so displayed data is verifiably identical to the
 * API response.
 */
export function renderTable(container: HTMLElement, table: TableResponse): HTMLTableElement {
    const el = document.createElement("table");
    el.className = "data-grid";
    const head = el.createTHead().insertRow();
    for (const column of table.columns) {
        const cell = document.createElement("th");
        cell.textContent = column;
        head.appendChild(cell);
    }
    const body = el.createTBody();
    for (const row of table.rows) {
        const tr = body.insertRow();
        for (const column of table.columns) {
            const value = row[column];
            const cell = tr.insertCell();
            cell.textContent = formatCell(value);
            cell.dataset.value = value === null || value === undefined
                ? ""
                : JSON.stringify(value);
        }
    }
    container.replaceChildren(el);
    return el;
}

export type BlobSaver = (blob: Blob, filename: string) => void;

/** Default saver: anchor click with an object URL. */
export const saveBlob: BlobSaver = (blob, filename) => {
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement("a");
    anchor.href = url;
    anchor.download = filename;
    document.body.appendChild(anchor);
    anchor.click();
    anchor.remove();
    URL.revokeObjectURL(url);
};
