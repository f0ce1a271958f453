/** View state plumbing: debounced queries and stale-response rejection. */

export interface GridControls {
    fmin: string;
    fmax: string;
    step: string;
}

export interface Debounced<A extends unknown[]> {
    (...args: A): void;
    cancel(): void;
    flush(): void;
}

/** Collapse bursts of control changes into a single trailing call. */
export function debounce<A extends unknown[]>(
    fn: (...args: A) => void,
    waitMs: number,
): Debounced<A> {
    let timer: ReturnType<typeof setTimeout> | null = null;
    let pending: A | null = null;
    const debounced = (...args: A) => {
        pending = args;
        if (timer !== null) clearTimeout(timer);
        timer = setTimeout(() => {
            timer = null;
            const args2 = pending as A;
            pending = null;
            fn(...args2);
        }, waitMs);
    };
    debounced.cancel = () => {
        if (timer !== null) clearTimeout(timer);
        timer = null;
        pending = null;
    };
    debounced.flush = () => {
        if (timer === null) return;
        clearTimeout(timer);
        timer = null;
        const args = pending as A;
        pending = null;
        fn(...args);
    };
    return debounced;
}

/**
 * Monotone ticket counter: a response is applied only when no newer
 * request was issued in the meantime, so stale responses are discarded.
 */
export class QuerySequencer {
    private issued = 0;

    next(): number {
        return ++this.issued;
    }

    isCurrent(ticket: number): boolean {
        return ticket === this.issued;
    }
}

export function gridParams(grid: GridControls): Record<string, string> {
    const params: Record<string, string> = {};
    if (grid.fmin !== "") params.fmin = grid.fmin;
    if (grid.fmax !== "") params.fmax = grid.fmax;
    if (grid.step !== "") params.step = grid.step;
    return params;
}

export function validGrid(grid: GridControls): string | null {
    const fmin = grid.fmin === "" ? null : Number(grid.fmin);
    const fmax = grid.fmax === "" ? null : Number(grid.fmax);
    const step = grid.step === "" ? null : Number(grid.step);
    if ([fmin, fmax, step].some((v) => v !== null && Number.isNaN(v))) {
        return "range values must be numbers";
    }
    if (fmin !== null && fmax !== null && fmin > fmax) {
        return "f_min must not exceed f_max";
    }
    if (step !== null && step <= 0) {
        return "step must be positive";
    }
    return null;
}
