import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { QuerySequencer, debounce, gridParams, validGrid } from "../src/state";

describe("debounce", () => {
    beforeEach(() => {
        vi.useFakeTimers();
    });
    afterEach(() => {
        vi.useRealTimers();
    });

    it("collapses a burst into one trailing call", () => {
        const calls: number[] = [];
        const fn = debounce((v: number) => calls.push(v), 100);
        fn(1);
        fn(2);
        fn(3);
        vi.advanceTimersByTime(99);
        expect(calls).toEqual([]);
        vi.advanceTimersByTime(1);
        expect(calls).toEqual([3]);
    });

    it("fires again for a later burst", () => {
        const calls: number[] = [];
        const fn = debounce((v: number) => calls.push(v), 50);
        fn(1);
        vi.advanceTimersByTime(50);
        fn(2);
        vi.advanceTimersByTime(50);
        expect(calls).toEqual([1, 2]);
    });

    it("cancel discards the pending call", () => {
        const calls: number[] = [];
        const fn = debounce((v: number) => calls.push(v), 50);
        fn(1);
        fn.cancel();
        vi.advanceTimersByTime(100);
        expect(calls).toEqual([]);
    });
});

describe("QuerySequencer", () => {
    it("accepts only the newest ticket", () => {
        const sequencer = new QuerySequencer();
        const first = sequencer.next();
        const second = sequencer.next();
        expect(sequencer.isCurrent(first)).toBe(false);
        expect(sequencer.isCurrent(second)).toBe(true);
    });
});

describe("grid controls", () => {
    it("builds params only for filled fields", () => {
        expect(gridParams({ fmin: "0", fmax: "", step: "2" })).toEqual({
            fmin: "0",
            step: "2",
        });
    });

    it("validates ranges client-side", () => {
        expect(validGrid({ fmin: "0", fmax: "10", step: "1" })).toBeNull();
        expect(validGrid({ fmin: "5", fmax: "1", step: "1" })).toMatch(/f_min/);
        expect(validGrid({ fmin: "", fmax: "", step: "0" })).toMatch(/step/);
        expect(validGrid({ fmin: "abc", fmax: "", step: "" })).toMatch(/numbers/);
    });
});
