import { describe, expect, it } from "vitest";

import { renderChart, renderHistogram, renderRadar } from "../src/charts";

const SERIES = [
    { name: "alpha", points: [[1, 0.0], [5, 0.5], [9, 1.0]] as [number, number][] },
    { name: "beta", points: [[1, 0.0], [7, 0.25]] as [number, number][] },
];

describe("renderChart", () => {
    it("draws one polyline per visible series", () => {
        const host = document.createElement("div");
        const svg = renderChart(host, SERIES);
        const lines = svg.querySelectorAll("polyline.series");
        expect(lines.length).toBe(2);
        expect(lines[0].getAttribute("data-series")).toBe("alpha");
    });

    it("hides series listed in the hidden set", () => {
        const host = document.createElement("div");
        const svg = renderChart(host, SERIES, { hidden: new Set(["beta"]) });
        const lines = svg.querySelectorAll("polyline.series");
        expect(lines.length).toBe(1);
        expect(lines[0].getAttribute("data-series")).toBe("alpha");
    });

    it("legend click reports the toggle without touching the network", () => {
        const host = document.createElement("div");
        const hidden = new Set<string>();
        const toggles: [string, boolean][] = [];
        const svg = renderChart(host, SERIES, {
            hidden,
            onToggle: (name, nowHidden) => toggles.push([name, nowHidden]),
        });
        const entry = svg.querySelector('g.legend-entry[data-series="beta"]')!;
        entry.dispatchEvent(new MouseEvent("click"));
        expect(toggles).toEqual([["beta", true]]);
        expect(hidden.has("beta")).toBe(true);
    });

    it("step mode inserts the horizontal riser points", () => {
        const host = document.createElement("div");
        const svg = renderChart(host, [{ ...SERIES[0], step: true }]);
        const line = svg.querySelector("polyline.series")!;
        const pointCount = line.getAttribute("points")!.trim().split(/\s+/).length;
        expect(pointCount).toBe(3 + 2); // one riser between each pair of knots
    });

    it("log axes drop non-positive values instead of crashing", () => {
        const host = document.createElement("div");
        const svg = renderChart(
            host,
            [{ name: "a", points: [[0, 1], [10, 2], [100, 3]] }],
            { logX: true },
        );
        const line = svg.querySelector("polyline.series")!;
        expect(line.getAttribute("points")!.trim().split(/\s+/).length).toBe(2);
    });
});

describe("renderHistogram", () => {
    const bins = [
        { name: "alpha", bins: [{ lo: 0, hi: 1, count: 3 }, { lo: 1, hi: 2, count: 5 }] },
        { name: "beta", bins: [{ lo: 0, hi: 2, count: 4 }] },
    ];

    it("overlay mode draws all algorithms in one panel", () => {
        const host = document.createElement("div");
        renderHistogram(host, bins, "overlay");
        expect(host.querySelectorAll(".histogram-panel").length).toBe(1);
        expect(host.querySelectorAll("rect.bar").length).toBe(3);
    });

    it("separate mode gives each algorithm its own panel", () => {
        const host = document.createElement("div");
        renderHistogram(host, bins, "separate");
        expect(host.querySelectorAll(".histogram-panel").length).toBe(2);
    });
});

describe("renderRadar", () => {
    it("draws one polygon per series over the target axes", () => {
        const host = document.createElement("div");
        const svg = renderRadar(host, ["0", "4", "8"], [
            { name: "alpha", values: [1, 0.5, 0.2] },
            { name: "beta", values: [0.9, 0.4, 0.1] },
        ]);
        expect(svg.querySelectorAll("polygon.radar-series").length).toBe(2);
        const labels = [...svg.querySelectorAll("text.radar-axis-label")].map(
            (t) => t.textContent,
        );
        expect(labels).toEqual(["0", "4", "8"]);
    });
});
