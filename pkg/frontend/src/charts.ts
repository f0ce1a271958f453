/** Hand-rolled SVG charts: line/step curves, histograms, radar, PNG export.
 *
 * Charts only rescale and draw values handed to them; no statistic is
 * computed here. Legend entries toggle series visibility client-side.
 */

const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function seriesColor(index: number): string {
    return PALETTE[index % PALETTE.length];
}

export interface Series {
    name: string;
    points: [number, number][];
    color?: string;
    /** draw as right-continuous steps instead of straight segments */
    step?: boolean;
    dashed?: boolean;
}

export interface ChartOptions {
    width?: number;
    height?: number;
    logX?: boolean;
    logY?: boolean;
    xLabel?: string;
    yLabel?: string;
    /** series names hidden via legend clicks */
    hidden?: Set<string>;
    onToggle?: (name: string, nowHidden: boolean) => void;
}

interface Scale {
    (value: number): number;
}

function makeScale(values: number[], log: boolean, lo: number, hi: number): Scale {
    const usable = log ? values.filter((v) => v > 0) : values;
    let min = Math.min(...usable);
    let max = Math.max(...usable);
    if (!Number.isFinite(min) || !Number.isFinite(max)) {
        min = 0;
        max = 1;
    }
    if (min === max) {
        min -= 1;
        max += 1;
    }
    const fwd = (v: number) => (log ? Math.log10(Math.max(v, Number.MIN_VALUE)) : v);
    const fmin = fwd(min);
    const span = fwd(max) - fmin || 1;
    return (v) => lo + ((fwd(v) - fmin) / span) * (hi - lo);
}

function svgElement<K extends keyof SVGElementTagNameMap>(
    tag: K,
    attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
    const el = document.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) {
        el.setAttribute(key, String(value));
    }
    return el;
}

function axisLabels(svg: SVGSVGElement, opts: ChartOptions, width: number, height: number) {
    if (opts.xLabel) {
        const label = svgElement("text", {
            x: width / 2, y: height - 4, "text-anchor": "middle", class: "axis-label",
        });
        label.textContent = opts.xLabel + (opts.logX ? " (log)" : "");
        svg.appendChild(label);
    }
    if (opts.yLabel) {
        const label = svgElement("text", {
            x: 12, y: height / 2, "text-anchor": "middle",
            transform: `rotate(-90 12 ${height / 2})`, class: "axis-label",
        });
        label.textContent = opts.yLabel + (opts.logY ? " (log)" : "");
        svg.appendChild(label);
    }
}

function renderLegend(
    svg: SVGSVGElement,
    names: string[],
    colors: Map<string, string>,
    hidden: Set<string>,
    width: number,
    onToggle?: (name: string, nowHidden: boolean) => void,
) {
    names.forEach((name, i) => {
        const entry = svgElement("g", { class: "legend-entry", "data-series": name });
        const y = 16 + i * 18;
        const marker = svgElement("rect", {
            x: width - 150, y: y - 9, width: 12, height: 12,
            fill: colors.get(name) ?? "#000",
            opacity: hidden.has(name) ? 0.25 : 1,
        });
        const label = svgElement("text", { x: width - 132, y, class: "legend-label" });
        label.textContent = name;
        if (hidden.has(name)) label.setAttribute("opacity", "0.4");
        entry.appendChild(marker);
        entry.appendChild(label);
        entry.addEventListener("click", () => {
            const nowHidden = !hidden.has(name);
            if (nowHidden) hidden.add(name);
            else hidden.delete(name);
            onToggle?.(name, nowHidden);
        });
        svg.appendChild(entry);
    });
}

/** Render line/step series with a clickable legend; returns the svg node. */
export function renderChart(
    container: HTMLElement,
    series: Series[],
    opts: ChartOptions = {},
): SVGSVGElement {
    const width = opts.width ?? 640;
    const height = opts.height ?? 360;
    const hidden = opts.hidden ?? new Set<string>();
    const svg = svgElement("svg", {
        width, height, viewBox: `0 0 ${width} ${height}`, class: "chart",
    });
    svg.appendChild(svgElement("rect", {
        x: 0, y: 0, width, height, fill: "white", stroke: "#ccc",
    }));

    const visible = series.filter((s) => !hidden.has(s.name));
    const xs = visible.flatMap((s) => s.points.map((p) => p[0]));
    const ys = visible.flatMap((s) => s.points.map((p) => p[1]));
    const colors = new Map(series.map((s, i) => [s.name, s.color ?? seriesColor(i)]));

    if (xs.length > 0) {
        const scaleX = makeScale(xs, !!opts.logX, 50, width - 160);
        const scaleY = makeScale(ys, !!opts.logY, height - 30, 20);
        for (const s of visible) {
            const pieces: string[] = [];
            let previous: [number, number] | null = null;
            for (const [x, y] of s.points) {
                if (opts.logX && x <= 0) continue;
                if (opts.logY && y <= 0) continue;
                if (s.step && previous !== null) {
                    pieces.push(`${scaleX(x)},${scaleY(previous[1])}`);
                }
                pieces.push(`${scaleX(x)},${scaleY(y)}`);
                previous = [x, y];
            }
            const line = svgElement("polyline", {
                points: pieces.join(" "),
                fill: "none",
                stroke: colors.get(s.name) ?? "#000",
                "stroke-width": 2,
                class: "series",
                "data-series": s.name,
            });
            if (s.dashed) line.setAttribute("stroke-dasharray", "6 3");
            const tooltip = svgElement("title");
            tooltip.textContent = s.name;
            line.appendChild(tooltip);
            svg.appendChild(line);
            for (const [x, y] of s.points) {
                if (opts.logX && x <= 0) continue;
                if (opts.logY && y <= 0) continue;
                const dot = svgElement("circle", {
                    cx: scaleX(x), cy: scaleY(y), r: 2.5,
                    fill: colors.get(s.name) ?? "#000",
                    class: "series-point",
                    "data-series": s.name,
                });
                const t = svgElement("title");
                t.textContent = `${s.name}: (${x}, ${y})`;
                dot.appendChild(t);
                svg.appendChild(dot);
            }
        }
    }
    axisLabels(svg, opts, width, height);
    renderLegend(svg, series.map((s) => s.name), colors, hidden, width, opts.onToggle);
    container.replaceChildren(svg);
    return svg;
}

export interface HistogramSeries {
    name: string;
    bins: { lo: number; hi: number; count: number }[];
    color?: string;
}

/** Overlayed or separate per-algorithm histograms. */
export function renderHistogram(
    container: HTMLElement,
    series: HistogramSeries[],
    mode: "overlay" | "separate",
    opts: ChartOptions = {},
): void {
    container.replaceChildren();
    const hidden = opts.hidden ?? new Set<string>();
    const groups = mode === "overlay" ? [series] : series.map((s) => [s]);
    for (const group of groups) {
        const panel = document.createElement("div");
        panel.className = "histogram-panel";
        const width = opts.width ?? 640;
        const height = opts.height ?? 280;
        const svg = svgElement("svg", {
            width, height, viewBox: `0 0 ${width} ${height}`, class: "chart histogram",
        });
        svg.appendChild(svgElement("rect", {
            x: 0, y: 0, width, height, fill: "white", stroke: "#ccc",
        }));
        const visible = group.filter((s) => !hidden.has(s.name));
        const edges = visible.flatMap((s) => s.bins.flatMap((b) => [b.lo, b.hi]));
        const counts = visible.flatMap((s) => s.bins.map((b) => b.count));
        const colors = new Map(series.map((s, i) => [s.name, s.color ?? seriesColor(i)]));
        if (edges.length > 0) {
            const scaleX = makeScale(edges, false, 50, width - 160);
            const scaleY = makeScale([0, ...counts], false, height - 30, 20);
            for (const s of visible) {
                for (const bin of s.bins) {
                    const x0 = scaleX(bin.lo);
                    const x1 = Math.max(scaleX(bin.hi), x0 + 1);
                    const rect = svgElement("rect", {
                        x: x0,
                        y: scaleY(bin.count),
                        width: x1 - x0,
                        height: scaleY(0) - scaleY(bin.count),
                        fill: colors.get(s.name) ?? "#000",
                        opacity: mode === "overlay" ? 0.55 : 0.9,
                        class: "bar",
                        "data-series": s.name,
                    });
                    const t = svgElement("title");
                    t.textContent = `${s.name}: [${bin.lo}, ${bin.hi}) -> ${bin.count}`;
                    rect.appendChild(t);
                    svg.appendChild(rect);
                }
            }
        }
        renderLegend(
            svg, group.map((s) => s.name), colors, hidden, width, opts.onToggle,
        );
        panel.appendChild(svg);
        container.appendChild(panel);
    }
}

export interface RadarSeries {
    name: string;
    /** one value in [0, 1] per axis */
    values: number[];
    color?: string;
}

/** Radar plot, one axis per target value, radius = normalized AUC. */
export function renderRadar(
    container: HTMLElement,
    axes: string[],
    series: RadarSeries[],
    opts: ChartOptions = {},
): SVGSVGElement {
    const size = opts.width ?? 420;
    const hidden = opts.hidden ?? new Set<string>();
    const center = size / 2;
    const radius = size / 2 - 60;
    const svg = svgElement("svg", {
        width: size + 160, height: size, viewBox: `0 0 ${size + 160} ${size}`,
        class: "chart radar",
    });
    const angle = (i: number) => (Math.PI * 2 * i) / axes.length - Math.PI / 2;
    for (const ring of [0.25, 0.5, 0.75, 1.0]) {
        const ringPoints = axes
            .map((_, i) => {
                const a = angle(i);
                return `${center + Math.cos(a) * radius * ring},${center + Math.sin(a) * radius * ring}`;
            })
            .join(" ");
        svg.appendChild(svgElement("polygon", {
            points: ringPoints, fill: "none", stroke: "#ddd", class: "radar-ring",
        }));
    }
    axes.forEach((label, i) => {
        const a = angle(i);
        const text = svgElement("text", {
            x: center + Math.cos(a) * (radius + 16),
            y: center + Math.sin(a) * (radius + 16),
            "text-anchor": "middle",
            class: "radar-axis-label",
        });
        text.textContent = label;
        svg.appendChild(text);
    });
    const colors = new Map(series.map((s, i) => [s.name, s.color ?? seriesColor(i)]));
    for (const s of series) {
        if (hidden.has(s.name)) continue;
        const pts = s.values
            .map((v, i) => {
                const a = angle(i);
                const r = radius * Math.max(0, Math.min(1, v));
                return `${center + Math.cos(a) * r},${center + Math.sin(a) * r}`;
            })
            .join(" ");
        const polygon = svgElement("polygon", {
            points: pts,
            fill: colors.get(s.name) ?? "#000",
            "fill-opacity": 0.15,
            stroke: colors.get(s.name) ?? "#000",
            "stroke-width": 2,
            class: "series radar-series",
            "data-series": s.name,
        });
        const t = svgElement("title");
        t.textContent = `${s.name}: ${s.values.map((v) => v.toFixed(3)).join(", ")}`;
        polygon.appendChild(t);
        svg.appendChild(polygon);
    }
    renderLegend(svg, series.map((s) => s.name), colors, hidden, size + 160, opts.onToggle);
    container.replaceChildren(svg);
    return svg;
}

/** Rasterize an SVG chart to a PNG blob (browser only; needs canvas). */
export async function chartToPng(svg: SVGSVGElement): Promise<Blob> {
    const xml = new XMLSerializer().serializeToString(svg);
    const url = "data:image/svg+xml;charset=utf-8," + encodeURIComponent(xml);
    const image = new Image();
    await new Promise<void>((resolve, reject) => {
        image.onload = () => resolve();
        image.onerror = () => reject(new Error("could not rasterize the chart"));
        image.src = url;
    });
    const canvas = document.createElement("canvas");
    canvas.width = Number(svg.getAttribute("width")) || 640;
    canvas.height = Number(svg.getAttribute("height")) || 360;
    const context = canvas.getContext("2d");
    if (!context) throw new Error("canvas 2d context unavailable");
    context.drawImage(image, 0, 0);
    return new Promise((resolve, reject) => {
        canvas.toBlob((blob) => {
            if (blob) resolve(blob);
            else reject(new Error("PNG encoding failed"));
        }, "image/png");
    });
}
