/** Dashboard application: upload, fixed-target / fixed-budget, parameters.
 *
 * Every tab shows exactly one data view at a time, so a control change
 * issues exactly one (debounced) service query; legend clicks and series
 * switches only filter the cached response client-side. Stale responses
 * are discarded via the query sequencer. No statistic is computed in the
 * browser beyond axis scaling.
 */

import { ApiClient, ApiError, DatasetInfo, QueryParams, TableResponse } from "./api";
import {
    HistogramSeries,
    RadarSeries,
    Series,
    chartToPng,
    renderChart,
    renderHistogram,
    renderRadar,
} from "./charts";
import { BlobSaver, renderTable, saveBlob } from "./tables";
import { Debounced, GridControls, QuerySequencer, debounce, gridParams, validGrid } from "./state";

export type TabId =
    | "upload"
    | "ft-summary" | "ft-runtime" | "ft-pmf" | "ft-ecdf"
    | "fb-summary" | "fb-value" | "fb-pmf" | "fb-ecdf"
    | "params";

const TAB_LABELS: Record<TabId, string> = {
    "upload": "Upload",
    "ft-summary": "FT: Data Summary",
    "ft-runtime": "FT: Expected Runtime",
    "ft-pmf": "FT: Probability Mass Function",
    "ft-ecdf": "FT: Cumulative Distribution",
    "fb-summary": "FB: Data Summary",
    "fb-value": "FB: Expected Target Value",
    "fb-pmf": "FB: Probability Mass Function",
    "fb-ecdf": "FB: Cumulative Distribution",
    "params": "Parameter Evolution",
};

interface TabState {
    grid: GridControls;
    budgets: string;
    view: string;
    orientation: "wide" | "long";
    histogramMode: "overlay" | "separate";
    logX: boolean;
    logY: boolean;
    series: { mean: boolean; median: boolean; sd: boolean };
    target: string;
    budget: string;
    parameter: string;
    hidden: Set<string>;
    last: TableResponse | null;
    lastStatistic: string;
    lastParams: QueryParams;
}

function freshTabState(): TabState {
    return {
        grid: { fmin: "", fmax: "", step: "" },
        budgets: "",
        view: "",
        orientation: "wide",
        histogramMode: "overlay",
        logX: false,
        logY: false,
        series: { mean: true, median: true, sd: false },
        target: "",
        budget: "",
        parameter: "",
        hidden: new Set(),
        last: null,
        lastStatistic: "",
        lastParams: {},
    };
}

const SUBVIEWS: Partial<Record<TabId, [string, string][]>> = {
    "ft-summary": [["stats", "Summary statistics"], ["samples", "Runtime samples"]],
    "fb-summary": [["stats", "Summary statistics"], ["samples", "Value samples"]],
    "ft-pmf": [["histogram", "Histogram"], ["density", "Density"]],
    "fb-pmf": [["histogram", "Histogram"], ["density", "Density"]],
    "ft-ecdf": [["curves", "Aggregated ECDF"], ["auc", "Area under ECDF"], ["single", "Single target"]],
    "fb-ecdf": [["curves", "Aggregated ECDF"]],
    "params": [["curve", "Curves"], ["table", "Table"]],
};

export interface DashboardOptions {
    api?: ApiClient;
    saver?: BlobSaver;
    debounceMs?: number;
}

export class Dashboard {
    readonly api: ApiClient;
    private readonly saver: BlobSaver;
    private readonly sequencer = new QuerySequencer();
    private readonly refreshSoon: Debounced<[]>;

    datasets: DatasetInfo[] = [];
    activeDataset: string | null = null;
    activeTab: TabId = "upload";
    tabs = new Map<TabId, TabState>();

    private nav!: HTMLElement;
    private banner!: HTMLElement;
    private datasetSelect!: HTMLSelectElement;
    private controlsHost!: HTMLElement;
    private viewHost!: HTMLElement;
    private promptLog!: HTMLElement;

    constructor(private readonly root: HTMLElement, options: DashboardOptions = {}) {
        this.api = options.api ?? new ApiClient();
        this.saver = options.saver ?? saveBlob;
        this.refreshSoon = debounce(() => void this.refresh(), options.debounceMs ?? 250);
        for (const id of Object.keys(TAB_LABELS) as TabId[]) {
            const state = freshTabState();
            state.view = SUBVIEWS[id]?.[0]?.[0] ?? "";
            this.tabs.set(id, state);
        }
        this.buildChrome();
    }

    // ------------------------------------------------------------------
    // Chrome

    private buildChrome(): void {
        this.root.replaceChildren();
        const header = document.createElement("header");
        const title = document.createElement("h1");
        title.textContent = "iohbench";
        header.appendChild(title);

        const pickerLabel = document.createElement("label");
        pickerLabel.textContent = "Dataset ";
        this.datasetSelect = document.createElement("select");
        this.datasetSelect.id = "dataset-select";
        this.datasetSelect.addEventListener("change", () => {
            this.activeDataset = this.datasetSelect.value || null;
            this.invalidateCaches();
            this.renderActiveTab();
        });
        pickerLabel.appendChild(this.datasetSelect);
        header.appendChild(pickerLabel);
        this.root.appendChild(header);

        this.banner = document.createElement("div");
        this.banner.className = "banner hidden";
        this.root.appendChild(this.banner);

        this.nav = document.createElement("nav");
        for (const [id, label] of Object.entries(TAB_LABELS) as [TabId, string][]) {
            const button = document.createElement("button");
            button.textContent = label;
            button.dataset.tab = id;
            button.addEventListener("click", () => this.switchTab(id));
            this.nav.appendChild(button);
        }
        this.root.appendChild(this.nav);

        const main = document.createElement("main");
        this.controlsHost = document.createElement("div");
        this.controlsHost.className = "controls";
        this.viewHost = document.createElement("div");
        this.viewHost.className = "view";
        main.appendChild(this.controlsHost);
        main.appendChild(this.viewHost);
        this.root.appendChild(main);

        this.promptLog = document.createElement("ul");
        this.promptLog.className = "prompt-log";
        this.renderActiveTab();
    }

    private showBanner(message: string): void {
        this.banner.textContent = message;
        this.banner.classList.remove("hidden");
    }

    private clearBanner(): void {
        this.banner.classList.add("hidden");
        this.banner.textContent = "";
    }

    private invalidateCaches(): void {
        for (const state of this.tabs.values()) {
            state.last = null;
        }
    }

    switchTab(id: TabId): void {
        this.activeTab = id;
        for (const button of this.nav.querySelectorAll("button")) {
            button.classList.toggle("active", button.dataset.tab === id);
        }
        this.renderActiveTab();
    }

    private state(): TabState {
        return this.tabs.get(this.activeTab)!;
    }

    // ------------------------------------------------------------------
    // Dataset management

    async refreshDatasets(): Promise<void> {
        try {
            this.datasets = await this.api.listDatasets();
            this.clearBanner();
        } catch (error) {
            this.showBanner(`service unreachable: ${(error as Error).message}`);
            return;
        }
        const previous = this.activeDataset;
        this.datasetSelect.replaceChildren();
        for (const dataset of this.datasets) {
            const option = document.createElement("option");
            option.value = dataset.id;
            option.textContent = `${dataset.id} (${dataset.source})`;
            this.datasetSelect.appendChild(option);
        }
        if (this.datasets.length > 0) {
            const keep = this.datasets.some((d) => d.id === previous);
            this.activeDataset = keep ? previous : this.datasets[this.datasets.length - 1].id;
            this.datasetSelect.value = this.activeDataset!;
        } else {
            this.activeDataset = null;
        }
        if (this.activeTab === "upload") this.renderActiveTab();
    }

    private activeInfo(): DatasetInfo | null {
        return this.datasets.find((d) => d.id === this.activeDataset) ?? null;
    }

    private parameterNames(): string[] {
        const info = this.activeInfo();
        if (!info) return [];
        const names = new Set<string>();
        for (const entry of info.entries) {
            for (const name of entry.parameters ?? []) names.add(name);
        }
        return [...names].sort();
    }

    // ------------------------------------------------------------------
    // Controls

    private renderActiveTab(): void {
        this.refreshSoon.cancel();
        if (this.activeTab === "upload") {
            this.renderUploadTab();
            return;
        }
        this.buildControls();
        if (!this.activeDataset) {
            this.viewHost.replaceChildren(
                placeholder("No dataset selected; upload or register one first."),
            );
            return;
        }
        void this.refresh();
    }

    private buildControls(): void {
        const state = this.state();
        this.controlsHost.replaceChildren();
        const bar = document.createElement("div");
        bar.className = "control-bar";

        const subviews = SUBVIEWS[this.activeTab];
        if (subviews && subviews.length > 1) {
            const viewSelect = document.createElement("select");
            viewSelect.className = "subview-select";
            for (const [value, label] of subviews) {
                const option = document.createElement("option");
                option.value = value;
                option.textContent = label;
                viewSelect.appendChild(option);
            }
            viewSelect.value = state.view;
            viewSelect.addEventListener("change", () => {
                state.view = viewSelect.value;
                state.last = null;
                this.renderActiveTab();
            });
            bar.appendChild(labelled("View", viewSelect));
        }

        const usesGrid = this.statisticPlan().usesGrid;
        const usesBudgets = this.statisticPlan().usesBudgets;
        if (usesGrid) {
            for (const key of ["fmin", "fmax", "step"] as const) {
                const input = document.createElement("input");
                input.type = "number";
                input.className = `grid-${key}`;
                input.value = state.grid[key];
                input.addEventListener("input", () => {
                    state.grid[key] = input.value;
                    this.queueRefresh();
                });
                bar.appendChild(labelled(key === "step" ? "Δ" : key, input));
            }
        }
        if (usesBudgets) {
            const input = document.createElement("input");
            input.type = "text";
            input.className = "budget-list";
            input.placeholder = "e.g. 1,10,100";
            input.value = state.budgets;
            input.addEventListener("input", () => {
                state.budgets = input.value;
                this.queueRefresh();
            });
            bar.appendChild(labelled("budgets", input));
        }
        if (this.statisticPlan().usesSingleTarget) {
            const input = document.createElement("input");
            input.type = "number";
            input.className = "single-target";
            input.value = state.target;
            input.addEventListener("input", () => {
                state.target = input.value;
                this.queueRefresh();
            });
            bar.appendChild(labelled("target", input));
        }
        if (this.statisticPlan().usesSingleBudget) {
            const input = document.createElement("input");
            input.type = "number";
            input.className = "single-budget";
            input.value = state.budget;
            input.addEventListener("input", () => {
                state.budget = input.value;
                this.queueRefresh();
            });
            bar.appendChild(labelled("budget", input));
        }
        if (this.activeTab === "params") {
            const select = document.createElement("select");
            select.className = "parameter-select";
            for (const name of this.parameterNames()) {
                const option = document.createElement("option");
                option.value = name;
                option.textContent = name;
                select.appendChild(option);
            }
            if (!state.parameter && select.options.length > 0) {
                state.parameter = select.options[0].value;
            }
            select.value = state.parameter;
            select.addEventListener("change", () => {
                state.parameter = select.value;
                this.queueRefresh();
            });
            bar.appendChild(labelled("parameter", select));
        }

        if (this.isSamplesView()) {
            const select = document.createElement("select");
            select.className = "orientation-select";
            for (const value of ["wide", "long"]) {
                const option = document.createElement("option");
                option.value = value;
                option.textContent = value;
                select.appendChild(option);
            }
            select.value = state.orientation;
            select.addEventListener("change", () => {
                state.orientation = select.value as "wide" | "long";
                this.queueRefresh();
            });
            bar.appendChild(labelled("layout", select));
        }
        if (this.isHistogramView()) {
            const select = document.createElement("select");
            select.className = "histogram-mode";
            for (const value of ["overlay", "separate"]) {
                const option = document.createElement("option");
                option.value = value;
                option.textContent = value;
                select.appendChild(option);
            }
            select.value = state.histogramMode;
            select.addEventListener("change", () => {
                state.histogramMode = select.value as "overlay" | "separate";
                this.renderView(); // client-side re-layout of the cached bins
            });
            bar.appendChild(labelled("mode", select));
        }
        if (this.isChartView()) {
            bar.appendChild(this.checkbox("log x", "log-x", state.logX, (on) => {
                state.logX = on;
                this.renderView();
            }));
            bar.appendChild(this.checkbox("log y", "log-y", state.logY, (on) => {
                state.logY = on;
                this.renderView();
            }));
        }
        if (this.isSeriesSwitchView()) {
            for (const key of ["mean", "median", "sd"] as const) {
                bar.appendChild(this.checkbox(key, `series-${key}`, state.series[key], (on) => {
                    state.series[key] = on;
                    this.renderView();
                }));
            }
        }

        const download = document.createElement("button");
        download.className = "download-csv";
        download.textContent = "Download CSV";
        download.addEventListener("click", () => void this.downloadCsv());
        bar.appendChild(download);

        if (this.isChartView()) {
            const png = document.createElement("button");
            png.className = "export-png";
            png.textContent = "Save PNG";
            png.addEventListener("click", () => void this.exportPng());
            bar.appendChild(png);
        }

        this.controlsHost.appendChild(bar);
        const validation = document.createElement("div");
        validation.className = "validation hidden";
        this.controlsHost.appendChild(validation);
    }

    private checkbox(
        label: string, className: string, checked: boolean, onChange: (on: boolean) => void,
    ): HTMLElement {
        const input = document.createElement("input");
        input.type = "checkbox";
        input.className = className;
        input.checked = checked;
        input.addEventListener("change", () => onChange(input.checked));
        return labelled(label, input);
    }

    private queueRefresh(): void {
        const error = validGrid(this.state().grid);
        const validation = this.controlsHost.querySelector(".validation");
        if (validation) {
            validation.textContent = error ?? "";
            validation.classList.toggle("hidden", error === null);
        }
        if (error !== null) {
            this.refreshSoon.cancel();
            return; // invalid ranges never reach the service
        }
        this.refreshSoon();
    }

    // ------------------------------------------------------------------
    // Query planning

    private isSamplesView(): boolean {
        return this.activeTab.endsWith("summary") && this.state().view === "samples";
    }

    private isHistogramView(): boolean {
        return this.activeTab.endsWith("pmf") && this.state().view === "histogram";
    }

    private isChartView(): boolean {
        return (
            ["ft-runtime", "fb-value", "ft-ecdf", "fb-ecdf"].includes(this.activeTab) ||
            this.activeTab.endsWith("pmf") ||
            (this.activeTab === "params" && this.state().view === "curve")
        );
    }

    private isSeriesSwitchView(): boolean {
        return ["ft-runtime", "fb-value"].includes(this.activeTab);
    }

    private statisticPlan(): {
        statistic: string;
        params: QueryParams;
        usesGrid: boolean;
        usesBudgets: boolean;
        usesSingleTarget: boolean;
        usesSingleBudget: boolean;
    } {
        const state = this.state();
        const tab = this.activeTab;
        const grid = gridParams(state.grid);
        const budgets: QueryParams = state.budgets ? { budgets: state.budgets } : {};
        const plan = {
            statistic: "",
            params: {} as QueryParams,
            usesGrid: false,
            usesBudgets: false,
            usesSingleTarget: false,
            usesSingleBudget: false,
        };
        switch (tab) {
            case "ft-summary":
                plan.usesGrid = true;
                if (state.view === "samples") {
                    plan.statistic = "raw-samples";
                    plan.params = { ...grid, orientation: state.orientation };
                } else {
                    plan.statistic = "fixed-target-summary";
                    plan.params = grid;
                }
                break;
            case "fb-summary":
                plan.usesBudgets = true;
                if (state.view === "samples") {
                    plan.statistic = "raw-samples";
                    plan.params = {
                        budgets: state.budgets || this.defaultBudgets(),
                        orientation: state.orientation,
                    };
                } else {
                    plan.statistic = "fixed-budget-summary";
                    plan.params = budgets;
                }
                break;
            case "ft-runtime":
                plan.usesGrid = true;
                plan.statistic = "fixed-target-summary";
                plan.params = grid;
                break;
            case "fb-value":
                plan.usesBudgets = true;
                plan.statistic = "fixed-budget-summary";
                plan.params = budgets;
                break;
            case "ft-pmf":
                plan.usesSingleTarget = true;
                plan.statistic = state.view === "density" ? "pmf" : "histogram";
                plan.params = state.target ? { target: state.target } : {};
                break;
            case "fb-pmf":
                plan.usesSingleBudget = true;
                plan.statistic = state.view === "density" ? "pmf" : "histogram";
                plan.params = state.budget ? { budget: state.budget } : {};
                break;
            case "ft-ecdf":
                if (state.view === "auc") {
                    plan.usesGrid = true;
                    plan.statistic = "auc";
                    plan.params = grid;
                } else if (state.view === "single") {
                    plan.usesSingleTarget = true;
                    plan.statistic = "ecdf-target";
                    plan.params = state.target
                        ? { fmin: state.target, fmax: state.target, step: "1" }
                        : {};
                } else {
                    plan.usesGrid = true;
                    plan.statistic = "ecdf-target";
                    plan.params = grid;
                }
                break;
            case "fb-ecdf":
                plan.usesBudgets = true;
                plan.statistic = "ecdf-budget";
                plan.params = budgets;
                break;
            case "params":
                plan.usesGrid = true;
                plan.statistic = "parameter-table";
                plan.params = { ...grid, parameter: state.parameter };
                break;
            default:
                break;
        }
        return plan;
    }

    private defaultBudgets(): string {
        return "";
    }

    // ------------------------------------------------------------------
    // Querying and rendering

    async refresh(): Promise<void> {
        if (!this.activeDataset || this.activeTab === "upload") return;
        const state = this.state();
        const plan = this.statisticPlan();
        if (this.activeTab === "params" && !state.parameter) {
            this.viewHost.replaceChildren(placeholder("No tracked parameters in this dataset."));
            return;
        }
        if (plan.usesSingleTarget && !state.target && this.activeTab !== "ft-ecdf") {
            this.viewHost.replaceChildren(placeholder("Choose a target value."));
            if (!state.target) return;
        }
        if (plan.usesSingleBudget && !state.budget) {
            this.viewHost.replaceChildren(placeholder("Choose a budget."));
            return;
        }
        if (this.activeTab === "ft-ecdf" && state.view === "single" && !state.target) {
            this.viewHost.replaceChildren(placeholder("Choose a target value."));
            return;
        }
        const ticket = this.sequencer.next();
        try {
            const response = await this.api.query(this.activeDataset, plan.statistic, plan.params);
            if (!this.sequencer.isCurrent(ticket)) return; // stale response
            state.last = response;
            state.lastStatistic = plan.statistic;
            state.lastParams = plan.params;
            this.clearBanner();
            this.renderView();
        } catch (error) {
            if (!this.sequencer.isCurrent(ticket)) return;
            const message = error instanceof ApiError
                ? `${error.message}${error.detail ? ` (${error.detail})` : ""}`
                : `service unreachable: ${(error as Error).message}`;
            this.showBanner(message);
        }
    }

    /** Redraw the active view from the cached response (client-side only). */
    renderView(): void {
        const state = this.state();
        if (!state.last) return;
        const table = state.last;
        if (table.rows.length === 0) {
            this.viewHost.replaceChildren(placeholder("No data for this selection."));
            return;
        }
        const tab = this.activeTab;
        if (tab === "ft-summary" || tab === "fb-summary" || (tab === "params" && state.view === "table")) {
            const host = document.createElement("div");
            renderTable(host, table);
            this.viewHost.replaceChildren(host);
            return;
        }
        if (tab === "ft-runtime" || tab === "fb-value" || (tab === "params" && state.view === "curve")) {
            this.renderSummaryChart(table);
            return;
        }
        if (tab === "ft-ecdf" && state.view === "auc") {
            this.renderAucRadar(table);
            return;
        }
        if (tab === "ft-ecdf" || tab === "fb-ecdf") {
            this.renderEcdfChart(table);
            return;
        }
        if (tab.endsWith("pmf")) {
            if (state.view === "density") this.renderPmfChart(table);
            else this.renderHistogramChart(table);
            return;
        }
    }

    private entryName(row: Record<string, unknown>): string {
        return `${row.algorithm} (f${row.funcId}, ${row.DIM}D)`;
    }

    private groupRows(table: TableResponse): Map<string, Record<string, unknown>[]> {
        const groups = new Map<string, Record<string, unknown>[]>();
        for (const row of table.rows) {
            const name = this.entryName(row);
            if (!groups.has(name)) groups.set(name, []);
            groups.get(name)!.push(row);
        }
        return groups;
    }

    private chartOptions(xLabel: string, yLabel: string) {
        const state = this.state();
        return {
            logX: state.logX,
            logY: state.logY,
            xLabel,
            yLabel,
            hidden: state.hidden,
            onToggle: () => this.renderView(),
        };
    }

    private renderSummaryChart(table: TableResponse): void {
        const state = this.state();
        const keyColumn = table.columns.includes("target") ? "target" : "budget";
        const series: Series[] = [];
        const wanted = (Object.keys(state.series) as ("mean" | "median" | "sd")[])
            .filter((k) => state.series[k]);
        let index = 0;
        for (const [name, rows] of this.groupRows(table)) {
            for (const column of wanted) {
                const points: [number, number][] = [];
                for (const row of rows) {
                    const x = row[keyColumn];
                    const y = row[column];
                    if (typeof x === "number" && typeof y === "number") points.push([x, y]);
                }
                series.push({
                    name: `${name} ${column}`,
                    points,
                    dashed: column !== "mean",
                });
            }
            index += 1;
        }
        const host = document.createElement("div");
        const yLabel = this.activeTab === "ft-runtime" ? "function evaluations"
            : this.activeTab === "fb-value" ? "best function value" : "parameter value";
        renderChart(host, series, this.chartOptions(keyColumn, yLabel));
        this.viewHost.replaceChildren(host);
    }

    private renderEcdfChart(table: TableResponse): void {
        const keyColumn = table.columns.includes("budget") ? "budget" : "target";
        const series: Series[] = [];
        for (const [name, rows] of this.groupRows(table)) {
            const points: [number, number][] = [];
            for (const row of rows) {
                const x = row[keyColumn];
                const y = row.proportion;
                if (typeof x === "number" && typeof y === "number") points.push([x, y]);
            }
            series.push({ name, points, step: true });
        }
        const host = document.createElement("div");
        renderChart(host, series, this.chartOptions(
            keyColumn === "budget" ? "function evaluations" : "target value",
            "proportion of (run, target) pairs",
        ));
        this.viewHost.replaceChildren(host);
    }

    private renderAucRadar(table: TableResponse): void {
        const state = this.state();
        const axes: string[] = [];
        const perEntry = new Map<string, number[]>();
        for (const row of table.rows) {
            if (row.target === "all") continue;
            const name = this.entryName(row);
            const axis = String(row.target);
            if (!axes.includes(axis)) axes.push(axis);
            if (!perEntry.has(name)) perEntry.set(name, []);
            perEntry.get(name)!.push(Number(row.auc));
        }
        const series: RadarSeries[] = [...perEntry.entries()].map(([name, values]) => ({
            name,
            values,
        }));
        const host = document.createElement("div");
        renderRadar(host, axes, series, {
            hidden: state.hidden,
            onToggle: () => this.renderView(),
        });
        this.viewHost.replaceChildren(host);
    }

    private renderHistogramChart(table: TableResponse): void {
        const state = this.state();
        const series: HistogramSeries[] = [];
        for (const [name, rows] of this.groupRows(table)) {
            series.push({
                name,
                bins: rows.map((row) => ({
                    lo: Number(row.bin_lo),
                    hi: Number(row.bin_hi),
                    count: Number(row.count),
                })),
            });
        }
        const host = document.createElement("div");
        renderHistogram(host, series, state.histogramMode, {
            hidden: state.hidden,
            onToggle: () => this.renderView(),
        });
        this.viewHost.replaceChildren(host);
    }

    private renderPmfChart(table: TableResponse): void {
        const series: Series[] = [];
        for (const [name, rows] of this.groupRows(table)) {
            const points: [number, number][] = [];
            for (const row of rows) {
                if (typeof row.x === "number" && typeof row.density === "number") {
                    points.push([row.x, row.density]);
                }
            }
            series.push({ name, points });
        }
        const host = document.createElement("div");
        renderChart(host, series, this.chartOptions("sample value", "density"));
        this.viewHost.replaceChildren(host);
    }

    // ------------------------------------------------------------------
    // Downloads

    async downloadCsv(): Promise<void> {
        const state = this.state();
        if (!this.activeDataset || !state.lastStatistic) return;
        try {
            const blob = await this.api.queryCsv(
                this.activeDataset, state.lastStatistic, state.lastParams,
            );
            this.saver(blob, `${state.lastStatistic}.csv`);
        } catch (error) {
            this.showBanner(`CSV download failed: ${(error as Error).message}`);
        }
    }

    async exportPng(): Promise<void> {
        const svg = this.viewHost.querySelector("svg");
        if (!svg) return;
        try {
            const blob = await chartToPng(svg as unknown as SVGSVGElement);
            this.saver(blob, `${this.activeTab}.png`);
        } catch (error) {
            this.showBanner(`PNG export failed: ${(error as Error).message}`);
        }
    }

    // ------------------------------------------------------------------
    // Upload tab

    private renderUploadTab(): void {
        this.controlsHost.replaceChildren();
        const panel = document.createElement("div");
        panel.className = "upload-panel";

        const fileInput = document.createElement("input");
        fileInput.type = "file";
        fileInput.accept = ".zip";
        fileInput.id = "upload-file";
        const uploadButton = document.createElement("button");
        uploadButton.id = "upload-button";
        uploadButton.textContent = "Upload archive";
        uploadButton.addEventListener("click", () => void this.uploadSelected(fileInput));
        panel.appendChild(labelled("Result archive (.zip)", fileInput));
        panel.appendChild(uploadButton);

        const pathInput = document.createElement("input");
        pathInput.type = "text";
        pathInput.id = "register-path";
        pathInput.placeholder = "/path/to/result/folder";
        const pathButton = document.createElement("button");
        pathButton.id = "register-button";
        pathButton.textContent = "Register server path";
        pathButton.addEventListener("click", () => void this.registerPath(pathInput.value));
        panel.appendChild(labelled("Server-local folder", pathInput));
        panel.appendChild(pathButton);

        const efficiency = document.createElement("div");
        efficiency.className = "efficient-controls";
        const toggle = document.createElement("input");
        toggle.type = "checkbox";
        toggle.id = "efficient-toggle";
        const info = this.activeInfo();
        toggle.checked = !!info?.efficient;
        const cap = document.createElement("input");
        cap.type = "number";
        cap.id = "efficient-cap";
        cap.value = String(info?.cap ?? 100);
        toggle.addEventListener("change", () => void this.applyEfficient(toggle.checked, Number(cap.value) || 100));
        efficiency.appendChild(labelled("efficient mode", toggle));
        efficiency.appendChild(labelled("cap", cap));
        panel.appendChild(efficiency);

        this.controlsHost.appendChild(panel);

        const promptTitle = document.createElement("h3");
        promptTitle.textContent = "Data processing prompt";
        const processedTitle = document.createElement("h3");
        processedTitle.textContent = "Processed data";
        const processed = document.createElement("div");
        processed.id = "processed-data";
        const table = document.createElement("table");
        table.className = "data-grid";
        const head = table.createTHead().insertRow();
        for (const column of ["dataset", "algorithm", "function", "dimension", "runs"]) {
            const th = document.createElement("th");
            th.textContent = column;
            head.appendChild(th);
        }
        const body = table.createTBody();
        for (const dataset of this.datasets) {
            for (const entry of dataset.entries) {
                const row = body.insertRow();
                for (const value of [
                    dataset.id, entry.algorithm, `f${entry.function_id}`,
                    entry.dimension, entry.runs,
                ]) {
                    row.insertCell().textContent = String(value);
                }
            }
        }
        processed.appendChild(table);
        this.viewHost.replaceChildren(promptTitle, this.promptLog, processedTitle, processed);
    }

    private logPrompt(message: string): void {
        const item = document.createElement("li");
        item.textContent = message;
        this.promptLog.appendChild(item);
    }

    private reportUpload(response: { id: string; report: DatasetInfo }): void {
        for (const entry of response.report.entries) {
            this.logPrompt(
                `${entry.runs} runs for the ${entry.dimension}-dimensional version ` +
                `of function f${entry.function_id} (${entry.algorithm})`,
            );
        }
        for (const warning of response.report.warnings) {
            this.logPrompt(`warning: ${warning}`);
        }
        this.logPrompt(`registered as ${response.id}`);
    }

    async uploadSelected(input: HTMLInputElement): Promise<void> {
        const file = input.files?.[0];
        if (!file) {
            this.logPrompt("no archive selected");
            return;
        }
        try {
            const response = await this.api.uploadArchive(file);
            this.reportUpload(response);
            await this.refreshDatasets();
            this.renderUploadTab();
        } catch (error) {
            this.logPrompt(`upload failed: ${(error as Error).message}`);
            this.renderUploadTab();
        }
    }

    async registerPath(path: string): Promise<void> {
        if (!path) {
            this.logPrompt("no folder path given");
            return;
        }
        try {
            const response = await this.api.registerPath(path);
            this.reportUpload(response);
            await this.refreshDatasets();
            this.renderUploadTab();
        } catch (error) {
            this.logPrompt(`registration failed: ${(error as Error).message}`);
            this.renderUploadTab();
        }
    }

    async applyEfficient(enabled: boolean, cap: number): Promise<void> {
        if (!this.activeDataset) return;
        try {
            await this.api.setEfficient(this.activeDataset, enabled, cap);
            this.logPrompt(
                enabled
                    ? `efficient mode on for ${this.activeDataset} (cap ${cap})`
                    : `efficient mode off for ${this.activeDataset}`,
            );
            this.invalidateCaches();
            await this.refreshDatasets();
            this.renderUploadTab();
        } catch (error) {
            this.logPrompt(`efficient toggle failed: ${(error as Error).message}`);
        }
    }
}

function labelled(text: string, control: HTMLElement): HTMLLabelElement {
    const label = document.createElement("label");
    label.className = "labelled";
    const span = document.createElement("span");
    span.textContent = text;
    label.appendChild(span);
    label.appendChild(control);
    return label;
}

function placeholder(message: string): HTMLElement {
    const div = document.createElement("div");
    div.className = "placeholder";
    div.textContent = message;
    return div;
}
