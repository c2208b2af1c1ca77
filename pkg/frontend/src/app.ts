// Dashboard entry point: five sections over the results API.
// Overview (aggregate tables), Translation (segment comparison with
// error spans, length analysis, significance tests), Added Toxicity,
// Gender Bias, and Perturbations.

import { ApiClient } from "./api.js";
import { chartLayout, polylinePath, project, seriesColor, seriesFromSweep } from "./charts.js";
import { colorFor } from "./colors.js";
import { concatFragments, hypothesisFragments } from "./spans.js";
import { emptyPanel, runComparison, type PanelState } from "./significance.js";
import {
  RequestTokens,
  SECTIONS,
  chooseMetric,
  clampCursor,
  initialState,
  navigate,
  selectRuns,
  setTotalSegments,
  turnPage,
  type Section,
  type ViewState,
} from "./state.js";
import type {
  PerturbationsResponse,
  RunSummary,
  SegmentRecord,
  ToxicityReport,
} from "./types.js";

const API_BASE =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8400";

const api = new ApiClient(API_BASE);
const tokens = new RequestTokens();

let state: ViewState = initialState();
let runs: RunSummary[] = [];
let panel: PanelState = emptyPanel();

// ---------------------------------------------------------------- dom

type Attrs = Record<string, string | ((e: Event) => void)>;

function el(
  tag: string,
  attrs: Attrs = {},
  ...children: Array<string | Node | null | undefined>
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key.replace(/^on/, "").toLowerCase(), value);
    } else if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child == null) continue;
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

function table(headers: string[], rows: Array<Array<string | Node>>): HTMLElement {
  return el(
    "table",
    { class: "data" },
    el("thead", {}, el("tr", {}, ...headers.map((h) => el("th", {}, h)))),
    el(
      "tbody",
      {},
      ...rows.map((cells) =>
        el("tr", {}, ...cells.map((c) => el("td", {}, c))),
      ),
    ),
  );
}

function fmt(value: number | null | undefined, digits = 2): string {
  return value == null ? "–" : value.toFixed(digits);
}

const root = () => document.getElementById("app")!;

// ------------------------------------------------------------ shared

function selectedSummaries(): RunSummary[] {
  return runs.filter((r) => state.selectedRuns.includes(r.id));
}

function runPicker(): HTMLElement {
  const boxes = runs.map((run) => {
    const checked = state.selectedRuns.includes(run.id);
    const box = el("input", {
      type: "checkbox",
      onchange: () => {
        const next = checked
          ? state.selectedRuns.filter((id) => id !== run.id)
          : [...state.selectedRuns, run.id];
        state = selectRuns(state, next);
        render();
      },
    }) as HTMLInputElement;
    box.checked = checked;
    return el("label", { class: "run-pick" }, box, `${run.model_id} · ${run.task}`);
  });
  return el("div", { class: "picker" }, el("strong", {}, "Runs: "), ...boxes);
}

function metricPicker(metrics: string[]): HTMLElement {
  const select = el("select", {
    onchange: (e) => {
      state = chooseMetric(state, (e.target as HTMLSelectElement).value);
      render();
    },
  }) as HTMLSelectElement;
  for (const metric of metrics) {
    const option = el("option", { value: metric }, metric) as HTMLOptionElement;
    option.selected = metric === state.metric;
    select.append(option);
  }
  return el("label", {}, "Metric: ", select);
}

function sectionNav(): HTMLElement {
  return el(
    "nav",
    {},
    ...SECTIONS.map((section) =>
      el(
        "button",
        {
          class: state.section === section ? "active" : "",
          onclick: () => {
            state = navigate(state, section as Section);
            render();
          },
        },
        section,
      ),
    ),
    el(
      "button",
      {
        class: "palette",
        onclick: () => {
          state = {
            ...state,
            palette: state.palette === "default" ? "colorblind" : "default",
          };
          render();
        },
      },
      `palette: ${state.palette}`,
    ),
  );
}

// ---------------------------------------------------------- overview

function renderOverview(container: HTMLElement): void {
  if (!runs.length) {
    container.append(el("p", {}, "No runs found. Point the API at a runs directory."));
    return;
  }
  const metrics = [...new Set(runs.flatMap((r) => r.metrics))].sort();
  container.append(
    el("h2", {}, "Run overview"),
    table(
      ["run", "model", "task", "segments", ...metrics],
      runs.map((run) => [
        run.id.slice(0, 12),
        run.model_id,
        run.task,
        String(run.n_segments),
        ...metrics.map((m) => fmt(run.aggregates[m])),
      ]),
    ),
  );
}

// ------------------------------------------------------- translation

async function loadSegment(summary: RunSummary, cursor: number): Promise<SegmentRecord | null> {
  const page = await api.segments(summary.id, cursor, 1);
  state = setTotalSegments(state, page.total);
  return page.segments[0] ?? null;
}

function spanLegend(): HTMLElement {
  return el(
    "p",
    { class: "legend" },
    "error spans: ",
    ...(["critical", "major", "minor"] as const).map((severity) =>
      el(
        "span",
        {
          class: "chip",
          style: `background:${colorFor(severity, state.palette)}`,
        },
        severity,
      ),
    ),
  );
}

function hypothesisView(segment: SegmentRecord): HTMLElement {
  const fragments = hypothesisFragments(segment.hypothesis, segment.error_spans);
  if (concatFragments(fragments) !== segment.hypothesis) {
    // never alter the displayed text; fall back to plain rendering
    return el("span", {}, segment.hypothesis);
  }
  return el(
    "span",
    {},
    ...fragments.map((fragment) =>
      fragment.severity
        ? el(
            "mark",
            {
              style: `background:${colorFor(fragment.severity, state.palette)}`,
              title: fragment.severity,
            },
            fragment.text,
          )
        : el("span", {}, fragment.text),
    ),
  );
}

const SEGMENT_METRICS = ["bleu", "comet", "comet-kiwi"];

async function renderTranslation(container: HTMLElement): Promise<void> {
  const selected = selectedSummaries();
  if (!selected.length) {
    container.append(el("p", {}, "Select at least one run above."));
    return;
  }
  const token = tokens.issue("translation");
  const primary = selected[0]!;

  const records = await Promise.all(
    selected.map((s) => loadSegment(s, state.cursor).catch(() => null)),
  );
  if (!tokens.isCurrent("translation", token)) return;

  const cursorBar = el(
    "div",
    { class: "cursor" },
    el("button", {
      onclick: () => {
        state = clampCursor(state, state.cursor - 1);
        render();
      },
    }, "◀"),
    ` segment ${state.cursor + 1} / ${state.totalSegments} `,
    el("button", {
      onclick: () => {
        state = clampCursor(state, state.cursor + 1);
        render();
      },
    }, "▶"),
  );

  const reference = records.find((r) => r)?.references ?? [];
  const comparison = el(
    "div",
    { class: "comparison" },
    el("h3", {}, "Source"),
    el("p", { class: "mono" }, records.find((r) => r)?.source ?? ""),
    el("h3", {}, reference.length > 1 ? "References" : "Reference"),
    ...reference.map((ref) => el("p", { class: "mono" }, ref)),
  );
  selected.forEach((summary, i) => {
    const record = records[i];
    if (!record) return;
    const scoreBits = SEGMENT_METRICS.filter((m) => m in record.scores)
      .map((m) => `${m} ${fmt(record.scores[m], 4)}`)
      .join("  ·  ");
    comparison.append(
      el("h3", {}, summary.model_id),
      el("p", { class: "mono" }, hypothesisView(record)),
    );
    if (scoreBits) {
      comparison.append(el("p", { class: "scores" }, scoreBits));
    }
  });

  container.append(el("h2", {}, "Segment comparison"), spanLegend(), cursorBar, comparison);

  // length analysis for the first selected run
  const lengthMetric = primary.segment_metrics.includes(state.metric)
    ? state.metric
    : primary.segment_metrics[0];
  if (lengthMetric) {
    try {
      const breakdown = await api.lengthBreakdown(primary.id, lengthMetric);
      if (!tokens.isCurrent("translation", token)) return;
      container.append(
        el("h3", {}, `Length analysis (${lengthMetric}, ${primary.model_id})`),
        metricPicker(primary.segment_metrics),
        renderLengthChart(breakdown.points, breakdown.buckets),
      );
    } catch {
      container.append(el("p", {}, "length analysis unavailable"));
    }
  }

  container.append(renderSignificancePanel(selected));
  await renderSegmentList(container, primary, token);
}

async function renderSegmentList(
  container: HTMLElement,
  primary: RunSummary,
  token: number,
): Promise<void> {
  let page;
  try {
    page = await api.segments(primary.id, state.pageOffset, state.pageLimit);
  } catch {
    return;
  }
  if (!tokens.isCurrent("translation", token)) return;
  const metrics = primary.segment_metrics;
  const pager = el(
    "div",
    { class: "cursor" },
    el("button", {
      onclick: () => {
        state = turnPage(state, -1);
        render();
      },
    }, "◀"),
    ` segments ${page.offset + 1}–${Math.min(page.offset + page.limit, page.total)} of ${page.total} `,
    el("button", {
      onclick: () => {
        state = turnPage(state, 1);
        render();
      },
    }, "▶"),
  );
  container.append(
    el("h3", {}, `Segment list (${primary.model_id})`),
    pager,
    table(
      ["#", "source", "hypothesis", ...metrics],
      page.segments.map((segment, i) => [
        el(
          "button",
          {
            class: "link",
            onclick: () => {
              state = clampCursor(state, page.offset + i);
              render();
            },
          },
          segment.id,
        ),
        segment.source,
        segment.hypothesis,
        ...metrics.map((m) => fmt(segment.scores[m], 2)),
      ]),
    ),
  );
}

function renderLengthChart(
  points: { words: number; score: number }[],
  buckets: { label: string; n: number; mean: number | null }[],
): HTMLElement {
  const series = {
    label: "segments",
    points: points.map((p) => ({ x: p.words, y: p.score })),
  };
  const layout = chartLayout([series], 560, 240);
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(layout.height));
  svg.setAttribute("class", "chart");
  for (const point of series.points) {
    const { px, py } = project(point, layout);
    const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    dot.setAttribute("cx", px.toFixed(1));
    dot.setAttribute("cy", py.toFixed(1));
    dot.setAttribute("r", "3");
    dot.setAttribute("fill", seriesColor(0));
    svg.append(dot);
  }
  const bucketTable = table(
    ["bucket (words)", "segments", "mean score"],
    buckets.map((b) => [b.label, String(b.n), fmt(b.mean)]),
  );
  return el("div", {}, svg, bucketTable) as HTMLElement;
}

function renderSignificancePanel(selected: RunSummary[]): HTMLElement {
  const wrapper = el("div", { class: "panel" }, el("h3", {}, "Significance test"));
  if (selected.length < 2) {
    wrapper.append(el("p", {}, "Select two runs to compare."));
    return wrapper;
  }
  const [a, b] = [selected[0]!, selected[1]!];
  const shared = a.segment_metrics.filter((m) => b.segment_metrics.includes(m));
  const preferred = ["bleu", "comet", "comet-kiwi"].filter((m) => shared.includes(m));
  const options = preferred.length ? preferred : shared;
  const select = el("select", {}) as HTMLSelectElement;
  for (const metric of options) {
    select.append(el("option", { value: metric }, metric));
  }
  const go = el(
    "button",
    {
      onclick: async () => {
        panel = { ...panel, pending: true };
        render();
        panel = await runComparison(api, {
          run_a: a.id,
          run_b: b.id,
          metric: select.value || options[0] || "bleu",
        });
        render();
      },
    },
    "compare",
  );
  wrapper.append(el("p", {}, `${a.model_id} vs ${b.model_id} — `, select, " ", go));
  if (panel.pending) wrapper.append(el("p", {}, "running…"));
  if (panel.error) {
    wrapper.append(el("p", { class: "error" }, panel.error));
    if (panel.retryable && panel.request) {
      wrapper.append(
        el(
          "button",
          {
            onclick: async () => {
              panel = await runComparison(api, panel.request!);
              render();
            },
          },
          "retry",
        ),
      );
    }
  }
  if (panel.display) {
    const d = panel.display;
    wrapper.append(
      el("p", {}, d.headline),
      el("p", { class: "pvalue" }, d.delta),
      el("p", { class: "pvalue", id: "p-value" }, d.pValue),
      el("p", {}, d.winFractions),
      el(
        "p",
        { class: `verdict ${panel.report?.significant ? "sig" : "nosig"}` },
        d.verdict,
      ),
    );
  }
  return wrapper;
}

// ----------------------------------------------------------- toxicity

async function renderToxicity(container: HTMLElement): Promise<void> {
  const selected = selectedSummaries().filter((r) => r.task_reports.includes("toxicity"));
  if (!selected.length) {
    container.append(el("p", {}, "No selected run carries a toxicity report."));
    return;
  }
  for (const summary of selected) {
    let report: ToxicityReport;
    try {
      report = await api.toxicity(summary.id);
    } catch {
      continue;
    }
    container.append(
      el("h2", {}, `Added toxicity — ${summary.model_id}`),
      table(
        ["evaluated", "excluded (toxic source)", "added toxic", "rate", `mean ${report.qe_metric} (flagged)`],
        [[
          String(report.n_evaluated),
          String(report.n_source_toxic_excluded),
          String(report.n_added_toxic),
          report.overall_rate.toFixed(4),
          fmt(report.mean_qe_flagged, 3),
        ]],
      ),
      el("h3", {}, "By demographic axis"),
      table(
        ["axis", "segments", "added toxic", "rate"],
        Object.entries(report.per_axis).map(([axis, row]) => [
          axis,
          String(row.n_segments),
          String(row.n_added_toxic),
          row.rate.toFixed(4),
        ]),
      ),
      el("h3", {}, "Flagged segments"),
      table(
        ["segment", "axis", "matched terms", "qe"],
        report.flagged.map((f) => [
          f.segment_id,
          f.axis,
          f.matched_terms.join(", "),
          fmt(f.qe_score, 3),
        ]),
      ),
    );
  }
}

// ------------------------------------------------------------- gender

async function renderGender(container: HTMLElement): Promise<void> {
  const selected = selectedSummaries().filter((r) => r.task_reports.includes("gender"));
  if (!selected.length) {
    container.append(el("p", {}, "No selected run carries a gender-bias report."));
    return;
  }
  for (const summary of selected) {
    let report: Record<string, any>;
    try {
      report = await api.gender(summary.id);
    } catch {
      continue;
    }
    container.append(el("h2", {}, `Gender bias — ${summary.model_id}`));
    if (report.mustshe) {
      const m = report.mustshe;
      container.append(
        el("h3", {}, "Gendered-term accuracy"),
        table(
          ["terms", "correct", "wrong", "accuracy", "coverage"],
          [[
            String(m.n_terms),
            String(m.n_correct),
            String(m.n_wrong),
            fmt(m.term_accuracy, 4),
            fmt(m.coverage, 4),
          ]],
        ),
      );
    }
    if (report.mmhb) {
      const variants = Object.entries(report.mmhb.variants as Record<string, any>);
      container.append(
        el("h3", {}, "Per-variant ChrF"),
        table(
          ["variant", "segments", "chrf"],
          variants.map(([name, row]) => [name, String(row.n_segments), fmt(row.chrf, 2)]),
        ),
        table(
          ["gap", "value"],
          Object.entries(report.mmhb.gaps as Record<string, number>).map(
            ([name, value]) => [name.replaceAll("_", " "), fmt(value, 2)],
          ),
        ),
      );
    }
    if (report.geneval) {
      const g = report.geneval;
      const rows: Array<Array<string>> = [["overall", String(g.n_items), fmt(g.accuracy, 4)]];
      for (const [mode, row] of Object.entries(g.by_mode as Record<string, any>)) {
        rows.push([mode, String(row.n_items), fmt(row.accuracy, 4)]);
      }
      for (const [group, row] of Object.entries(
        (g.by_stereotype_group ?? {}) as Record<string, any>,
      )) {
        rows.push([`stereotype: ${group}`, String(row.n_items), fmt(row.accuracy, 4)]);
      }
      container.append(
        el("h3", {}, "Contrastive accuracy"),
        table(["slice", "items", "accuracy"], rows),
      );
    }
  }
}

// ------------------------------------------------------ perturbations

async function renderPerturbations(container: HTMLElement): Promise<void> {
  const selected = selectedSummaries();
  if (!selected.length) {
    container.append(el("p", {}, "Select runs to plot."));
    return;
  }
  const task = selected[0]!.task;
  let data: PerturbationsResponse;
  try {
    data = await api.perturbations(task, selected.map((s) => s.model_id));
  } catch {
    container.append(el("p", {}, "no perturbation data"));
    return;
  }
  const models = Object.entries(data.models);
  if (!models.length) {
    container.append(el("p", {}, "No perturbation sweeps recorded for the selected runs."));
    return;
  }
  const kinds = [...new Set(models.flatMap(([, m]) => Object.keys(m.series)))].sort();
  const metrics = [...new Set(models.flatMap(([, m]) => m.metrics))];
  const metric = metrics.includes(state.metric) ? state.metric : metrics[0]!;
  container.append(el("h2", {}, `Robustness to character noise — ${task}`), metricPicker(metrics));

  for (const kind of kinds) {
    const chartSeries = models
      .filter(([, m]) => m.series[kind]?.[metric])
      .map(([model, m]) => seriesFromSweep(model, m.series[kind]![metric]!));
    if (!chartSeries.length) continue;
    const layout = chartLayout(chartSeries);
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("width", String(layout.width));
    svg.setAttribute("height", String(layout.height));
    svg.setAttribute("class", "chart");
    chartSeries.forEach((series, i) => {
      const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
      path.setAttribute("d", polylinePath(series, layout));
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", seriesColor(i));
      path.setAttribute("stroke-width", "2");
      svg.append(path);
      for (const point of series.points) {
        const { px, py } = project(point, layout);
        const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
        dot.setAttribute("cx", px.toFixed(1));
        dot.setAttribute("cy", py.toFixed(1));
        dot.setAttribute("r", "3.5");
        dot.setAttribute("fill", seriesColor(i));
        svg.append(dot);
      }
    });
    const legend = el(
      "p",
      { class: "legend" },
      ...chartSeries.map((series, i) =>
        el("span", { class: "chip", style: `background:${seriesColor(i)}` }, series.label),
      ),
    );
    container.append(el("h3", {}, `${kind} (${metric} vs noise level)`), legend, svg);
  }
}

// -------------------------------------------------------------- shell

async function render(): Promise<void> {
  const container = root();
  container.replaceChildren();
  container.append(el("h1", {}, "Translation evaluation dashboard"), sectionNav(), runPicker());
  const body = el("div", { class: "section" });
  container.append(body);
  try {
    switch (state.section) {
      case "overview":
        renderOverview(body);
        break;
      case "translation":
        await renderTranslation(body);
        break;
      case "toxicity":
        await renderToxicity(body);
        break;
      case "gender":
        await renderGender(body);
        break;
      case "perturbations":
        await renderPerturbations(body);
        break;
    }
  } catch (err) {
    body.append(el("p", { class: "error" }, String(err)));
  }
}

async function boot(): Promise<void> {
  try {
    runs = await api.listRuns();
    if (runs.length && !state.selectedRuns.length) {
      state = selectRuns(state, [runs[0]!.id]);
    }
  } catch (err) {
    root().append(el("p", { class: "error" }, `cannot reach API at ${API_BASE}: ${err}`));
    return;
  }
  await render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
