// Renderers for the three plot kinds.  No computation happens here: every
// number is read from the report (rationals parsed only for placement).

import {
  ChambersResults,
  PlotKind,
  ProfileResults,
  Report,
  ReportMismatch,
  SceneFile,
} from "./types.js";
import {
  STATUS_COLORS,
  convexHull,
  document,
  escapeXml,
  fmt,
  tag,
  text,
} from "./svg.js";

export function parseRational(s: string): number {
  const m = /^(-?\d+)(?:\/(\d+))?$/.exec(s);
  if (!m) throw new ReportMismatch(`malformed rational ${JSON.stringify(s)}`);
  return Number(m[1]) / (m[2] ? Number(m[2]) : 1);
}

const MARGIN = 48;
const WIDTH = 640;

// ── chambers ─────────────────────────────────────────────────────────────

export function renderChambers(report: Report): string {
  if (report.command !== "chambers")
    throw new ReportMismatch(`chambers plot needs a chambers report, got ${report.command}`);
  const res = report.results as unknown as ChambersResults;
  if (!res.chambers || !res.walls) throw new ReportMismatch("report lacks chamber data");

  const names = Object.keys(res.endpoint_data["0"].statuses).sort();
  const rowH = 22;
  const axisY = 40 + names.length * rowH + 18;
  const height = axisY + 40;
  const span = WIDTH - 2 * MARGIN;
  const X = (t: number) => MARGIN + t * span;

  const body: string[] = [];
  body.push(text(MARGIN, 20, `chambers: ${report.args["from"]} to ${report.args["to"]}`));
  names.forEach((name, i) => {
    const y = 40 + i * rowH;
    body.push(text(6, y + 14, name, { "font-size": 10 }));
    for (const c of res.chambers) {
      const lo = parseRational(c.lo);
      const hi = parseRational(c.hi);
      body.push(
        tag("rect", {
          x: X(lo),
          y,
          width: X(hi) - X(lo),
          height: rowH - 4,
          fill: STATUS_COLORS[c.statuses[name]],
          "fill-opacity": "0.85",
        }),
      );
    }
    for (const w of res.wall_data) {
      const t = parseRational(w.t);
      body.push(
        tag("rect", {
          x: X(t) - 1.5,
          y,
          width: 3,
          height: rowH - 4,
          fill: STATUS_COLORS[w.statuses[name]],
          stroke: "#000",
          "stroke-width": "0.4",
        }),
      );
    }
  });
  body.push(
    tag("line", { x1: X(0), y1: axisY, x2: X(1), y2: axisY, stroke: "#333", "stroke-width": "1" }),
  );
  for (const end of [0, 1]) {
    body.push(
      tag("line", { x1: X(end), y1: axisY - 4, x2: X(end), y2: axisY + 4, stroke: "#333", "stroke-width": "1" }),
    );
    body.push(text(X(end) - 3, axisY + 18, String(end)));
  }
  res.walls.forEach((w) => {
    const t = parseRational(w);
    body.push(
      tag("line", {
        class: "wall-tick",
        x1: X(t),
        y1: axisY - 6,
        x2: X(t),
        y2: axisY + 6,
        stroke: "#000",
        "stroke-width": "1.5",
      }),
    );
    body.push(text(X(t) - 8, axisY + 18, w, { class: "wall-label" }));
  });
  const legendY = axisY + 30;
  Object.entries(STATUS_COLORS).forEach(([status, color], i) => {
    const x = MARGIN + i * 180;
    body.push(tag("rect", { x, y: legendY - 9, width: 10, height: 10, fill: color }));
    body.push(text(x + 14, legendY, status, { "font-size": 10 }));
  });
  return document(WIDTH, height, body);
}

// ── value profile ────────────────────────────────────────────────────────

export function renderMProfile(report: Report): string {
  if (report.command !== "mfunc")
    throw new ReportMismatch(`m-profile plot needs an mfunc profile report, got ${report.command}`);
  const res = report.results as unknown as ProfileResults;
  if (!res.profile) throw new ReportMismatch("report lacks profile samples (run mfunc with --ts)");

  const samples = res.profile
    .filter((p) => p.m.kind === "finite")
    .map((p) => [parseRational(p.t), p.m.value as number] as [number, number]);
  if (samples.length === 0) throw new ReportMismatch("profile has no finite samples");

  const height = 320;
  const top = 40;
  const bottom = height - 40;
  const span = WIDTH - 2 * MARGIN;
  const vmin = Math.min(...samples.map((s) => s[1]));
  const vmax = Math.max(...samples.map((s) => s[1]));
  const pad = (vmax - vmin) * 0.1 || 1;
  const lo = vmin - pad;
  const hi = vmax + pad;
  const X = (t: number) => MARGIN + t * span;
  const Y = (v: number) => bottom - ((v - lo) / (hi - lo)) * (bottom - top);

  const body: string[] = [];
  body.push(text(MARGIN, 20, `value profile: point ${res.point}`));
  body.push(tag("line", { x1: X(0), y1: bottom, x2: X(1), y2: bottom, stroke: "#333", "stroke-width": "1" }));
  body.push(tag("line", { x1: X(0), y1: top, x2: X(0), y2: bottom, stroke: "#333", "stroke-width": "1" }));
  if (lo < 0 && hi > 0) {
    body.push(
      tag("line", {
        x1: X(0), y1: Y(0), x2: X(1), y2: Y(0),
        stroke: "#999", "stroke-dasharray": "4 3", "stroke-width": "0.8",
      }),
    );
  }
  const pts = samples.map(([t, v]) => `${fmt(X(t))},${fmt(Y(v))}`).join(" ");
  body.push(tag("polyline", { class: "profile", points: pts, fill: "none", stroke: "#1565c0", "stroke-width": "1.6" }));
  for (const [t, v] of samples) {
    body.push(tag("circle", { cx: X(t), cy: Y(v), r: 2.4, fill: "#1565c0" }));
  }
  body.push(text(X(0) - 4, bottom + 16, "0"));
  body.push(text(X(1) - 4, bottom + 16, "1"));
  body.push(text(6, Y(vmax) + 4, fmt(vmax), { "font-size": 10 }));
  body.push(text(6, Y(vmin) + 4, fmt(vmin), { "font-size": 10 }));
  return document(WIDTH, height, body);
}

// ── weight scatter ───────────────────────────────────────────────────────

const SERIES_COLORS = ["#1565c0", "#2e7d32", "#c62828", "#6a1b9a", "#ef6c00", "#00838f"];

export function renderWeights(scene: SceneFile, lin?: string): string {
  if (scene.schema_version !== "1" || !Array.isArray(scene.points))
    throw new ReportMismatch("weights plot needs a scene file (schema 1)");
  const linName = lin ?? scene.linearizations[0]?.name;
  if (!linName) throw new ReportMismatch("scene declares no linearizations");

  const series = scene.points
    .filter((p) => p.weights[linName])
    .map((p) => ({
      name: p.name,
      pts: p.weights[linName].map(
        (w) => [w[0], scene.rank > 1 ? w[1] : 0] as [number, number],
      ),
    }));
  if (series.length === 0) throw new ReportMismatch(`no point carries weights for ${linName}`);

  const all = series.flatMap((s) => s.pts);
  const xs = all.map((p) => p[0]);
  const ys = all.map((p) => p[1]);
  const min = [Math.min(...xs, 0) - 1, Math.min(...ys, 0) - 1];
  const max = [Math.max(...xs, 0) + 1, Math.max(...ys, 0) + 1];
  const height = 420;
  const top = 40;
  const bottom = height - 30;
  const X = (v: number) => MARGIN + ((v - min[0]) / (max[0] - min[0])) * (WIDTH - 2 * MARGIN);
  const Y = (v: number) => bottom - ((v - min[1]) / (max[1] - min[1])) * (bottom - top);

  const body: string[] = [];
  body.push(text(MARGIN, 20, `weights of ${linName} (coordinates 1,2)`));
  body.push(tag("line", { x1: X(min[0]), y1: Y(0), x2: X(max[0]), y2: Y(0), stroke: "#bbb", "stroke-width": "0.8" }));
  body.push(tag("line", { x1: X(0), y1: Y(min[1]), x2: X(0), y2: Y(max[1]), stroke: "#bbb", "stroke-width": "0.8" }));
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const hull = convexHull(s.pts);
    if (hull.length >= 3) {
      const pts = hull.map(([x, y]) => `${fmt(X(x))},${fmt(Y(y))}`).join(" ");
      body.push(
        tag("polygon", { points: pts, fill: color, "fill-opacity": "0.12", stroke: color, "stroke-width": "1" }),
      );
    }
    for (const [x, y] of s.pts) {
      body.push(tag("circle", { cx: X(x), cy: Y(y), r: 3, fill: color }));
    }
    body.push(text(MARGIN + 140 * i, height - 8, s.name, { fill: color, "font-size": 10 }));
  });
  return document(WIDTH, height, body);
}

// ── dispatch ─────────────────────────────────────────────────────────────

export function render(kind: PlotKind, payload: unknown, lin?: string): string {
  switch (kind) {
    case "chambers":
      return renderChambers(payload as Report);
    case "m-profile":
      return renderMProfile(payload as Report);
    case "weights":
      return renderWeights(payload as SceneFile, lin);
    default:
      throw new ReportMismatch(`unknown plot kind ${escapeXml(String(kind))}`);
  }
}
