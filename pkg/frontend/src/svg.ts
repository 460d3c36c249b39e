// Minimal deterministic SVG assembly: fixed attribute order, fixed number
// formatting (trimmed 4-decimal), no timestamps, no randomness, so equal
// inputs give byte-identical files.

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate ${x}`);
  const s = x.toFixed(4);
  return s.replace(/\.?0+$/, "").replace(/^-0$/, "0");
}

export interface Attrs {
  [key: string]: string | number;
}

export function tag(name: string, attrs: Attrs, body = ""): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`,
  );
  const head = parts.length ? `<${name} ${parts.join(" ")}` : `<${name}`;
  return body === "" ? `${head}/>` : `${head}>${body}</${name}>`;
}

export function text(x: number, y: number, body: string, extra: Attrs = {}): string {
  return tag(
    "text",
    { x, y, "font-family": "monospace", "font-size": 11, fill: "#333", ...extra },
    escapeXml(body),
  );
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function document(width: number, height: number, body: string[]): string {
  const open = `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`;
  return [open, ...body, "</svg>", ""].join("\n");
}

export const STATUS_COLORS: Record<string, string> = {
  Stable: "#2e7d32",
  StrictlySemistable: "#f9a825",
  Unstable: "#c62828",
};

/** Andrew monotone chain; returns hull vertices in drawing order. */
export function convexHull(points: [number, number][]): [number, number][] {
  const pts = [...new Map(points.map((p) => [`${p[0]},${p[1]}`, p])).values()].sort(
    (a, b) => a[0] - b[0] || a[1] - b[1],
  );
  if (pts.length <= 2) return pts;
  const cross = (o: number[], a: number[], b: number[]) =>
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  const lower: [number, number][] = [];
  for (const p of pts) {
    while (lower.length >= 2 && cross(lower[lower.length - 2], lower[lower.length - 1], p) <= 0)
      lower.pop();
    lower.push(p);
  }
  const upper: [number, number][] = [];
  for (const p of [...pts].reverse()) {
    while (upper.length >= 2 && cross(upper[upper.length - 2], upper[upper.length - 1], p) <= 0)
      upper.pop();
    upper.push(p);
  }
  return lower.slice(0, -1).concat(upper.slice(0, -1));
}
