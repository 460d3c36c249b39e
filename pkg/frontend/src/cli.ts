// Standalone renderer: plotkit --in report.json --kind chambers --out out.svg
// Exit 0 on success, 1 on bad input or a kind/report mismatch.

import { readFileSync, writeFileSync } from "fs";
import { render } from "./render.js";
import { PlotKind, ReportMismatch } from "./types.js";

function parseArgs(argv: string[]): { input: string; kind: PlotKind; output: string; lin?: string } {
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near ${key ?? "(end)"}`);
    }
    args[key.slice(2)] = value;
  }
  const { in: input, kind, out: output, lin } = args;
  if (!input || !kind || !output) throw new Error("usage: plotkit --in FILE --kind chambers|m-profile|weights --out FILE.svg [--lin NAME]");
  if (!["chambers", "m-profile", "weights"].includes(kind)) throw new Error(`unknown kind ${kind}`);
  return { input, kind: kind as PlotKind, output, lin };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const payload = JSON.parse(readFileSync(spec.input, "utf-8"));
    const svg = render(spec.kind, payload, spec.lin);
    writeFileSync(spec.output, svg, "utf-8");
    return 0;
  } catch (err) {
    if (err instanceof ReportMismatch) {
      console.error(`mismatch: ${err.message}`);
    } else {
      console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    }
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
