// Shapes of the report JSON consumed here.  Rationals arrive as strings
// like "3" or "1/2"; they are parsed to floats for layout only.

export type StatusName = "Unstable" | "StrictlySemistable" | "Stable";

export interface SegmentSample {
  t: string;
  statuses: Record<string, StatusName>;
  semistable: string[];
  stable: string[];
}

export interface ChamberEntry {
  lo: string;
  hi: string;
  statuses: Record<string, StatusName>;
  semistable: string[];
  stable: string[];
}

export interface ChambersResults {
  walls: string[];
  spurious_candidates: string[];
  chambers: ChamberEntry[];
  wall_data: SegmentSample[];
  endpoint_data: { "0": SegmentSample; "1": SegmentSample };
}

export interface MValueJson {
  kind: "finite" | "plus_infinity";
  value?: number;
  mu_star?: string;
  norm_sq?: string;
  minimizer?: number[];
}

export interface ProfileEntry {
  t: string;
  m: MValueJson;
}

export interface ProfileResults {
  point: string;
  profile: ProfileEntry[];
  interpolation_defects: { t_mid: string; defect: number | null }[];
}

export interface Report {
  command: string;
  input_digest: string;
  args: Record<string, unknown>;
  results: Record<string, unknown>;
}

export interface SceneFile {
  schema_version: string;
  rank: number;
  base_weights: number[][];
  linearizations: { name: string; hm_sanctioned: boolean }[];
  points: { name: string; stratum: number[]; weights: Record<string, number[][]> }[];
}

export type PlotKind = "chambers" | "m-profile" | "weights";

export interface PlotSpec {
  input: string;
  kind: PlotKind;
  output: string;
  /** weights plots: which linearization to draw (default: first declared) */
  lin?: string;
}

export class ReportMismatch extends Error {}
