/** Shared shapes of the server's JSON payloads. */

export type VertexLabel = string | number;

export interface ArrowRecord {
  id: string;
  from: VertexLabel;
  to: VertexLabel;
}

export interface PotentialTerm {
  coeff: string;
  cycle: string[];
}

export interface QPDocument {
  field: string;
  vertices: VertexLabel[];
  arrows: ArrowRecord[];
  potential: PotentialTerm[];
  metadata?: {
    name?: string;
    provenance?: [string, VertexLabel[]][];
    truncated?: boolean;
  };
}

export interface OrbitInfo {
  vertices: string[];
  mutable: boolean;
  violations: string[];
}

export interface VertexInfo {
  label: string;
  on_two_cycle: boolean;
}

export interface Analysis {
  finite_dimensional: boolean;
  selfinjective: boolean;
  dimension: number | null;
  nakayama: string | null;
  orbits: OrbitInfo[];
  vertices: VertexInfo[];
  note: string | null;
}

export interface ExactnessEntry {
  name: string;
  complex: boolean;
  middle_exact: boolean;
  image_is_radical: boolean | null;
}

export interface VerifyReport {
  vertices: VertexLabel[];
  mutable: boolean;
  selfinjective: boolean;
  nakayama: string | null;
  sigma_stable: boolean | null;
  dim_end: number | null;
  dim_jacobian_mutated: number | null;
  dims_equal: boolean | null;
  relations: [string, boolean][];
  relations_ok: boolean | null;
  surjective: boolean | null;
  silting: boolean | null;
  tilting_by_hom: boolean | null;
  tilting_by_sigma: boolean | null;
  exactness: ExactnessEntry[];
  iso_verdict: boolean | null;
  truncated: boolean;
}

export interface HistoryEntry {
  id: string;
  vertices: string[] | null;
  name: string | null;
}

export interface ApiErrorBody {
  code: number;
  message: string;
  details: unknown;
}
