/** JSON contracts of the matsel HTTP service. */

export type ValueKind = "numeric" | "interval" | "ordinal";

export interface SchemaProperty {
  name: string;
  kind: ValueKind;
  unit: string;
  position: number;
  ordinal_labels: string[] | null;
}

export interface SchemaResponse {
  properties: SchemaProperty[];
}

/** number (numeric), {lo, hi} (interval) or a scale label (ordinal). */
export type RequirementValue = number | string | { lo: number; hi: number };

export interface RequirementEntry {
  property: string;
  value: RequirementValue;
}

export interface NodeEntry {
  property: string;
  position: number;
}

export interface ClassifyResponse {
  material_class: string;
  index_pattern: number[];
  node_list: NodeEntry[];
  class_scores: Record<string, number>;
}

export interface RankingEntry {
  material_id: string;
  score: number;
}

export interface ExclusionEntry {
  material_id: string;
  reason: string;
}

export interface SelectionReport {
  metric: string;
  mode: string;
  winner_id: string;
  degree_of_similarity: number;
  ranking: RankingEntry[];
  normalized: boolean;
  excluded: ExclusionEntry[];
}

export interface WinnerDetail {
  material_id: string;
  material_name: string;
  values: Record<string, RequirementValue>;
}

export interface CompareResponse {
  requirement: RequirementEntry[];
  material_class: string;
  index_pattern: number[];
  node_list: NodeEntry[];
  mode: string;
  normalized: boolean;
  reports: SelectionReport[];
  winners: WinnerDetail[];
}

export type SelectionMode = "paper-min" | "oriented";

export interface CompareRequestBody {
  requirement: RequirementEntry[];
  metrics?: string[];
  mode?: SelectionMode;
  normalize?: boolean;
  top_k?: number;
}
