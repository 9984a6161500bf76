// Wire formats. PairRecord mirrors the checker's JSONL schema exactly; the
// adapters only ever produce it, never interpret it.

export type TransformationKind = "IT-1" | "IT-2" | "IT-3" | "IT-4" | "IT-5";

export const TRANSFORMATION_KINDS: TransformationKind[] = [
  "IT-1", "IT-2", "IT-3", "IT-4", "IT-5",
];

// Replacement-style transformations keep sentence length and swap one token.
export const REPLACEMENT_KINDS: TransformationKind[] = ["IT-1", "IT-2", "IT-5"];

export interface RawTransformation {
  kind: TransformationKind;
  mutated_source_indices?: number[];
  mutated_followup_indices?: number[];
  // Required for IT-3: [source_index, followup_index] pairs over input tokens.
  input_map?: [number, number][];
}

// One untokenized test case as it comes out of the transformation stage.
export interface RawPair {
  id: string;
  source_input: string;
  followup_input: string;
  source_translation: string;
  followup_translation: string;
  transformation: RawTransformation;
  gold?: unknown; // passed through untouched when present
}

export interface PairRecord {
  id: string;
  transformation: {
    kind: TransformationKind;
    mutated_source_indices: number[];
    mutated_followup_indices: number[];
    input_map?: [number, number][];
  };
  source_input: string[];
  followup_input: string[];
  source_translation: string[];
  followup_translation: string[];
  alignment_source: [number, number][];
  alignment_followup: [number, number][];
  tree_source_translation?: string;
  tree_followup_translation?: string;
  contextual_vectors?: {
    source: Record<string, number[]>;
    followup: Record<string, number[]>;
  };
  gold?: unknown;
}

function isNonEmptyString(v: unknown): v is string {
  return typeof v === "string" && v.trim().length > 0;
}

function isIndexArray(v: unknown): v is number[] {
  return Array.isArray(v) && v.every((x) => Number.isInteger(x) && x >= 0);
}

/** Shape check for one parsed raw-pair object. Throws naming the offender. */
export function assertRawPair(obj: unknown, where: string): asserts obj is RawPair {
  if (typeof obj !== "object" || obj === null) {
    throw new Error(`${where}: raw pair must be a JSON object`);
  }
  const o = obj as Record<string, unknown>;
  if (!isNonEmptyString(o.id)) {
    throw new Error(`${where}: missing or empty id`);
  }
  const id = o.id as string;
  for (const key of ["source_input", "followup_input",
                     "source_translation", "followup_translation"]) {
    if (!isNonEmptyString(o[key])) {
      throw new Error(`raw pair ${id}: ${key} must be a non-empty string`);
    }
  }
  const t = o.transformation as Record<string, unknown> | undefined;
  if (typeof t !== "object" || t === null) {
    throw new Error(`raw pair ${id}: missing transformation metadata`);
  }
  if (!TRANSFORMATION_KINDS.includes(t.kind as TransformationKind)) {
    throw new Error(`raw pair ${id}: unknown transformation kind ${JSON.stringify(t.kind)}`);
  }
  for (const key of ["mutated_source_indices", "mutated_followup_indices"]) {
    if (t[key] !== undefined && !isIndexArray(t[key])) {
      throw new Error(`raw pair ${id}: transformation.${key} must be an array of non-negative integers`);
    }
  }
  if (t.input_map !== undefined) {
    const m = t.input_map;
    const ok = Array.isArray(m) && m.every(
      (e) => Array.isArray(e) && e.length === 2 && isIndexArray(e));
    if (!ok) {
      throw new Error(`raw pair ${id}: transformation.input_map must be an array of index pairs`);
    }
  }
}
