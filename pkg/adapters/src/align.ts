import { readFileSync, writeFileSync } from "node:fs";

import { Lexicon } from "./lexicon.js";
import { tokenize } from "./tokenize.js";
import { buildBracketTree } from "./trees.js";
import {
  PairRecord,
  RawPair,
  RawTransformation,
  REPLACEMENT_KINDS,
  assertRawPair,
} from "./types.js";

export interface AlignOptions {
  emitTrees: boolean;
  // Language of the translations; picks tree labels. Inputs need no tag here.
  translationLanguage: string;
}

export const DEFAULT_ALIGN_OPTIONS: AlignOptions = {
  emitTrees: true,
  translationLanguage: "zh",
};

/** Word alignment over one sentence pair: an edge for every lexicon hit plus
 * exact surface copies (numbers, names). Sorted for stable serialization. */
export function alignSentencePair(
  inputTokens: string[], translationTokens: string[], lex: Lexicon,
): [number, number][] {
  const edges: [number, number][] = [];
  for (let i = 0; i < inputTokens.length; i++) {
    const targets = lex.translations(inputTokens[i]);
    for (let j = 0; j < translationTokens.length; j++) {
      if (targets.has(translationTokens[j]) ||
          inputTokens[i].toLowerCase() === translationTokens[j].toLowerCase()) {
        edges.push([i, j]);
      }
    }
  }
  return edges.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

function checkIndices(id: string, name: string, indices: number[], size: number): void {
  for (const idx of indices) {
    if (idx >= size) {
      throw new Error(`raw pair ${id}: ${name} index ${idx} out of bounds (size ${size})`);
    }
  }
}

function checkMetadata(id: string, t: RawTransformation,
                       nSource: number, nFollowup: number): void {
  const ms = t.mutated_source_indices ?? [];
  const mf = t.mutated_followup_indices ?? [];
  checkIndices(id, "mutated source", ms, nSource);
  checkIndices(id, "mutated follow-up", mf, nFollowup);
  if (REPLACEMENT_KINDS.includes(t.kind)) {
    if (nSource !== nFollowup) {
      throw new Error(`raw pair ${id}: ${t.kind} needs equal input lengths, got ${nSource}/${nFollowup}`);
    }
    if (ms.length !== 1 || mf.length !== 1) {
      throw new Error(`raw pair ${id}: ${t.kind} mutates exactly one token per side`);
    }
  } else if (t.kind === "IT-4") {
    if (ms.length !== 0 || mf.length === 0) {
      throw new Error(`raw pair ${id}: IT-4 inserts into the follow-up side only`);
    }
  } else if (t.kind === "IT-3") {
    if (mf.length !== 0) {
      throw new Error(`raw pair ${id}: IT-3 must not mutate the follow-up side`);
    }
    if (!t.input_map) {
      throw new Error(`raw pair ${id}: IT-3 needs an explicit transformation.input_map`);
    }
    for (const [i, j] of t.input_map) {
      if (i >= nSource || j >= nFollowup) {
        throw new Error(`raw pair ${id}: input_map edge [${i}, ${j}] out of bounds`);
      }
    }
  }
}

export function rawToRecord(raw: RawPair, lex: Lexicon, opts: AlignOptions): PairRecord {
  const sourceInput = tokenize(raw.source_input);
  const followupInput = tokenize(raw.followup_input);
  const sourceTranslation = tokenize(raw.source_translation);
  const followupTranslation = tokenize(raw.followup_translation);
  const t = raw.transformation;
  checkMetadata(raw.id, t, sourceInput.length, followupInput.length);

  const record: PairRecord = {
    id: raw.id,
    transformation: {
      kind: t.kind,
      mutated_source_indices: [...(t.mutated_source_indices ?? [])].sort((a, b) => a - b),
      mutated_followup_indices: [...(t.mutated_followup_indices ?? [])].sort((a, b) => a - b),
      ...(t.input_map ? { input_map: t.input_map } : {}),
    },
    source_input: sourceInput,
    followup_input: followupInput,
    source_translation: sourceTranslation,
    followup_translation: followupTranslation,
    alignment_source: alignSentencePair(sourceInput, sourceTranslation, lex),
    alignment_followup: alignSentencePair(followupInput, followupTranslation, lex),
  };
  if (opts.emitTrees) {
    const treeS = buildBracketTree(sourceTranslation, opts.translationLanguage);
    const treeF = buildBracketTree(followupTranslation, opts.translationLanguage);
    if (treeS) record.tree_source_translation = treeS;
    if (treeF) record.tree_followup_translation = treeF;
  }
  if (raw.gold !== undefined) record.gold = raw.gold;
  return record;
}

export function readRawPairs(path: string): RawPair[] {
  const pairs: RawPair[] = [];
  const lines = readFileSync(path, "utf8").split("\n");
  for (let i = 0; i < lines.length; i++) {
    if (!lines[i].trim()) continue;
    let obj: unknown;
    try {
      obj = JSON.parse(lines[i]);
    } catch (e) {
      throw new Error(`${path}: line ${i + 1}: ${(e as Error).message}`);
    }
    assertRawPair(obj, `${path}: line ${i + 1}`);
    pairs.push(obj);
  }
  return pairs;
}

/** Raw JSONL in, pair-record JSONL out. Returns the record count. */
export function alignAndEmit(rawPath: string, lex: Lexicon, outPath: string,
                             opts: AlignOptions = DEFAULT_ALIGN_OPTIONS): number {
  const raws = readRawPairs(rawPath);
  const lines = raws.map((raw) => JSON.stringify(rawToRecord(raw, lex, opts)));
  writeFileSync(outPath, lines.join("\n") + (lines.length ? "\n" : ""), "utf8");
  return raws.length;
}
