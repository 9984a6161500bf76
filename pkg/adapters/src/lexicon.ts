import { readFileSync } from "node:fs";

// The aligner's model asset: a bilingual lexicon mapping an input-language
// word to the translation tokens it may align with. TSV, one entry per line:
//   word<TAB>trans1,trans2,...
// Input-side lookup is case-insensitive; translations match exactly.

export class Lexicon {
  private table: Map<string, Set<string>>;

  constructor(entries: Iterable<[string, Iterable<string>]> = []) {
    this.table = new Map();
    for (const [word, translations] of entries) {
      this.add(word, translations);
    }
  }

  add(word: string, translations: Iterable<string>): void {
    const key = word.toLowerCase();
    const bucket = this.table.get(key) ?? new Set<string>();
    for (const t of translations) bucket.add(t);
    this.table.set(key, bucket);
  }

  translations(word: string): Set<string> {
    return this.table.get(word.toLowerCase()) ?? new Set();
  }

  get size(): number {
    return this.table.size;
  }
}

export function loadLexicon(path: string): Lexicon {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new Error(`cannot load aligner lexicon ${path}: ${(e as Error).message}`);
  }
  const lex = new Lexicon();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line || line.startsWith("#")) continue;
    const tab = line.indexOf("\t");
    if (tab <= 0 || tab === line.length - 1) {
      throw new Error(`${path}: line ${i + 1}: expected word<TAB>translations`);
    }
    const word = line.slice(0, tab).trim();
    const translations = line.slice(tab + 1).split(",").map((t) => t.trim()).filter(Boolean);
    if (!word || translations.length === 0) {
      throw new Error(`${path}: line ${i + 1}: expected word<TAB>translations`);
    }
    lex.add(word, translations);
  }
  if (lex.size === 0) {
    throw new Error(`cannot load aligner lexicon ${path}: no entries`);
  }
  return lex;
}
