#!/usr/bin/env node
// Two batch stages, composed via files:
//   align: raw-pair JSONL + lexicon -> pair-record JSONL (alignments, trees)
//   embed: pair-record JSONL -> same records + contextual-vector sidecars
// Both are deterministic: same inputs, same bytes. Exit 0 on success, 1 on
// any input or asset problem (message on stderr).

import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { alignAndEmit } from "./align.js";
import { DEFAULT_DIM, embedAndEmit } from "./embed.js";
import { loadLexicon } from "./lexicon.js";

const USAGE = `usage:
  cli.js align --input raw.jsonl --lexicon lex.tsv --output pairs.jsonl [--lang en-zh] [--no-trees]
  cli.js embed --input pairs.jsonl --output embedded.jsonl [--dim ${DEFAULT_DIM}]`;

function runAlign(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      lexicon: { type: "string" },
      output: { type: "string" },
      lang: { type: "string", default: "en-zh" },
      "no-trees": { type: "boolean", default: false },
    },
  });
  if (!values.input || !values.lexicon || !values.output) {
    throw new Error(`align needs --input, --lexicon and --output\n${USAGE}`);
  }
  const lang = values.lang as string;
  if (!/^[a-z]+-[a-z]+$/.test(lang)) {
    throw new Error(`--lang must look like en-zh, got ${JSON.stringify(lang)}`);
  }
  const lex = loadLexicon(values.lexicon as string);
  const count = alignAndEmit(values.input as string, lex, values.output as string, {
    emitTrees: !values["no-trees"],
    translationLanguage: lang.split("-")[1],
  });
  process.stderr.write(`aligned ${count} pairs -> ${values.output}\n`);
}

function runEmbed(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      output: { type: "string" },
      dim: { type: "string", default: String(DEFAULT_DIM) },
    },
  });
  if (!values.input || !values.output) {
    throw new Error(`embed needs --input and --output\n${USAGE}`);
  }
  const dim = Number(values.dim);
  if (!Number.isInteger(dim)) {
    throw new Error(`--dim must be an integer, got ${JSON.stringify(values.dim)}`);
  }
  const count = embedAndEmit(values.input as string, values.output as string, dim);
  process.stderr.write(`embedded ${count} records -> ${values.output}\n`);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "align") {
      runAlign(rest);
    } else if (command === "embed") {
      runEmbed(rest);
    } else {
      throw new Error(USAGE);
    }
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
