// Deterministic stand-in for the constituency-parser backend: fixed-width
// noun-phrase chunks under a clause root. Leaf order always equals token
// order, which is the only structural property downstream validation pins.

const CHUNK = 3;

// Exact-token escapes; an embedded bracket inside a longer token has no
// bracketed-format representation, so such sentences get no tree.
const LEAF_ENCODE: Record<string, string> = { "(": "-LRB-", ")": "-RRB-" };

function rootLabel(language: string): string {
  return language === "zh" ? "IP" : "S";
}

export function canBracket(tokens: string[]): boolean {
  return tokens.every(
    (t) => !/[()]/.test(t) || t === "(" || t === ")");
}

export function buildBracketTree(tokens: string[], language: string): string | undefined {
  if (tokens.length === 0 || !canBracket(tokens)) return undefined;
  const leaves = tokens.map((t) => `(NN ${LEAF_ENCODE[t] ?? t})`);
  const chunks: string[] = [];
  for (let i = 0; i < leaves.length; i += CHUNK) {
    const group = leaves.slice(i, i + CHUNK);
    chunks.push(group.length === 1 ? group[0] : `(NP ${group.join(" ")})`);
  }
  if (chunks.length === 1) {
    return `(${rootLabel(language)} ${chunks[0]})`;
  }
  return `(${rootLabel(language)} ${chunks.join(" ")})`;
}
