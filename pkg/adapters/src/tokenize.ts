// Whitespace tokenization, shared by the aligner and the embedder. The
// emitted token arrays ARE the alignment/embedding units, so both stages must
// agree on this function and nothing else.

export function tokenize(text: string): string[] {
  return text.split(/\s+/u).filter((t) => t.length > 0);
}

/** True when joining and re-splitting reproduces the array exactly, i.e. the
 * tokens could have been produced by this tokenizer. */
export function tokensRoundTrip(tokens: string[]): boolean {
  if (tokens.length === 0) return false;
  const again = tokenize(tokens.join(" "));
  return again.length === tokens.length && again.every((t, i) => t === tokens[i]);
}
