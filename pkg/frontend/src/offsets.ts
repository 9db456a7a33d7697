/**
 * Unicode code point offset arithmetic.
 *
 * JavaScript strings index UTF-16 units, but every offset that crosses the
 * wire is a code point index so that Chinese text and emoji behave exactly
 * like Latin text on the Python side. These helpers convert between the two
 * index spaces; conversions are exact inverses for valid boundaries.
 */

export function codePointLength(text: string): number {
  let count = 0;
  for (const _ch of text) count += 1;
  return count;
}

/** UTF-16 offset -> code point offset. Clamps into [0, codePointLength]. */
export function utf16ToCodePoint(text: string, utf16Offset: number): number {
  let cp = 0;
  let u16 = 0;
  for (const ch of text) {
    if (u16 >= utf16Offset) break;
    u16 += ch.length;
    cp += 1;
  }
  return cp;
}

/** Code point offset -> UTF-16 offset. Clamps into [0, text.length]. */
export function codePointToUtf16(text: string, cpOffset: number): number {
  let cp = 0;
  let u16 = 0;
  for (const ch of text) {
    if (cp >= cpOffset) break;
    u16 += ch.length;
    cp += 1;
  }
  return u16;
}

/** Slice by code point offsets, mirroring Python's text[start:end]. */
export function sliceByCodePoint(text: string, start: number, end: number): string {
  return Array.from(text).slice(start, end).join("");
}

/**
 * Sentence spans as code point ranges, used by the whole-sentence
 * non-translation shortcut. Splits on terminal punctuation; full-width
 * terminators delimit without trailing whitespace.
 */
export function sentenceSpans(text: string): Array<[number, number]> {
  const chars = Array.from(text);
  const terminals = new Set([".", "!", "?", "…", "。", "！", "？"]);
  const selfDelimiting = new Set(["。", "！", "？"]);
  const spans: Array<[number, number]> = [];
  let start = 0;
  let i = 0;
  while (i < chars.length) {
    if (terminals.has(chars[i])) {
      let j = i;
      while (j + 1 < chars.length && terminals.has(chars[j + 1])) j += 1;
      const next = chars[j + 1];
      const boundary =
        j + 1 >= chars.length ||
        /\s/.test(next) ||
        chars.slice(i, j + 1).some((c) => selfDelimiting.has(c));
      if (boundary) {
        spans.push([start, j + 1]);
        i = j + 1;
        while (i < chars.length && /\s/.test(chars[i])) i += 1;
        start = i;
        continue;
      }
      i = j + 1;
      continue;
    }
    i += 1;
  }
  if (start < chars.length) spans.push([start, chars.length]);
  return spans;
}
