import type { Highlight, SampleView } from './types.js';

export type TokenMark = 'ok' | 'sub' | 'del' | 'ins';

export interface MarkedTokens {
  ref: TokenMark[];
  hyp: TokenMark[];
}

const REF_MARK: Record<string, TokenMark> = { substitute: 'sub', delete: 'del' };
const HYP_MARK: Record<string, TokenMark> = { substitute: 'sub', insert: 'ins' };

/** Maps the server's alignment highlights onto per-token marks. Every index
 * the server flagged gets a non-'ok' mark and nothing else does. */
export function markTokens(
  refTokens: string[],
  hypTokens: string[],
  highlights: Highlight[],
): MarkedTokens {
  const ref: TokenMark[] = refTokens.map(() => 'ok');
  const hyp: TokenMark[] = hypTokens.map(() => 'ok');
  for (const h of highlights) {
    if (h.ref_index !== null && h.ref_index < ref.length) {
      ref[h.ref_index] = REF_MARK[h.op] ?? 'ok';
    }
    if (h.hyp_index !== null && h.hyp_index < hyp.length) {
      hyp[h.hyp_index] = HYP_MARK[h.op] ?? 'ok';
    }
  }
  return { ref, hyp };
}

export function markedIndices(marks: TokenMark[]): number[] {
  return marks.flatMap((m, i) => (m === 'ok' ? [] : [i]));
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

function tokenSpans(tokens: string[], marks: TokenMark[]): string {
  return tokens
    .map((tok, i) => `<span class="tok tok-${marks[i]}">${escapeHtml(tok)}</span>`)
    .join(' ');
}

export function diffHtml(sample: SampleView): string {
  const { ref, hyp } = markTokens(sample.ref_tokens, sample.hyp_tokens, sample.highlights);
  return [
    `<div class="diff-row"><span class="diff-label">original</span><span>${escapeHtml(sample.original)}</span></div>`,
    `<div class="diff-row"><span class="diff-label">reference</span><span>${tokenSpans(sample.ref_tokens, ref)}</span></div>`,
    `<div class="diff-row"><span class="diff-label">hypothesis</span><span>${tokenSpans(sample.hyp_tokens, hyp)}</span></div>`,
  ].join('\n');
}
