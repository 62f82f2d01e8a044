import type { CompareResult } from './types.js';

export function pct(rate: number, digits = 2): string {
  return (rate * 100).toFixed(digits) + '%';
}

export function signedPct(delta: number, digits = 2): string {
  const s = pct(Math.abs(delta), digits);
  if (delta > 0) return '+' + s;
  if (delta < 0) return '-' + s;
  return '±' + s;
}

export interface CompareRow {
  category: string;
  before: string;
  after: string;
  delta: string;
  direction: 'regression' | 'improvement' | 'flat';
}

/** Table rows for a run comparison. The server already sorts deltas worst
 * regression first; this preserves that order. */
export function compareRows(result: CompareResult): CompareRow[] {
  return result.deltas.map((d) => ({
    category: d.category,
    before: pct(d.before),
    after: pct(d.after),
    delta: signedPct(d.delta),
    direction: d.delta > 0 ? 'regression' : d.delta < 0 ? 'improvement' : 'flat',
  }));
}

export function shortId(id: string, n = 8): string {
  return id.length > n ? id.slice(0, n) : id;
}
