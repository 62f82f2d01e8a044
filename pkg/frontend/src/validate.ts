import type { AnnotationDraft } from './types.js';

// Mirrors the server-side rules so bad submissions are blocked before any
// request is made; the server still enforces them (422).
export function validateAnnotation(draft: AnnotationDraft): string[] {
  const errors: string[] = [];
  if (!draft.sample_id) errors.push('sample_id is required');
  if (!draft.run_id) errors.push('run_id is required');
  if (draft.verdict !== 'accept' && draft.verdict !== 'error') {
    errors.push("verdict must be 'accept' or 'error'");
  }
  if (draft.verdict === 'error' && !draft.error_category) {
    errors.push('an error verdict requires an error category');
  }
  return errors;
}
