import { describe, expect, it } from 'vitest';

import type { AnnotationDraft } from '../src/types.js';
import { validateAnnotation } from '../src/validate.js';

function draft(overrides: Partial<AnnotationDraft> = {}): AnnotationDraft {
  return {
    sample_id: 'fx0024',
    run_id: 'run-1',
    verdict: 'accept',
    error_category: null,
    note: '',
    author: 'reviewer1',
    ...overrides,
  };
}

describe('validateAnnotation', () => {
  it('accept verdict needs no category', () => {
    expect(validateAnnotation(draft())).toEqual([]);
  });

  it('error verdict without category is blocked client-side', () => {
    const errors = validateAnnotation(draft({ verdict: 'error' }));
    expect(errors).toHaveLength(1);
    expect(errors[0]).toMatch(/error category/);
  });

  it('error verdict with category passes', () => {
    expect(
      validateAnnotation(draft({ verdict: 'error', error_category: 'legal_reference' })),
    ).toEqual([]);
  });

  it('missing verdict is blocked', () => {
    expect(validateAnnotation(draft({ verdict: '' }))).toHaveLength(1);
  });

  it('missing ids are blocked', () => {
    expect(validateAnnotation(draft({ sample_id: '', run_id: '' }))).toHaveLength(2);
  });
});
