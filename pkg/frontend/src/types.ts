// Shapes mirroring the review service's JSON API.

export interface RunSummary {
  run_id: string;
  parent_run_id: string | null;
  locale: string;
  system_id: string;
  iteration: number;
  icl_set_hash: string;
  overall_rate: number;
  overall_bleu: number;
  created_at: string;
  status: string;
}

export interface JobStatus {
  job_id: string;
  status: 'running' | 'completed' | 'failed';
  run_id?: string;
  error?: string;
}

export type EditOp = 'substitute' | 'delete' | 'insert';

export interface Highlight {
  op: EditOp;
  ref_index: number | null;
  hyp_index: number | null;
}

export interface SampleView {
  sample_id: string;
  category: string;
  locale: string;
  original: string;
  reference: string;
  hypothesis: string;
  ref_tokens: string[];
  hyp_tokens: string[];
  rate: number;
  bleu: number;
  ref_len: number;
  client_error: string | null;
  highlights: Highlight[];
  edit_counts: { S: number; D: number; I: number };
}

export interface SamplePage {
  total: number;
  page: number;
  page_size: number;
  samples: SampleView[];
}

export interface CategoryDelta {
  category: string;
  before: number;
  after: number;
  delta: number;
}

export interface CompareResult {
  overall_delta: number;
  deltas: CategoryDelta[];
}

export interface AnnotationDraft {
  sample_id: string;
  run_id: string;
  verdict: 'accept' | 'error' | '';
  error_category: string | null;
  note: string;
  author: string;
}

export interface Annotation extends Omit<AnnotationDraft, 'verdict'> {
  id: string;
  verdict: 'accept' | 'error';
  created_at: string;
}

export interface IclExample {
  locale: string;
  category: string;
  original: string;
  normalized: string;
  provenance: string;
}

export interface IclState {
  version: string;
  examples: IclExample[];
}

export interface IclEdit {
  op: 'add' | 'remove' | 'update';
  example: IclExample;
  replacement?: IclExample;
}

export interface RerunRequest {
  locale: string;
  provider: string;
  icl_version: string;
  parent_run_id: string | null;
}

export interface RerunAccepted {
  job_id: string;
  status_url: string;
}
