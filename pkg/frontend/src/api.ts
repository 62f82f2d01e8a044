import type {
  Annotation,
  AnnotationDraft,
  CompareResult,
  IclEdit,
  IclState,
  JobStatus,
  RerunAccepted,
  RerunRequest,
  RunSummary,
  SamplePage,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

export interface SampleQuery {
  category?: string;
  only_errors?: boolean;
  page?: number;
  page_size?: number;
}

async function parseDetail(res: Response): Promise<string> {
  try {
    const body = await res.json();
    if (typeof body?.detail === 'string') return body.detail;
    return JSON.stringify(body?.detail ?? body);
  } catch {
    return res.statusText;
  }
}

export class ApiClient {
  constructor(
    private baseUrl = '',
    private authToken = '',
  ) {}

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers = new Headers(init.headers);
    if (this.authToken) headers.set('X-Auth-Token', this.authToken);
    if (init.body) headers.set('Content-Type', 'application/json');
    const res = await fetch(this.baseUrl + path, { ...init, headers });
    if (!res.ok) throw new ApiError(res.status, await parseDetail(res));
    return (await res.json()) as T;
  }

  listRuns(): Promise<RunSummary[]> {
    return this.request('/api/runs');
  }

  getRun(id: string): Promise<RunSummary & Partial<JobStatus>> {
    return this.request(`/api/runs/${encodeURIComponent(id)}`);
  }

  getSamples(runId: string, query: SampleQuery = {}): Promise<SamplePage> {
    const params = new URLSearchParams();
    if (query.category) params.set('category', query.category);
    if (query.only_errors) params.set('only_errors', 'true');
    if (query.page) params.set('page', String(query.page));
    if (query.page_size) params.set('page_size', String(query.page_size));
    const qs = params.toString();
    return this.request(`/api/runs/${encodeURIComponent(runId)}/samples${qs ? '?' + qs : ''}`);
  }

  compare(a: string, b: string): Promise<CompareResult> {
    const params = new URLSearchParams({ a, b });
    return this.request(`/api/compare?${params}`);
  }

  listAnnotations(filters: { run_id?: string; sample_id?: string } = {}): Promise<Annotation[]> {
    const params = new URLSearchParams();
    if (filters.run_id) params.set('run_id', filters.run_id);
    if (filters.sample_id) params.set('sample_id', filters.sample_id);
    const qs = params.toString();
    return this.request(`/api/annotations${qs ? '?' + qs : ''}`);
  }

  postAnnotation(draft: AnnotationDraft): Promise<{ id: string }> {
    return this.request('/api/annotations', {
      method: 'POST',
      body: JSON.stringify(draft),
    });
  }

  getIcl(): Promise<IclState> {
    return this.request('/api/icl');
  }

  getIclHistory(): Promise<{ versions: string[] }> {
    return this.request('/api/icl/history');
  }

  /** Applies an edit against a known base version; 409 means someone else
   * edited first and the caller should reload. */
  putIclEdit(edit: IclEdit, ifMatch: string): Promise<{ version: string }> {
    return this.request('/api/icl', {
      method: 'PUT',
      headers: { 'If-Match': ifMatch },
      body: JSON.stringify(edit),
    });
  }

  postRerun(req: RerunRequest): Promise<RerunAccepted> {
    return this.request('/api/reruns', {
      method: 'POST',
      body: JSON.stringify(req),
    });
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.request(`/api/runs/${encodeURIComponent(jobId)}`);
  }
}
