import { ApiClient, ApiError } from './api.js';
import { CATEGORIES } from './categories.js';
import { compareRows, pct, shortId, signedPct } from './format.js';
import { diffHtml, escapeHtml } from './highlight.js';
import type { AnnotationDraft, IclState, RunSummary, SampleView } from './types.js';
import { validateAnnotation } from './validate.js';

const api = new ApiClient('', localStorage.getItem('polynorm_token') ?? '');
const root = document.getElementById('app') as HTMLElement;

type Banner = { tone: 'info' | 'error' | 'success'; text: string } | null;
let banner: Banner = null;

function setBanner(b: Banner): void {
  banner = b;
  const el = document.getElementById('banner');
  if (!el) return;
  if (!banner) {
    el.className = 'banner hidden';
    el.textContent = '';
  } else {
    el.className = `banner banner-${banner.tone}`;
    el.textContent = banner.text;
  }
}

function fail(e: unknown): void {
  const text = e instanceof ApiError ? e.message : String(e);
  setBanner({ tone: 'error', text });
}

function categoryOptions(selected: string | null): string {
  const opts = CATEGORIES.map(
    (c) => `<option value="${c}" ${c === selected ? 'selected' : ''}>${c}</option>`,
  );
  return `<option value="">(none)</option>` + opts.join('');
}

// ---- runs list ----

function runRow(r: RunSummary): string {
  return `<tr>
    <td><a href="#/runs/${r.run_id}">${shortId(r.run_id, 12)}</a></td>
    <td>${escapeHtml(r.locale)}</td>
    <td>${escapeHtml(r.system_id)}</td>
    <td>${r.iteration}</td>
    <td>${pct(r.overall_rate)}</td>
    <td>${pct(r.overall_bleu)}</td>
    <td>${escapeHtml(r.created_at)}</td>
    <td>${r.parent_run_id ? `<a href="#/compare/${r.parent_run_id}/${r.run_id}">vs parent</a>` : ''}</td>
  </tr>`;
}

async function viewRuns(): Promise<void> {
  const runs = await api.listRuns();
  root.innerHTML = `
    <h2>Runs</h2>
    ${runs.length === 0 ? '<p>No runs recorded yet.</p>' : ''}
    <table class="grid">
      <thead><tr><th>run</th><th>locale</th><th>system</th><th>iter</th>
        <th>rate</th><th>BLEU</th><th>created</th><th></th></tr></thead>
      <tbody>${runs.map(runRow).join('')}</tbody>
    </table>`;
}

// ---- run detail with samples and annotation form ----

interface SampleFilters {
  category: string;
  onlyErrors: boolean;
  page: number;
}

const filters: SampleFilters = { category: '', onlyErrors: true, page: 1 };

function sampleCard(s: SampleView, runId: string): string {
  const err = s.client_error
    ? `<p class="client-error">model error: ${escapeHtml(s.client_error)}</p>`
    : '';
  return `<div class="sample" data-sample="${escapeHtml(s.sample_id)}">
    <div class="sample-head">
      <strong>${escapeHtml(s.sample_id)}</strong>
      <span class="tag">${escapeHtml(s.category)}</span>
      <span>rate ${pct(s.rate)}</span>
      <span>S${s.edit_counts.S} D${s.edit_counts.D} I${s.edit_counts.I}</span>
    </div>
    ${err}
    ${diffHtml(s)}
    <form class="annotate" data-sample="${escapeHtml(s.sample_id)}" data-run="${escapeHtml(runId)}">
      <select name="verdict">
        <option value="">verdict...</option>
        <option value="accept">accept</option>
        <option value="error">error</option>
      </select>
      <select name="error_category">${categoryOptions(s.category)}</select>
      <input name="note" placeholder="note" />
      <input name="author" placeholder="reviewer" />
      <button type="submit">save</button>
      <span class="form-error"></span>
    </form>
  </div>`;
}

function draftFromForm(form: HTMLFormElement): AnnotationDraft {
  const data = new FormData(form);
  return {
    sample_id: form.dataset.sample ?? '',
    run_id: form.dataset.run ?? '',
    verdict: (data.get('verdict') as AnnotationDraft['verdict']) ?? '',
    error_category: (data.get('error_category') as string) || null,
    note: (data.get('note') as string) ?? '',
    author: (data.get('author') as string) ?? '',
  };
}

async function submitAnnotation(form: HTMLFormElement): Promise<void> {
  const draft = draftFromForm(form);
  const slot = form.querySelector('.form-error') as HTMLElement;
  const problems = validateAnnotation(draft);
  if (problems.length > 0) {
    slot.textContent = problems.join('; ');
    return;
  }
  slot.textContent = '';
  try {
    const { id } = await api.postAnnotation(draft);
    setBanner({ tone: 'success', text: `saved annotation ${id}` });
  } catch (e) {
    if (e instanceof ApiError) slot.textContent = e.detail;
    else fail(e);
  }
}

async function viewRun(runId: string): Promise<void> {
  const page = await api.getSamples(runId, {
    category: filters.category || undefined,
    only_errors: filters.onlyErrors,
    page: filters.page,
  });
  root.innerHTML = `
    <h2>Run ${shortId(runId, 16)}</h2>
    <div class="toolbar">
      <label>category
        <select id="f-category">${categoryOptions(filters.category || null)}</select>
      </label>
      <label><input type="checkbox" id="f-errors" ${filters.onlyErrors ? 'checked' : ''}/>
        errors only</label>
      <span>${page.total} samples</span>
      <button id="prev" ${page.page <= 1 ? 'disabled' : ''}>prev</button>
      <span>page ${page.page}</span>
      <button id="next" ${page.page * page.page_size >= page.total ? 'disabled' : ''}>next</button>
    </div>
    ${page.samples.map((s) => sampleCard(s, runId)).join('')}`;

  (document.getElementById('f-category') as HTMLSelectElement).onchange = (ev) => {
    filters.category = (ev.target as HTMLSelectElement).value;
    filters.page = 1;
    void viewRun(runId).catch(fail);
  };
  (document.getElementById('f-errors') as HTMLInputElement).onchange = (ev) => {
    filters.onlyErrors = (ev.target as HTMLInputElement).checked;
    filters.page = 1;
    void viewRun(runId).catch(fail);
  };
  (document.getElementById('prev') as HTMLButtonElement).onclick = () => {
    filters.page = Math.max(1, filters.page - 1);
    void viewRun(runId).catch(fail);
  };
  (document.getElementById('next') as HTMLButtonElement).onclick = () => {
    filters.page += 1;
    void viewRun(runId).catch(fail);
  };
  for (const form of root.querySelectorAll<HTMLFormElement>('form.annotate')) {
    form.onsubmit = (ev) => {
      ev.preventDefault();
      void submitAnnotation(form);
    };
  }
}

// ---- compare ----

async function viewCompare(a: string, b: string): Promise<void> {
  const result = await api.compare(a, b);
  const rows = compareRows(result);
  root.innerHTML = `
    <h2>Compare</h2>
    <p>${shortId(a, 12)} &rarr; ${shortId(b, 12)}:
      overall ${signedPct(result.overall_delta)}</p>
    <table class="grid">
      <thead><tr><th>category</th><th>before</th><th>after</th><th>delta</th></tr></thead>
      <tbody>${rows
        .map(
          (r) => `<tr class="${r.direction}">
            <td>${escapeHtml(r.category)}</td><td>${r.before}</td>
            <td>${r.after}</td><td>${r.delta}</td></tr>`,
        )
        .join('')}</tbody>
    </table>`;
}

// ---- ICL editor ----

async function reloadIclAfterConflict(): Promise<void> {
  setBanner({
    tone: 'error',
    text: 'the example set changed under you; reloaded to the latest version',
  });
  await viewIcl();
}

async function submitIclAdd(state: IclState, form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const example = {
    locale: (data.get('locale') as string) ?? '',
    category: (data.get('category') as string) ?? '',
    original: (data.get('original') as string) ?? '',
    normalized: (data.get('normalized') as string) ?? '',
    provenance: 'expert_authored',
  };
  try {
    await api.putIclEdit({ op: 'add', example }, state.version);
    setBanner({ tone: 'success', text: 'example added' });
    await viewIcl();
  } catch (e) {
    if (e instanceof ApiError && e.status === 409) await reloadIclAfterConflict();
    else fail(e);
  }
}

async function removeIclExample(state: IclState, index: number): Promise<void> {
  const example = state.examples[index];
  if (!example) return;
  try {
    await api.putIclEdit({ op: 'remove', example }, state.version);
    setBanner({ tone: 'success', text: 'example removed' });
    await viewIcl();
  } catch (e) {
    if (e instanceof ApiError && e.status === 409) await reloadIclAfterConflict();
    else fail(e);
  }
}

async function startRerun(state: IclState): Promise<void> {
  const locale = (document.getElementById('rerun-locale') as HTMLInputElement).value;
  const runs = await api.listRuns();
  const parent = runs.find((r) => r.locale === locale) ?? runs[0];
  try {
    const { job_id } = await api.postRerun({
      locale,
      provider: 'openai',
      icl_version: state.version,
      parent_run_id: parent ? parent.run_id : null,
    });
    setBanner({ tone: 'info', text: `rerun started: ${job_id}` });
    void pollJob(job_id, parent ? parent.run_id : null);
  } catch (e) {
    if (e instanceof ApiError && e.status === 409) {
      setBanner({ tone: 'error', text: 'an identical rerun is already in flight' });
    } else fail(e);
  }
}

async function pollJob(jobId: string, parentRunId: string | null): Promise<void> {
  for (;;) {
    const job = await api.getJob(jobId);
    if (job.status === 'failed') {
      setBanner({ tone: 'error', text: `rerun failed: ${job.error ?? 'unknown error'}` });
      return;
    }
    if (job.status === 'completed' && job.run_id) {
      setBanner({ tone: 'success', text: `rerun finished: ${job.run_id}` });
      location.hash = parentRunId
        ? `#/compare/${parentRunId}/${job.run_id}`
        : `#/runs/${job.run_id}`;
      return;
    }
    await new Promise((r) => setTimeout(r, 1000));
  }
}

async function viewIcl(): Promise<void> {
  const state = await api.getIcl();
  const history = await api.getIclHistory();
  root.innerHTML = `
    <h2>In-context examples</h2>
    <p>version <code>${shortId(state.version, 16)}</code>
      (${history.versions.length} version${history.versions.length === 1 ? '' : 's'})</p>
    <table class="grid">
      <thead><tr><th>locale</th><th>category</th><th>original</th>
        <th>normalized</th><th>provenance</th><th></th></tr></thead>
      <tbody>${state.examples
        .map(
          (e, i) => `<tr>
            <td>${escapeHtml(e.locale)}</td><td>${escapeHtml(e.category)}</td>
            <td>${escapeHtml(e.original)}</td><td>${escapeHtml(e.normalized)}</td>
            <td>${escapeHtml(e.provenance)}</td>
            <td><button class="remove" data-index="${i}">remove</button></td></tr>`,
        )
        .join('')}</tbody>
    </table>
    <h3>Add example</h3>
    <form id="icl-add">
      <input name="locale" placeholder="locale" value="en-US" required />
      <select name="category">${categoryOptions(null)}</select>
      <input name="original" placeholder="written form" required />
      <input name="normalized" placeholder="spoken form" required />
      <button type="submit">add</button>
    </form>
    <h3>Rerun with this example set</h3>
    <div class="toolbar">
      <input id="rerun-locale" value="en-US" />
      <button id="rerun">rerun eval</button>
    </div>`;

  (document.getElementById('icl-add') as HTMLFormElement).onsubmit = (ev) => {
    ev.preventDefault();
    void submitIclAdd(state, ev.target as HTMLFormElement).catch(fail);
  };
  for (const btn of root.querySelectorAll<HTMLButtonElement>('button.remove')) {
    btn.onclick = () => void removeIclExample(state, Number(btn.dataset.index)).catch(fail);
  }
  (document.getElementById('rerun') as HTMLButtonElement).onclick = () =>
    void startRerun(state).catch(fail);
}

// ---- router ----

async function route(): Promise<void> {
  setBanner(null);
  const hash = location.hash || '#/runs';
  const parts = hash.slice(2).split('/');
  try {
    if (parts[0] === 'runs' && parts[1]) await viewRun(parts[1]);
    else if (parts[0] === 'compare' && parts[1] && parts[2]) await viewCompare(parts[1], parts[2]);
    else if (parts[0] === 'icl') await viewIcl();
    else await viewRuns();
  } catch (e) {
    fail(e);
  }
}

window.addEventListener('hashchange', () => void route());
void route();
