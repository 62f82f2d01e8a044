"""HTTP/JSON API backing the expert review console.

Persistence is flat JSON-lines ledgers under the runs directory:
index.jsonl (iteration records), annotations.jsonl (append-only),
icl_edits.jsonl (linear ICL version history).
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import load_config, provider_config
from .core import IclExample, Provenance, ValidationError, parse_category, parse_locale
from .hillclimb import RunStore, compare_runs
from .prompting import IclStore, load_icl_store
from .runner import run_eval

PAGE_SIZE_DEFAULT = 50


class AnnotationIn(BaseModel):
    sample_id: str
    run_id: str
    verdict: str  # accept | error
    error_category: Optional[str] = None
    note: str = ""
    suggested_reference: Optional[str] = None
    author: str = ""


class IclExampleIn(BaseModel):
    locale: str
    category: str
    original: str
    normalized: str
    provenance: str = "expert_authored"

    def to_example(self) -> IclExample:
        return IclExample(
            locale=parse_locale(self.locale),
            category=parse_category(self.category),
            original=self.original,
            normalized=self.normalized,
            provenance=Provenance(self.provenance),
        )


class IclEditIn(BaseModel):
    op: str  # add | update | remove
    example: IclExampleIn
    replacement: Optional[IclExampleIn] = None  # for update


class RerunIn(BaseModel):
    locale: str
    provider: str = "openai"
    icl_version: str
    parent_run_id: Optional[str] = None
    dataset: Optional[str] = None
    cassette: Optional[str] = None
    iteration: Optional[int] = None


class IclHistory:
    """Linear ICL store version history with an append-only edit ledger."""

    def __init__(self, initial: IclStore, ledger_path: Path):
        self.ledger_path = ledger_path
        self.versions: list[IclStore] = [initial]
        self._lock = threading.Lock()

    @property
    def current(self) -> IclStore:
        return self.versions[-1]

    def get(self, version: str) -> Optional[IclStore]:
        for store in self.versions:
            if store.version == version:
                return store
        return None

    def apply(self, edit: IclEditIn, base_version: str) -> IclStore:
        with self._lock:
            if base_version != self.current.version:
                raise StaleVersionError(self.current.version)
            example = edit.example.to_example()
            if edit.op == "add":
                new_store = self.current.with_added(example)
            elif edit.op == "remove":
                new_store = self.current.with_removed(example)
            elif edit.op == "update":
                if edit.replacement is None:
                    raise ValidationError("update requires a replacement example")
                new_store = self.current.with_removed(example).with_added(
                    edit.replacement.to_example()
                )
            else:
                raise ValidationError(f"unknown ICL edit op {edit.op!r}")
            self.versions.append(new_store)
            with self.ledger_path.open("a", encoding="utf-8") as f:
                f.write(
                    json.dumps(
                        {"op": edit.op, "example": edit.example.model_dump(),
                         "replacement": edit.replacement.model_dump() if edit.replacement else None,
                         "version": new_store.version},
                        ensure_ascii=False,
                    )
                    + "\n"
                )
            return new_store


class StaleVersionError(Exception):
    def __init__(self, current_version: str):
        self.current_version = current_version


def create_app(
    runs_dir: str | Path,
    icl_path: Optional[str | Path] = None,
    static_dir: Optional[str | Path] = None,
    config_path: Optional[str | Path] = None,
    default_dataset: Optional[str | Path] = None,
    default_cassette: Optional[str | Path] = None,
    run_async: bool = True,
) -> FastAPI:
    runs_root = Path(runs_dir)
    store = RunStore(runs_root)
    initial_icl = load_icl_store(icl_path) if icl_path else IclStore.from_examples([])
    icl_history = IclHistory(initial_icl, runs_root / "icl_edits.jsonl")
    annotations_path = runs_root / "annotations.jsonl"
    annotations_lock = threading.Lock()
    config = load_config(config_path)
    jobs: dict[str, dict] = {}
    jobs_lock = threading.Lock()
    shared_token = os.environ.get("POLYNORM_TOKEN", "")

    app = FastAPI(title="polynorm review console", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def auth(request: Request, call_next):
        if shared_token and request.url.path.startswith("/api"):
            if request.headers.get("x-auth-token", "") != shared_token:
                return JSONResponse({"detail": "invalid token"}, status_code=401)
        return await call_next(request)

    def run_summary(rec) -> dict:
        return {
            "run_id": rec.run_id,
            "parent_run_id": rec.parent_run_id,
            "locale": rec.report.config.locale.tag,
            "system_id": rec.report.config.system_id,
            "iteration": rec.report.config.iteration,
            "icl_set_hash": rec.report.config.icl_set_hash,
            "overall_rate": rec.report.overall_rate,
            "overall_bleu": rec.report.overall_bleu,
            "created_at": rec.report.created_at,
            "status": "completed",
        }

    @app.get("/api/runs")
    def list_runs():
        recs = sorted(store.records(), key=lambda r: r.report.created_at, reverse=True)
        return [run_summary(r) for r in recs]

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        rec = store.get(run_id)
        if rec is not None:
            out = run_summary(rec)
            out["report"] = rec.report.to_dict()
            return out
        with jobs_lock:
            job = jobs.get(run_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        return dict(job)

    @app.get("/api/runs/{run_id}/samples")
    def run_samples(
        run_id: str,
        category: Optional[str] = None,
        only_errors: bool = False,
        page: int = 1,
        page_size: int = PAGE_SIZE_DEFAULT,
    ):
        samples_path = runs_root / run_id / "samples.jsonl"
        if not samples_path.exists():
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        records = [
            json.loads(line)
            for line in samples_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        if category:
            cat = parse_category(category).value
            records = [r for r in records if r["category"] == cat]
        if only_errors:
            records = [r for r in records if r["highlights"] or r.get("client_error")]
        total = len(records)
        start = (page - 1) * page_size
        return {
            "total": total,
            "page": page,
            "page_size": page_size,
            "samples": records[start : start + page_size],
        }

    @app.get("/api/compare")
    def compare(a: str, b: str):
        ra, rb = store.get(a), store.get(b)
        if ra is None or rb is None:
            raise HTTPException(status_code=404, detail="unknown run id")
        try:
            deltas, overall = compare_runs(ra, rb)
        except ValueError as e:
            raise HTTPException(status_code=422, detail=str(e))
        return {
            "overall_delta": overall,
            "deltas": [
                {
                    "category": d.category.value,
                    "before": d.before,
                    "after": d.after,
                    "delta": d.delta,
                }
                for d in deltas
            ],
        }

    @app.get("/api/annotations")
    def list_annotations(run_id: Optional[str] = None, sample_id: Optional[str] = None):
        if not annotations_path.exists():
            return []
        out = []
        for line in annotations_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if run_id and rec["run_id"] != run_id:
                continue
            if sample_id and rec["sample_id"] != sample_id:
                continue
            out.append(rec)
        return out

    @app.post("/api/annotations", status_code=201)
    def post_annotation(body: AnnotationIn):
        if body.verdict not in ("accept", "error"):
            raise HTTPException(status_code=422, detail="verdict must be 'accept' or 'error'")
        if body.verdict == "error" and not body.error_category:
            raise HTTPException(
                status_code=422, detail="error verdict requires an error_category"
            )
        if body.error_category:
            try:
                parse_category(body.error_category)
            except ValidationError as e:
                raise HTTPException(status_code=422, detail=str(e))
        samples_path = runs_root / body.run_id / "samples.jsonl"
        if not samples_path.exists():
            raise HTTPException(status_code=404, detail=f"unknown run {body.run_id!r}")
        known = {
            json.loads(line)["sample_id"]
            for line in samples_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        }
        if body.sample_id not in known:
            raise HTTPException(status_code=404, detail=f"unknown sample {body.sample_id!r}")
        record = body.model_dump()
        record["id"] = f"ann-{uuid.uuid4().hex[:12]}"
        record["created_at"] = datetime.now(timezone.utc).isoformat()
        with annotations_lock:
            with annotations_path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
        return {"id": record["id"]}

    @app.get("/api/icl")
    def get_icl():
        cur = icl_history.current
        return {
            "version": cur.version,
            "examples": [
                {
                    "locale": e.locale.tag,
                    "category": e.category.value,
                    "original": e.original,
                    "normalized": e.normalized,
                    "provenance": e.provenance.value,
                }
                for e in cur.all_examples()
            ],
        }

    @app.get("/api/icl/history")
    def icl_version_history():
        return {"versions": [s.version for s in icl_history.versions]}

    @app.put("/api/icl")
    def put_icl(body: IclEditIn, if_match: str = Header(default="")):
        base = if_match or icl_history.current.version
        try:
            new_store = icl_history.apply(body, base)
        except StaleVersionError as e:
            raise HTTPException(
                status_code=409,
                detail=f"stale version; current is {e.current_version}",
            )
        except LookupError:
            raise HTTPException(status_code=404, detail="example not found in store")
        except (ValidationError, ValueError) as e:
            raise HTTPException(status_code=422, detail=str(e))
        return {"version": new_store.version}

    def execute_rerun(job_id: str, body: RerunIn, icl_store: IclStore):
        try:
            locale = parse_locale(body.locale)
            cfg = provider_config(body.provider, config)
            parent = store.get(body.parent_run_id) if body.parent_run_id else None
            iteration = (
                body.iteration
                if body.iteration is not None
                else (parent.report.config.iteration + 1 if parent else 0)
            )
            dataset_path = body.dataset or default_dataset
            cassette = body.cassette or default_cassette
            if dataset_path is None:
                raise ValidationError("no dataset configured for reruns")
            result = run_eval(
                dataset_path,
                locale,
                icl_store,
                cfg,
                runs_root,
                mode="replay" if cassette else "live",
                cassette_path=cassette,
                iteration=iteration,
                parent_run_id=body.parent_run_id,
            )
            with jobs_lock:
                jobs[job_id] = {
                    "run_id": result.record.run_id,
                    "job_id": job_id,
                    "status": "completed",
                }
        except Exception as e:
            with jobs_lock:
                jobs[job_id] = {"job_id": job_id, "status": "failed", "error": str(e)}

    @app.post("/api/reruns", status_code=202)
    def post_rerun(body: RerunIn):
        icl_store = icl_history.get(body.icl_version)
        if icl_store is None:
            raise HTTPException(status_code=404, detail=f"unknown ICL version {body.icl_version!r}")
        if body.parent_run_id and store.get(body.parent_run_id) is None:
            raise HTTPException(status_code=404, detail=f"unknown parent run {body.parent_run_id!r}")
        key = (body.locale, body.provider, body.icl_version, body.parent_run_id)
        with jobs_lock:
            for job in jobs.values():
                if job.get("status") == "running" and job.get("key") == list(key):
                    raise HTTPException(status_code=409, detail="identical rerun already in flight")
            job_id = f"job-{uuid.uuid4().hex[:12]}"
            jobs[job_id] = {"job_id": job_id, "status": "running", "key": list(key)}
        if run_async:
            threading.Thread(
                target=execute_rerun, args=(job_id, body, icl_store), daemon=True
            ).start()
        else:
            execute_rerun(job_id, body, icl_store)
        return {"job_id": job_id, "status_url": f"/api/runs/{job_id}"}

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
