"""HTTP JSON API over one shared engine.

The engine loads in a background thread so the process binds its port
immediately; until loading finishes every API route answers 503.  All routes
are read-only and safe to call concurrently once the engine is up.

Routes:
 - GET /api/recommend?doc&top&wg&wt[&budget]  ranked candidates + explanations
 - GET /api/document/{id}                      title/abstract/annotations
 - GET /api/document/{id}/graph                scored core edges for display
 - GET /api/about                              how the ranking works, in prose

Parameter errors return 400, unknown documents 404.
"""

from __future__ import annotations

import contextlib
import logging
import threading
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import DEFAULT_GRAPH_STATEMENTS, RecommendationEngine
from .errors import UnknownDocumentError
from .explain import DEFAULT_EXPLANATION_BUDGET, color_map, explanation_records
from .recommend import DEFAULT_TOP_N, DEFAULT_W_GRAPH, DEFAULT_W_TEXT, RecommendationConfig

log = logging.getLogger(__name__)


def create_app(index_dir: str | Path | None = None, *,
               engine: RecommendationEngine | None = None,
               engine_factory: Callable[[], RecommendationEngine] | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    """Assemble the service around an engine, a factory, or an index directory."""
    if engine is None and engine_factory is None and index_dir is None:
        raise ValueError("need an engine, an engine_factory, or an index_dir")
    if engine_factory is None and engine is None:
        engine_factory = lambda: RecommendationEngine.from_index_dir(index_dir)

    state: dict = {"engine": engine, "error": None}

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        if state["engine"] is None:
            def load():
                try:
                    state["engine"] = engine_factory()
                    log.info("engine ready (%d documents)", state["engine"].corpus_size())
                except Exception as exc:  # surfaced as 503 detail
                    log.exception("engine failed to load")
                    state["error"] = str(exc)
            threading.Thread(target=load, name="engine-loader", daemon=True).start()
        yield

    app = FastAPI(title="graphrec", lifespan=lifespan)

    @app.exception_handler(RequestValidationError)
    async def invalid_params(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def ready_engine() -> RecommendationEngine:
        current = state["engine"]
        if current is None:
            detail = "indexes are loading" if state["error"] is None \
                else f"engine failed to load: {state['error']}"
            raise HTTPException(status_code=503, detail=detail)
        return current

    def fetch_document(eng: RecommendationEngine, doc_id: int):
        try:
            return eng.document(doc_id)
        except UnknownDocumentError:
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id}") from None

    @app.get("/api/recommend")
    def recommend(doc: int, top: int = DEFAULT_TOP_N,
                  wg: float = DEFAULT_W_GRAPH, wt: float = DEFAULT_W_TEXT,
                  budget: int = DEFAULT_EXPLANATION_BUDGET):
        eng = ready_engine()
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        if budget < 1:
            raise HTTPException(status_code=400, detail="budget must be >= 1")
        if wg < 0 or wt < 0 or wg + wt <= 0:
            raise HTTPException(status_code=400,
                                detail="weights must be >= 0 and not both zero")
        seed = fetch_document(eng, doc)
        config = RecommendationConfig(w_graph=wg, w_text=wt, top_n=top)
        candidates = eng.recommend(doc, config)

        results = []
        types_seen: set[str] = set(eng.concept_types(doc).values())
        for candidate in candidates:
            explanation = eng.explain_pair(doc, candidate.doc_id, budget)
            records = explanation_records(explanation)
            for record in records:
                types_seen.add(record["subject_type"])
                types_seen.add(record["object_type"])
            candidate_doc = eng.document(candidate.doc_id)
            results.append({
                "doc_id": candidate.doc_id,
                "title": candidate_doc.title,
                "fused": candidate.fused,
                "core_overlap_raw": candidate.core_overlap_raw,
                "core_overlap_norm": candidate.core_overlap_norm,
                "bm25_raw": candidate.bm25_raw,
                "bm25_norm": candidate.bm25_norm,
                "explanation": records,
            })
        return {
            "seed": {"doc_id": seed.doc_id, "title": seed.title},
            "params": {"top": top, "wg": wg, "wt": wt, "budget": budget},
            "candidates": results,
            "colors": color_map(types_seen),
        }

    @app.get("/api/document/{doc_id}")
    def document(doc_id: int):
        eng = ready_engine()
        doc = fetch_document(eng, doc_id)
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "abstract": doc.abstract,
            "concepts": [
                {"id": a.concept, "type": a.concept_type, "start": a.start,
                 "end": a.end, "mention": a.mention}
                for a in doc.concepts
            ],
            "statement_count": len(doc.statements),
        }

    @app.get("/api/document/{doc_id}/graph")
    def document_graph(doc_id: int, max_statements: int = DEFAULT_GRAPH_STATEMENTS,
                       types: str | None = Query(default=None)):
        eng = ready_engine()
        if max_statements < 0:
            raise HTTPException(status_code=400, detail="max_statements must be >= 0")
        doc = fetch_document(eng, doc_id)
        enabled = None
        if types is not None:
            enabled = {t.strip() for t in types.split(",") if t.strip()}
        full_core = eng.core(doc_id)
        available = sorted({t for e in full_core for t in (e.subject_type, e.object_type)})
        edges = eng.document_graph(doc_id, max_statements, enabled)
        node_ids = sorted({n for e in edges for n in (e.subject, e.object)})
        type_by_concept = eng.concept_types(doc_id)
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "available_types": available,
            "total_edges": len(full_core),
            "nodes": [
                {"id": concept,
                 "type": type_by_concept.get(concept, ""),
                 "label": eng.concept_label(doc_id, concept)}
                for concept in node_ids
            ],
            "edges": [
                {"subject": e.subject, "subject_type": e.subject_type,
                 "predicate": e.predicate, "object": e.object,
                 "object_type": e.object_type, "score": e.score}
                for e in edges
            ],
            "colors": color_map(set(type_by_concept.values()) | set(available)),
        }

    @app.get("/api/about")
    def about():
        eng = ready_engine()
        return {"text": eng.about_text(), "corpus_size": eng.corpus_size()}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
