"""HTTP service over a loaded database.

The service is stateless apart from the immutable database loaded at
startup; recommendation responses are serialized by the same canonical
encoder the CLI uses, so the two transports emit identical bytes.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .config import AppConfig, provider_from_config
from .database import EvidenceDatabase
from .embeddings import EmbeddingUnavailableError
from .recommend import payload, run_query, to_json


def _json_response(obj: dict, status_code: int = 200) -> Response:
    return Response(
        content=to_json(obj), status_code=status_code, media_type="application/json"
    )


def create_app(db: EvidenceDatabase, config: AppConfig, provider=None) -> FastAPI:
    if provider is None:
        provider = provider_from_config(config)
    app = FastAPI(title="evicite", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    embed_gate = threading.Semaphore(config.max_concurrent_embeds)

    @app.get("/health")
    def health():
        return _json_response(
            {
                "status": "ok",
                "doc_count": db.stats.doc_count,
                "paper_count": len(db.papers),
                "avg_span_tokens": db.stats.avg_span_tokens,
            }
        )

    @app.get("/config")
    def get_config():
        return _json_response(config.to_dict())

    @app.post("/recommend")
    async def recommend_route(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _json_response({"error": "body must be a JSON object"}, 400)
        if not isinstance(body, dict) or not isinstance(body.get("query"), str):
            return _json_response({"error": "body must contain a string 'query'"}, 400)
        k = body.get("k", None)
        if k is not None and (not isinstance(k, int) or isinstance(k, bool) or k < 0):
            return _json_response({"error": "'k' must be a non-negative integer"}, 400)
        try:
            with embed_gate:
                result = run_query(db, config, body["query"], k=k, provider=provider)
        except EmbeddingUnavailableError as exc:
            return _json_response({"error": f"embedding provider unavailable: {exc}"}, 503)
        return _json_response(payload(result))

    @app.get("/evidence/{span_id}")
    def evidence(span_id: str):
        try:
            numeric_id = int(span_id)
        except ValueError:
            return _json_response({"error": f"unknown evidence span {span_id!r}"}, 404)
        if not 0 <= numeric_id < len(db):
            return _json_response({"error": f"unknown evidence span {span_id!r}"}, 404)
        record = db.record(numeric_id)
        citations = []
        for paper_id, support in record.citations.items():
            meta = db.papers.get(paper_id)
            citations.append(
                {
                    "paper": meta.to_dict() if meta else {"paper_id": paper_id},
                    "support": support,
                }
            )
        return _json_response(
            {
                "span_id": numeric_id,
                "span_text": record.span_text,
                "citations": citations,
                "provenance": [
                    {"paper_id": p, "sentence_index": i} for p, i in record.sources
                ],
            }
        )

    return app


def serve(db: EvidenceDatabase, config: AppConfig, host: str = "127.0.0.1", port: int = 8040):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(db, config), host=host, port=port, log_level="info")
