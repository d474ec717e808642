"""HTTP embedding provider: POST /embed with {"texts": [...]} returns
{"vectors": [[768 floats], ...]} in the same order."""

from __future__ import annotations

from fastapi import FastAPI, Request, Response


def create_app(encoder) -> FastAPI:
    app = FastAPI(title="evicite-ingest embedding provider", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health():
        return {"status": "ok", "encoder": getattr(encoder, "name", "unknown"), "dim": 768}

    @app.post("/embed")
    async def embed(request: Request):
        try:
            body = await request.json()
        except Exception:
            return Response(content='{"error": "body must be JSON"}', status_code=400,
                            media_type="application/json")
        texts = body.get("texts") if isinstance(body, dict) else None
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            return Response(content='{"error": "body needs a list of strings under texts"}',
                            status_code=400, media_type="application/json")
        vectors = [v.tolist() for v in encoder.encode(texts)]
        return {"vectors": vectors}

    return app


def serve(encoder, host: str = "127.0.0.1", port: int = 8041):
    import uvicorn

    uvicorn.run(create_app(encoder), host=host, port=port, log_level="info")
