"""HTTP surface: one POST endpoint per handler.

Malformed documents return 422 (pydantic validation) or 400 (semantic
errors raised by the core); invariant failures surface as 500 with the
failure message, since they indicate an internal contradiction rather
than bad input.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import service


def create_app() -> FastAPI:
    app = FastAPI(title="filtmod", version="1.0.0")

    def guard(fn, req):
        try:
            return fn(req)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except RuntimeError as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    @app.post("/validate", response_model=service.ValidateResponse)
    def validate(req: service.ValidateRequest):
        return guard(service.handle_validate, req)

    @app.post("/classify", response_model=service.ClassifyResponse)
    def classify(req: service.ClassifyRequest):
        return guard(service.handle_classify, req)

    @app.post("/tmap", response_model=service.TMapResponse)
    def tmap(req: service.TMapRequest):
        return guard(service.handle_tmap, req)

    @app.post("/skeleton", response_model=service.SkeletonResponse)
    def skeleton(req: service.SkeletonRequest):
        return guard(service.handle_skeleton, req)

    @app.post("/reconstruct", response_model=service.ReconstructResponse)
    def reconstruct(req: service.ReconstructRequest):
        return guard(service.handle_reconstruct, req)

    @app.post("/weyl", response_model=service.WeylResponse)
    def weyl(req: service.WeylRequest):
        return guard(service.handle_weyl, req)

    @app.post("/random", response_model=service.RandomResponse)
    def random_instance(req: service.RandomRequest):
        return guard(service.handle_random, req)

    @app.post("/check", response_model=service.CheckResponse)
    def check(req: service.CheckRequest):
        return guard(service.handle_check, req)

    return app


app = create_app()
