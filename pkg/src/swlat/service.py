"""HTTP front end for the swlat engines."""

from __future__ import annotations

import os
from contextlib import asynccontextmanager

import anyio.to_thread
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import ops
from . import schemas as S
from .recovery import AmbiguousRecovery
from .surfaces import UnsupportedModel



@asynccontextmanager
async def lifespan(_: FastAPI):
    # sync endpoints run in the anyio worker pool; SWLAT_THREADS caps it
    threads = os.environ.get("SWLAT_THREADS")
    if threads:
        anyio.to_thread.current_default_thread_limiter().total_tokens = max(1, int(threads))
    yield


app = FastAPI(title="swlat", version="0.1.0", lifespan=lifespan)

STATUS = {"schema": 422, "unsupported": 400, "ambiguous": 409, "domain": 400}


def _error(kind: str, detail) -> JSONResponse:
    return JSONResponse(status_code=STATUS[kind], content=S.ErrorReport(error=kind, detail=detail).model_dump())


@app.exception_handler(RequestValidationError)
async def _schema(_: Request, exc: RequestValidationError):
    detail = [{"loc": list(e.get("loc", ())), "msg": e.get("msg", "")} for e in exc.errors()]
    return _error("schema", detail)


@app.exception_handler(UnsupportedModel)
async def _unsupported(_: Request, exc: UnsupportedModel):
    return _error("unsupported", str(exc))


@app.exception_handler(AmbiguousRecovery)
async def _ambiguous(_: Request, exc: AmbiguousRecovery):
    return _error("ambiguous", str(exc))


@app.exception_handler(ValueError)
async def _domain(_: Request, exc: ValueError):
    # RecoveryError, ChamberError, LatticeError and DomainError all land here
    return _error("domain", str(exc))


@app.post("/enumerate", response_model=S.BasicClassSetModel)
def enumerate_(surface: S.SurfaceInput):
    return ops.enumerate_(surface)


@app.post("/recover", response_model=S.RecoverReport, response_model_exclude_none=True)
def recover(req: S.RecoverRequest):
    return ops.recover(req)


@app.post("/chambers/walls", response_model=S.WallsReport)
def walls(req: S.WallsRequest):
    return ops.walls(req)


@app.post("/chambers/sw", response_model=S.SWReport)
def sw(req: S.SWRequest):
    return ops.sw(req)


@app.post("/chambers/verify-c0", response_model=S.C0Report)
def verify_c0(req: S.SurfaceRequest):
    return ops.verify_c0(req)


@app.post("/chambers/search", response_model=S.SearchReport)
def search(req: S.SearchRequest):
    return ops.search(req)


@app.post("/check-diffeo", response_model=S.CheckDiffeoReport, response_model_exclude_none=True)
def check_diffeo(req: S.CheckDiffeoRequest):
    return ops.check_diffeo(req)


@app.post("/check-summand", response_model=S.CheckSummandReport, response_model_exclude_none=True)
def check_summand(req: S.CheckSummandRequest):
    return ops.check_summand(req)


@app.get("/selftest", response_model=S.SelftestReport)
def selftest(only: str | None = None):
    from .acceptance import run_all

    wanted = {int(x) for x in only.split(",")} if only else None
    return run_all(wanted)

