"""HTTP service exposing the scenario engine.

One POST endpoint per workflow family, all taking the same RunConfig JSON
body and returning the produced files inline (text content, or base64 for
binary), their sidecars, and a summary.  The CLI is a thin client of these
handlers; long sweeps and fits run server-side so plotting frontends can
stay stateless.
"""

from __future__ import annotations

import base64

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ValidationError

from . import __version__
from .lindblad import DegenerateSteadyStateError, NumericsError
from .model import ConfigError
from .scenarios import RunConfig, ScenarioError, run_scenario, validate_scenario

app = FastAPI(title="qheat", version=__version__)

_FAMILIES = {
    "simulate": ("spectrum", "reflection", "power-loss", "budget", "autler", "qp"),
    "fit": ("fit",),
    "welch": ("welch",),
    "table1": ("table1",),
    "spectrometer": ("spectrometer",),
}


class RunResponse(BaseModel):
    outputs: dict
    sidecars: dict
    summary: dict


class ValidateResponse(BaseModel):
    ok: bool
    errors: list
    warnings: list
    notes: list


def execute(cfg: RunConfig) -> RunResponse:
    """Run a config and package the outputs for transport."""
    report = validate_scenario(cfg)
    if not report["ok"]:
        raise ConfigError("; ".join(report["errors"]))
    result = run_scenario(cfg)
    outputs = {}
    for name, content in result["outputs"].items():
        if isinstance(content, bytes):
            outputs[name] = {"encoding": "base64", "content": base64.b64encode(content).decode()}
        else:
            outputs[name] = {"encoding": "text", "content": content}
    return RunResponse(outputs=outputs, sidecars=result["sidecars"], summary=result["summary"])


def _endpoint(cfg: RunConfig, family: str) -> RunResponse:
    if cfg.scenario not in _FAMILIES[family]:
        raise HTTPException(status_code=422, detail=f"scenario {cfg.scenario} does not belong to /{family}")
    try:
        return execute(cfg)
    except (ConfigError, ValidationError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except (ScenarioError, NumericsError, DegenerateSteadyStateError) as exc:
        raise HTTPException(status_code=500, detail=f"numerical failure: {exc}") from exc
    except OSError as exc:
        raise HTTPException(status_code=500, detail=f"i/o failure: {exc}") from exc


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/v1/validate", response_model=ValidateResponse)
def validate(cfg: RunConfig) -> ValidateResponse:
    return ValidateResponse(**validate_scenario(cfg))


@app.post("/v1/simulate", response_model=RunResponse)
def simulate(cfg: RunConfig) -> RunResponse:
    return _endpoint(cfg, "simulate")


@app.post("/v1/fit", response_model=RunResponse)
def fit(cfg: RunConfig) -> RunResponse:
    return _endpoint(cfg, "fit")


@app.post("/v1/welch", response_model=RunResponse)
def welch(cfg: RunConfig) -> RunResponse:
    return _endpoint(cfg, "welch")


@app.post("/v1/table1", response_model=RunResponse)
def table1(cfg: RunConfig) -> RunResponse:
    return _endpoint(cfg, "table1")


@app.post("/v1/spectrometer", response_model=RunResponse)
def spectrometer_endpoint(cfg: RunConfig) -> RunResponse:
    return _endpoint(cfg, "spectrometer")
