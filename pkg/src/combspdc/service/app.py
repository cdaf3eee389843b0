"""HTTP service exposing the simulation pipeline.

The service is stateless and purely computational: requests carry a full
run configuration, responses carry numbers and arrays.  File artifacts
(CSV, PNG, manifests) are written by clients such as the bundled CLI, so
a shared deployment never touches disk.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, pipeline
from ..errors import CombSpdcError
from ..materials import available_materials, get_material
from . import models

app = FastAPI(
    title="combspdc",
    description="Comb-pumped SPDC two-photon spectral amplitude engineering",
    version=__version__,
)


@app.exception_handler(CombSpdcError)
async def _domain_error(request: Request, exc: CombSpdcError):
    return JSONResponse(
        status_code=400,
        content={"error": type(exc).__name__, "message": str(exc)},
    )


@app.get("/health", response_model=models.HealthResponse)
def health():
    return models.HealthResponse(status="ok", version=__version__)


@app.get("/materials", response_model=list[models.MaterialInfo])
def materials():
    out = []
    for name in available_materials():
        m = get_material(name)
        out.append(models.MaterialInfo(
            material=m.material,
            lambda_min_um=m.lambda_min_um,
            lambda_max_um=m.lambda_max_um,
            source=m.source,
        ))
    return out


@app.post("/run", response_model=models.RunResponse)
def run(req: models.RunRequest):
    return pipeline.run(req.config, include_arrays=req.include_arrays,
                        grid_n=req.grid_n)


@app.post("/sweep", response_model=models.SweepResponse)
def sweep(req: models.SweepRequest):
    return pipeline.sweep(req.config, req.parameter, req.values,
                          include_arrays=req.include_arrays, grid_n=req.grid_n)


@app.post("/search", response_model=models.SearchResponse)
def search(req: models.SearchRequest):
    return pipeline.design_search(req.config, req.space)


@app.post("/pump-spectrum", response_model=models.PumpSpectrumResponse)
def pump_spectrum(req: models.PumpSpectrumRequest):
    return pipeline.pump_spectrum(req.config, points=req.points,
                                  span_fwhm=req.span_fwhm)


@app.post("/measure-sim", response_model=models.MeasureSimResponse)
def measure_sim(req: models.MeasureSimRequest):
    return pipeline.measure_sim(req.config, seed=req.seed)
