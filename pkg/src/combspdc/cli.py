"""Command-line front-end: a thin client of the HTTP service.

Every subcommand posts a JSON request to the service API and writes the
returned numbers to disk.  By default the service runs in-process (no
server needed); point ``--server`` or the COMBSPDC_SERVER environment
variable at a running instance to execute remotely.  All file writes
happen on the client side.

Exit codes: 0 success, 2 configuration/validation error, 3 computation
error.
"""

from __future__ import annotations

import json
import os
import sys

import click
import httpx

EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3


class ServiceClient:
    """HTTP client over a remote server or the in-process ASGI app."""

    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import app
            self._client = TestClient(app)

    def get(self, path: str) -> dict:
        return self._handle(self._client.get(path))

    def post(self, path: str, payload: dict) -> dict:
        return self._handle(self._client.post(path, json=payload))

    @staticmethod
    def _handle(resp) -> dict:
        if resp.status_code == 200:
            return resp.json()
        try:
            detail = resp.json()
        except ValueError:
            detail = resp.text
        if resp.status_code == 422:
            _fail(EXIT_VALIDATION, f"configuration rejected: {json.dumps(detail)}")
        _fail(EXIT_COMPUTATION, f"computation failed ({resp.status_code}): "
                                f"{json.dumps(detail)}")


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        _fail(EXIT_VALIDATION, f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail(EXIT_VALIDATION, f"config file {path} is not valid JSON: {exc}")


def _out_dir(config: dict, out: str | None) -> str:
    root = os.environ.get("COMBSPDC_OUTPUT_ROOT", ".")
    sub = out or config.get("output", {}).get("dir", "out")
    return os.path.join(root, sub)


@click.group()
@click.option("--server", envvar="COMBSPDC_SERVER", default=None,
              help="Base URL of a running combspdc service; in-process otherwise.")
@click.pass_context
def main(ctx, server):
    """Comb-pumped SPDC spectral engineering toolkit."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--out", default=None, help="Output directory (overrides the config).")
@click.option("--grid", "grid_n", type=int, default=None, help="Grid size override.")
@click.pass_obj
def run(client: ServiceClient, config_path, out, grid_n):
    """Build a TPSA, decompose it and write grids, report and images."""
    from . import io_utils

    config = _load_config(config_path)
    rep = client.post("/run", {"config": config, "include_arrays": True,
                               "grid_n": grid_n})
    manifest = io_utils.Manifest(_out_dir(config, out))
    arrays = rep.pop("arrays") or {}
    io_utils.write_json(manifest, "report.json", rep)
    sig = rep["grid"]["signal_nm"]
    idl = rep["grid"]["idler_nm"]
    io_utils.write_grid_csv(manifest, "tpsa_intensity.csv", sig, idl,
                            arrays["intensity"])
    if "amplitude_re" in arrays:
        io_utils.write_grid_csv(manifest, "tpsa_re.csv", sig, idl,
                                arrays["amplitude_re"])
        io_utils.write_grid_csv(manifest, "tpsa_im.csv", sig, idl,
                                arrays["amplitude_im"])
    if arrays.get("mode_profiles_signal"):
        rows = zip(arrays["mode_axis_signal_nm"],
                   *arrays["mode_profiles_signal"])
        n_modes = len(arrays["mode_profiles_signal"])
        io_utils.write_table_csv(
            manifest, "modes_signal.csv",
            ["signal_nm"] + [f"mode_{m}" for m in range(n_modes)], rows)
    if config.get("output", {}).get("heatmap", True):
        io_utils.write_heatmap_png(manifest, "tpsa.png", arrays["intensity"],
                                   sig, idl, title="|F|^2")
        if arrays.get("peak_intensity"):
            io_utils.write_heatmap_png(
                manifest, "peak.png", arrays["peak_intensity"],
                arrays["peak_signal_nm"], arrays["peak_idler_nm"],
                title="isolated maximum")
    manifest.write()
    k = rep["analysis"]["schmidt"]["schmidt_number"]
    click.echo(f"K = {k:.6f}  tilt = {rep['crystal']['tilt_deg']:.3f} deg  "
               f"-> {manifest.out_dir}")


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--param", required=True, help="Dotted config path, e.g. crystal.length_mm.")
@click.option("--values", required=True,
              help="Comma-separated values, e.g. 13,15,17.")
@click.option("--out", default=None)
@click.option("--grid", "grid_n", type=int, default=None)
@click.option("--images/--no-images", default=True,
              help="Write a heatmap per sweep value.")
@click.pass_obj
def sweep(client: ServiceClient, config_path, param, values, out, grid_n, images):
    """Run the pipeline for several values of one parameter."""
    from . import io_utils

    config = _load_config(config_path)
    try:
        vals = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        _fail(EXIT_VALIDATION, f"--values must be numeric, got {values!r}")
    rep = client.post("/sweep", {"config": config, "parameter": param,
                                 "values": vals, "include_arrays": images,
                                 "grid_n": grid_n})
    manifest = io_utils.Manifest(_out_dir(config, out))
    header = ["value", "schmidt_number", "tilt_deg", "tilt_estimate_deg",
              "margin_signal", "margin_idler", "error"]
    rows = [[row.get(h) for h in header] for row in rep["rows"]]
    io_utils.write_table_csv(manifest, "sweep.csv", header, rows)
    io_utils.write_json(manifest, "report.json",
                        {"parameter": rep["parameter"], "rows": rep["rows"]})
    if images and rep.get("arrays_per_value"):
        for idx, (row, arrays) in enumerate(zip(rep["rows"], rep["arrays_per_value"])):
            if not arrays:
                continue
            io_utils.write_heatmap_png(
                manifest, f"sweep_{idx:02d}.png", arrays["intensity"],
                arrays["signal_nm"], arrays["idler_nm"],
                title=f"{param} = {row['value']:g}")
    manifest.write()
    for row in rep["rows"]:
        if row.get("error"):
            click.echo(f"{param}={row['value']:g}: ERROR {row['error']}")
        else:
            click.echo(f"{param}={row['value']:g}: K={row['schmidt_number']:.6f} "
                       f"tilt={row['tilt_deg']:.3f} deg")
    click.echo(f"-> {manifest.out_dir}")


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--space", "space_path", required=True, type=click.Path(),
              help="JSON file with the design-space description.")
@click.option("--budget", type=int, default=None, help="Evaluation budget override.")
@click.option("--out", default=None)
@click.pass_obj
def search(client: ServiceClient, config_path, space_path, budget, out):
    """Minimize the single-peak Schmidt number over source parameters."""
    from . import io_utils

    config = _load_config(config_path)
    space = _load_config(space_path)
    if budget is not None:
        space["budget"] = budget
    rep = client.post("/search", {"config": config, "space": space})
    manifest = io_utils.Manifest(_out_dir(config, out))
    io_utils.write_json(manifest, "search.json", rep)
    manifest.write()
    best = ", ".join(f"{k}={v:.6g}" for k, v in rep["best_params"].items())
    click.echo(f"best K = {rep['best_objective']:.6f} at {best} "
               f"({rep['n_evaluations']} evaluations) -> {manifest.out_dir}")


@main.command("pump-spectrum")
@click.argument("config_path", type=click.Path())
@click.option("--out", default=None)
@click.option("--points", type=int, default=4001)
@click.pass_obj
def pump_spectrum(client: ServiceClient, config_path, out, points):
    """Sample the configured pump spectral amplitude and plot it."""
    from . import io_utils

    config = _load_config(config_path)
    rep = client.post("/pump-spectrum", {"config": config, "points": points})
    manifest = io_utils.Manifest(_out_dir(config, out))
    rows = zip(rep["lambda_nm"], rep["re"], rep["im"], rep["intensity"])
    io_utils.write_table_csv(manifest, "pump_spectrum.csv",
                             ["lambda_nm", "re", "im", "intensity"], rows)
    summary = {k: rep[k] for k in ("envelope_fwhm_nm", "comb_spacing_nm",
                                   "fp_peak_fwhm_nm") if rep.get(k) is not None}
    io_utils.write_json(manifest, "report.json", summary)
    io_utils.write_line_png(manifest, "pump.png", rep["lambda_nm"],
                            {"Re F_p": rep["re"], "Im F_p": rep["im"],
                             "|F_p|^2": rep["intensity"]},
                            "wavelength (nm)", "pump amplitude")
    manifest.write()
    if "fp_peak_fwhm_nm" in summary:
        click.echo(f"FP peak FWHM = {summary['fp_peak_fwhm_nm']:.4f} nm")
    click.echo(f"-> {manifest.out_dir}")


@main.command("measure-sim")
@click.argument("config_path", type=click.Path())
@click.option("--seed", type=int, default=0)
@click.option("--out", default=None)
@click.pass_obj
def measure_sim(client: ServiceClient, config_path, seed, out):
    """Simulate the dispersive-fiber arrival-time measurement."""
    from . import io_utils

    config = _load_config(config_path)
    rep = client.post("/measure-sim", {"config": config, "seed": seed})
    manifest = io_utils.Manifest(_out_dir(config, out))
    t = rep["time"]
    io_utils.write_grid_csv(manifest, "histogram_time.csv",
                            t["t_signal_ps"], t["t_idler_ps"], t["counts"])
    io_utils.write_grid_csv(manifest, "histogram_nm.csv",
                            rep["wavelength"]["signal_nm"],
                            rep["wavelength"]["idler_nm"], t["counts"])
    th = rep["theory"]
    io_utils.write_grid_csv(manifest, "theory_blurred.csv",
                            th["signal_nm"], th["idler_nm"], th["intensity"])
    io_utils.write_json(manifest, "metadata.json", rep["metadata"])
    io_utils.write_heatmap_png(manifest, "histogram.png", t["counts"],
                               rep["wavelength"]["signal_nm"],
                               rep["wavelength"]["idler_nm"],
                               title=f"counts (seed {seed})")
    io_utils.write_heatmap_png(manifest, "theory.png", th["intensity"],
                               th["signal_nm"], th["idler_nm"],
                               title="blurred |F|^2")
    manifest.write()
    md = rep["metadata"]
    click.echo(f"{md['pairs']} pairs, resolution {md['effective_resolution_nm']:.3f} nm "
               f"-> {manifest.out_dir}")


@main.command()
@click.pass_obj
def materials(client: ServiceClient):
    """List bundled crystal dispersion data."""
    for m in client.get("/materials"):
        click.echo(f"{m['material']}: {m['lambda_min_um']}-{m['lambda_max_um']} um "
                   f"({m['source']})")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
