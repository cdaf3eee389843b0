"""Run-configuration schema.

One JSON document describes one pipeline run: crystal, pump, grid,
analysis and (optionally) measurement blocks.  Units are explicit in the
field names; unknown keys are rejected everywhere so typos fail loudly
before any computation starts.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CrystalConfig(_Strict):
    material: str = "KDP"
    length_mm: float = Field(gt=0)
    # None: solve the collinear degenerate type-II cut for the pump
    # wavelength (or for cut_solved_at_nm when that is given instead).
    cut_angle_deg: Optional[float] = Field(default=None, ge=0, le=90)
    cut_solved_at_nm: Optional[float] = Field(default=None, gt=0)
    signal_polarization: Literal["ordinary", "extraordinary"] = "ordinary"


class FPConfig(_Strict):
    spacing_um: float = Field(gt=0)
    reflectance: float = Field(gt=0, lt=1)
    tilt_deg: float = 0.0
    # tune the cavity so one transmission maximum sits on the pump center
    pin_to_pump: bool = True


class CombConfig(_Strict):
    spacing_um: float = Field(gt=0)  # comb spacing = FSR of an untilted FP
    n_side: int = Field(default=6, ge=0)
    # None: width set by the axis-alignment condition for the crystal tilt
    sigma_rad_fs: Optional[float] = Field(default=None, gt=0)


class PumpConfig(_Strict):
    center_nm: float = Field(gt=0)
    model: Literal["gaussian", "fp_gaussian", "gaussian_comb"] = "gaussian"
    duration_fs: Optional[float] = Field(default=None, gt=0)
    fwhm_nm: Optional[float] = Field(default=None, gt=0)
    fp: Optional[FPConfig] = None
    comb: Optional[CombConfig] = None

    @model_validator(mode="after")
    def _check(self):
        if self.duration_fs is not None and self.fwhm_nm is not None:
            raise ValueError("give either duration_fs or fwhm_nm, not both")
        if self.model in ("gaussian", "fp_gaussian"):
            if self.duration_fs is None and self.fwhm_nm is None:
                raise ValueError(f"pump model {self.model!r} needs duration_fs or fwhm_nm")
        if self.model == "fp_gaussian" and self.fp is None:
            raise ValueError("pump model 'fp_gaussian' needs an fp block")
        if self.model == "gaussian_comb" and self.comb is None:
            raise ValueError("pump model 'gaussian_comb' needs a comb block")
        return self


class GridConfig(_Strict):
    n: int = Field(default=512, ge=2)
    # envelope: each axis spans +- envelope_factor pump intensity FWHMs
    # around degeneracy (the sum-frequency direction then reaches twice
    # that at the grid corners); fsr: each axis spans +- fsr_factor comb
    # spacings, for single-maximum work.
    mode: Literal["envelope", "fsr"] = "envelope"
    envelope_factor: float = Field(default=2.0, gt=0)
    fsr_factor: float = Field(default=1.0, gt=0)


class AnalysisConfig(_Strict):
    # comb_peak: isolate the brightest comb maximum with a one-spacing
    # band in the sum frequency; rect: explicit rectangular window; none:
    # analyze the whole grid.
    isolate: Literal["none", "comb_peak", "rect"] = "none"
    intensity_cut: float = Field(default=0.04, ge=0, le=1)
    use_modulus: bool = True
    band_spacings: float = Field(default=1.0, gt=0)  # band width, comb spacings
    window_signal_nm: Optional[float] = Field(default=None, gt=0)
    window_idler_nm: Optional[float] = Field(default=None, gt=0)
    peak_grid_n: Optional[int] = Field(default=None, ge=2)
    n_modes_reported: int = Field(default=8, ge=1)
    refine_check: bool = False  # also compute K at half resolution

    @model_validator(mode="after")
    def _check(self):
        if self.isolate == "rect" and (self.window_signal_nm is None
                                       or self.window_idler_nm is None):
            raise ValueError("rect isolation needs window_signal_nm and window_idler_nm")
        return self


class MeasurementConfig(_Strict):
    fiber: str = "nufern_780hp"  # bundled table name
    fiber_table: Optional[list[tuple[float, float]]] = None  # (nm, ps/nm/km)
    length_km: float = Field(default=1.0, gt=0)
    jitter_ps: float = Field(default=50.0, ge=0)
    trigger_jitter_ps: float = Field(default=50.0, ge=0)
    bin_ps: float = Field(default=25.0, gt=0)
    pairs: int = Field(default=100000, ge=0)
    blur_resolution_nm: Optional[float] = Field(default=None, ge=0)


class OutputConfig(_Strict):
    dir: str = "out"
    heatmap: bool = True
    export_complex: bool = False


class RunConfig(_Strict):
    crystal: CrystalConfig
    pump: PumpConfig
    grid: GridConfig = GridConfig()
    analysis: AnalysisConfig = AnalysisConfig()
    measurement: Optional[MeasurementConfig] = None
    output: OutputConfig = OutputConfig()


class DesignSpace(_Strict):
    """Box bounds over dotted config paths, e.g. crystal.length_mm."""

    vars: dict[str, tuple[float, float]]
    start: dict[str, float] = {}
    budget: int = Field(default=50, ge=1)
    min_margin: Optional[float] = Field(default=None, ge=0)
    grid_n: Optional[int] = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _check(self):
        if not self.vars:
            raise ValueError("design space needs at least one variable")
        for name, (lo, hi) in self.vars.items():
            if not hi > lo:
                raise ValueError(f"empty range for {name!r}")
        return self


def set_by_path(data: dict, path: str, value) -> None:
    """Assign into a nested config dict by dotted path; unknown paths fail."""
    parts = path.split(".")
    node = data
    for p in parts[:-1]:
        if not isinstance(node, dict) or p not in node or node[p] is None:
            raise KeyError(f"config has no block {p!r} on path {path!r}")
        node = node[p]
    if not isinstance(node, dict) or parts[-1] not in node:
        raise KeyError(f"config has no field {parts[-1]!r} on path {path!r}")
    node[parts[-1]] = value


def override(config: RunConfig, path: str, value) -> RunConfig:
    """Copy of the config with one dotted-path field replaced."""
    data = config.model_dump()
    set_by_path(data, path, value)
    return RunConfig.model_validate(data)
