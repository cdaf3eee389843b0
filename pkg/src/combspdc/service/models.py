"""Request and response models of the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..config import DesignSpace, RunConfig


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---- requests ----------------------------------------------------------

class RunRequest(_Strict):
    config: RunConfig
    include_arrays: bool = True
    grid_n: Optional[int] = Field(default=None, ge=2)


class SweepRequest(_Strict):
    config: RunConfig
    parameter: str
    values: list[float]
    include_arrays: bool = False
    grid_n: Optional[int] = Field(default=None, ge=2)


class SearchRequest(_Strict):
    config: RunConfig
    space: DesignSpace


class PumpSpectrumRequest(_Strict):
    config: RunConfig
    points: int = Field(default=4001, ge=3)
    span_fwhm: float = Field(default=2.0, gt=0)


class MeasureSimRequest(_Strict):
    config: RunConfig
    seed: int = 0


# ---- responses ---------------------------------------------------------

class HealthResponse(BaseModel):
    status: str
    version: str


class MaterialInfo(BaseModel):
    material: str
    lambda_min_um: float
    lambda_max_um: float
    source: str


class CrystalReport(BaseModel):
    material: str
    length_mm: float
    cut_angle_deg: float
    tilt_deg: float
    gamma_signal_fs_mm: float
    gamma_idler_fs_mm: float
    group_velocity_pump_mm_fs: float
    group_velocity_signal_mm_fs: float
    group_velocity_idler_mm_fs: float
    gvd_signal_fs2_mm: float
    gvd_idler_fs2_mm: float
    sigma_c_rad_fs: float


class PumpReport(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model: str
    center_nm: float
    envelope_fwhm_nm: Optional[float] = None
    comb_spacing_rad_fs: Optional[float] = None
    comb_spacing_nm: Optional[float] = None
    fp_peak_fwhm_nm: Optional[float] = None
    fp_background: Optional[float] = None
    peak_sigma_p_rad_fs: Optional[float] = None


class GridReport(BaseModel):
    n_signal: int
    n_idler: int
    signal_nm: list[float]
    idler_nm: list[float]


class SchmidtReport(BaseModel):
    schmidt_number: float
    coefficients: list[float]
    n_coefficients_reported: int
    mode_centroids_signal_nm: list[float]
    mode_centroids_idler_nm: list[float]
    leading_mode_overlap: Optional[float] = None


class AnalysisReport(BaseModel):
    isolation: dict
    schmidt: SchmidtReport
    tilt_estimate_deg: Optional[float]
    tilt_undefined: bool
    margins: Optional[tuple[float, float]]
    grid_refinement_dK_rel: Optional[float] = None


class ArraysPayload(BaseModel):
    signal_nm: list[float]
    idler_nm: list[float]
    intensity: list[list[float]]
    marginal_signal: list[float]
    marginal_idler: list[float]
    amplitude_re: Optional[list[list[float]]] = None
    amplitude_im: Optional[list[list[float]]] = None
    peak_intensity: Optional[list[list[float]]] = None
    peak_signal_nm: Optional[list[float]] = None
    peak_idler_nm: Optional[list[float]] = None
    mode_profiles_signal: Optional[list[list[float]]] = None
    mode_profiles_idler: Optional[list[list[float]]] = None
    mode_axis_signal_nm: Optional[list[float]] = None
    mode_axis_idler_nm: Optional[list[float]] = None


class RunResponse(BaseModel):
    crystal: CrystalReport
    pump: PumpReport
    grid: GridReport
    analysis: AnalysisReport
    warnings: list[str]
    arrays: Optional[ArraysPayload] = None


class SweepRow(BaseModel):
    value: float
    schmidt_number: Optional[float] = None
    tilt_deg: Optional[float] = None
    tilt_estimate_deg: Optional[float] = None
    margin_signal: Optional[float] = None
    margin_idler: Optional[float] = None
    error: Optional[str] = None


class SweepResponse(BaseModel):
    parameter: str
    rows: list[SweepRow]
    arrays_per_value: Optional[list[Optional[ArraysPayload]]] = None


class EvaluationRecord(BaseModel):
    params: dict[str, float]
    objective: Optional[float]
    info: dict


class SearchResponse(BaseModel):
    best_params: dict[str, float]
    best_objective: float
    best_info: dict
    n_evaluations: int
    evaluations: list[EvaluationRecord]


class PumpSpectrumResponse(BaseModel):
    lambda_nm: list[float]
    omega_rad_fs: list[float]
    re: list[float]
    im: list[float]
    intensity: list[float]
    envelope_fwhm_nm: Optional[float] = None
    comb_spacing_nm: Optional[float] = None
    fp_peak_fwhm_nm: Optional[float] = None


class TimeHistogram(BaseModel):
    t_signal_ps: list[float]
    t_idler_ps: list[float]
    counts: list[list[int]]


class WavelengthAxes(BaseModel):
    signal_nm: list[float]
    idler_nm: list[float]


class TheoryPanel(BaseModel):
    signal_nm: list[float]
    idler_nm: list[float]
    intensity: list[list[float]]


class MeasureSimResponse(BaseModel):
    time: TimeHistogram
    wavelength: WavelengthAxes
    theory: TheoryPanel
    metadata: dict
