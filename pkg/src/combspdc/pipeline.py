"""Config-driven pipeline: dispersion -> pump -> TPSA -> Schmidt -> measurement.

Every entry point takes a validated :class:`~combspdc.config.RunConfig`
and returns a JSON-serializable report dict (plain floats and lists), so
the HTTP service can pass results straight through and file writers can
produce byte-stable outputs.
"""

from __future__ import annotations

import math

import numpy as np

from . import dispersion, gaussian_model, measurement, schmidt, search, tpsa
from .config import DesignSpace, MeasurementConfig, RunConfig, override
from .constants import (C_NM_FS, GAUSS_FWHM, bandwidth_omega_to_nm,
                        omega_from_wavelength_nm, wavelength_nm_from_omega)
from .errors import CombSpdcError, PhaseMatchingError, UndefinedTiltError
from .materials import get_material
from .pump import (FabryPerot, GaussianComb, GaussianPulse, ShapedPump,
                   fp_peak_fwhm_numeric)


class ResolvedRun:
    """Physical objects derived from one RunConfig."""

    def __init__(self, config: RunConfig):
        self.config = config
        sell = get_material(config.crystal.material)
        wp = float(omega_from_wavelength_nm(config.pump.center_nm))
        pols = (("extraordinary", "ordinary", "extraordinary")
                if config.crystal.signal_polarization == "ordinary"
                else ("extraordinary", "extraordinary", "ordinary"))
        if config.crystal.cut_angle_deg is not None:
            theta = math.radians(config.crystal.cut_angle_deg)
        else:
            solve_nm = config.crystal.cut_solved_at_nm or config.pump.center_nm
            theta = dispersion.phase_matching_angle(
                sell, float(omega_from_wavelength_nm(solve_nm)), pols)
        self.crystal = dispersion.CrystalSpec(
            sell, config.crystal.length_mm, theta, wp, pols)
        self.pump_omega = wp
        self.props = dispersion.group_properties(self.crystal)
        self.tilt = dispersion.tpsa_tilt(self.crystal)
        self.sigma_c = gaussian_model.sigma_c_from_crystal(self.crystal)
        self.pump_model, self.comb_spacing, self.peak_sigma_p = self._build_pump()

    def _build_pump(self):
        cfg = self.config.pump
        pulse = None
        if cfg.duration_fs is not None:
            pulse = GaussianPulse.from_duration_fs(cfg.center_nm, cfg.duration_fs)
        elif cfg.fwhm_nm is not None:
            pulse = GaussianPulse.from_intensity_fwhm_nm(cfg.center_nm, cfg.fwhm_nm)

        if cfg.model == "gaussian":
            return pulse, None, None

        if cfg.model == "fp_gaussian":
            fp = FabryPerot(cfg.fp.spacing_um, cfg.fp.reflectance,
                            math.radians(cfg.fp.tilt_deg))
            if cfg.fp.pin_to_pump:
                fp = fp.pinned_at(self.pump_omega)
            # pump-peak width in the double-Gaussian convention: amplitude
            # exp(-nu^2/(2 s^2)) matching the Airy peak's intensity FWHM
            sigma_p = fp.peak_intensity_fwhm() * math.sqrt(2.0) / GAUSS_FWHM
            return ShapedPump(pulse, fp), fp.free_spectral_range(), sigma_p

        # gaussian_comb
        spacing = FabryPerot(cfg.comb.spacing_um, 0.5).free_spectral_range()
        sigma = cfg.comb.sigma_rad_fs
        if sigma is None:
            sigma = gaussian_model.aligned_sigma_p(self.tilt, self.sigma_c)
        n_side = cfg.comb.n_side
        centers = [self.pump_omega + m * spacing for m in range(-n_side, n_side + 1)]
        amps = None
        if pulse is not None:
            amps = [complex(pulse.amplitude(c)) for c in centers]
        comb = GaussianComb(tuple(centers), sigma, tuple(amps) if amps else None)
        return comb, spacing, sigma

    def envelope_fwhm(self) -> float | None:
        cfg = self.config.pump
        if cfg.duration_fs is None and cfg.fwhm_nm is None:
            return None
        if cfg.duration_fs is not None:
            pulse = GaussianPulse.from_duration_fs(cfg.center_nm, cfg.duration_fs)
        else:
            pulse = GaussianPulse.from_intensity_fwhm_nm(cfg.center_nm, cfg.fwhm_nm)
        return pulse.intensity_fwhm()

    def display_grid(self, n: int | None = None) -> tpsa.FrequencyGrid:
        g = self.config.grid
        n = n or g.n
        wd = self.pump_omega / 2.0
        if g.mode == "fsr":
            if self.comb_spacing is None:
                raise CombSpdcError("grid mode 'fsr' needs a comb-structured pump")
            half = g.fsr_factor * self.comb_spacing
        else:
            fwhm = self.envelope_fwhm()
            if fwhm is None:
                raise CombSpdcError("grid mode 'envelope' needs a pump bandwidth")
            half = g.envelope_factor * fwhm
        return tpsa.FrequencyGrid.centered(wd, wd, half, half, n)

    def margins(self) -> tuple[float, float] | None:
        if self.comb_spacing is None or self.peak_sigma_p is None:
            return None
        if not 0.0 < self.tilt < math.pi / 2:
            return None
        peak = gaussian_model.DoubleGaussianPeak(self.tilt, self.sigma_c,
                                                 self.peak_sigma_p)
        return gaussian_model.separation_margins(peak, self.comb_spacing)


def _isolated_peak_grid(res: ResolvedRun, n: int):
    """Build a dedicated grid around the brightest comb maximum and cut it."""
    cfg = res.config.analysis
    spacing = res.comb_spacing
    wd = res.pump_omega / 2.0
    # locate the brightest spot on a coarse chart spanning a few spacings
    chart = tpsa.build_tpsa(res.crystal, res.pump_model,
                            tpsa.FrequencyGrid.centered(wd, wd, 1.5 * spacing,
                                                        1.5 * spacing, 241))
    cs, ci = tpsa.brightest_cell(chart)
    sum_peak = cs + ci
    grid = tpsa.FrequencyGrid.centered(cs, ci, spacing, spacing, n)
    field = tpsa.normalize(tpsa.build_tpsa(res.crystal, res.pump_model, grid))
    band = cfg.band_spacings * spacing
    peak = tpsa.isolate_comb_peak(field, sum_peak, band, cfg.intensity_cut)
    return peak, (cs, ci), band


def _schmidt_report(dec: schmidt.SchmidtDecomposition, n_modes: int) -> dict:
    lam = dec.reported_coefficients()
    n_show = min(n_modes, lam.size)
    report = {
        "schmidt_number": float(dec.schmidt_number),
        "coefficients": [float(v) for v in lam[:n_show]],
        "n_coefficients_reported": int(lam.size),
        "mode_centroids_signal_nm": [
            float(wavelength_nm_from_omega(dec.mode_centroid(m, "signal")))
            for m in range(n_show)],
        "mode_centroids_idler_nm": [
            float(wavelength_nm_from_omega(dec.mode_centroid(m, "idler")))
            for m in range(n_show)],
    }
    if lam.size >= 2:
        report["leading_mode_overlap"] = float(schmidt.mode_overlap(dec, 0, 1))
    return report


def run(config: RunConfig, include_arrays: bool = True,
        grid_n: int | None = None) -> dict:
    """Full pipeline for one configuration."""
    res = ResolvedRun(config)
    acfg = config.analysis
    grid = res.display_grid(grid_n)
    field = tpsa.normalize(tpsa.build_tpsa(res.crystal, res.pump_model, grid))

    report: dict = {
        "crystal": _crystal_report(res),
        "pump": _pump_report(res),
        "grid": {
            "n_signal": int(grid.signal.size),
            "n_idler": int(grid.idler.size),
            "signal_nm": [float(v) for v in wavelength_nm_from_omega(grid.signal)],
            "idler_nm": [float(v) for v in wavelength_nm_from_omega(grid.idler)],
        },
        "warnings": [],
    }

    analysis: dict = {"isolation": {"method": acfg.isolate}}
    peak_field = None
    n_peak = acfg.peak_grid_n or config.grid.n
    if grid_n is not None:
        n_peak = grid_n
    if acfg.isolate == "comb_peak":
        if res.comb_spacing is None:
            raise CombSpdcError("comb_peak isolation needs a comb-structured pump")
        peak_field, center, band = _isolated_peak_grid(res, n_peak)
        analysis["isolation"].update({
            "center_signal_nm": float(wavelength_nm_from_omega(center[0])),
            "center_idler_nm": float(wavelength_nm_from_omega(center[1])),
            "band_width_rad_fs": float(band),
            "intensity_cut": acfg.intensity_cut,
        })
        if acfg.refine_check:
            half_peak, _, _ = _isolated_peak_grid(res, max(2, n_peak // 2))
            k_full = schmidt.decompose(peak_field, acfg.use_modulus).schmidt_number
            k_half = schmidt.decompose(half_peak, acfg.use_modulus).schmidt_number
            analysis["grid_refinement_dK_rel"] = float(abs(k_full - k_half) / k_full)
    elif acfg.isolate == "rect":
        cs, ci = tpsa.brightest_cell(field)
        win_s = acfg.window_signal_nm * 2 * math.pi * C_NM_FS / wavelength_nm_from_omega(cs) ** 2
        win_i = acfg.window_idler_nm * 2 * math.pi * C_NM_FS / wavelength_nm_from_omega(ci) ** 2
        peak_field = tpsa.isolate_peak(field, (cs, ci), (float(win_s), float(win_i)),
                                       acfg.intensity_cut)
        analysis["isolation"].update({
            "center_signal_nm": float(wavelength_nm_from_omega(cs)),
            "center_idler_nm": float(wavelength_nm_from_omega(ci)),
            "window_signal_rad_fs": float(win_s),
            "window_idler_rad_fs": float(win_i),
            "intensity_cut": acfg.intensity_cut,
        })

    target = peak_field if peak_field is not None else field
    dec = schmidt.decompose(target, acfg.use_modulus)
    analysis["schmidt"] = _schmidt_report(dec, acfg.n_modes_reported)

    try:
        analysis["tilt_estimate_deg"] = float(math.degrees(tpsa.tilt_estimate(field)))
        analysis["tilt_undefined"] = False
    except UndefinedTiltError:
        analysis["tilt_estimate_deg"] = None
        analysis["tilt_undefined"] = True

    m = res.margins()
    analysis["margins"] = [float(m[0]), float(m[1])] if m else None
    report["analysis"] = analysis

    if include_arrays:
        arrays = {
            "signal_nm": report["grid"]["signal_nm"],
            "idler_nm": report["grid"]["idler_nm"],
            "intensity": _round_trip(field.intensity()),
            "marginal_signal": _round_trip(tpsa.marginals(field)[0]),
            "marginal_idler": _round_trip(tpsa.marginals(field)[1]),
        }
        if config.output.export_complex:
            arrays["amplitude_re"] = _round_trip(field.amplitude.real)
            arrays["amplitude_im"] = _round_trip(field.amplitude.imag)
        if peak_field is not None:
            arrays["peak_intensity"] = _round_trip(peak_field.intensity())
            arrays["peak_signal_nm"] = [
                float(v) for v in wavelength_nm_from_omega(peak_field.grid.signal)]
            arrays["peak_idler_nm"] = [
                float(v) for v in wavelength_nm_from_omega(peak_field.grid.idler)]
        n_show = min(acfg.n_modes_reported, dec.reported_coefficients().size)
        arrays["mode_profiles_signal"] = _round_trip(
            np.abs(dec.signal_modes[:, :n_show]).T)
        arrays["mode_profiles_idler"] = _round_trip(
            np.abs(dec.idler_modes[:, :n_show]).T)
        arrays["mode_axis_signal_nm"] = [
            float(v) for v in wavelength_nm_from_omega(dec.signal_axis)]
        arrays["mode_axis_idler_nm"] = [
            float(v) for v in wavelength_nm_from_omega(dec.idler_axis)]
        report["arrays"] = arrays
    return report


def _crystal_report(res: ResolvedRun) -> dict:
    p = res.props
    return {
        "material": res.crystal.sellmeier.material,
        "length_mm": res.crystal.length_mm,
        "cut_angle_deg": float(math.degrees(res.crystal.cut_angle_rad)),
        "tilt_deg": float(math.degrees(res.tilt)),
        "gamma_signal_fs_mm": float(p.gamma_signal),
        "gamma_idler_fs_mm": float(p.gamma_idler),
        "group_velocity_pump_mm_fs": float(p.u_pump),
        "group_velocity_signal_mm_fs": float(p.u_signal),
        "group_velocity_idler_mm_fs": float(p.u_idler),
        "gvd_signal_fs2_mm": float(p.gvd_signal),
        "gvd_idler_fs2_mm": float(p.gvd_idler),
        "sigma_c_rad_fs": float(res.sigma_c),
    }


def _pump_report(res: ResolvedRun) -> dict:
    cfg = res.config.pump
    rep = {"model": cfg.model, "center_nm": cfg.center_nm}
    fwhm = res.envelope_fwhm()
    if fwhm is not None:
        rep["envelope_fwhm_nm"] = float(bandwidth_omega_to_nm(fwhm, cfg.center_nm))
    if res.comb_spacing is not None:
        rep["comb_spacing_rad_fs"] = float(res.comb_spacing)
        rep["comb_spacing_nm"] = float(
            bandwidth_omega_to_nm(res.comb_spacing, cfg.center_nm))
    if cfg.model == "fp_gaussian":
        fp = res.pump_model.fp
        fwhm_w = fp_peak_fwhm_numeric(fp, res.pump_omega)
        rep["fp_peak_fwhm_nm"] = float(bandwidth_omega_to_nm(fwhm_w, cfg.center_nm))
        rep["fp_background"] = float(fp.background())
    if res.peak_sigma_p is not None:
        rep["peak_sigma_p_rad_fs"] = float(res.peak_sigma_p)
    return rep


def _round_trip(arr: np.ndarray):
    return np.asarray(arr, dtype=float).tolist()


def sweep(config: RunConfig, parameter: str, values: list[float],
          include_arrays: bool = False, grid_n: int | None = None) -> dict:
    """One pipeline run per value of a dotted config path."""
    rows = []
    arrays = []
    for v in values:
        row: dict = {"value": float(v)}
        try:
            cfg = override(config, parameter, v)
            rep = run(cfg, include_arrays=include_arrays, grid_n=grid_n)
            row["schmidt_number"] = rep["analysis"]["schmidt"]["schmidt_number"]
            row["tilt_deg"] = rep["crystal"]["tilt_deg"]
            row["tilt_estimate_deg"] = rep["analysis"]["tilt_estimate_deg"]
            m = rep["analysis"]["margins"]
            row["margin_signal"], row["margin_idler"] = (m if m else (None, None))
            arrays.append(rep.get("arrays"))
        except (CombSpdcError, KeyError, ValueError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            arrays.append(None)
        rows.append(row)
    out = {"parameter": parameter, "rows": rows}
    if include_arrays:
        out["arrays_per_value"] = arrays
    return out


def single_peak_objective(config: RunConfig, grid_n: int | None = None):
    """Schmidt number of the brightest isolated comb maximum."""
    res = ResolvedRun(config)
    if res.comb_spacing is None:
        raise CombSpdcError("the single-peak objective needs a comb-structured pump")
    n = grid_n or config.analysis.peak_grid_n or config.grid.n
    peak_field, _, _ = _isolated_peak_grid(res, n)
    dec = schmidt.decompose(peak_field, config.analysis.use_modulus)
    info = {
        "schmidt_number": float(dec.schmidt_number),
        "tilt_deg": float(math.degrees(res.tilt)),
    }
    m = res.margins()
    info["margins"] = [float(m[0]), float(m[1])] if m else None
    return float(dec.schmidt_number), info


def design_search(config: RunConfig, space: DesignSpace) -> dict:
    """Minimize the single-peak Schmidt number over source parameters.

    Points violating the separation-margin constraint evaluate to +inf
    (logged with their raw numbers); the returned point always satisfies
    the constraint.  Deterministic for a fixed starting point.
    """
    first_failure: list[str] = []

    def objective(params: dict[str, float]):
        cfg = config
        for path, value in params.items():
            cfg = override(cfg, path, value)
        try:
            k, info = single_peak_objective(cfg, grid_n=space.grid_n)
        except (CombSpdcError, ValueError) as exc:
            if not first_failure:
                first_failure.append(f"{params}: {type(exc).__name__}: {exc}")
            return float("inf"), {"error": f"{type(exc).__name__}: {exc}"}
        if space.min_margin is not None:
            margins = info.get("margins")
            if margins is None or min(margins) < space.min_margin:
                info["infeasible"] = True
                return float("inf"), info
        return k, info

    result = search.minimize(objective, space.vars, start=space.start,
                             budget=space.budget)
    if not math.isfinite(result.best_objective):
        detail = first_failure[0] if first_failure else "all points infeasible"
        raise PhaseMatchingError(
            f"design search found no feasible point; first failure: {detail}")
    return {
        "best_params": {k: float(v) for k, v in result.best_params.items()},
        "best_objective": float(result.best_objective),
        "best_info": result.best_info,
        "n_evaluations": result.n_evaluations,
        "evaluations": [
            {"params": {k: float(v) for k, v in ev.params.items()},
             "objective": (float(ev.objective) if math.isfinite(ev.objective) else None),
             "info": ev.info}
            for ev in result.evaluations],
    }


def pump_spectrum(config: RunConfig, points: int = 4001,
                  span_fwhm: float = 2.0) -> dict:
    """Sampled pump spectral amplitude around the carrier."""
    res = ResolvedRun(config)
    fwhm = res.envelope_fwhm()
    if fwhm is not None:
        half = span_fwhm * fwhm
    elif res.comb_spacing is not None:
        half = 3.0 * res.comb_spacing
    else:
        raise CombSpdcError("cannot choose a span for this pump model")
    w = np.linspace(res.pump_omega - half, res.pump_omega + half, points)
    amp = res.pump_model.amplitude(w)
    out = {
        "lambda_nm": [float(v) for v in wavelength_nm_from_omega(w)],
        "omega_rad_fs": [float(v) for v in w],
        "re": _round_trip(amp.real),
        "im": _round_trip(amp.imag),
        "intensity": _round_trip(np.abs(amp) ** 2),
    }
    rep = _pump_report(res)
    for key in ("comb_spacing_nm", "fp_peak_fwhm_nm", "envelope_fwhm_nm"):
        if key in rep:
            out[key] = rep[key]
    return out


def measure_sim(config: RunConfig, seed: int) -> dict:
    """Simulate the fiber-spectrometer chain for the configured TPSA."""
    if config.measurement is None:
        raise CombSpdcError("config has no measurement block")
    mcfg = config.measurement
    res = ResolvedRun(config)
    grid = res.display_grid()
    field = tpsa.normalize(tpsa.build_tpsa(res.crystal, res.pump_model, grid))

    fiber = _fiber_from_config(mcfg)
    det = measurement.DetectorChain(mcfg.jitter_ps, mcfg.trigger_jitter_ps,
                                    mcfg.bin_ps, mcfg.pairs)
    hist = measurement.simulate_histogram(field, fiber, fiber, det, seed)
    lam = measurement.time_to_wavelength(hist, fiber, fiber)

    resolution = mcfg.blur_resolution_nm
    if resolution is None:
        resolution = measurement.effective_resolution_nm(
            fiber, det, hist.center_signal_nm)
    sig_nm = wavelength_nm_from_omega(grid.signal)
    idl_nm = wavelength_nm_from_omega(grid.idler)
    theory = measurement.blur_to_resolution(
        field.intensity(),
        float(np.mean(np.diff(sig_nm))), float(np.mean(np.diff(idl_nm))),
        resolution)

    return {
        "time": {
            "t_signal_ps": _round_trip(hist.t_signal_centers),
            "t_idler_ps": _round_trip(hist.t_idler_centers),
            "counts": [[int(c) for c in row] for row in hist.counts],
        },
        "wavelength": {
            "signal_nm": _round_trip(lam["signal_nm"]),
            "idler_nm": _round_trip(lam["idler_nm"]),
        },
        "theory": {
            "signal_nm": [float(v) for v in sig_nm],
            "idler_nm": [float(v) for v in idl_nm],
            "intensity": _round_trip(theory),
        },
        "metadata": {
            "seed": int(seed),
            "pairs": int(mcfg.pairs),
            "jitter_ps": float(mcfg.jitter_ps),
            "trigger_jitter_ps": float(mcfg.trigger_jitter_ps),
            "bin_ps": float(mcfg.bin_ps),
            "overflow": int(hist.overflow),
            "fiber_table_hash": measurement.fiber_table_hash(fiber),
            "effective_resolution_nm": float(resolution),
            "center_signal_nm": float(hist.center_signal_nm),
            "center_idler_nm": float(hist.center_idler_nm),
        },
    }


def _fiber_from_config(mcfg: MeasurementConfig) -> measurement.FiberSpec:
    if mcfg.fiber_table:
        wl = np.asarray([row[0] for row in mcfg.fiber_table], dtype=float)
        dd = np.asarray([row[1] for row in mcfg.fiber_table], dtype=float)
        return measurement.FiberSpec(mcfg.length_km, wl, dd, name="inline table")
    return measurement.FiberSpec.bundled(mcfg.fiber, mcfg.length_km)
