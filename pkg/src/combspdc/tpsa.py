"""Two-photon spectral amplitude on a rectangular frequency grid.

The amplitude of a pair emitted at (w_s, w_i) is

    F(w_s, w_i) = exp(i dk_z L / 2) F_p(w_s + w_i) sinc(dk_z L / 2),

the product of the crystal phase/phase-matching factors and the pump
spectral amplitude evaluated at the sum frequency.  Grids store the signal
axis along rows and the idler axis along columns; normalization is with
respect to the grid measure dw_s dw_i.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .constants import SINC_SQ_HWHM
from .dispersion import CrystalSpec, delta_kz
from .errors import ContractError, DegenerateInputError, UndefinedTiltError

NORM_TOL = 1e-10


def sinc(x):
    """sin(x)/x with the removable singularity handled exactly."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform rectangular grid over signal and idler frequencies (rad/fs)."""

    signal: np.ndarray
    idler: np.ndarray

    def __post_init__(self):
        for name, ax in (("signal", self.signal), ("idler", self.idler)):
            ax = np.asarray(ax, dtype=float)
            if ax.ndim != 1 or ax.size < 2:
                raise ValueError(f"{name} axis needs at least two samples")
            d = np.diff(ax)
            if np.any(d <= 0):
                raise ValueError(f"{name} axis must be strictly increasing")
            if not np.allclose(d, d[0], rtol=1e-9, atol=0):
                raise ValueError(f"{name} axis must be uniform")
            object.__setattr__(self, name, ax)

    @classmethod
    def centered(cls, center_s: float, center_i: float, half_span_s: float,
                 half_span_i: float, n_s: int, n_i: int | None = None) -> "FrequencyGrid":
        n_i = n_s if n_i is None else n_i
        return cls(
            np.linspace(center_s - half_span_s, center_s + half_span_s, n_s),
            np.linspace(center_i - half_span_i, center_i + half_span_i, n_i),
        )

    @property
    def step_signal(self) -> float:
        return float(self.signal[1] - self.signal[0])

    @property
    def step_idler(self) -> float:
        return float(self.idler[1] - self.idler[0])

    @property
    def cell_measure(self) -> float:
        return self.step_signal * self.step_idler

    def meshes(self):
        return np.meshgrid(self.signal, self.idler, indexing="ij")


@dataclass(frozen=True)
class TpsaGrid:
    """Complex amplitude samples over a FrequencyGrid."""

    grid: FrequencyGrid
    amplitude: np.ndarray  # complex, shape (n_signal, n_idler)
    normalized: bool = False

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=complex)
        if amp.shape != (self.grid.signal.size, self.grid.idler.size):
            raise ValueError("amplitude shape does not match the grid")
        if not np.all(np.isfinite(amp.view(float))):
            raise ValueError("amplitude contains non-finite entries")
        object.__setattr__(self, "amplitude", amp)

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def power(self) -> float:
        """L2 norm squared under the grid measure."""
        return float(np.sum(self.intensity()) * self.grid.cell_measure)

    def modulus(self) -> "TpsaGrid":
        return TpsaGrid(self.grid, np.abs(self.amplitude).astype(complex),
                        self.normalized)


def build_tpsa(crystal: CrystalSpec, pump_model, grid: FrequencyGrid,
               pm_profile: str = "sinc") -> TpsaGrid:
    """Assemble the amplitude cell by cell from dispersion and pump models.

    ``pm_profile`` selects the phase-matching shape: the physical "sinc"
    or a "gaussian" of equal intensity FWHM (useful for cross-checks
    against the closed-form double-Gaussian model).
    """
    ws, wi = grid.meshes()
    dkl2 = delta_kz(crystal, ws, wi) * (crystal.length_mm / 2.0)
    if pm_profile == "sinc":
        pm = sinc(dkl2)
    elif pm_profile == "gaussian":
        # amplitude Gaussian whose squared modulus shares the sinc^2 FWHM
        pm = np.exp(-0.5 * np.log(2.0) * (dkl2 / SINC_SQ_HWHM) ** 2)
    else:
        raise ValueError(f"unknown pm_profile {pm_profile!r}")
    amp = np.exp(1j * dkl2) * pump_model.amplitude(ws + wi) * pm
    return TpsaGrid(grid, amp, normalized=False)


def normalize(tpsa: TpsaGrid) -> TpsaGrid:
    """Scale to unit L2 norm under the grid measure."""
    p = tpsa.power()
    if p <= 0.0:
        raise DegenerateInputError("cannot normalize an all-zero amplitude")
    return TpsaGrid(tpsa.grid, tpsa.amplitude / np.sqrt(p), normalized=True)


def require_normalized(tpsa: TpsaGrid, what: str) -> None:
    if not tpsa.normalized or abs(tpsa.power() - 1.0) > 1e-8:
        raise ContractError(f"{what} requires a normalized TPSA grid")


def isolate_peak(tpsa: TpsaGrid, center: tuple[float, float],
                 window: tuple[float, float], intensity_cut: float = 0.0) -> TpsaGrid:
    """Rectangular windowing plus relative intensity threshold.

    ``window`` holds the full widths (rad/fs) of the kept rectangle around
    ``center``; cells whose intensity is not above ``intensity_cut`` times
    the window maximum are zeroed as well.  The result is renormalized.
    """
    cs, ci = center
    fs, fi = window
    if fs <= 0 or fi <= 0:
        raise DegenerateInputError("isolation window must have positive widths")
    sel_s = np.abs(tpsa.grid.signal - cs) <= fs / 2.0
    sel_i = np.abs(tpsa.grid.idler - ci) <= fi / 2.0
    mask = np.outer(sel_s, sel_i)
    if not mask.any():
        raise DegenerateInputError("isolation window contains no grid cells")
    return _apply_mask(tpsa, mask, intensity_cut)


def isolate_comb_peak(tpsa: TpsaGrid, pump_peak_omega: float,
                      band_width: float, intensity_cut: float = 0.0) -> TpsaGrid:
    """Cut one comb maximum: a band in the sum frequency plus a threshold.

    Keeps |w_s + w_i - pump_peak_omega| <= band_width / 2 (the cut exactly
    between neighboring pump-comb maxima when band_width equals the comb
    spacing), then drops cells below ``intensity_cut`` of the remaining
    maximum and renormalizes.
    """
    if band_width <= 0:
        raise DegenerateInputError("band width must be positive")
    ws, wi = tpsa.grid.meshes()
    mask = np.abs(ws + wi - pump_peak_omega) <= band_width / 2.0
    if not mask.any():
        raise DegenerateInputError("sum-frequency band contains no grid cells")
    return _apply_mask(tpsa, mask, intensity_cut)


def _apply_mask(tpsa: TpsaGrid, mask: np.ndarray, intensity_cut: float) -> TpsaGrid:
    amp = np.where(mask, tpsa.amplitude, 0.0)
    inten = np.abs(amp) ** 2
    peak = inten.max()
    if peak <= 0.0:
        raise DegenerateInputError("nothing left inside the isolation window")
    if intensity_cut > 0.0:
        amp = np.where(inten > intensity_cut * peak, amp, 0.0)
        if not np.any(amp):
            raise DegenerateInputError("intensity cut removed every cell")
    return normalize(TpsaGrid(tpsa.grid, amp))


def marginals(tpsa: TpsaGrid) -> tuple[np.ndarray, np.ndarray]:
    """Signal and idler spectra: |F|^2 integrated over the other axis."""
    inten = tpsa.intensity()
    sig = inten.sum(axis=1) * tpsa.grid.step_idler
    idl = inten.sum(axis=0) * tpsa.grid.step_signal
    return sig, idl


def brightest_cell(tpsa: TpsaGrid) -> tuple[float, float]:
    """Frequencies (w_s, w_i) of the intensity maximum."""
    i, j = np.unravel_index(int(np.argmax(tpsa.intensity())), tpsa.amplitude.shape)
    return float(tpsa.grid.signal[i]), float(tpsa.grid.idler[j])


def tilt_estimate(tpsa: TpsaGrid, floor: float = 0.05,
                  isotropy_tol: float = 1e-3) -> float:
    """Principal-axis angle (rad) of the brightest connected ridge.

    Thresholds the intensity at ``floor`` times its maximum, keeps the
    connected component containing the maximum, and diagonalizes the
    intensity-weighted covariance of (w_s, w_i) over it.  Raises
    UndefinedTiltError when the two covariance eigenvalues agree to within
    ``isotropy_tol`` (relative), i.e. for an isotropic distribution.
    """
    inten = tpsa.intensity()
    peak = inten.max()
    if peak <= 0:
        raise DegenerateInputError("cannot estimate the tilt of a zero grid")
    mask = inten >= floor * peak
    labels, _ = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    i0, j0 = np.unravel_index(int(np.argmax(inten)), inten.shape)
    ridge = labels == labels[i0, j0]
    w = inten * ridge
    total = w.sum()
    ws, wi = tpsa.grid.meshes()
    ms = (w * ws).sum() / total
    mi = (w * wi).sum() / total
    css = (w * (ws - ms) ** 2).sum() / total
    cii = (w * (wi - mi) ** 2).sum() / total
    csi = (w * (ws - ms) * (wi - mi)).sum() / total
    # eigenvalues of [[css, csi], [csi, cii]]
    mean = 0.5 * (css + cii)
    half = np.hypot(0.5 * (css - cii), csi)
    if half <= isotropy_tol * (mean + half):
        raise UndefinedTiltError("intensity distribution is isotropic; tilt undefined")
    alpha = 0.5 * np.arctan2(2.0 * csi, css - cii)
    if alpha <= -np.pi / 2:
        alpha += np.pi
    elif alpha > np.pi / 2:
        alpha -= np.pi
    return float(alpha)
