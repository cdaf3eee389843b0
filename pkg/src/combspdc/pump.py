"""Complex pump spectral amplitude models.

Every model exposes ``amplitude(omega)`` returning a complex amplitude at
absolute angular frequency omega (rad/fs); intensities are |amplitude|^2
and only appear at presentation boundaries.

Width conventions:

* ``GaussianPulse(center, sigma)``: sigma is the std of the *intensity*
  spectrum, so the intensity FWHM is 2 sqrt(2 ln2) sigma and the amplitude
  is exp(-(w-w0)^2 / (4 sigma^2)).
* ``GaussianComb``: each peak is an *amplitude* Gaussian
  A_i exp(-(w-w_i)^2 / (2 sigma^2)).

A Fabry-Perot with mirror reflectance R, spacing d and plate tilt phi has

    t(w) = (1 - R) / (1 - R exp(-2 i (w - w_ref) d cos(phi) / c)),

an Airy comb with free spectral range pi c / (d cos phi), unit transmission
at resonances and background (1-R)/(1+R) at antiresonance.  ``omega_ref``
pins one resonance (physically a sub-wavelength adjustment of d); the
default 0 puts resonances at integer multiples of the FSR.  The tilt enters
only through cos(phi); any finesse reduction from beam walk-off must be
folded into an effective R supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import (C_UM_FS, GAUSS_FWHM, bandwidth_nm_to_omega,
                        omega_from_wavelength_nm, pulse_duration_to_sigma_omega)


@dataclass(frozen=True)
class GaussianPulse:
    """Transform-limited Gaussian pump line, intensity-std convention."""

    center: float  # rad/fs
    sigma: float   # rad/fs, std of the intensity spectrum

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @classmethod
    def from_intensity_fwhm_nm(cls, center_nm: float, fwhm_nm: float) -> "GaussianPulse":
        dw = bandwidth_nm_to_omega(fwhm_nm, center_nm)
        return cls(omega_from_wavelength_nm(center_nm), dw / GAUSS_FWHM)

    @classmethod
    def from_duration_fs(cls, center_nm: float, tau_fs: float) -> "GaussianPulse":
        return cls(omega_from_wavelength_nm(center_nm),
                   pulse_duration_to_sigma_omega(tau_fs))

    def amplitude(self, omega):
        nu = np.asarray(omega, dtype=float) - self.center
        return np.exp(-nu * nu / (4.0 * self.sigma**2)).astype(complex)

    def intensity_fwhm(self) -> float:
        return GAUSS_FWHM * self.sigma


@dataclass(frozen=True)
class FabryPerot:
    """Plane Fabry-Perot transmission (Airy function), effective-R model."""

    spacing_um: float
    reflectance: float
    tilt_rad: float = 0.0
    omega_ref: float = 0.0  # rad/fs; a transmission maximum sits here

    def __post_init__(self):
        if not 0.0 < self.reflectance < 1.0:
            raise ValueError("reflectance must lie in (0, 1)")
        if self.spacing_um <= 0:
            raise ValueError("spacing must be positive")

    def round_trip_time(self) -> float:
        """2 d cos(phi) / c in fs (phase per rad/fs of detuning)."""
        return 2.0 * self.spacing_um * np.cos(self.tilt_rad) / C_UM_FS

    def amplitude(self, omega):
        delta = (np.asarray(omega, dtype=float) - self.omega_ref) * self.round_trip_time()
        r = self.reflectance
        return (1.0 - r) / (1.0 - r * np.exp(-1j * delta))

    def free_spectral_range(self) -> float:
        """Resonance spacing pi c / (d cos phi) in rad/fs."""
        return 2.0 * np.pi / self.round_trip_time()

    def peak_phase_fwhm(self) -> float:
        """Exact FWHM of one Airy intensity peak in round-trip phase."""
        r = self.reflectance
        return 4.0 * np.arcsin((1.0 - r) / (2.0 * np.sqrt(r)))

    def peak_intensity_fwhm(self) -> float:
        """Exact intensity FWHM of one transmission peak, rad/fs."""
        return self.peak_phase_fwhm() / self.round_trip_time()

    def background(self) -> float:
        """|t| at antiresonance, (1-R)/(1+R)."""
        return (1.0 - self.reflectance) / (1.0 + self.reflectance)

    def pinned_at(self, omega: float) -> "FabryPerot":
        """Copy with a transmission maximum at the given frequency."""
        return FabryPerot(self.spacing_um, self.reflectance, self.tilt_rad, omega)


@dataclass(frozen=True)
class ShapedPump:
    """Gaussian pulse transmitted through a Fabry-Perot."""

    pulse: GaussianPulse
    fp: FabryPerot

    def amplitude(self, omega):
        return self.pulse.amplitude(omega) * self.fp.amplitude(omega)


@dataclass(frozen=True)
class GaussianComb:
    """Ideal comb of Gaussian amplitude peaks sharing one width."""

    centers: tuple[float, ...]  # rad/fs, strictly increasing
    sigma: float                # rad/fs, amplitude-Gaussian width
    amplitudes: tuple[complex, ...] | None = None

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float)
        if c.size == 0:
            raise ValueError("comb needs at least one peak")
        if c.size > 1 and np.any(np.diff(c) <= 0):
            raise ValueError("comb centers must be strictly increasing")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.amplitudes is not None and len(self.amplitudes) != c.size:
            raise ValueError("one amplitude per center required")

    @classmethod
    def around(cls, center: float, spacing: float, n_side: int, sigma: float,
               amplitudes: Sequence[complex] | None = None) -> "GaussianComb":
        """Comb of 2*n_side+1 peaks centered on ``center``."""
        centers = tuple(center + m * spacing for m in range(-n_side, n_side + 1))
        amps = tuple(amplitudes) if amplitudes is not None else None
        return cls(centers, sigma, amps)

    def amplitude(self, omega):
        w = np.asarray(omega, dtype=float)
        amps = self.amplitudes or (1.0,) * len(self.centers)
        out = np.zeros(np.broadcast(w).shape, dtype=complex)
        for a, c in zip(amps, self.centers):
            out += a * np.exp(-((w - c) ** 2) / (2.0 * self.sigma**2))
        return out


def shaped_pump(pulse: GaussianPulse, fp: FabryPerot) -> ShapedPump:
    return ShapedPump(pulse, fp)


def fp_peak_fwhm_numeric(fp: FabryPerot, near_omega: float,
                         n_samples: int = 200001) -> float:
    """Intensity FWHM of the transmission peak nearest ``near_omega``.

    Locates the closest resonance, samples the Airy intensity across one
    free spectral range and measures the half-maximum crossings by linear
    interpolation.  Returns rad/fs.
    """
    fsr = fp.free_spectral_range()
    m = np.round((near_omega - fp.omega_ref) / fsr)
    w0 = fp.omega_ref + m * fsr
    w = np.linspace(w0 - fsr / 2, w0 + fsr / 2, n_samples)
    inten = np.abs(fp.amplitude(w)) ** 2
    half = inten.max() / 2.0
    above = inten >= half
    idx = np.where(above)[0]
    lo, hi = idx[0], idx[-1]

    def crossing(i, j):
        # linear interpolation of the half-max crossing between samples i, j
        return w[i] + (half - inten[i]) * (w[j] - w[i]) / (inten[j] - inten[i])

    w_lo = crossing(lo - 1, lo) if lo > 0 else w[0]
    w_hi = crossing(hi + 1, hi) if hi < n_samples - 1 else w[-1]
    return w_hi - w_lo
