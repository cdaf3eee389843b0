"""Closed-form double-Gaussian model of a single TPSA peak.

A peak cut from a comb-pumped TPSA is modeled, in detuning coordinates
centered on the peak, as

    F(w_s, w_i) = exp(-(sin(a) w_s - cos(a) w_i)^2 / (2 sigma_c^2)
                  - (w_s + w_i)^2 / (2 sigma_p^2)),

where a is the ridge tilt, sigma_c the phase-matching width parameter and
sigma_p the width of one pump-comb peak (amplitude convention for both).
Expanding the exponent, the cross term in w_s w_i carries the coefficient
sin(2a)/(2 sigma_c^2) - 1/sigma_p^2; the peak factorizes exactly when it
vanishes, i.e. when sin(2a) = 2 sigma_c^2 / sigma_p^2.  (A frequently
quoted variant without the factor 2 corresponds to a different, unstated
normalization of sigma_c; the expansion-derived condition is the one this
module implements, and the rasterized-SVD tests pin it down.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import GAUSS_FWHM, SINC_SQ_HWHM
from .dispersion import CrystalSpec, group_properties
from .errors import NotDisjointError, SeparationNotApplicableError


@dataclass(frozen=True)
class DoubleGaussianPeak:
    """Single-peak model parameters (all rad/fs except the tilt)."""

    alpha: float    # ridge tilt, (-pi/2, pi/2]
    sigma_c: float  # phase-matching width
    sigma_p: float  # pump-peak width

    def __post_init__(self):
        if self.sigma_c <= 0 or self.sigma_p <= 0:
            raise ValueError("widths must be positive")
        if not -np.pi / 2 < self.alpha <= np.pi / 2:
            raise ValueError("alpha must lie in (-pi/2, pi/2]")


@dataclass(frozen=True)
class MultiPeakModel:
    """Sum of equal-width double-Gaussian peaks at centers (x_i, y_i)."""

    peaks: tuple[tuple[complex, float, float], ...]  # (A_i, x_i, y_i)
    sigma: float

    def __post_init__(self):
        if not self.peaks:
            raise ValueError("model needs at least one peak")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def amplitude(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        s2 = 2.0 * self.sigma**2
        for a, xi, yi in self.peaks:
            out += a * np.exp(-((x - xi) ** 2) / s2 - ((y - yi) ** 2) / s2)
        return out

    def min_axis_separation(self) -> float:
        """Smallest pairwise center distance over both axes."""
        best = np.inf
        for i in range(len(self.peaks)):
            for j in range(i + 1, len(self.peaks)):
                _, xi, yi = self.peaks[i]
                _, xj, yj = self.peaks[j]
                best = min(best, abs(xi - xj), abs(yi - yj))
        return best


def peak_amplitude(peak: DoubleGaussianPeak, omega_s, omega_i):
    """Evaluate the double-Gaussian exponent (real, peak value 1)."""
    ws = np.asarray(omega_s, dtype=float)
    wi = np.asarray(omega_i, dtype=float)
    ridge = (np.sin(peak.alpha) * ws - np.cos(peak.alpha) * wi) ** 2
    return np.exp(-ridge / (2.0 * peak.sigma_c**2)
                  - (ws + wi) ** 2 / (2.0 * peak.sigma_p**2))


def alignment_residual(peak: DoubleGaussianPeak) -> float:
    """Cross-term coefficient of w_s w_i in the exponent.

    Zero exactly when the elliptical cross-section is axis aligned, which
    is when the peak factorizes into signal and idler functions.
    Units 1/(rad/fs)^2.
    """
    return float(np.sin(2.0 * peak.alpha) / (2.0 * peak.sigma_c**2)
                 - 1.0 / peak.sigma_p**2)


def aligned_sigma_p(alpha: float, sigma_c: float) -> float:
    """Pump-peak width that makes the peak factorable at tilt alpha > 0."""
    s = np.sin(2.0 * alpha)
    if s <= 0:
        raise SeparationNotApplicableError(
            "factorable alignment requires a tilt in (0 deg, 90 deg)")
    return float(np.sqrt(2.0 * sigma_c**2 / s))


def separation_margins(peak: DoubleGaussianPeak, delta_omega: float) -> tuple[float, float]:
    """Dimensionless margins of the two non-overlap conditions.

    Neighboring peaks spaced by delta_omega along the comb overlap neither
    in idler nor in signal frequency when

        (cos^2 a / sigma_c^2 + 1/(2 sigma_p^2)) (dw cos a)^2 >> 1   and
        (sin^2 a / sigma_c^2 + 1/(2 sigma_p^2)) (dw sin a)^2 >> 1.

    Both left-hand sides are returned; a margin much greater than 1 means
    the corresponding projections separate.  For tilts below 45 deg the
    second margin is the smaller (binding) one.  Requires alpha in
    (0, pi/2): at nonpositive tilt the peaks cannot separate on both axes.
    """
    if delta_omega <= 0:
        raise ValueError("peak spacing must be positive")
    a = peak.alpha
    if not 0.0 < a < np.pi / 2:
        raise SeparationNotApplicableError(
            "separation conditions apply only for tilts in (0 deg, 90 deg)")
    common = 1.0 / (2.0 * peak.sigma_p**2)
    m1 = (np.cos(a) ** 2 / peak.sigma_c**2 + common) * (delta_omega * np.cos(a)) ** 2
    m2 = (np.sin(a) ** 2 / peak.sigma_c**2 + common) * (delta_omega * np.sin(a)) ** 2
    return float(m1), float(m2)


# Conversion between the sinc^2 phase-matching profile and the Gaussian
# model: the Gaussian is chosen to reproduce the sinc^2 intensity FWHM
# along the ridge normal.  sinc^2(x) falls to 1/2 at |x| = SINC_SQ_HWHM
# with x = (L/2) |grad dk_z| t, while the model intensity
# exp(-t^2/sigma_c^2) has FWHM 2 sqrt(ln2) sigma_c; equating the two
# widths gives sigma_c = SINC_FWHM_MATCH / (L |grad dk_z|).
SINC_FWHM_MATCH = 4.0 * np.sqrt(2.0) * SINC_SQ_HWHM / GAUSS_FWHM  # ~3.3429


def sigma_c_from_crystal(crystal: CrystalSpec, match: float = SINC_FWHM_MATCH) -> float:
    """Gaussian phase-matching width equivalent to the crystal's sinc.

    sigma_c = match / (L sqrt(gamma_s^2 + gamma_i^2)); with the default
    ``match`` the Gaussian and sinc^2 intensity profiles agree at half
    maximum along the ridge normal (other width-matching conventions can
    be reproduced by passing a different constant).  Doubling L halves
    sigma_c.
    """
    props = group_properties(crystal)
    grad = float(np.hypot(props.gamma_signal, props.gamma_idler))
    return match / (crystal.length_mm * grad)


def disjoint_sum_schmidt(model: MultiPeakModel,
                         min_separation_sigmas: float = 8.0) -> np.ndarray:
    """Analytic Schmidt coefficients of a sum of disjoint peaks.

    When every pair of peaks is separated by at least
    ``min_separation_sigmas`` standard deviations on both axes, the
    normalized per-peak Gaussians are themselves the Schmidt modes and the
    coefficients are lambda_n proportional to |A_n|^2.  Returned
    descending and normalized to sum to 1.
    """
    sep = model.min_axis_separation()
    if sep < min_separation_sigmas * model.sigma:
        raise NotDisjointError(
            f"peaks separated by {sep:.4g} rad/fs on some axis, below "
            f"{min_separation_sigmas:g} sigma = "
            f"{min_separation_sigmas * model.sigma:.4g} rad/fs; the "
            f"disjoint-sum Schmidt structure does not apply")
    lam = np.array([abs(a) ** 2 for a, _, _ in model.peaks], dtype=float)
    lam /= lam.sum()
    return np.sort(lam)[::-1]
