"""Crystal dispersion: wavevectors, group velocities, phase mismatch, tilt.

All frequencies are angular, in rad/fs; wavevectors in rad/mm; inverse
group velocities in fs/mm.  The collinear longitudinal mismatch for
degenerate type-II down-conversion is

    dk_z(w_s, w_i) = k_p(w_s + w_i) - k_s(w_s) - k_i(w_i),

and the orientation of the phase-matched ridge in the (w_s, w_i) plane is
tan(alpha) = -gamma_s / gamma_i with gamma = 1/u_pump - 1/u_photon.

First derivatives of k(w) use a 3-point central difference with step
FD_STEP_FIRST; second derivatives use a 5-point central difference with
the larger step FD_STEP_SECOND, which keeps float64 roundoff in the
second difference about six orders of magnitude below the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import materials
from .constants import C_MM_FS, wavelength_um_from_omega
from .errors import PhaseMatchingError
from .materials import EXTRAORDINARY, ORDINARY, SellmeierData

PUMP, SIGNAL, IDLER = "pump", "signal", "idler"

FD_STEP_FIRST = 1e-4   # rad/fs, 3-point stencils
FD_STEP_SECOND = 2e-2  # rad/fs, 5-point stencils


@dataclass(frozen=True)
class CrystalSpec:
    """A cut uniaxial crystal with its pump frequency.

    ``polarizations`` assigns (pump, signal, idler) polarizations; the
    default is the type-II convention used for KDP (pump extraordinary,
    signal ordinary, idler extraordinary).
    """

    sellmeier: SellmeierData
    length_mm: float
    cut_angle_rad: float
    pump_omega: float  # rad/fs
    polarizations: tuple[str, str, str] = (EXTRAORDINARY, ORDINARY, EXTRAORDINARY)

    def __post_init__(self):
        if self.length_mm <= 0:
            raise ValueError("crystal length must be positive")
        if not 0.0 <= self.cut_angle_rad <= np.pi / 2:
            raise ValueError("cut angle must lie in [0, pi/2]")

    def polarization_of(self, role: str) -> str:
        return self.polarizations[(PUMP, SIGNAL, IDLER).index(role)]


@dataclass(frozen=True)
class GroupProperties:
    """Group velocities (mm/fs), GVDs (fs^2/mm) and the inverse-group-
    velocity differences gamma = 1/u_p - 1/u_{s,i} (fs/mm) at degeneracy."""

    u_pump: float
    u_signal: float
    u_idler: float
    gvd_signal: float
    gvd_idler: float
    gamma_signal: float = field(default=0.0)
    gamma_idler: float = field(default=0.0)


def refractive_index(sellmeier: SellmeierData, lam_um, polarization: str,
                     theta: float = 0.0):
    """Re-export of :func:`materials.refractive_index` for convenience."""
    return materials.refractive_index(sellmeier, lam_um, polarization, theta)


def wavevector(crystal: CrystalSpec, omega, role: str):
    """k = n(w) w / c in rad/mm for the given role's polarization."""
    lam_um = wavelength_um_from_omega(omega)
    n = materials.refractive_index(
        crystal.sellmeier, lam_um, crystal.polarization_of(role), crystal.cut_angle_rad
    )
    return n * np.asarray(omega, dtype=float) / C_MM_FS


def group_velocity(crystal: CrystalSpec, omega: float, role: str) -> float:
    """u = (dk/dw)^-1 in mm/fs, by central finite difference."""
    h = FD_STEP_FIRST
    kp = wavevector(crystal, omega + h, role)
    km = wavevector(crystal, omega - h, role)
    return 1.0 / ((kp - km) / (2.0 * h))


def gvd(crystal: CrystalSpec, omega: float, role: str) -> float:
    """k'' = d^2 k / dw^2 in fs^2/mm, by 5-point central difference."""
    h = FD_STEP_SECOND
    w = np.array([omega - 2 * h, omega - h, omega, omega + h, omega + 2 * h])
    k = wavevector(crystal, w, role)
    return float((-k[0] + 16 * k[1] - 30 * k[2] + 16 * k[3] - k[4]) / (12 * h * h))


def delta_kz(crystal: CrystalSpec, omega_s, omega_i):
    """Collinear longitudinal mismatch k_p(w_s+w_i) - k_s(w_s) - k_i(w_i)."""
    return (
        wavevector(crystal, np.asarray(omega_s) + np.asarray(omega_i), PUMP)
        - wavevector(crystal, omega_s, SIGNAL)
        - wavevector(crystal, omega_i, IDLER)
    )


def phase_matching_angle(sellmeier: SellmeierData, pump_omega: float,
                         polarizations=(EXTRAORDINARY, ORDINARY, EXTRAORDINARY),
                         tol_rad_mm: float = 1e-9) -> float:
    """Cut angle for collinear degenerate phase matching, by bisection.

    Solves dk_z(w_p/2, w_p/2) = 0 over theta in (0, pi/2) down to
    |dk_z| < tol_rad_mm.  Raises PhaseMatchingError when the mismatch does
    not change sign over the bracket.
    """
    wd = pump_omega / 2.0

    def mismatch(theta):
        c = CrystalSpec(sellmeier, 1.0, theta, pump_omega, polarizations)
        return float(delta_kz(c, wd, wd))

    lo, hi = 1e-9, np.pi / 2 - 1e-9
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo * f_hi > 0:
        raise PhaseMatchingError(
            f"no collinear degenerate phase-matching angle for "
            f"{sellmeier.material} at pump {pump_omega:.4f} rad/fs "
            f"(dk_z is {f_lo:.3g} rad/mm at 0 deg and {f_hi:.3g} rad/mm at 90 deg)"
        )
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = mismatch(mid)
        if abs(f_mid) < tol_rad_mm:
            return mid
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    if abs(mismatch(mid)) >= tol_rad_mm:
        raise PhaseMatchingError(
            f"bisection failed to reach |dk_z| < {tol_rad_mm} rad/mm "
            f"for {sellmeier.material}"
        )
    return mid


def group_properties(crystal: CrystalSpec) -> GroupProperties:
    """Group velocities, GVDs and gammas at the degenerate frequencies."""
    wp = crystal.pump_omega
    wd = wp / 2.0
    u_p = group_velocity(crystal, wp, PUMP)
    u_s = group_velocity(crystal, wd, SIGNAL)
    u_i = group_velocity(crystal, wd, IDLER)
    return GroupProperties(
        u_pump=u_p,
        u_signal=u_s,
        u_idler=u_i,
        gvd_signal=gvd(crystal, wd, SIGNAL),
        gvd_idler=gvd(crystal, wd, IDLER),
        gamma_signal=1.0 / u_p - 1.0 / u_s,
        gamma_idler=1.0 / u_p - 1.0 / u_i,
    )


def tpsa_tilt(crystal: CrystalSpec) -> float:
    """Ridge tilt alpha = atan(-gamma_s / gamma_i), folded into (-pi/2, pi/2]."""
    props = group_properties(crystal)
    alpha = float(np.arctan2(-props.gamma_signal, props.gamma_idler))
    if alpha <= -np.pi / 2:
        alpha += np.pi
    elif alpha > np.pi / 2:
        alpha -= np.pi
    return alpha
