"""Physical constants and unit conversions.

Internal unit system: angular frequency in rad/fs, length in mm, time in fs.
Wavevectors come out in rad/mm, inverse group velocities in fs/mm, GVD in
fs^2/mm.  Everything user-facing (nm, um, ps, km, degrees) is converted at
the boundaries by the helpers below; no other module should hard-code unit
factors.
"""

import numpy as np

C_UM_FS = 0.299792458   # speed of light, um/fs
C_NM_FS = 299.792458    # speed of light, nm/fs
C_MM_FS = 2.99792458e-4  # speed of light, mm/fs

# Half width at half maximum of sinc(x)^2 in its argument:
# the solution of sinc(x)^2 = 1/2.
SINC_SQ_HWHM = 1.3915573782515135

# Intensity FWHM of a Gaussian exp(-t^2/(2 s^2)) equals GAUSS_FWHM * s.
GAUSS_FWHM = 2.0 * np.sqrt(2.0 * np.log(2.0))


def omega_from_wavelength_nm(lam_nm):
    """Vacuum wavelength in nm to angular frequency in rad/fs."""
    return 2.0 * np.pi * C_NM_FS / np.asarray(lam_nm, dtype=float)


def wavelength_nm_from_omega(omega):
    """Angular frequency in rad/fs to vacuum wavelength in nm."""
    return 2.0 * np.pi * C_NM_FS / np.asarray(omega, dtype=float)


def wavelength_um_from_omega(omega):
    """Angular frequency in rad/fs to vacuum wavelength in um."""
    return 2.0 * np.pi * C_UM_FS / np.asarray(omega, dtype=float)


def bandwidth_nm_to_omega(fwhm_nm, center_nm):
    """Convert a small spectral width in nm at center_nm to rad/fs.

    Uses the local linearization |domega| = 2 pi c dlam / lam^2, adequate
    for widths much smaller than the carrier wavelength.
    """
    return 2.0 * np.pi * C_NM_FS * fwhm_nm / center_nm**2


def bandwidth_omega_to_nm(dw, center_nm):
    """Inverse of :func:`bandwidth_nm_to_omega`."""
    return dw * center_nm**2 / (2.0 * np.pi * C_NM_FS)


def pulse_duration_to_sigma_omega(tau_fs):
    """Intensity-FWHM pulse duration (fs) to spectral intensity std (rad/fs).

    Assumes a transform-limited Gaussian pulse: the spectral intensity FWHM
    is 4 ln2 / tau, and sigma = FWHM / (2 sqrt(2 ln2)).
    """
    return 4.0 * np.log(2.0) / tau_fs / GAUSS_FWHM
