"""Dispersive-fiber registration chain simulation.

Long fiber propagation maps a photon's frequency detuning Omega onto an
arrival time t = k'' l Omega (frequency-to-time Fourier mapping), so a
coincidence histogram of arrival times reproduces the squared TPSA with
rescaled axes.  The accompanying quadratic spectral phase never affects
intensity histograms, so the simulation samples |F|^2 directly.

Fiber GVD comes from a tabulated dispersion parameter D(lambda) in
ps/nm/km, linearly interpolated; k'' l is carried in ps per rad/fs via
k'' l = -D l lambda^2 / (2 pi c), and a detuning of 1 nm at 800 nm with
D = -120 ps/nm/km over 1 km maps to 120 ps of arrival shift.

Sampling uses a counter-based Philox generator: the same seed and
configuration give an identical histogram on every run.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import ndimage

from .constants import C_NM_FS, GAUSS_FWHM
from .errors import ContractError, DegenerateInputError, WavelengthRangeError
from .tpsa import TpsaGrid, require_normalized


@dataclass(frozen=True)
class FiberSpec:
    """A dispersive fiber: length plus a D(lambda) table."""

    length_km: float
    wavelengths_nm: np.ndarray
    dispersion_ps_nm_km: np.ndarray
    name: str = "fiber"

    def __post_init__(self):
        wl = np.asarray(self.wavelengths_nm, dtype=float)
        dd = np.asarray(self.dispersion_ps_nm_km, dtype=float)
        if self.length_km <= 0:
            raise ValueError("fiber length must be positive")
        if wl.ndim != 1 or wl.size < 2 or np.any(np.diff(wl) <= 0):
            raise ValueError("dispersion table needs increasing wavelength samples")
        if dd.shape != wl.shape:
            raise ValueError("dispersion table columns must match")
        object.__setattr__(self, "wavelengths_nm", wl)
        object.__setattr__(self, "dispersion_ps_nm_km", dd)

    @classmethod
    def from_csv(cls, path, length_km: float) -> "FiberSpec":
        wl, dd = [], []
        with open(path, "r", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                wl.append(float(row["wavelength_nm"]))
                dd.append(float(row["D_ps_nm_km"]))
        return cls(length_km, np.asarray(wl), np.asarray(dd), name=str(path))

    @classmethod
    def bundled(cls, name: str = "nufern_780hp", length_km: float = 1.0) -> "FiberSpec":
        ref = resources.files("combspdc.data").joinpath(f"{name}.csv")
        wl, dd = [], []
        with ref.open("r", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                wl.append(float(row["wavelength_nm"]))
                dd.append(float(row["D_ps_nm_km"]))
        return cls(length_km, np.asarray(wl), np.asarray(dd), name=name)

    def dispersion_at(self, lam_nm):
        lam = np.asarray(lam_nm, dtype=float)
        if np.any(lam < self.wavelengths_nm[0]) or np.any(lam > self.wavelengths_nm[-1]):
            raise WavelengthRangeError(
                f"{float(np.min(lam)):.6g}..{float(np.max(lam)):.6g} nm outside the "
                f"{self.name} dispersion table "
                f"[{self.wavelengths_nm[0]:g}, {self.wavelengths_nm[-1]:g}] nm")
        return np.interp(lam, self.wavelengths_nm, self.dispersion_ps_nm_km)

    def gvd_fs2_mm(self, lam_nm):
        """k'' = -D lambda^2 / (2 pi c), converted to fs^2/mm."""
        d = self.dispersion_at(lam_nm)  # ps/nm/km
        lam = np.asarray(lam_nm, dtype=float)
        # ps/nm/km * nm^2 / (nm/fs) = ps nm fs / km = 1e3 fs^2 / 1e6 mm
        return -d * lam**2 / (2.0 * np.pi * C_NM_FS) * 1e-3

    def time_scale_ps_per_rad_fs(self, center_nm: float) -> float:
        """k'' l in ps per (rad/fs) of detuning at the band center."""
        d = float(self.dispersion_at(center_nm))  # ps/nm/km
        # t = D l dlam and dlam = -lam^2/(2 pi c) dOmega
        return -d * self.length_km * center_nm**2 / (2.0 * np.pi * C_NM_FS)


def gvd_to_dispersion(k2_fs2_mm, lam_nm):
    """Inverse conversion k'' (fs^2/mm) -> D (ps/nm/km)."""
    return -np.asarray(k2_fs2_mm, dtype=float) * (2.0 * np.pi * C_NM_FS) / \
        np.asarray(lam_nm, dtype=float) ** 2 * 1e3


def time_map(fiber: FiberSpec, detuning_rad_fs, center_nm: float):
    """Arrival-time shift t = k'' l Omega in ps for a detuning in rad/fs."""
    return fiber.time_scale_ps_per_rad_fs(center_nm) * np.asarray(detuning_rad_fs, dtype=float)


def time_to_detuning(fiber: FiberSpec, t_ps, center_nm: float):
    """Invert :func:`time_map`: Omega = t / (k'' l)."""
    return np.asarray(t_ps, dtype=float) / fiber.time_scale_ps_per_rad_fs(center_nm)


@dataclass(frozen=True)
class DetectorChain:
    """Timing jitter and binning of the coincidence electronics."""

    jitter_ps: float = 50.0          # per detector, Gaussian sigma
    trigger_jitter_ps: float = 0.0   # common to both arms
    bin_ps: float = 25.0
    pairs: int = 100000

    def __post_init__(self):
        if self.jitter_ps < 0 or self.trigger_jitter_ps < 0:
            raise ValueError("jitter must be nonnegative")
        if self.bin_ps <= 0:
            raise ValueError("bin width must be positive")
        if self.pairs < 0:
            raise ValueError("pair count must be nonnegative")

    def arm_sigma_ps(self) -> float:
        """Total Gaussian sigma of one arm's timing relative to the trigger."""
        return float(np.hypot(self.jitter_ps, self.trigger_jitter_ps))


def effective_resolution_nm(fiber: FiberSpec, detectors: DetectorChain,
                            center_nm: float) -> float:
    """Spectral resolution (FWHM, nm) of one arm of the chain.

    The arm timing jitter translates through the time-to-wavelength map;
    FWHM = 2 sqrt(2 ln2) sigma_t / |D l|.
    """
    scale = abs(float(fiber.dispersion_at(center_nm))) * fiber.length_km  # ps/nm
    return GAUSS_FWHM * detectors.arm_sigma_ps() / scale


@dataclass(frozen=True)
class ArrivalHistogram:
    """2-D coincidence counts over (t_signal, t_idler) bins."""

    counts: np.ndarray        # int64, (n_s, n_i)
    t_signal_edges: np.ndarray  # ps
    t_idler_edges: np.ndarray
    seed: int
    pairs: int
    overflow: int
    center_signal_nm: float
    center_idler_nm: float

    @property
    def t_signal_centers(self):
        return 0.5 * (self.t_signal_edges[:-1] + self.t_signal_edges[1:])

    @property
    def t_idler_centers(self):
        return 0.5 * (self.t_idler_edges[:-1] + self.t_idler_edges[1:])


def simulate_histogram(tpsa: TpsaGrid, fiber_signal: FiberSpec, fiber_idler: FiberSpec,
                       detectors: DetectorChain, seed: int,
                       centers_nm: tuple[float, float] | None = None) -> ArrivalHistogram:
    """Sample pair arrivals from |F|^2 and histogram their times.

    Pairs are drawn from the discrete cell distribution, mapped to arrival
    times through each arm's fiber, smeared with independent per-detector
    jitter plus the common trigger jitter, and binned.  Deterministic for
    a fixed seed (Philox counter-based generator).
    """
    require_normalized(tpsa, "simulate_histogram")
    inten = tpsa.intensity().ravel()
    total = inten.sum()
    if total <= 0:
        raise DegenerateInputError("cannot sample from a zero-power TPSA")
    prob = inten / total

    grid = tpsa.grid
    if centers_nm is None:
        cs = 2.0 * np.pi * C_NM_FS / float(np.mean(grid.signal))
        ci = 2.0 * np.pi * C_NM_FS / float(np.mean(grid.idler))
    else:
        cs, ci = centers_nm
    w_s_center = 2.0 * np.pi * C_NM_FS / cs
    w_i_center = 2.0 * np.pi * C_NM_FS / ci

    rng = np.random.Generator(np.random.Philox(seed))
    idx = rng.choice(prob.size, size=detectors.pairs, p=prob)
    i_s, i_i = np.unravel_index(idx, tpsa.amplitude.shape)
    t_s = time_map(fiber_signal, grid.signal[i_s] - w_s_center, cs)
    t_i = time_map(fiber_idler, grid.idler[i_i] - w_i_center, ci)
    if detectors.jitter_ps > 0:
        t_s = t_s + rng.normal(0.0, detectors.jitter_ps, size=t_s.size)
        t_i = t_i + rng.normal(0.0, detectors.jitter_ps, size=t_i.size)
    if detectors.trigger_jitter_ps > 0:
        trig = rng.normal(0.0, detectors.trigger_jitter_ps, size=t_s.size)
        t_s = t_s + trig
        t_i = t_i + trig

    pad = 5.0 * detectors.arm_sigma_ps() + detectors.bin_ps
    corners_s = time_map(fiber_signal, grid.signal[[0, -1]] - w_s_center, cs)
    corners_i = time_map(fiber_idler, grid.idler[[0, -1]] - w_i_center, ci)
    edges_s = _bin_edges(corners_s.min() - pad, corners_s.max() + pad, detectors.bin_ps)
    edges_i = _bin_edges(corners_i.min() - pad, corners_i.max() + pad, detectors.bin_ps)
    counts, _, _ = np.histogram2d(t_s, t_i, bins=(edges_s, edges_i))
    counts = counts.astype(np.int64)
    return ArrivalHistogram(
        counts=counts,
        t_signal_edges=edges_s,
        t_idler_edges=edges_i,
        seed=seed,
        pairs=detectors.pairs,
        overflow=int(detectors.pairs - counts.sum()),
        center_signal_nm=cs,
        center_idler_nm=ci,
    )


def _bin_edges(lo: float, hi: float, width: float) -> np.ndarray:
    n = int(np.ceil((hi - lo) / width))
    return lo + width * np.arange(n + 1)


def time_to_wavelength(hist: ArrivalHistogram, fiber_signal: FiberSpec,
                       fiber_idler: FiberSpec) -> dict:
    """Relabel a time histogram's axes into wavelengths.

    Inverts the local-linear frequency-to-time map around each arm's band
    center; returns the counts (unchanged) with wavelength bin centers and
    the effective per-arm spectral resolution implied by the map
    (dictionary keys: counts, signal_nm, idler_nm, resolution metadata).
    """
    if hist.counts.shape != (hist.t_signal_edges.size - 1, hist.t_idler_edges.size - 1):
        raise ContractError("histogram axes are inconsistent with its counts")
    cs, ci = hist.center_signal_nm, hist.center_idler_nm

    def lam_axis(t_ps, fiber, center):
        omega = time_to_detuning(fiber, t_ps, center)
        w0 = 2.0 * np.pi * C_NM_FS / center
        return 2.0 * np.pi * C_NM_FS / (w0 + omega)

    return {
        "counts": hist.counts,
        "signal_nm": lam_axis(hist.t_signal_centers, fiber_signal, cs),
        "idler_nm": lam_axis(hist.t_idler_centers, fiber_idler, ci),
        "bin_ps": float(hist.t_signal_edges[1] - hist.t_signal_edges[0]),
        "signal_nm_per_bin": abs(float(
            (hist.t_signal_edges[1] - hist.t_signal_edges[0])
            / (fiber_signal.dispersion_at(cs) * fiber_signal.length_km))),
        "idler_nm_per_bin": abs(float(
            (hist.t_idler_edges[1] - hist.t_idler_edges[0])
            / (fiber_idler.dispersion_at(ci) * fiber_idler.length_km))),
    }


def blur_to_resolution(intensity: np.ndarray, signal_step_nm: float,
                       idler_step_nm: float, resolution_nm: float) -> np.ndarray:
    """Gaussian blur of an intensity grid to a spectral resolution (FWHM).

    Power is preserved (normalized kernel); a zero resolution returns the
    input unchanged.
    """
    if resolution_nm < 0:
        raise ValueError("resolution must be nonnegative")
    if resolution_nm == 0:
        return np.array(intensity, dtype=float, copy=True)
    sigma_nm = resolution_nm / GAUSS_FWHM
    sig = (sigma_nm / abs(signal_step_nm), sigma_nm / abs(idler_step_nm))
    return ndimage.gaussian_filter(np.asarray(intensity, dtype=float), sig,
                                   mode="constant", truncate=8.0)


def fiber_table_hash(fiber: FiberSpec) -> str:
    """Stable hash of the dispersion table, for output metadata."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(fiber.wavelengths_nm).tobytes())
    h.update(np.ascontiguousarray(fiber.dispersion_ps_nm_km).tobytes())
    h.update(np.float64(fiber.length_km).tobytes())
    return h.hexdigest()[:16]
