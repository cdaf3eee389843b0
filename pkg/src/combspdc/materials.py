"""Sellmeier dispersion data for uniaxial nonlinear crystals.

Coefficient sets are shipped as a versioned CSV (``data/sellmeier.csv``)
with one row per (material, polarization).  The refractive index follows

    n^2 = a + b1 / (lam^2 - c1) + b2 lam^2 / (lam^2 - c2) + d lam^2

with lam the vacuum wavelength in micrometers.  This six-coefficient form
covers both bundled materials (KDP after Zernike 1964, BBO after Eimerl
1987); the literature source of each row is recorded in the file itself.

The angle-dependent extraordinary index of a uniaxial crystal is

    n_e(theta) = [cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2]^(-1/2),

with theta the angle between the optic axis and the propagation direction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import WavelengthRangeError

ORDINARY = "ordinary"
EXTRAORDINARY = "extraordinary"


@dataclass(frozen=True)
class SellmeierData:
    """Dispersion data for one material: both principal polarizations.

    ``ordinary`` and ``extraordinary`` are the six-coefficient tuples
    (a, b1, c1, b2, c2, d); the validity window is shared.
    """

    material: str
    ordinary: tuple[float, ...]
    extraordinary: tuple[float, ...]
    lambda_min_um: float
    lambda_max_um: float
    source: str = ""

    def check_wavelength(self, lam_um) -> None:
        lam = np.asarray(lam_um, dtype=float)
        if np.any(lam < self.lambda_min_um) or np.any(lam > self.lambda_max_um):
            bad = float(np.min(lam)) if np.any(lam < self.lambda_min_um) else float(np.max(lam))
            raise WavelengthRangeError(
                f"{bad:.6g} um is outside the {self.material} Sellmeier range "
                f"[{self.lambda_min_um:g}, {self.lambda_max_um:g}] um"
            )

    def index_squared(self, lam_um, polarization: str):
        a, b1, c1, b2, c2, d = (
            self.ordinary if polarization == ORDINARY else self.extraordinary
        )
        l2 = np.asarray(lam_um, dtype=float) ** 2
        return a + b1 / (l2 - c1) + b2 * l2 / (l2 - c2) + d * l2


def refractive_index(sellmeier: SellmeierData, lam_um, polarization: str,
                     theta: float = 0.0):
    """Refractive index at vacuum wavelength lam_um (scalar or array).

    For ``polarization="extraordinary"`` the angle-dependent index
    n_e(theta) is returned; theta is ignored for ordinary waves.
    Raises WavelengthRangeError outside the data validity window.
    """
    sellmeier.check_wavelength(lam_um)
    if polarization == ORDINARY:
        return np.sqrt(sellmeier.index_squared(lam_um, ORDINARY))
    if polarization != EXTRAORDINARY:
        raise ValueError(f"unknown polarization {polarization!r}")
    no2 = sellmeier.index_squared(lam_um, ORDINARY)
    ne2 = sellmeier.index_squared(lam_um, EXTRAORDINARY)
    c, s = np.cos(theta), np.sin(theta)
    return 1.0 / np.sqrt(c * c / no2 + s * s / ne2)


def _rows_from_file(path=None):
    if path is None:
        ref = resources.files("combspdc.data").joinpath("sellmeier.csv")
        with ref.open("r", encoding="utf-8") as fh:
            yield from csv.DictReader(fh)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            yield from csv.DictReader(fh)


def load_materials(path=None) -> dict[str, SellmeierData]:
    """Read a Sellmeier CSV (the bundled one by default) into a registry."""
    halves: dict[str, dict] = {}
    for row in _rows_from_file(path):
        name = row["material"]
        coeffs = tuple(float(row[k]) for k in ("a", "b1", "c1", "b2", "c2", "d"))
        rec = halves.setdefault(name, {
            "lambda_min_um": float(row["lambda_min_um"]),
            "lambda_max_um": float(row["lambda_max_um"]),
            "source": row["source"],
        })
        rec[row["polarization"]] = coeffs
    registry = {}
    for name, rec in halves.items():
        if ORDINARY not in rec or EXTRAORDINARY not in rec:
            raise ValueError(f"material {name} needs both polarizations in the data file")
        registry[name] = SellmeierData(
            material=name,
            ordinary=rec[ORDINARY],
            extraordinary=rec[EXTRAORDINARY],
            lambda_min_um=rec["lambda_min_um"],
            lambda_max_um=rec["lambda_max_um"],
            source=rec["source"],
        )
    return registry


_REGISTRY: dict[str, SellmeierData] | None = None


def get_material(name: str) -> SellmeierData:
    """Look up a bundled material by name (case-insensitive)."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = load_materials()
    try:
        return _REGISTRY[name.upper()]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise KeyError(f"unknown material {name!r}; bundled: {known}") from None


def available_materials() -> list[str]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = load_materials()
    return sorted(_REGISTRY)
