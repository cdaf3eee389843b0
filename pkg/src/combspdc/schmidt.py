"""Schmidt decomposition of a discretized two-photon amplitude.

The grid amplitude F (n_s x n_i), with uniform steps dw_s, dw_i, is turned
into the measure-weighted matrix M = sqrt(dw_s) F sqrt(dw_i) whose singular
values give the Schmidt coefficients lambda_n = s_n^2; the singular vectors,
un-weighted by the measure, are the sampled Schmidt modes.  The Schmidt
number K = 1 / sum(lambda_n^2) measures the effective mode count.

The one-photon kernel K1(x, x') = int dy F(x, y) F*(x', y) provides an
independent route to the same coefficients through its eigenvalues; both
paths are exposed so they can cross-check each other.

Quantitative mode counts are computed on the modulus of the amplitude
(``use_modulus=True``, the default): when propagation dispersion is
negligible the spectral phase does not affect the mode weights, and all
headline numbers in the literature this package reproduces are defined
that way.  The complex-amplitude path is kept for research use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .tpsa import TpsaGrid, require_normalized

COEFF_FLOOR = 1e-12  # report lambdas above this; K always uses the full spectrum


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Coefficients and sampled modes of one decomposition.

    ``coefficients`` are the full descending spectrum (length min(n_s, n_i));
    ``signal_modes``/``idler_modes`` hold one mode per column, orthonormal
    under the grid measure.
    """

    coefficients: np.ndarray
    signal_modes: np.ndarray  # (n_s, n_modes)
    idler_modes: np.ndarray   # (n_i, n_modes)
    signal_axis: np.ndarray
    idler_axis: np.ndarray
    step_signal: float
    step_idler: float

    @property
    def schmidt_number(self) -> float:
        return schmidt_number(self.coefficients)

    def reported_coefficients(self) -> np.ndarray:
        return self.coefficients[self.coefficients > COEFF_FLOOR]

    def reconstruct(self, n_modes: int | None = None) -> np.ndarray:
        """Sum of sqrt(lambda_n) f_n^s(w_s) f_n^i(w_i) over kept modes."""
        n = self.coefficients.size if n_modes is None else n_modes
        return (self.signal_modes[:, :n] * np.sqrt(self.coefficients[:n])) @ \
            self.idler_modes[:, :n].T

    def mode_centroid(self, n: int, which: str = "signal") -> float:
        axis, modes, step = ((self.signal_axis, self.signal_modes, self.step_signal)
                             if which == "signal"
                             else (self.idler_axis, self.idler_modes, self.step_idler))
        dens = np.abs(modes[:, n]) ** 2
        return float((axis * dens).sum() / dens.sum())


def schmidt_number(coefficients) -> float:
    """K = 1 / sum(lambda^2) for a normalized coefficient distribution."""
    lam = np.asarray(coefficients, dtype=float)
    if lam.size == 0 or np.any(lam < -1e-12):
        raise ContractError("coefficients must be nonnegative")
    total = lam.sum()
    if abs(total - 1.0) > 1e-6:
        raise ContractError(f"coefficients must sum to 1, got {total!r}")
    return float(1.0 / np.sum(lam * lam))


def decompose(tpsa: TpsaGrid, use_modulus: bool = True) -> SchmidtDecomposition:
    """SVD-based Schmidt decomposition of a normalized grid."""
    require_normalized(tpsa, "decompose")
    amp = np.abs(tpsa.amplitude) if use_modulus else tpsa.amplitude
    ds, di = tpsa.grid.step_signal, tpsa.grid.step_idler
    weighted = amp * np.sqrt(ds * di)
    u, s, vh = np.linalg.svd(weighted, full_matrices=False)
    lam = s * s
    signal_modes = u / np.sqrt(ds)
    idler_modes = vh.conj().T / np.sqrt(di)
    dec = SchmidtDecomposition(
        coefficients=lam,
        signal_modes=signal_modes,
        idler_modes=idler_modes,
        signal_axis=tpsa.grid.signal,
        idler_axis=tpsa.grid.idler,
        step_signal=ds,
        step_idler=di,
    )
    return _order_degenerate(dec)


def _order_degenerate(dec: SchmidtDecomposition, rtol: float = 1e-9) -> SchmidtDecomposition:
    """Stable ordering inside degenerate coefficient groups.

    numpy returns singular values sorted descending, but the vector order
    within a degenerate group is arbitrary; re-sort each group by the
    signal-axis centroid (ascending) so comb states with equal peaks come
    out deterministically.
    """
    lam = dec.coefficients
    order = np.arange(lam.size)
    start = 0
    changed = False
    for stop in range(1, lam.size + 1):
        boundary = stop == lam.size or (lam[start] - lam[stop]) > rtol * max(lam[start], COEFF_FLOOR)
        if not boundary:
            continue
        if stop - start > 1 and lam[start] > COEFF_FLOOR:
            group = order[start:stop]
            cents = [dec.mode_centroid(int(n)) for n in group]
            group = group[np.argsort(cents, kind="stable")]
            if not np.array_equal(group, order[start:stop]):
                order[start:stop] = group
                changed = True
        start = stop
    if not changed:
        return dec
    return SchmidtDecomposition(
        coefficients=lam[order],
        signal_modes=dec.signal_modes[:, order],
        idler_modes=dec.idler_modes[:, order],
        signal_axis=dec.signal_axis,
        idler_axis=dec.idler_axis,
        step_signal=dec.step_signal,
        step_idler=dec.step_idler,
    )


def kernel(tpsa: TpsaGrid, use_modulus: bool = True) -> np.ndarray:
    """Discretized one-photon kernel on the signal axis.

    K1[x, x'] = sum_y F(x, y) F*(x', y) dw_i; as an operator under the
    signal-axis measure its matrix is K1 * dw_s, which is what is returned
    (so its eigenvalues are directly the Schmidt coefficients and its trace
    is the total power).
    """
    require_normalized(tpsa, "kernel")
    amp = np.abs(tpsa.amplitude) if use_modulus else tpsa.amplitude
    k1 = amp @ amp.conj().T * tpsa.grid.step_idler
    return k1 * tpsa.grid.step_signal


def kernel_coefficients(tpsa: TpsaGrid, use_modulus: bool = True) -> np.ndarray:
    """Schmidt coefficients from the kernel eigendecomposition (descending)."""
    vals = np.linalg.eigvalsh(kernel(tpsa, use_modulus))
    return np.clip(vals[::-1], 0.0, None)


def mode_overlap(dec: SchmidtDecomposition, m: int, n: int,
                 which: str = "signal") -> float:
    """Pointwise support overlap int |f_m(w)| |f_n(w)| dw of two modes.

    Distinct from inner-product orthogonality: orthogonal modes can still
    share support, and only disjoint-support modes can be filtered
    losslessly by a spectral device.
    """
    modes, step = ((dec.signal_modes, dec.step_signal) if which == "signal"
                   else (dec.idler_modes, dec.step_idler))
    n_modes = modes.shape[1]
    if not (0 <= m < n_modes and 0 <= n < n_modes):
        raise IndexError(f"mode index out of range (have {n_modes} modes)")
    return float(np.sum(np.abs(modes[:, m]) * np.abs(modes[:, n])) * step)
