"""combspdc: comb-pumped SPDC spectral engineering and analysis.

Core layers (importable directly):

* :mod:`combspdc.materials`, :mod:`combspdc.dispersion` -- Sellmeier data,
  wavevectors, group velocities, phase matching, ridge tilt;
* :mod:`combspdc.pump` -- Gaussian, Fabry-Perot and Gaussian-comb pump
  spectral amplitudes;
* :mod:`combspdc.tpsa` -- two-photon spectral amplitude grids, peak
  isolation, marginals, tilt estimation;
* :mod:`combspdc.schmidt` -- Schmidt decomposition, Schmidt number,
  kernel cross-check, mode overlaps;
* :mod:`combspdc.gaussian_model` -- closed-form double-Gaussian peak
  model, alignment and separation conditions;
* :mod:`combspdc.measurement` -- dispersive-fiber arrival-time simulation;
* :mod:`combspdc.pipeline` -- config-driven orchestration;
* :mod:`combspdc.service` -- FastAPI application wrapping the pipeline.
"""

__version__ = "0.1.0"

from .config import DesignSpace, RunConfig  # noqa: F401
from .dispersion import (CrystalSpec, GroupProperties, delta_kz,  # noqa: F401
                         group_properties, group_velocity, gvd,
                         phase_matching_angle, tpsa_tilt, wavevector)
from .gaussian_model import (DoubleGaussianPeak, MultiPeakModel,  # noqa: F401
                             alignment_residual, disjoint_sum_schmidt,
                             peak_amplitude, separation_margins,
                             sigma_c_from_crystal)
from .materials import SellmeierData, get_material, refractive_index  # noqa: F401
from .measurement import (ArrivalHistogram, DetectorChain, FiberSpec,  # noqa: F401
                          blur_to_resolution, simulate_histogram, time_map,
                          time_to_wavelength)
from .pump import (FabryPerot, GaussianComb, GaussianPulse,  # noqa: F401
                   ShapedPump, shaped_pump)
from .schmidt import (SchmidtDecomposition, decompose, kernel,  # noqa: F401
                      kernel_coefficients, mode_overlap, schmidt_number)
from .tpsa import (FrequencyGrid, TpsaGrid, build_tpsa,  # noqa: F401
                   isolate_comb_peak, isolate_peak, marginals, normalize,
                   tilt_estimate)
