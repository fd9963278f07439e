"""Single-photon absorption by a trapped, moving two-level atom."""

from ._backend import BACKEND
from .absorption import (
    ExcitationResult,
    a_coeff,
    a_instantaneous,
    optimal_squeeze,
    p_ideal,
    p_squeezed_aniso,
    p_squeezed_iso,
    p_trace,
    squeezed_ratio_strong,
    strong_ratio,
    strong_ratio_energy_limit,
    weak_ratio_gaussian,
)
from .dynamics import (
    CoMState,
    ModulationSpec,
    TransferMatrix,
    floquet_classify,
    free_moment,
    mathieu_transfer,
    modulated_variance,
    squeeze_approx,
    squeeze_from_transfer,
    thermal_energy,
)
from .physcore import (
    AtomSpec,
    PulseSpec,
    TrapSpec,
    doppler_ratio,
    effective_lamb_dicke,
    ground_extent,
    spontaneous_rate,
)

__version__ = "0.1.0"
