"""Liouvillian spectra, decoherence-free subspaces and engineered oscillatory modes."""

from .errors import (
    ConditionFailed,
    Defective,
    DimensionMismatch,
    InvalidModel,
    InvalidState,
    LindspectError,
    NonConvergence,
    NoSteadyMode,
    NotPSD,
    NotStructured,
    NumericalError,
    StepTooLarge,
)
from .kernels import BACKEND
from .model import DensityMatrix, JumpChannel, LindbladModel, dissipator, fidelity, master_rhs
from .spectral import (
    ModeClass,
    Spectrum,
    build_superoperator,
    classify,
    evolve_expansion,
    evolve_rk4,
    spectrum,
)
from .structure import (
    BlockPartition,
    Condition,
    check_strong,
    check_weak,
    construct_modes,
    discover_partition,
    dfs_modes,
    dissipator_residual,
    find_dfs,
    solve_rstar,
    verify_block_form,
)
from . import zoo

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
