"""Exact thermodynamics and Husimi distributions of the periodic Ising chain."""

from .husimi import (
    JointDensity,
    MarginalDensity,
    joint,
    joint_thermo,
    one_point,
    one_point_thermo,
)
from .model import (
    ModelParams,
    PhasePoint,
    SpinConfiguration,
    energy,
    overlap_amplitude,
    overlap_weight,
)
from .oracle import (
    EnumerationRefused,
    OracleLimit,
    correlator_brute,
    husimi_brute,
    husimi_expansion,
    log_partition_brute,
)
from .quadrature import QuadratureRule, extract_correlator, gauss_legendre
from .transfer import (
    SpectralData,
    TransferMatrix,
    build_transfer,
    log_partition,
    magnetization,
    sigma_z_rotated,
    spectral,
    two_point,
)

__version__ = "0.1.0"
