"""Closed-form one-site and two-site Husimi marginals.

Both are multilinear in u = cos(theta)::

    mu(u)        = (1 + slope * u) / 2
    mu(u_i, u_j) = (1 + slope * (u_i + u_j) + pair_coeff * u_i * u_j) / 4

with slope = -<S_z> and pair_coeff = <S_i S_j>.  For B > 0 the slope is
positive (magnetization is negative), so the density peaks at u = +1, the
theta = 0 state |->.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transfer
from .model import ModelParams


@dataclass(frozen=True)
class MarginalDensity:
    slope: float

    ndim = 1

    def __call__(self, u):
        return 0.5 * (1.0 + self.slope * np.asarray(u, dtype=float))

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 1)
        return self(points[:, 0])

    @property
    def is_nonnegative(self) -> bool:
        return abs(self.slope) <= 1.0


@dataclass(frozen=True)
class JointDensity:
    slope: float
    pair_coeff: float
    sites: tuple[int, int] | None = None

    ndim = 2

    def __call__(self, ui, uj):
        ui = np.asarray(ui, dtype=float)
        uj = np.asarray(uj, dtype=float)
        return 0.25 * (1.0 + self.slope * (ui + uj) + self.pair_coeff * ui * uj)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        return self(points[:, 0], points[:, 1])

    def corners(self) -> np.ndarray:
        s = np.array([-1.0, 1.0])
        return self(s[:, None], s[None, :])

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.corners() >= 0.0))


def one_point(params: ModelParams) -> MarginalDensity:
    return MarginalDensity(slope=-transfer.magnetization(params))


def joint(params: ModelParams, i: int, j: int) -> JointDensity:
    return JointDensity(
        slope=-transfer.magnetization(params),
        pair_coeff=transfer.two_point(params, i, j),
        sites=(i, j),
    )


def one_point_thermo(params: ModelParams) -> MarginalDensity:
    """N -> infinity limit; params.N is ignored."""
    return MarginalDensity(slope=transfer.spectral(params).cos2w)


def joint_thermo(params: ModelParams, d: int) -> JointDensity:
    """N -> infinity limit at separation d; params.N is ignored."""
    if d < 1:
        raise ValueError(f"distance must be >= 1, got {d}")
    sp = transfer.spectral(params)
    return JointDensity(
        slope=sp.cos2w,
        pair_coeff=sp.cos2w**2 + sp.power(d) * sp.sin2w**2,
    )
