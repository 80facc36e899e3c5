"""Domain types for the periodic Ising chain in a longitudinal field.

Hamiltonian (periodic, site N+1 identified with site 1)::

    H = -J sum_k S_k S_{k+1} + B sum_k S_k

Spin eigenvalues are taken as i_k = +1 / -1 (not +-1/2).  Every closed form
in this package is written in that convention, so a positive field B favours
spin -1.

Spin-1/2 coherent states are labelled by (theta, phi) per site::

    |z> = sin(theta/2) exp(-i phi) |+> + cos(theta/2) |->

so theta = 0 is the pure |-> state.  Distributions are parameterized by
u = cos(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Couplings, inverse temperature and ring length."""

    J: float
    B: float
    beta: float
    N: int

    def __post_init__(self):
        for name in ("J", "B", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ValueError(f"N must be an integer, got {self.N!r}")
        if self.N < 2:
            # N = 1 would couple the single site to itself.
            raise ValueError(f"N must be >= 2 for a periodic ring, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    def replace(self, **changes) -> ModelParams:
        fields = {"J": self.J, "B": self.B, "beta": self.beta, "N": self.N}
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class SpinConfiguration:
    """A basis state |i_1 ... i_N> given by its +-1 labels."""

    spins: tuple[int, ...]

    def __init__(self, spins: Sequence[int]):
        values = tuple(int(s) for s in spins)
        if any(s not in (1, -1) for s in values):
            raise ValueError(f"spins must be +1 or -1, got {list(spins)!r}")
        object.__setattr__(self, "spins", values)

    def __len__(self) -> int:
        return len(self.spins)

    def as_array(self) -> np.ndarray:
        return np.array(self.spins, dtype=np.int8)

    def flipped(self) -> SpinConfiguration:
        return SpinConfiguration([-s for s in self.spins])

    def rolled(self, shift: int) -> SpinConfiguration:
        n = len(self.spins)
        shift %= n
        return SpinConfiguration(self.spins[shift:] + self.spins[:shift])


@dataclass(frozen=True)
class PhasePoint:
    """Coherent-state angles (theta_k, phi_k) for every site."""

    theta: tuple[float, ...]
    phi: tuple[float, ...]

    def __init__(self, theta: Sequence[float], phi: Sequence[float] | None = None):
        theta = tuple(float(t) for t in theta)
        phi = tuple(0.0 for _ in theta) if phi is None else tuple(float(p) for p in phi)
        if len(theta) != len(phi):
            raise ValueError("theta and phi must have the same length")
        if any(not (0.0 <= t <= math.pi) for t in theta):
            raise ValueError("each theta must lie in [0, pi]")
        if any(not (0.0 <= p < 2 * math.pi) for p in phi):
            raise ValueError("each phi must lie in [0, 2 pi)")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_u(cls, u: Sequence[float], phi: Sequence[float] | None = None) -> PhasePoint:
        u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
        return cls(np.arccos(u), phi)

    def __len__(self) -> int:
        return len(self.theta)

    @property
    def u(self) -> np.ndarray:
        return np.cos(np.asarray(self.theta))

    def with_phi(self, phi: Sequence[float]) -> PhasePoint:
        return PhasePoint(self.theta, phi)


def _check_lengths(n_config: int, n_other: int, what: str) -> None:
    if n_config != n_other:
        raise ValueError(f"configuration has {n_config} sites but {what} has {n_other}")


def energy(config: SpinConfiguration, params: ModelParams) -> float:
    """Eigenvalue E = -J sum i_k i_{k+1} + B sum i_k of a basis state."""
    _check_lengths(len(config), params.N, "params")
    s = config.as_array().astype(float)
    bonds = float(np.dot(s, np.roll(s, -1)))
    return -params.J * bonds + params.B * float(s.sum())


def site_weights(point: PhasePoint) -> tuple[np.ndarray, np.ndarray]:
    """Per-site |<z_k|+>|^2 and |<z_k|->|^2, i.e. sin^2(theta/2), cos^2(theta/2)."""
    half = 0.5 * np.asarray(point.theta)
    return np.sin(half) ** 2, np.cos(half) ** 2


def overlap_weight(point: PhasePoint, config: SpinConfiguration) -> float:
    """|<z|i>|^2; does not depend on any phi_k."""
    _check_lengths(len(config), len(point), "phase point")
    up, down = site_weights(point)
    s = config.as_array()
    return float(np.prod(np.where(s == 1, up, down)))


def overlap_amplitude(point: PhasePoint, config: SpinConfiguration) -> complex:
    """<z|i> as a product of per-site coherent-state components."""
    _check_lengths(len(config), len(point), "phase point")
    half = 0.5 * np.asarray(point.theta)
    phi = np.asarray(point.phi)
    s = config.as_array()
    factors = np.where(s == 1, np.sin(half) * np.exp(-1j * phi), np.cos(half) + 0j)
    return complex(np.prod(factors))
