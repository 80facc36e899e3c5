"""Brute-force reference values by explicit summation over all 2^N states.

Enumeration order is the integer bitmask 0 .. 2^N - 1 where bit k (zero-based)
belongs to site k+1 and a set bit means spin +1.  Boltzmann sums are carried
out in max-subtracted form so large beta*J*N does not overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .model import ModelParams, PhasePoint

DEFAULT_MAX_SITES = 20
# The subset expansion costs 4^N; it only exists to check the oracle itself.
EXPANSION_MAX_SITES = 12
_CHUNK_BITS = 16


class EnumerationRefused(ValueError):
    """Raised when a chain is too long to enumerate."""


@dataclass(frozen=True)
class OracleLimit:
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        if not 2 <= self.max_sites <= 30:
            raise ValueError(f"max_sites must be in [2, 30], got {self.max_sites}")

    def check(self, n: int) -> None:
        if n > self.max_sites:
            raise EnumerationRefused(
                f"N={n} exceeds the enumeration cap of {self.max_sites} sites"
            )


DEFAULT_LIMIT = OracleLimit()


def spin_table(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows of +-1 spins for bitmasks in [start, stop)."""
    stop = 1 << n if stop is None else stop
    masks = np.arange(start, stop, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def energies(spins: np.ndarray, J: float, B: float) -> np.ndarray:
    s = spins.astype(np.float64)
    bonds = np.sum(s * np.roll(s, -1, axis=-1), axis=-1)
    return -J * bonds + B * np.sum(s, axis=-1)


def _chunks(n: int) -> Iterator[tuple[int, int]]:
    total = 1 << n
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        yield start, min(start + step, total)


def log_partition_brute(params: ModelParams, limit: OracleLimit = DEFAULT_LIMIT) -> float:
    """log Z = log sum_i exp(-beta E_i), accumulated chunk by chunk."""
    limit.check(params.N)
    running_max = -np.inf
    running_sum = 0.0
    for start, stop in _chunks(params.N):
        a = -params.beta * energies(spin_table(params.N, start, stop), params.J, params.B)
        m = float(a.max())
        if m > running_max:
            running_sum *= np.exp(running_max - m)
            running_max = m
        running_sum += float(np.sum(np.exp(a - running_max)))
    return running_max + float(np.log(running_sum))


def boltzmann_probabilities(
    params: ModelParams, limit: OracleLimit = DEFAULT_LIMIT
) -> tuple[np.ndarray, np.ndarray]:
    """(spins, probabilities) for all 2^N states in bitmask order."""
    limit.check(params.N)
    spins = spin_table(params.N)
    a = -params.beta * energies(spins, params.J, params.B)
    a -= a.max()
    w = np.exp(a)
    return spins, w / w.sum()


def _normalize_sites(sites: Iterable[int], n: int) -> list[int]:
    sites = list(sites)
    if not sites:
        raise ValueError("site set must be non-empty")
    if len(set(sites)) != len(sites):
        raise ValueError(f"site indices must be distinct, got {sites}")
    for k in sites:
        if not 1 <= k <= n:
            raise ValueError(f"site index {k} outside 1..{n}")
    return sites


def correlator_brute(
    params: ModelParams, sites: Iterable[int], limit: OracleLimit = DEFAULT_LIMIT
) -> float:
    """<S_m S_n ... S_r> for 1-based site indices."""
    sites = _normalize_sites(sites, params.N)
    spins, p = boltzmann_probabilities(params, limit)
    product = np.prod(spins[:, [k - 1 for k in sites]], axis=1)
    return float(np.dot(p, product))


def _point_u(point: PhasePoint | np.ndarray, n: int) -> np.ndarray:
    if isinstance(point, PhasePoint):
        if len(point) != n:
            raise ValueError(f"phase point has {len(point)} sites, chain has {n}")
        return point.u
    u = np.asarray(point, dtype=float)
    if u.shape[-1] != n:
        raise ValueError(f"u array has {u.shape[-1]} sites, chain has {n}")
    return u


def husimi_brute(params: ModelParams, point: PhasePoint, limit: OracleLimit = DEFAULT_LIMIT) -> float:
    """<z| exp(-beta H) |z> / Z as a Boltzmann-weighted sum of overlap weights."""
    if len(point) != params.N:
        raise ValueError(f"phase point has {len(point)} sites, chain has {params.N}")
    spins, p = boltzmann_probabilities(params, limit)
    half = 0.5 * np.asarray(point.theta)
    up, down = np.sin(half) ** 2, np.cos(half) ** 2
    overlap = np.prod(np.where(spins == 1, up, down), axis=1)
    return float(np.dot(p, overlap))


def husimi_brute_u(params: ModelParams, u: np.ndarray, limit: OracleLimit = DEFAULT_LIMIT) -> np.ndarray:
    """Vectorized husimi_brute over u-points of shape (..., N).

    Uses sin^2(theta/2) = (1 - u)/2 and cos^2(theta/2) = (1 + u)/2.
    """
    u = _point_u(u, params.N)
    spins, p = boltzmann_probabilities(params, limit)
    return _weighted_overlaps(spins, p, u)


def _weighted_overlaps(spins: np.ndarray, p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """sum_states p(state) prod_k (1 - i_k u_k)/2, contracting one site at a time.

    Bit k of the state index is site k+1, so the lowest remaining bit is always
    the trailing axis after reshaping to (points, -1, 2).
    """
    n = spins.shape[1]
    flat = u.reshape(-1, n)
    w = np.broadcast_to(p, (flat.shape[0], p.size))
    for k in range(n):
        # bit value 0 is spin -1 (weight (1+u)/2), bit value 1 is spin +1
        site = np.stack([0.5 * (1.0 + flat[:, k]), 0.5 * (1.0 - flat[:, k])], axis=1)
        w = np.einsum("pmb,pb->pm", w.reshape(flat.shape[0], -1, 2), site)
    return w[:, 0].reshape(u.shape[:-1])


def all_correlators(params: ModelParams, limit: OracleLimit = DEFAULT_LIMIT) -> np.ndarray:
    """<prod_{k in S} S_k> for every subset S, indexed by subset bitmask.

    Entry 0 (empty subset) is 1.
    """
    n = params.N
    if n > EXPANSION_MAX_SITES:
        raise EnumerationRefused(
            f"N={n} exceeds the subset-expansion cap of {EXPANSION_MAX_SITES} sites"
        )
    _, p = boltzmann_probabilities(params, limit)
    states = np.arange(1 << n, dtype=np.int64)
    subsets = states
    # prod_{k in S} s_k = (-1)^{popcount(S & down(c))}, down(c) = ~c.
    down = ~states & ((1 << n) - 1)
    overlap = subsets[:, None] & down[None, :]
    parity = np.zeros(overlap.shape, dtype=np.int64)
    for k in range(n):
        parity ^= (overlap >> k) & 1
    signs = 1 - 2 * parity
    return signs @ p


def _subset_products(u: np.ndarray) -> np.ndarray:
    """prod_{k in S} u_k for every subset bitmask S; shape (..., 2^N)."""
    n = u.shape[-1]
    out = np.ones(u.shape[:-1] + (1,), dtype=float)
    for k in range(n):
        out = np.concatenate([out, out * u[..., k : k + 1]], axis=-1)
    return out


def husimi_expansion(
    params: ModelParams, point: PhasePoint | np.ndarray, limit: OracleLimit = DEFAULT_LIMIT
):
    """Husimi density from its correlator expansion.

    mu = 2^-N sum_S (-1)^|S| <prod_{k in S} S_k> prod_{k in S} u_k

    ``point`` may be a PhasePoint or an array of u values with trailing
    dimension N; an array input returns an array.
    """
    u = _point_u(point, params.N)
    corr = all_correlators(params, limit)
    return expansion_from_correlators(corr, u, params.N, scalar=isinstance(point, PhasePoint))


def expansion_from_correlators(corr: np.ndarray, u: np.ndarray, n: int, scalar: bool = False):
    """Evaluate the alternating subset sum for a given correlator table."""
    masks = np.arange(1 << n, dtype=np.int64)
    popcount = np.zeros_like(masks)
    for k in range(n):
        popcount += (masks >> k) & 1
    coeffs = np.where(popcount % 2 == 0, 1.0, -1.0) * corr
    value = _subset_products(np.asarray(u, dtype=float)) @ coeffs / float(1 << n)
    return float(value) if scalar else value


def husimi_density(params: ModelParams, limit: OracleLimit = DEFAULT_LIMIT):
    """The full N-site density as a quadrature-ready object (coordinates = sites 1..N)."""
    from .quadrature import FunctionDensity

    spins, p = boltzmann_probabilities(params, limit)
    return FunctionDensity(lambda u: _weighted_overlaps(spins, p, _point_u(u, params.N)), params.N)
