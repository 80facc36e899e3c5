"""Gauss-Legendre rules and moment extraction from Husimi densities.

Each u_k ranges over [-1, 1] with plain Lebesgue measure, under which every
Husimi density here has unit mass.  Because a single site contributes
integral u (1 - i u)/2 du = -i/3, an m-point correlator is recovered as

    <S_r1 ... S_rm> = (-3)^m  integral mu(u) u_r1 ... u_rm  prod_k du_k
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_NODES = 64
_NEWTON_TOL = 1e-15


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        x = np.asarray(self.nodes)
        return float(np.dot(np.asarray(self.weights), f(x)))


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1], exact to degree 2n - 1."""
    if not 1 <= n <= MAX_NODES:
        raise ValueError(f"node count must be in [1, {MAX_NODES}], got {n}")
    if n == 1:
        return QuadratureRule((0.0,), (2.0,))
    if n == 2:
        a = 0.5773502691896257  # 1/sqrt(3), correctly rounded
        return QuadratureRule((-a, a), (1.0, 1.0))

    k = np.arange(1, n + 1)
    # Tricomi initial guess, roots in decreasing order.
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < _NEWTON_TOL:
            break
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return QuadratureRule(tuple(x[order]), tuple(w[order]))


def product_grid(rule: QuadratureRule, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product nodes (P, dim) and weights (P,) on [-1, 1]^dim."""
    nodes = np.asarray(rule.nodes)
    weights = np.asarray(rule.weights)
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    idx = np.array(list(itertools.product(range(len(nodes)), repeat=dim)))
    return nodes[idx], np.prod(weights[idx], axis=1)


class FunctionDensity:
    """Wrap a vectorized callable f(points of shape (P, ndim)) as a density.

    ``sites`` labels the coordinates (default 1..ndim).
    """

    def __init__(self, func, ndim: int, sites: Sequence[int] | None = None):
        self.func = func
        self.ndim = ndim
        self.sites = tuple(range(1, ndim + 1)) if sites is None else tuple(sites)
        if len(self.sites) != ndim:
            raise ValueError("need one site label per coordinate")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(np.asarray(points, dtype=float)), dtype=float)


def _coordinates(density, sites: Sequence[int]) -> list[int]:
    sites = list(sites)
    labels = getattr(density, "sites", None)
    if labels is not None:
        missing = [s for s in sites if s not in labels]
        if missing or len(set(sites)) != len(sites):
            raise ValueError(f"sites {sites} do not match density coordinates {labels}")
        return [labels.index(s) for s in sites]
    if len(sites) != density.ndim:
        raise ValueError(
            f"density has {density.ndim} coordinates but {len(sites)} sites were given"
        )
    return list(range(density.ndim))


def moment(density, sites: Sequence[int], rule: QuadratureRule) -> float:
    """integral mu(u) prod_{k in sites} u_k over [-1, 1]^ndim."""
    coords = _coordinates(density, sites)
    points, weights = product_grid(rule, density.ndim)
    values = density.evaluate(points) * np.prod(points[:, coords], axis=1)
    return float(np.dot(weights, values))


def extract_correlator(density, sites: Sequence[int], rule: QuadratureRule | None = None) -> float:
    """(-3)^m times the u-moment of the listed sites."""
    rule = gauss_legendre(2) if rule is None else rule
    if len(rule) < 2:
        raise ValueError("need at least two nodes to integrate u * mu(u) exactly")
    m = len(list(sites))
    return (-3.0) ** m * moment(density, sites, rule)


def marginal(density, keep: Sequence[int], rule: QuadratureRule | None = None):
    """Integrate out every coordinate not in ``keep``; returns f(points (P, len(keep))).

    ``keep`` holds site labels, or 1-based coordinate positions for unlabelled densities.
    """
    rule = gauss_legendre(2) if rule is None else rule
    if getattr(density, "sites", None) is not None:
        coords = _coordinates(density, keep)
    else:
        coords = [k - 1 for k in keep]
        if any(not 0 <= c < density.ndim for c in coords):
            raise ValueError(f"positions {list(keep)} outside 1..{density.ndim}")
    rest = [c for c in range(density.ndim) if c not in coords]
    grid, weights = product_grid(rule, len(rest))

    def f(points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        full = np.empty((points.shape[0], grid.shape[0], density.ndim))
        full[:, :, coords] = points[:, None, :]
        full[:, :, rest] = grid[None, :, :]
        vals = density.evaluate(full.reshape(-1, density.ndim)).reshape(full.shape[:2])
        return vals @ weights

    return f
