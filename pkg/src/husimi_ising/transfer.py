"""Transfer-matrix spectrum and closed-form observables for arbitrary N.

The 2x2 transfer matrix (rows/columns ordered |+>, |->)::

    T = [[exp(b(J-B)), exp(-bJ)],
         [exp(-bJ),    exp(b(J+B))]]

has eigenvalues

    lambda_pm = e^{bJ} cosh(bB) +- sqrt(e^{2bJ} sinh^2(bB) + e^{-2bJ})

and eigenvectors v+ = (sin w, cos w), v- = (-cos w, sin w).  Note the
discriminant: e^{2bJ} cosh^2(bB) - 2 sinh(2bJ) rewritten, not
e^{2bJ} cosh^2(bB) - 2 sinh(bJ).

Powers lambda^N are never formed.  Everything is expressed through
log(lambda_+) and the ratio r = lambda_-/lambda_+, with log|r| kept to full
relative precision so that 1 + r^N stays accurate when r is close to -1
(odd antiferromagnetic rings at low temperature).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams

_LOG2 = math.log(2.0)
_MAX_LOG = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class TransferMatrix:
    """Log-entries of the symmetric transfer matrix."""

    log_pp: float
    log_pm: float
    log_mm: float

    @property
    def representable(self) -> bool:
        return max(self.log_pp, self.log_pm, self.log_mm) < _MAX_LOG

    def as_array(self) -> np.ndarray:
        if not self.representable:
            raise OverflowError("transfer matrix entries exceed double range; use the log entries")
        pm = math.exp(self.log_pm)
        return np.array([[math.exp(self.log_pp), pm], [pm, math.exp(self.log_mm)]])


def build_transfer(params: ModelParams) -> TransferMatrix:
    b = params.beta
    return TransferMatrix(
        log_pp=b * (params.J - params.B),
        log_pm=-b * params.J,
        log_mm=b * (params.J + params.B),
    )


def _log_cosh(h: float) -> float:
    a = abs(h)
    return a + math.log1p(math.exp(-2.0 * a)) - _LOG2


def _log_abs_sinh(h: float) -> float:
    if h == 0.0:
        return -math.inf
    a = abs(h)
    return a + math.log(-math.expm1(-2.0 * a)) - _LOG2


def _log_abs_one_minus_exp(y: float) -> float:
    """log|1 - e^y| without overflow for large positive y."""
    if y == 0.0:
        return -math.inf
    if y < 0.0:
        return math.log(-math.expm1(y))
    return y + math.log(-math.expm1(-y))


@dataclass(frozen=True)
class SpectralData:
    """Spectrum of T in overflow-free form.

    ``ratio`` is r = lambda_-/lambda_+; ``log_abs_ratio`` and ``ratio_sign``
    carry the same number with log|r| accurate even when |r| is near 1.
    """

    log_lambda_plus: float
    ratio: float
    log_abs_ratio: float
    ratio_sign: int
    cos2w: float
    sin2w: float
    omega: float

    @property
    def lambda_plus(self) -> float:
        return math.exp(self.log_lambda_plus)

    @property
    def lambda_minus(self) -> float:
        return self.ratio * self.lambda_plus

    def power(self, n: int) -> float:
        """r^n with r^0 = 1 (also when r = 0)."""
        if n == 0:
            return 1.0
        if self.ratio_sign == 0:
            return 0.0
        sign = self.ratio_sign if n % 2 else 1
        return sign * math.exp(n * self.log_abs_ratio)

    def power_sum(self, a: int, b: int, sign: int = 1) -> float:
        """r^a + sign * r^b, free of cancellation when the terms nearly cancel."""
        ta = self.power(a)
        tb = sign * self.power(b)
        if ta * tb >= 0.0 or a == b:
            return ta + tb
        lo, hi = (a, b) if a < b else (b, a)
        t_lo = ta if a < b else tb
        magnitude = abs(t_lo) * -math.expm1((hi - lo) * self.log_abs_ratio)
        return math.copysign(magnitude, t_lo)

    def log1p_power(self, n: int) -> float:
        """log(1 + r^n)."""
        rn = self.power(n)
        if rn < -0.5:
            return math.log(self.power_sum(0, n))
        return math.log1p(rn)


def spectral(params: ModelParams) -> SpectralData:
    x = params.beta * params.J
    h = params.beta * params.B
    log_cosh = _log_cosh(h)
    log_sinh = _log_abs_sinh(h)
    # g = sqrt(sinh^2 h + e^{-4x}); lambda_pm = e^x (cosh h +- g)
    log_g = 0.5 * float(np.logaddexp(2.0 * log_sinh, -4.0 * x))
    log_sum = float(np.logaddexp(log_cosh, log_g))

    cos2w = math.copysign(math.exp(log_sinh - log_g), h) if h != 0.0 else 0.0
    sin2w = math.exp(-2.0 * x - log_g)
    omega = 0.5 * math.atan2(sin2w, cos2w)

    # lambda_-/lambda_+ = (cosh^2 - g^2) / (cosh + g)^2 = (1 - e^{-4x}) / (cosh + g)^2
    if x == 0.0:
        sign, log_abs_r = 0, -math.inf
    else:
        sign = 1 if x > 0 else -1
        log_direct = _log_abs_one_minus_exp(-4.0 * x) - 2.0 * log_sum
        if log_direct < -_LOG2:
            log_abs_r = log_direct
        else:
            # 1 - |r| = 2 min(cosh, g) / (cosh + g)
            gap = math.exp(_LOG2 + min(log_cosh, log_g) - log_sum)
            log_abs_r = math.log1p(-gap)
    ratio = sign * math.exp(log_abs_r) if sign else 0.0

    return SpectralData(
        log_lambda_plus=x + log_sum,
        ratio=ratio,
        log_abs_ratio=log_abs_r,
        ratio_sign=sign,
        cos2w=cos2w,
        sin2w=sin2w,
        omega=omega,
    )


def log_partition(params: ModelParams) -> float:
    """log tr(T^N) = N log lambda_+ + log(1 + r^N)."""
    sp = spectral(params)
    return params.N * sp.log_lambda_plus + sp.log1p_power(params.N)


def magnetization(params: ModelParams) -> float:
    """<S_z> = cos 2w (r^N - 1) / (r^N + 1); tends to -sgn(B) as beta grows."""
    sp = spectral(params)
    n = params.N
    return sp.cos2w * sp.power_sum(n, 0, -1) / sp.power_sum(0, n)


def _check_pair(i: int, j: int, n: int) -> None:
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= N, got i={i}, j={j}, N={n}")


def two_point(params: ModelParams, i: int, j: int) -> float:
    """<S_i S_j> = cos^2 2w + sin^2 2w (r^d + r^{N-d}) / (1 + r^N), d = j - i."""
    _check_pair(i, j, params.N)
    sp = spectral(params)
    n, d = params.N, j - i
    return sp.cos2w**2 + sp.sin2w**2 * sp.power_sum(d, n - d) / sp.power_sum(0, n)


def sigma_z_rotated(sp: SpectralData) -> np.ndarray:
    """sigma_z written in the (v+, v-) eigenbasis of T."""
    c, s = sp.cos2w, sp.sin2w
    return np.array([[-c, -s], [-s, c]])


def eigenvectors(sp: SpectralData) -> np.ndarray:
    """Columns v+ = (sin w, cos w) and v- = (-cos w, sin w)."""
    w = sp.omega
    return np.array([[math.sin(w), -math.cos(w)], [math.cos(w), math.sin(w)]])
