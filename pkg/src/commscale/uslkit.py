"""Universal Scalability Law, serial-fraction time models, M/M/1 response time.

The one-dimensional counterpart of the community model: speedup of N
cooperating workers under contention and coherency costs, the
sigma + pi/N + kappa*N completion-time family, its local power-law
slope, and the stability-gated queue response time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, QueueInstabilityError, UnboundedPeakError, UnsupportedConfigError

__all__ = [
    "UslParams",
    "UslFit",
    "SerialModel",
    "QueueParams",
    "usl_speedup",
    "usl_peak",
    "usl_fit",
    "serial_time",
    "effective_exponent",
    "response_time",
]


@dataclass(frozen=True)
class UslParams:
    """Contention and coherency coefficients of the scalability law.

    Negative contention (>= -1) encodes superlinear speedup as a
    parametric fit; coherency must be non-negative.
    """

    contention: float
    coherency: float = 0.0

    def __post_init__(self) -> None:
        if self.contention < -1:
            raise DomainError(f"contention must be >= -1, got {self.contention}")
        if self.coherency < 0:
            raise DomainError(f"coherency must be >= 0, got {self.coherency}")


def _denominator(N, p: UslParams):
    return 1.0 + p.contention * (N - 1.0) + p.coherency * N * (N - 1.0)


def usl_speedup(N: float, p: UslParams) -> float:
    """S(N) = N / (1 + contention*(N-1) + coherency*N*(N-1)); S(1) = 1 exactly."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    den = _denominator(N, p)
    if den <= 0:
        raise DomainError(f"speedup denominator is not positive at N={N} (contention too negative)")
    return N / den


def usl_peak(p: UslParams) -> float:
    """Concurrency level (a real >= 1) maximizing the speedup curve.

    d/dN [1/N + contention*(1-1/N) + coherency*(N-1)] = 0 gives
    N* = sqrt((1-contention)/coherency). Without a coherency cost and
    with contention below 1 the curve rises forever, which is an error;
    contention at or above 1 makes the curve non-increasing, peak at 1.
    """
    if p.coherency == 0:
        if p.contention < 1:
            raise UnboundedPeakError("speedup grows without bound when coherency = 0 and contention < 1")
        return 1.0
    if p.contention >= 1:
        return 1.0
    return max(1.0, math.sqrt((1.0 - p.contention) / p.coherency))


@dataclass(frozen=True)
class UslFit:
    """Fitted parameters plus the sum of squared speedup errors."""

    params: UslParams
    residual: float


_START = (0.1, 0.001)
_MULTISTART = [(a0, b0) for a0 in (-0.5, 0.05, 0.5) for b0 in (1e-6, 1e-3, 0.1)]


def usl_fit(data) -> UslFit:
    """Least-squares (contention, coherency) fit of measured speedups.

    Nonlinear least squares on the speedup values directly, which stays
    well-behaved when the data are superlinear: contention may go
    negative, coherency is clamped to >= 0. Deterministic: one fixed
    starting point, then a fixed 3x3 grid of restarts only if the first
    solution leaves a visible relative residual.
    """
    pts = [(float(n), float(s)) for n, s in data]
    if not pts:
        raise DomainError("no data points")
    if any(n < 1 for n, _ in pts):
        raise DomainError("N values must be >= 1")
    if any(s <= 0 for _, s in pts):
        raise DomainError("speedup values must be positive")
    if len({n for n, _ in pts}) < 3:
        raise DomainError("need at least 3 distinct N values to fit two parameters")
    N = np.array([n for n, _ in pts])
    S = np.array([s for _, s in pts])

    def residuals(theta):
        den = _denominator(N, UslParams(max(theta[0], -1.0), max(theta[1], 0.0)))
        den = np.where(den > 1e-12, den, 1e-12)
        return N / den - S

    def solve(x0):
        return least_squares(residuals, x0=x0, bounds=([-1.0, 0.0], [np.inf, np.inf]))

    best = solve(_START)
    scale = max(1.0, float(np.linalg.norm(S)))
    if math.sqrt(2.0 * best.cost) / scale > 1e-6:
        for x0 in _MULTISTART:
            candidate = solve(x0)
            if candidate.cost < best.cost:
                best = candidate
    params = UslParams(float(best.x[0]), float(best.x[1]))
    return UslFit(params, float(2.0 * best.cost))


@dataclass(frozen=True)
class SerialModel:
    """Completion time T(N) = sigma + pi_par/N + kappa*N.

    sigma is the serial floor (> 0), pi_par the parallelizable work,
    kappa the per-worker coherence cost, both >= 0.
    """

    sigma: float
    pi_par: float = 0.0
    kappa: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.pi_par < 0 or self.kappa < 0:
            raise DomainError("pi_par and kappa must be non-negative")


def serial_time(N: float, m: SerialModel) -> float:
    """T(N) = sigma + pi_par/N + kappa*N for N >= 1."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return m.sigma + m.pi_par / N + m.kappa * N


def effective_exponent(N: float, m: SerialModel) -> float:
    """Local power-law slope of T(N) in the kappa = 0 regime.

    With x = pi_par/(sigma*N), T(gamma*N)/T(N) is approximately
    gamma**(-delta_eff) where delta_eff = x/(1+x); the approximation
    tightens as x shrinks. Lies in [0, 1) and decreases in N. The
    kappa != 0 regime has no power-law form; compare serial_time ratios
    directly there.
    """
    if m.kappa != 0:
        raise UnsupportedConfigError("effective exponent is defined for kappa = 0 only")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    x = m.pi_par / (m.sigma * N)
    return x / (1.0 + x)


@dataclass(frozen=True)
class QueueParams:
    """Arrival rate lam and service rate mu of a single queue, both >= 0."""

    lam: float
    mu: float

    def __post_init__(self) -> None:
        if self.lam < 0 or self.mu < 0:
            raise DomainError("rates must be non-negative")


def response_time(q: QueueParams) -> float:
    """Steady-state response time 1/(mu - lam); only defined when lam < mu."""
    if q.lam >= q.mu:
        raise QueueInstabilityError(f"unstable queue: arrival rate {q.lam} >= service rate {q.mu}")
    return 1.0 / (q.mu - q.lam)
