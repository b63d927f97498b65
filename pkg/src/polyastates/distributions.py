"""Pólya, binomial and negative-binomial photon-number distributions.

Everything is evaluated in log space. The Pólya weight is a ratio of
rising products

    P_n = C(M, n) * prod_{k<n}(eta + k*gamma) * prod_{k<M-n}(eta_bar + k*gamma)
          / prod_{1<=k<M}(1 + k*gamma)

and the products (binomial coefficient included) are accumulated as
cumulative sums of logarithms, so a single pass over ``k`` yields the
whole pmf in O(M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

__all__ = [
    "PolyaParams",
    "NegBinParams",
    "Pmf",
    "polya_log_pmf",
    "polya_log_pmf_vector",
    "polya_pmf",
    "binomial_pmf",
    "binomial_pmf_vector",
    "negative_binomial_pmf",
    "negative_binomial_pmf_vector",
    "total_variation",
]


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PolyaParams:
    """Parameter triple (M, gamma, eta) of a Pólya state.

    The domain is closed: ``gamma = 0`` is the binomial case and
    ``eta`` in {0, 1} gives point masses. ``M = 0`` is admitted as the
    vacuum, which is where ``a**M`` maps every state.
    """

    M: int
    gamma: float
    eta: float

    def __post_init__(self):
        if isinstance(self.M, bool) or int(self.M) != self.M:
            raise DomainError(f"M must be an integer, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "gamma", _finite("gamma", self.gamma))
        object.__setattr__(self, "eta", _finite("eta", self.eta))
        if self.M < 0:
            raise DomainError(f"M must be >= 0, got {self.M}")
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {self.eta}")

    @property
    def eta_bar(self) -> float:
        return 1.0 - self.eta


@dataclass(frozen=True)
class NegBinParams:
    """Negative binomial law C(r+n-1, n) (1-p)**r p**n.

    In the NBS limit ``r = lambda*rho`` and ``p = 1/(1+rho)``.
    """

    r: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "r", _finite("r", self.r))
        object.__setattr__(self, "p", _finite("p", self.p))
        if self.r <= 0:
            raise DomainError(f"r must be > 0, got {self.r}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")

    @classmethod
    def from_lambda_rho(cls, lam: float, rho: float) -> "NegBinParams":
        if lam <= 0 or rho <= 0:
            raise DomainError("lambda and rho must both be > 0")
        return cls(r=lam * rho, p=1.0 / (1.0 + rho))


@dataclass(frozen=True)
class Pmf:
    """Probabilities over photon number n = 0..support_max (not renormalized)."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def support_max(self) -> int:
        return len(self.probs) - 1

    def __len__(self) -> int:
        return len(self.probs)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def total(self) -> float:
        return math.fsum(self.probs)


# Cumulative log sums run in extended precision where the platform has it;
# in float64 the rounding drift reaches ~1e-10 by M = 10**4.
_ACC = np.longdouble


def _log_rising(x: float, step: float, count: int) -> np.ndarray:
    """Return L with L[j] = sum_{k<j} log(x + k*step) for j = 0..count.

    A zero factor turns every later entry into exactly -inf.
    """
    out = np.zeros(count + 1, dtype=_ACC)
    if count == 0:
        return out
    if step == 0.0:
        # identical factors: no cumulative rounding
        if x == 0.0:
            out[1:] = -np.inf
        else:
            out[1:] = np.arange(1, count + 1, dtype=_ACC) * np.log(_ACC(x))
        return out
    factors = _ACC(x) + _ACC(step) * np.arange(count, dtype=_ACC)
    with np.errstate(divide="ignore"):
        out[1:] = np.cumsum(np.log(factors))
    return out


def _log_binom(M: int) -> np.ndarray:
    """log C(M, n) for n = 0..M as a cumulative sum of log((M-k)/(k+1))."""
    k = np.arange(M, dtype=_ACC)
    out = np.zeros(M + 1, dtype=_ACC)
    out[1:] = np.cumsum(np.log(M - k) - np.log(k + 1))
    return out


def polya_log_pmf_vector(params: PolyaParams) -> np.ndarray:
    """Natural-log Pólya probabilities for n = 0..M."""
    M, g = params.M, params.gamma
    n = np.arange(M + 1)
    up = _log_rising(params.eta, g, M)
    down = _log_rising(params.eta_bar, g, M)
    norm = _log_rising(1.0 + g, g, M - 1)[-1] if M >= 1 else 0.0
    return (_log_binom(M) + up[n] + down[M - n] - norm).astype(float)


def polya_log_pmf(params: PolyaParams, n: int) -> float:
    """Log of the Pólya probability of ``n`` photons; ``-inf`` for exact zeros."""
    if not 0 <= n <= params.M:
        raise DomainError(f"n must lie in [0, {params.M}], got {n}")
    M, g, eta, eta_bar = params.M, params.gamma, params.eta, params.eta_bar
    if (n > 0 and eta == 0.0) or (n < M and eta_bar == 0.0):
        # the leading factor eta (or eta_bar) is an exact zero
        return -math.inf
    if g == 0.0:
        up = n * math.log(eta) if n else 0.0
        down = (M - n) * math.log(eta_bar) if M - n else 0.0
        norm = 0.0
    else:
        up = math.fsum(math.log(eta + k * g) for k in range(n))
        down = math.fsum(math.log(eta_bar + k * g) for k in range(M - n))
        norm = math.fsum(math.log1p(k * g) for k in range(1, M))
    log_c = math.lgamma(M + 1) - math.lgamma(n + 1) - math.lgamma(M - n + 1)
    return log_c + up + down - norm


def polya_pmf(params: PolyaParams) -> Pmf:
    """The Pólya pmf over n = 0..M, exponentiated from log space.

    The result is deliberately not renormalized: its sum defect measures
    the accuracy of the factor evaluation.
    """
    return Pmf(np.exp(polya_log_pmf_vector(params)))


def binomial_pmf_vector(M: int, eta: float) -> np.ndarray:
    if M < 0 or not 0.0 <= eta <= 1.0:
        raise DomainError(f"invalid binomial parameters M={M}, eta={eta}")
    n = np.arange(M + 1)
    up = _log_rising(eta, 0.0, M)
    down = _log_rising(1.0 - eta, 0.0, M)
    return np.exp((_log_binom(M) + up[n] + down[M - n]).astype(float))


def binomial_pmf(M: int, eta: float, n: int) -> float:
    """C(M, n) eta**n (1-eta)**(M-n), evaluated in log space."""
    if not 0 <= n <= M:
        raise DomainError(f"n must lie in [0, {M}], got {n}")
    return float(binomial_pmf_vector(M, eta)[n])


def negative_binomial_pmf_vector(nb: NegBinParams, n_max: int) -> np.ndarray:
    """Negative-binomial probabilities for n = 0..n_max."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    n = np.arange(n_max + 1, dtype=float)
    log_c = gammaln(nb.r + n) - gammaln(n + 1.0) - gammaln(nb.r)
    return np.exp(log_c + nb.r * math.log1p(-nb.p) + n * math.log(nb.p))


def negative_binomial_pmf(nb: NegBinParams, n: int) -> float:
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return float(negative_binomial_pmf_vector(nb, n)[n])


def total_variation(p, q) -> float:
    """Half the L1 distance between two pmf-like vectors (shorter one zero-padded)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    size = max(len(p), len(q))
    p = np.pad(p, (0, size - len(p)))
    q = np.pad(q, (0, size - len(q)))
    return 0.5 * math.fsum(np.abs(p - q))
