"""Real state vectors on a truncated Fock space and the bare mode operators.

Truncation bookkeeping is explicit: ``annihilate`` drops the top basis
vector and ``create`` appends one, so no amplitude is ever discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import PolyaParams, polya_pmf
from .errors import DomainError

__all__ = [
    "FockVector",
    "basis",
    "polya_state",
    "annihilate",
    "create",
    "number_apply",
    "annihilate_power",
    "apply_annihilation_power",
    "inner_product",
    "norm",
]


@dataclass(frozen=True)
class FockVector:
    """Amplitudes <n|psi> for n = 0..dim-1."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=float).reshape(-1)
        if amps.size == 0:
            amps = np.zeros(1)
        if not np.all(np.isfinite(amps)):
            raise DomainError("Fock amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return len(self.amps)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amps, dtype=dtype)

    def __len__(self) -> int:
        return self.dim

    def __mul__(self, scalar: float) -> "FockVector":
        return FockVector(self.amps * float(scalar))

    __rmul__ = __mul__

    def padded(self, dim: int) -> np.ndarray:
        """Amplitudes zero-padded (never truncated) to at least ``dim`` entries."""
        return np.pad(self.amps, (0, max(0, dim - self.dim)))


def _as_vector(v) -> FockVector:
    return v if isinstance(v, FockVector) else FockVector(v)


def basis(n: int, dim: int | None = None) -> FockVector:
    """Number state |n> in a space of dimension ``dim`` (default n+1)."""
    dim = n + 1 if dim is None else dim
    if not 0 <= n < dim:
        raise DomainError(f"|{n}> does not fit in dimension {dim}")
    amps = np.zeros(dim)
    amps[n] = 1.0
    return FockVector(amps)


def polya_state(params: PolyaParams) -> FockVector:
    """|M, gamma, eta>: positive square roots of the Pólya pmf on |0>..|M>."""
    return FockVector(np.sqrt(polya_pmf(params).probs))


def annihilate(v) -> FockVector:
    """a|v>: out[n] = sqrt(n+1) v[n+1]; dimension shrinks by one (minimum 1)."""
    amps = _as_vector(v).amps
    if len(amps) == 1:
        return FockVector(np.zeros(1))
    return FockVector(np.sqrt(np.arange(1, len(amps))) * amps[1:])


def create(v) -> FockVector:
    """a†|v>: out[n] = sqrt(n) v[n-1]; dimension grows by one."""
    amps = _as_vector(v).amps
    out = np.zeros(len(amps) + 1)
    out[1:] = np.sqrt(np.arange(1, len(amps) + 1)) * amps
    return FockVector(out)


def number_apply(v) -> FockVector:
    """N|v>: out[n] = n v[n]."""
    amps = _as_vector(v).amps
    return FockVector(np.arange(len(amps)) * amps)


def annihilate_power(v, k: int) -> FockVector:
    """a**k |v> by repeated single annihilations."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    out = _as_vector(v)
    for _ in range(k):
        out = annihilate(out)
    return out


def apply_annihilation_power(
    params: PolyaParams, k: int
) -> tuple[float, PolyaParams | None]:
    """Closed form of a**k on a Pólya state.

    Returns ``(scalar, mapped)`` with ``a**k |M,gamma,eta> = scalar * |mapped>``
    where ``mapped = (M-k, gamma/(k*gamma+1), (k*gamma+eta)/(k*gamma+1))`` and

        scalar**2 = prod_{i<k} (M-i) (i*gamma+eta) / (i*gamma+1).

    Each single annihilation contributes the current mean photon number
    (M-i) * eta_i with eta_i the i-times-mapped eta, hence ``i`` (not ``k``)
    inside the product. For ``k > M`` the result is ``(0.0, None)``.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    M, g, eta = params.M, params.gamma, params.eta
    if k > M:
        return 0.0, None
    if k == 0:
        return 1.0, params
    i = np.arange(k)
    with np.errstate(divide="ignore"):
        log_sq = np.log(M - i) + np.log(i * g + eta) - np.log1p(i * g)
    # eta = 0 makes the i = 0 factor an exact zero
    scalar = math.exp(0.5 * math.fsum(log_sq)) if eta > 0 else 0.0
    mapped = PolyaParams(M - k, g / (k * g + 1.0), min(1.0, (k * g + eta) / (k * g + 1.0)))
    return scalar, mapped


def inner_product(v, w) -> float:
    """Euclidean pairing over the common dimension (shorter vector zero-padded)."""
    v, w = _as_vector(v), _as_vector(w)
    d = min(v.dim, w.dim)
    return float(np.dot(v.amps[:d], w.amps[:d]))


def norm(v) -> float:
    return float(np.linalg.norm(_as_vector(v).amps))
