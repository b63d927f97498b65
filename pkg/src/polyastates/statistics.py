"""Photon statistics and quadrature squeezing of Pólya states.

Every quantity comes in two flavours: the closed forms (``*_closed``) and
an independent brute-force evaluation on the Fock vector (``*_brute``).

Quadratures are x = (a† + a)/sqrt(2) and p = i(a† - a)/sqrt(2). For real
amplitudes <p> = 0 and

    var_x = 1/2 + <N> + <a²> - 2<a>²,    var_p = 1/2 + <N> - <a²>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import PolyaParams, polya_pmf
from .fock import annihilate, apply_annihilation_power, inner_product, polya_state

__all__ = [
    "CLOSED_FORM",
    "BRUTE_FORCE",
    "MomentReport",
    "moments_closed",
    "moments_brute",
    "q_factor",
    "q_line",
    "q_zero_crossing",
    "QuadratureReport",
    "quadrature_closed",
    "quadrature_brute",
    "SqueezingScan",
    "squeezing_scan",
]

CLOSED_FORM = "closed_form"
BRUTE_FORCE = "brute_force"


@dataclass(frozen=True)
class MomentReport:
    mean_n: float
    mean_n2: float
    var_n: float
    q_factor: float
    source: str


def q_factor(params: PolyaParams) -> float:
    """Mandel Q, linear in eta: ((M-1)gamma - eta(M gamma + 1)) / (1 + gamma)."""
    M, g, eta = params.M, params.gamma, params.eta
    return ((M - 1) * g - eta * (M * g + 1.0)) / (1.0 + g)


def moments_closed(params: PolyaParams) -> MomentReport:
    """Closed-form moments.

    The variance is M eta (M gamma + 1)(1 - eta)/(1 + gamma), the value
    implied by <N> and <N²>. Q is the straight line in eta, which also
    serves as its continuous extension to <N> = 0.
    """
    M, g, eta = params.M, params.gamma, params.eta
    mean = M * eta
    mean2 = mean + mean * (M - 1) * (eta + g) / (1.0 + g)
    var = mean * (M * g + 1.0) * (1.0 - eta) / (1.0 + g)
    return MomentReport(mean, mean2, var, q_factor(params), CLOSED_FORM)


def moments_brute(params: PolyaParams) -> MomentReport:
    """Moments by direct summation over the pmf.

    Q is reported as NaN when <N> = 0, where the ratio is undefined.
    """
    probs = polya_pmf(params).probs
    n = np.arange(len(probs), dtype=float)
    mean = math.fsum(n * probs)
    mean2 = math.fsum(n * n * probs)
    var = math.fsum((n - mean) ** 2 * probs)
    q = (var - mean) / mean if mean > 0 else math.nan
    return MomentReport(mean, mean2, var, q, BRUTE_FORCE)


def q_line(M: int, gamma: float, etas) -> np.ndarray:
    """Q at each eta for fixed (M, gamma)."""
    return np.array([q_factor(PolyaParams(M, gamma, float(e))) for e in etas])


def q_zero_crossing(M: int, gamma: float) -> float:
    """The eta at which the field is exactly Poissonian: (M-1)gamma/(M gamma+1)."""
    return (M - 1) * gamma / (M * gamma + 1.0)


@dataclass(frozen=True)
class QuadratureReport:
    var_x: float
    var_p: float
    source: str

    @property
    def product(self) -> float:
        return self.var_x * self.var_p

    @property
    def squeezed_x(self) -> bool:
        return self.var_x < 0.5

    @property
    def squeezed_p(self) -> bool:
        return self.var_p < 0.5


def _overlap_sum(params: PolyaParams, k: int) -> float:
    """sum_n sqrt(P_n^M(gamma, eta) P_n^{M-k}(mapped by a**k))."""
    _, mapped = apply_annihilation_power(params, k)
    if mapped is None:
        return 0.0
    p = polya_pmf(params).probs[: mapped.M + 1]
    q = polya_pmf(mapped).probs
    return math.fsum(np.sqrt(p * q))


def quadrature_closed(params: PolyaParams) -> QuadratureReport:
    """Quadrature variances from the overlap-sum closed forms.

    <a>  = sqrt(M eta) S1,
    <a²> = sqrt(M eta (M-1)(eta+gamma)/(gamma+1)) S2,

    where S1, S2 are overlap sums with the once- and twice-mapped Pólya
    pmfs. Sums with an empty range (M < 1, M < 2) vanish.
    """
    M, g, eta = params.M, params.gamma, params.eta
    mean = M * eta
    s1 = _overlap_sum(params, 1) if M >= 1 else 0.0
    s2 = _overlap_sum(params, 2) if M >= 2 else 0.0
    pref2 = math.sqrt(mean * (M - 1) * (eta + g) / (g + 1.0)) if M >= 2 else 0.0
    a2 = pref2 * s2
    var_x = 0.5 + mean + a2 - 2.0 * mean * s1 * s1
    var_p = 0.5 + mean - a2
    return QuadratureReport(var_x, var_p, CLOSED_FORM)


def quadrature_brute(params: PolyaParams) -> QuadratureReport:
    """Quadrature variances from ladder actions on the state vector."""
    psi = polya_state(params)
    a_psi = annihilate(psi)
    a2_psi = annihilate(a_psi)
    mean_a = inner_product(psi, a_psi)
    mean_a2 = inner_product(psi, a2_psi)
    mean_n = inner_product(a_psi, a_psi)
    # <x> = sqrt(2)<a>, <x²> = 1/2 + <N> + <a²> for real amplitudes; <p> = 0
    var_x = 0.5 + mean_n + mean_a2 - 2.0 * mean_a * mean_a
    var_p = 0.5 + mean_n - mean_a2
    return QuadratureReport(var_x, var_p, BRUTE_FORCE)


@dataclass(frozen=True)
class SqueezingScan:
    """var_x and var_p over an (eta, gamma) grid; rows index eta, columns gamma."""

    M: int
    eta_axis: np.ndarray
    gamma_axis: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray

    def _argmin(self, grid: np.ndarray) -> tuple[float, float, float]:
        i, j = np.unravel_index(np.argmin(grid), grid.shape)
        return float(grid[i, j]), float(self.eta_axis[i]), float(self.gamma_axis[j])

    @property
    def min_var_x(self) -> tuple[float, float, float]:
        """(minimum, eta, gamma) of var_x; first occurrence in row-major order."""
        return self._argmin(self.var_x)

    @property
    def min_var_p(self) -> tuple[float, float, float]:
        return self._argmin(self.var_p)

    def report(self, i: int, j: int) -> QuadratureReport:
        return QuadratureReport(float(self.var_x[i, j]), float(self.var_p[i, j]), CLOSED_FORM)


def squeezing_scan(M: int, gamma_axis, eta_axis) -> SqueezingScan:
    """Closed-form quadrature variances on the dense (eta, gamma) grid."""
    gamma_axis = np.asarray(gamma_axis, dtype=float)
    eta_axis = np.asarray(eta_axis, dtype=float)
    if gamma_axis.size == 0 or eta_axis.size == 0:
        raise ValueError("scan axes must be nonempty")
    var_x = np.empty((eta_axis.size, gamma_axis.size))
    var_p = np.empty_like(var_x)
    for i, eta in enumerate(eta_axis):
        for j, g in enumerate(gamma_axis):
            rep = quadrature_closed(PolyaParams(M, float(g), float(eta)))
            var_x[i, j] = rep.var_x
            var_p[i, j] = rep.var_p
    return SqueezingScan(M, eta_axis, gamma_axis, var_x, var_p)
