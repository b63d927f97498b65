"""The deformed oscillator behind Pólya states.

The lowering operator carries number-dependent factors to the left of
``a``. They are evaluated at the photon number *after* ``a`` acts, which
gives the ladder form

    A-|n> = sqrt(F(n)) |n-1>,    A+|n> = sqrt(F(n+1)) |n+1>

with structure function

    F(n) = n (M-n+1) (eta_bar + gamma (M-n)) (eta + gamma (n-1))
           / ((1-eta) (gamma M + 1) (gamma M + eta)).

Matrices are dense. Ladder matrix elements are populated only for
1 <= n <= M+1. F(M+1) = 0 closes the tower at |M>, and nothing above
|M+1> is part of the representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import PolyaParams
from .errors import DomainError
from .fock import FockVector, annihilate, polya_state
from .limits import LimitKind, LimitSchedule

__all__ = [
    "StructureFunctionTable",
    "structure_function",
    "structure_table",
    "lowering_prefactor",
    "lowering_apply",
    "lowering_apply_explicit",
    "raising_apply",
    "lowering_matrix",
    "raising_matrix",
    "number_matrix",
    "AlgebraResiduals",
    "verify_algebra",
    "eigen_sides",
    "eigen_residual",
    "ContractionReport",
    "su2_lowering_matrix",
    "su11_lowering_matrix",
    "contraction_diagnostic",
]


def _check_nonsingular(params: PolyaParams) -> None:
    if params.eta == 1.0:
        if params.gamma == 0.0:
            raise DomainError(
                "structure function is singular at gamma=0, eta=1", tag="BS-degenerate"
            )
        raise DomainError("structure function is singular at eta=1", tag="eta-one")


def _structure_values(params: PolyaParams, n: np.ndarray) -> np.ndarray:
    _check_nonsingular(params)
    M, g, eta = params.M, params.gamma, params.eta
    n = np.asarray(n)
    # integer factors keep F(0) and F(M+1) exactly zero
    edge = (n * (M - n + 1)).astype(float)
    if g == 0.0:
        return edge + 0.0
    upper = (params.eta_bar + g * (M - n)) / (1.0 - eta)
    lower = (eta + g * (n - 1)) / (g * M + eta)
    # + 0.0 turns the -0.0 produced at n = 0 into +0.0
    return edge * upper * lower / (g * M + 1.0) + 0.0


def structure_function(params: PolyaParams, n: int) -> float:
    """F(n) for 0 <= n <= M+1.

    At gamma = 0 the expression is returned in its reduced form n(M-n+1).
    Raises :class:`DomainError` when eta = 1 (tagged ``"BS-degenerate"``
    if gamma is also 0).
    """
    if not 0 <= n <= params.M + 1:
        raise DomainError(f"n must lie in [0, {params.M + 1}], got {n}")
    return float(_structure_values(params, np.array([n]))[0])


@dataclass(frozen=True)
class StructureFunctionTable:
    params: PolyaParams
    values: np.ndarray = field(repr=False)

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])


def structure_table(params: PolyaParams) -> StructureFunctionTable:
    """F(0), ..., F(M+1)."""
    values = _structure_values(params, np.arange(params.M + 2))
    values.setflags(write=False)
    return StructureFunctionTable(params, values)


def lowering_prefactor(params: PolyaParams) -> float:
    """Normalisation gamma / sqrt((1-eta)(1+M gamma)(M gamma+eta)) of A-."""
    M, g, eta = params.M, params.gamma, params.eta
    if g <= 0.0 or eta >= 1.0:
        raise DomainError("lowering prefactor needs gamma > 0 and eta < 1")
    denom = (1.0 - eta) * (1.0 + M * g) * (M * g + eta)
    if denom <= 0.0:
        raise DomainError("lowering prefactor is singular")
    return g / math.sqrt(denom)


def _ladder_weights(params: PolyaParams, dim: int) -> np.ndarray:
    """w[n] = sqrt(F(n)) for n = 0..dim-1, zero above M+1."""
    w = np.zeros(dim)
    top = min(dim - 1, params.M + 1)
    w[: top + 1] = np.sqrt(_structure_values(params, np.arange(top + 1)))
    return w


def lowering_apply(params: PolyaParams, v) -> FockVector:
    """A-|v>: out[n] = sqrt(F(n+1)) v[n+1]; dimension shrinks by one."""
    amps = np.asarray(v, dtype=float)
    if len(amps) == 1:
        return FockVector(np.zeros(1))
    w = _ladder_weights(params, len(amps))
    return FockVector(w[1:] * amps[1:])


def lowering_apply_explicit(params: PolyaParams, v) -> FockVector:
    """A-|v> written out with its product of number factors.

    Evaluates c * [(M-N)(eta_bar/gamma + M-N-1)(eta/gamma + N)]**(1/2) a
    with N taking the post-annihilation value. Components above |M> are
    set to zero since the product is meaningless outside the tower.
    """
    c = lowering_prefactor(params)
    M, g = params.M, params.gamma
    a_v = annihilate(v).amps
    n = np.arange(len(a_v))
    inside = n <= M
    factor = np.zeros(len(a_v))
    prod = (M - n[inside]) * (params.eta_bar / g + M - n[inside] - 1) * (params.eta / g + n[inside])
    factor[inside] = np.sqrt(np.maximum(prod, 0.0))
    return FockVector(c * factor * a_v)


def raising_apply(params: PolyaParams, v) -> FockVector:
    """A+|v>: out[n] = sqrt(F(n)) v[n-1]; dimension grows by one."""
    amps = np.asarray(v, dtype=float)
    w = _ladder_weights(params, len(amps) + 1)
    out = np.zeros(len(amps) + 1)
    out[1:] = w[1:] * amps
    return FockVector(out)


def lowering_matrix(params: PolyaParams, dim: int) -> np.ndarray:
    w = _ladder_weights(params, dim)
    return np.diag(w[1:], k=1)


def raising_matrix(params: PolyaParams, dim: int) -> np.ndarray:
    return lowering_matrix(params, dim).T.copy()


def number_matrix(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float))


@dataclass(frozen=True)
class AlgebraResiduals:
    """Max-abs residuals of the generator relations on the block n <= M."""

    commutator_lowering: float  # [N, A-] + A-
    commutator_raising: float  # [N, A+] - A+
    raising_lowering: float  # A+A- - F(N)
    lowering_raising: float  # A-A+ - F(N+1)
    leakage: float  # weight that A+- move outside span{|0>..|M>}

    def max(self) -> float:
        return max(
            self.commutator_lowering,
            self.commutator_raising,
            self.raising_lowering,
            self.lowering_raising,
            self.leakage,
        )


def verify_algebra(params: PolyaParams, dim: int | None = None) -> AlgebraResiduals:
    M = params.M
    dim = M + 2 if dim is None else dim
    if dim < M + 2:
        raise DomainError(f"dim must be >= M+2 = {M + 2}, got {dim}")
    lo = lowering_matrix(params, dim)
    hi = raising_matrix(params, dim)
    N = number_matrix(dim)
    F = np.zeros(dim + 1)
    F[: M + 2] = _structure_values(params, np.arange(M + 2))
    block = slice(0, M + 1)

    def _max(mat):
        return float(np.max(np.abs(mat[block, block])))

    return AlgebraResiduals(
        commutator_lowering=_max(N @ lo - lo @ N + lo),
        commutator_raising=_max(N @ hi - hi @ N - hi),
        raising_lowering=_max(hi @ lo - np.diag(F[:dim])),
        lowering_raising=_max(lo @ hi - np.diag(F[1 : dim + 1])),
        leakage=float(
            max(np.max(np.abs(lo[M + 1 :, : M + 1])), np.max(np.abs(hi[M + 1 :, : M + 1])))
        ),
    )


def eigen_sides(params: PolyaParams) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the ladder eigenvalue equation satisfied by |M,gamma,eta>.

    LHS = gamma [(M-N)(eta_bar/gamma + M-N-1)(eta/gamma + N)]**(1/2) a|psi>
    RHS = gamma (M-N)(eta/gamma + N) |psi>

    Both are returned on |0>..|M>; the LHS has no |M> component.
    """
    M, g, eta = params.M, params.gamma, params.eta
    if not (g > 0.0 and 0.0 < eta < 1.0):
        raise DomainError("eigenvalue equation needs gamma > 0 and 0 < eta < 1")
    psi = polya_state(params)
    n = np.arange(M + 1)
    lhs = np.zeros(M + 1)
    m = n[:M]
    prod = (M - m) * (params.eta_bar / g + M - m - 1) * (eta / g + m)
    lhs[:M] = g * np.sqrt(np.maximum(prod, 0.0)) * annihilate(psi).amps
    rhs = g * (M - n) * (eta / g + n) * psi.amps
    return lhs, rhs


def eigen_residual(params: PolyaParams) -> float:
    lhs, rhs = eigen_sides(params)
    return float(np.max(np.abs(lhs - rhs)))


def su2_lowering_matrix(M: int, dim: int) -> np.ndarray:
    """J-_M = sqrt(M-N) a in the Holstein-Primakoff form."""
    n = np.arange(1, dim)
    w = np.sqrt(np.maximum(n * (M - n + 1), 0).astype(float))
    return np.diag(w, k=1)


def su11_lowering_matrix(bargmann2: float, dim: int) -> np.ndarray:
    """K- = sqrt(lambda*rho + N) a, with ``bargmann2 = lambda*rho``."""
    n = np.arange(1, dim)
    return np.diag(np.sqrt(n * (bargmann2 + n - 1.0)), k=1)


@dataclass(frozen=True)
class ContractionReport:
    kind: LimitKind
    points: tuple[PolyaParams, ...]
    deviations: tuple[float, ...]
    window: int

    @property
    def final_deviation(self) -> float:
        return self.deviations[-1]

    @property
    def monotone_tail(self) -> bool:
        """Deviations strictly decrease over the final half of the schedule."""
        tail = self.deviations[len(self.deviations) // 2 :]
        if len(self.deviations) >= 2 and len(tail) < 2:
            tail = self.deviations[-2:]
        return all(b < a for a, b in zip(tail, tail[1:]))

    def slope(self, last: int | None = None) -> float:
        """Log-log slope of deviation against gamma (BS) or 1/M (NBS)."""
        from .limits import loglog_slope

        pts = self.points if last is None else self.points[-last:]
        dev = self.deviations if last is None else self.deviations[-last:]
        if self.kind is LimitKind.BS:
            x = [p.gamma for p in pts]
        else:
            x = [1.0 / p.M for p in pts]
        return loglog_slope(x, dev)


def contraction_diagnostic(schedule: LimitSchedule, window: int | None = None) -> ContractionReport:
    """Distance between the A- matrix and its su(2) / su(1,1) contraction.

    For the BS kind the comparison covers the whole tower (|0>..|M+1>)
    unless ``window`` is given. For the NBS kind the su(1,1) target is
    infinite-dimensional and only the window n <= ``window`` (default 8) is
    compared.
    """
    schedule.validate()
    deviations = []
    if schedule.kind is LimitKind.BS:
        M = schedule.points[0].M
        dim = M + 2 if window is None else window + 1
        target = su2_lowering_matrix(M, dim)
    else:
        dim = (8 if window is None else window) + 1
        target = su11_lowering_matrix(schedule.lam * schedule.rho, dim)
    for p in schedule.points:
        if dim > p.M + 2:
            raise DomainError(f"window exceeds the tower of {p}")
        deviations.append(float(np.max(np.abs(lowering_matrix(p, dim) - target))))
    return ContractionReport(schedule.kind, tuple(schedule.points), tuple(deviations), dim - 1)
