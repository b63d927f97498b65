"""Limit schedules toward the binomial (BS) and negative-binomial (NBS) laws.

BS:  gamma -> 0 with (M, eta) fixed.
NBS: M -> inf with M*eta = lam and M*gamma = 1/rho held fixed.

Convergence is measured in total variation between pmfs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .distributions import (
    NegBinParams,
    PolyaParams,
    binomial_pmf_vector,
    negative_binomial_pmf_vector,
    polya_pmf,
    total_variation,
)
from .errors import DomainError

__all__ = [
    "LimitKind",
    "LimitSchedule",
    "make_schedule",
    "target_pmf",
    "ConvergencePoint",
    "convergence_report",
    "loglog_slope",
    "point_mass_pmf",
    "poisson_pmf",
    "geometric_pmf",
]

TAIL_MASS = 1e-12


class LimitKind(enum.Enum):
    BS = "BS"
    NBS = "NBS"

    @classmethod
    def parse(cls, value) -> "LimitKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown limit kind {value!r}") from None


@dataclass(frozen=True)
class LimitSchedule:
    """Ordered parameter points driving a Pólya law toward its limit.

    BS schedules carry the fixed (M, eta); NBS schedules carry (lam, rho).
    """

    kind: LimitKind
    points: tuple[PolyaParams, ...]
    M: int | None = None
    eta: float | None = None
    lam: float | None = None
    rho: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def target(self) -> str:
        if self.kind is LimitKind.BS:
            return f"binomial(M={self.M}, eta={self.eta!r})"
        return f"negative_binomial(r={self.lam * self.rho!r}, p={1.0 / (1.0 + self.rho)!r})"

    def validate(self) -> None:
        """Raise :class:`DomainError` if the points leave the declared limit path."""
        if not self.points:
            raise DomainError("schedule has no points")
        if self.kind is LimitKind.BS:
            for p in self.points:
                if p.M != self.M or p.eta != self.eta:
                    raise DomainError(f"BS schedule must fix M={self.M}, eta={self.eta}; got {p}")
            gammas = [p.gamma for p in self.points]
            if any(b > a for a, b in zip(gammas, gammas[1:])):
                raise DomainError("BS schedule must drive gamma downward")
        else:
            if not (self.lam and self.rho and self.lam > 0 and self.rho > 0):
                raise DomainError("NBS schedule needs lam > 0 and rho > 0")
            for p in self.points:
                if not math.isclose(p.M * p.eta, self.lam, rel_tol=1e-12):
                    raise DomainError(f"NBS schedule violates M*eta = {self.lam}: {p}")
                if not math.isclose(p.M * p.gamma * self.rho, 1.0, rel_tol=1e-12):
                    raise DomainError(f"NBS schedule violates M*gamma = 1/{self.rho}: {p}")
            ms = [p.M for p in self.points]
            if any(b <= a for a, b in zip(ms, ms[1:])):
                raise DomainError("NBS schedule must strictly increase M")


def make_schedule(
    kind,
    num_points: int,
    *,
    M: int | None = None,
    eta: float | None = None,
    lam: float | None = None,
    rho: float | None = None,
    start: float | None = None,
    factor: float = 10.0,
) -> LimitSchedule:
    """Geometric schedule of the driven parameter.

    BS drives gamma = start, start/factor, ... (default start 0.1).
    NBS drives M = start, start*factor, ... rounded to integers (default
    start 10) and sets eta = lam/M, gamma = 1/(M*rho).
    """
    kind = LimitKind.parse(kind)
    if num_points < 2:
        raise DomainError(f"num_points must be >= 2, got {num_points}")
    if factor <= 1.0:
        raise DomainError("factor must exceed 1")
    steps = np.arange(num_points)
    if kind is LimitKind.BS:
        if M is None or eta is None:
            raise DomainError("BS schedule needs M and eta")
        PolyaParams(M, 0.0, eta)  # validates the anchors
        if M < 1:
            raise DomainError("BS schedule needs M >= 1")
        start = 0.1 if start is None else float(start)
        if start <= 0:
            raise DomainError("gamma start must be > 0")
        points = [PolyaParams(M, start / factor**j, eta) for j in steps]
        return LimitSchedule(kind, points, M=M, eta=float(eta))
    if lam is None or rho is None or not lam > 0 or not rho > 0:
        raise DomainError("NBS schedule needs lam > 0 and rho > 0")
    start = 10.0 if start is None else float(start)
    ms = [int(round(start * factor**j)) for j in steps]
    if any(b <= a for a, b in zip(ms, ms[1:])) or ms[0] < lam:
        raise DomainError(f"NBS schedule M values {ms} must increase and satisfy M >= lam")
    points = [PolyaParams(m, 1.0 / (m * rho), lam / m) for m in ms]
    return LimitSchedule(kind, points, lam=float(lam), rho=float(rho))


def target_pmf(schedule: LimitSchedule, support_cap: int = 100_000) -> np.ndarray:
    """The limiting pmf; the NBS target is cut where the tail mass drops below 1e-12."""
    if support_cap < 1:
        raise DomainError(f"support_cap must be >= 1, got {support_cap}")
    if schedule.kind is LimitKind.BS:
        return binomial_pmf_vector(schedule.M, schedule.eta)
    nb = NegBinParams.from_lambda_rho(schedule.lam, schedule.rho)
    probs = negative_binomial_pmf_vector(nb, support_cap)
    tail = 1.0 - np.cumsum(probs)
    below = np.nonzero(tail < TAIL_MASS)[0]
    stop = below[0] if below.size else support_cap
    return probs[: stop + 1]


@dataclass(frozen=True)
class ConvergencePoint:
    params: PolyaParams
    tv_distance: float


def convergence_report(schedule: LimitSchedule, support_cap: int = 100_000) -> list[ConvergencePoint]:
    schedule.validate()
    target = target_pmf(schedule, support_cap)
    return [ConvergencePoint(p, total_variation(polya_pmf(p).probs, target)) for p in schedule.points]


def loglog_slope(x, y) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def point_mass_pmf(n0: int, size: int | None = None) -> np.ndarray:
    """Number-state photon distribution concentrated on ``n0``."""
    size = n0 + 1 if size is None else size
    out = np.zeros(size)
    out[n0] = 1.0
    return out


def poisson_pmf(mean: float, n_max: int) -> np.ndarray:
    """Coherent-state photon distribution (Poisson) on n = 0..n_max."""
    n = np.arange(n_max + 1, dtype=float)
    if mean == 0:
        return point_mass_pmf(0, n_max + 1)
    return np.exp(n * math.log(mean) - mean - gammaln(n + 1.0))


def geometric_pmf(p: float, n_max: int) -> np.ndarray:
    """(1-p) p**n: the r = 1 member of the negative-binomial family."""
    n = np.arange(n_max + 1, dtype=float)
    return (1.0 - p) * p**n
