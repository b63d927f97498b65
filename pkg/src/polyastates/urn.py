"""Monte Carlo Pólya urn, an independent stochastic check on the pmf.

An urn holds ``a`` white and ``b`` black balls. Each draw is replaced
together with ``c`` more balls of the drawn colour. Real-valued counts are
allowed so that every (gamma, eta) has a preimage.

Trials are split into fixed-size chunks, each with its own child seed
spawned from the root seed. The merged histogram therefore does not
depend on how many workers process the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import PolyaParams, polya_pmf, total_variation
from .errors import DomainError

__all__ = ["UrnSpec", "urn_to_polya", "sample_counts", "empirical_pmf", "empirical_tv"]

CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class UrnSpec:
    a: float
    b: float
    c: float
    M: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.a <= 0 or self.b <= 0:
            raise DomainError("ball counts a and b must be positive")
        if self.c < 0:
            raise DomainError("reinforcement c must be >= 0")
        if int(self.M) != self.M or self.M < 1:
            raise DomainError(f"M must be a positive integer, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))


def urn_to_polya(spec: UrnSpec) -> PolyaParams:
    """eta = a/(a+b), gamma = c/(a+b), same M."""
    total = spec.a + spec.b
    return PolyaParams(spec.M, spec.c / total, spec.a / total)


def _run_chunk(spec: UrnSpec, size: int, seed: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed)
    whites = np.zeros(size, dtype=np.int64)
    for drawn in range(spec.M):
        p_white = (spec.a + spec.c * whites) / (spec.a + spec.b + spec.c * drawn)
        whites += rng.random(size) < p_white
    return np.bincount(whites, minlength=spec.M + 1)


def sample_counts(spec: UrnSpec, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Histogram of white-ball counts n = 0..M over ``trials`` urn runs."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    n_chunks = -(-trials // CHUNK_SIZE)
    sizes = [CHUNK_SIZE] * (n_chunks - 1) + [trials - CHUNK_SIZE * (n_chunks - 1)]
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda args: _run_chunk(spec, *args), zip(sizes, seeds)))
    else:
        parts = [_run_chunk(spec, size, s) for size, s in zip(sizes, seeds)]
    return np.sum(parts, axis=0)


def empirical_pmf(spec: UrnSpec, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    return sample_counts(spec, trials, seed, workers) / trials


def empirical_tv(spec: UrnSpec, trials: int, seed: int, workers: int = 1) -> float:
    """TV distance between the sampled histogram and the exact Pólya pmf."""
    exact = polya_pmf(urn_to_polya(spec)).probs
    return total_variation(empirical_pmf(spec, trials, seed, workers), exact)
