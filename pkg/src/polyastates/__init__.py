"""Pólya states of a single-mode radiation field on a truncated Fock space."""

from .distributions import (
    NegBinParams,
    Pmf,
    PolyaParams,
    binomial_pmf,
    negative_binomial_pmf,
    polya_log_pmf,
    polya_pmf,
    total_variation,
)
from .errors import DomainError
from .fock import FockVector, annihilate, apply_annihilation_power, create, number_apply, polya_state
from .statistics import moments_brute, moments_closed, quadrature_brute, quadrature_closed

__version__ = "0.1.0"
