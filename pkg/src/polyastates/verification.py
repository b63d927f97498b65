"""Grid-wide consistency checks behind ``polya-states verify``.

Each check reports the worst observed value, the tolerance it is held to
and whether it passed. No timing data is recorded, so the report is a pure
function of the grid config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import contraction_diagnostic, eigen_residual, structure_table, verify_algebra
from .distributions import PolyaParams, binomial_pmf_vector, polya_pmf
from .fock import annihilate_power, apply_annihilation_power, polya_state
from .grid import StandardGrid, load_grid
from .limits import make_schedule
from .statistics import (
    moments_brute,
    moments_closed,
    q_line,
    q_zero_crossing,
    quadrature_brute,
    quadrature_closed,
)

__all__ = ["Check", "run_checks", "all_passed"]


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    value: float
    tolerance: float
    relation: str  # how value is compared with tolerance: "<=", ">=", "==" or "bool"

    @property
    def passed(self) -> bool:
        if self.relation == "<=":
            return self.value <= self.tolerance
        if self.relation == ">=":
            return self.value >= self.tolerance
        if self.relation == "==":
            return self.value == self.tolerance
        return bool(self.value)


def _rel(a: float, b: float, floor: float = 1e-12) -> float:
    # absolute below ``floor``: a number state has variance 0 against ~1e-29
    return abs(a - b) / max(abs(a), abs(b), floor)


def pmf_checks(grid: StandardGrid) -> list[Check]:
    norm = max(abs(polya_pmf(p).total() - 1.0) for p in grid)
    bs = max(
        float(np.max(np.abs(polya_pmf(PolyaParams(M, 0.0, eta)).probs - binomial_pmf_vector(M, eta))))
        for M in grid.M
        for eta in grid.eta
    )
    return [
        Check(1, "normalization_defect", norm, 1e-12, "<="),
        Check(2, "bs_reduction_max_abs", bs, 1e-14, "<="),
    ]


def eigen_checks(grid: StandardGrid) -> list[Check]:
    worst = max(eigen_residual(p) for p in grid if p.gamma > 0 and 0 < p.eta < 1)
    return [Check(3, "eigen_residual", worst, 1e-10, "<=")]


def algebra_checks(grid: StandardGrid) -> list[Check]:
    max_M = grid["algebra_max_M"]
    extra = grid["algebra_extra_dim"]
    residual = 0.0
    edge = 0.0
    min_f = math.inf
    for p in grid:
        if p.M > max_M or p.eta == 1.0:
            continue
        residual = max(residual, verify_algebra(p, p.M + 2 + extra).max())
        F = structure_table(p).values
        edge = max(edge, abs(F[0]), abs(F[-1]))
        min_f = min(min_f, float(np.min(F[1:-1])))
    return [
        Check(4, "algebra_residual", residual, 1e-11, "<="),
        Check(4, "structure_edges_exact_zero", edge, 0.0, "=="),
        Check(4, "structure_min_interior", min_f, 0.0, ">="),
    ]


def contraction_checks(grid: StandardGrid) -> list[Check]:
    bs = grid["bs_contraction"]
    report = contraction_diagnostic(
        make_schedule("BS", bs["num_points"], M=bs["M"], eta=bs["eta"], start=bs["start"])
    )
    slope = report.slope(last=bs["slope_points"])
    nbs = grid["nbs_contraction"]
    nbs_report = contraction_diagnostic(
        make_schedule("NBS", nbs["num_points"], lam=nbs["lam"], rho=nbs["rho"], start=nbs["start"]),
        window=nbs["window"],
    )
    devs = nbs_report.deviations
    return [
        Check(5, "bs_contraction_final", report.final_deviation, 1e-4, "<="),
        Check(5, "bs_contraction_slope_error", abs(slope - 1.0), 0.2, "<="),
        Check(5, "nbs_contraction_decreasing", float(all(b < a for a, b in zip(devs, devs[1:]))), 1.0, "bool"),
    ]


def moment_checks(grid: StandardGrid) -> list[Check]:
    rel = 0.0
    mean_err = 0.0
    for p in grid:
        closed, brute = moments_closed(p), moments_brute(p)
        rel = max(rel, _rel(closed.mean_n, brute.mean_n), _rel(closed.mean_n2, brute.mean_n2),
                  _rel(closed.var_n, brute.var_n))
        if brute.mean_n > 0:
            rel = max(rel, _rel(closed.q_factor, brute.q_factor))
        mean_err = max(mean_err, _rel(brute.mean_n, p.M * p.eta))
    return [
        Check(6, "moments_relative_error", rel, 1e-10, "<="),
        Check(6, "mean_equals_M_eta", mean_err, 1e-12, "<="),
    ]


def q_line_checks(grid: StandardGrid) -> list[Check]:
    etas = np.linspace(0.0, 1.0, grid["q_line_points"])
    end = 0.0
    linear = 0.0
    crossing = 0.0
    m1 = 0.0
    for M in grid.M:
        for g in grid.gamma:
            q = q_line(M, g, etas)
            end = max(end, abs(q[-1] + 1.0), abs(q[0] - (M - 1) * g / (1.0 + g)))
            coef = np.polyfit(etas, q, 1)
            linear = max(linear, float(np.max(np.abs(np.polyval(coef, etas) - q))))
            crossing = max(crossing, abs(q_line(M, g, [q_zero_crossing(M, g)])[0]))
            if M == 1:
                m1 = max(m1, float(np.max(np.abs(q + etas))))
    return [
        Check(7, "q_line_endpoints", end, 1e-14, "<="),
        Check(7, "q_line_linearity", linear, 1e-12, "<="),
        Check(7, "q_zero_crossing", crossing, 1e-12, "<="),
        Check(7, "q_m1_equals_minus_eta", m1, 1e-14, "<="),
    ]


def annihilation_checks(grid: StandardGrid) -> list[Check]:
    worst = 0.0
    beyond = 0.0
    for p in grid:
        psi = polya_state(p)
        for k in range(1, p.M + 1):
            scalar, mapped = apply_annihilation_power(p, k)
            lhs = annihilate_power(psi, k).amps
            rhs = scalar * polya_state(mapped).amps
            # relative to the prefactor once it exceeds 1 (it reaches sqrt(M!))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / max(1.0, scalar))
        scalar, _ = apply_annihilation_power(p, p.M + 1)
        beyond = max(beyond, abs(scalar), float(np.max(np.abs(annihilate_power(psi, p.M + 1).amps))))
    return [
        Check(8, "annihilation_power_identity", worst, 1e-11, "<="),
        Check(8, "annihilation_beyond_M_zero", beyond, 0.0, "=="),
    ]


def quadrature_checks(grid: StandardGrid) -> list[Check]:
    diff = 0.0
    product = math.inf
    for p in grid:
        closed, brute = quadrature_closed(p), quadrature_brute(p)
        diff = max(diff, abs(closed.var_x - brute.var_x), abs(closed.var_p - brute.var_p))
        product = min(product, closed.product, brute.product)
    sq = grid["squeeze"]
    M = sq["check_M"]
    etas = np.linspace(0.0, 1.0, sq["eta_points"])
    bs_row = [quadrature_closed(PolyaParams(M, 0.0, e)) for e in etas]
    mid_row = [quadrature_closed(PolyaParams(M, sq["moderate_gamma"], e)) for e in etas]
    large = [quadrature_closed(PolyaParams(M, g, sq["large_gamma_eta"])).var_p for g in sq["large_gamma_axis"]]
    gap = [abs(v - 0.5) for v in large]
    monotone = all(b < a for a, b in zip(gap, gap[1:]))
    return [
        Check(9, "quadrature_closed_vs_brute", diff, 1e-10, "<="),
        Check(9, "uncertainty_product_min", product, 0.25 - 1e-10, ">="),
        Check(9, "bs_x_squeezed_somewhere", float(any(r.squeezed_x for r in bs_row)), 1.0, "bool"),
        Check(9, "bs_p_never_squeezed", float(not any(r.squeezed_p for r in bs_row)), 1.0, "bool"),
        Check(9, "moderate_gamma_p_squeezed", float(any(r.squeezed_p for r in mid_row)), 1.0, "bool"),
        Check(9, "large_gamma_p_gap_decreasing", float(monotone), 1.0, "bool"),
        Check(9, "large_gamma_p_final_gap", gap[-1], sq["large_gamma_tolerance"], "<="),
    ]


def run_checks(grid: StandardGrid | None = None) -> list[Check]:
    grid = load_grid() if grid is None else grid
    checks: list[Check] = []
    for family in (
        pmf_checks,
        eigen_checks,
        algebra_checks,
        contraction_checks,
        moment_checks,
        q_line_checks,
        annihilation_checks,
        quadrature_checks,
    ):
        checks.extend(family(grid))
    return checks


def all_passed(checks: list[Check]) -> bool:
    return all(c.passed for c in checks)
