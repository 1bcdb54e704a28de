"""Verification experiments: spectrum vs. expansion, decay fits, and the
finite-m content of the statement that {(n pi)^2} in the spectrum forces q = 0."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .asymptotics import (
    DEFAULT_CUTOFF,
    M_MIN,
    auxiliary_integrals,
    first_order_eigenvalue,
    lemma1_expansion,
    term_a1,
    term_a2,
    term_b1,
    term_b2,
)
from .potential import (
    HypothesisReport,
    PotentialSpec,
    check_hypotheses,
    cosine_coefficients,
    evaluate,
    even_odd_split,
    grid_size_for,
    l2_norm_squared,
    mean_normalize,
)
from .solver import default_basis, solve_spectrum_galerkin

__all__ = [
    "InadmissiblePotentialError",
    "ComparisonRow",
    "ComparisonReport",
    "DecayFit",
    "DeviationRow",
    "DeviationReport",
    "LemmaReport",
    "TableReport",
    "expansion_coefficients",
    "compare_spectrum_vs_expansion",
    "fit_decay_exponent",
    "ambarzumyan_deviation",
    "lemma_checks",
]

AUX_Q_TOL = 1e-12
AUX_G_TOL = 1e-10
A1_RATIO_BAND = (0.9, 1.1)
A1_RATIO_FROM = 16
DECAY_LIMIT = -2.0


class InadmissiblePotentialError(ValueError):
    pass


def _require_admissible(spec: PotentialSpec, allow: bool) -> HypothesisReport:
    report = check_hypotheses(spec)
    if not (report.admissible or allow):
        raise InadmissiblePotentialError(
            f"potential fails the hypotheses: c0={report.c0:.3e}, "
            f"|q(0)-q(1)|={report.endpoint_value_gap:.3e}, "
            f"|q'(0)-q'(1)|={report.endpoint_derivative_gap:.3e}"
        )
    return report


def expansion_coefficients(spec: PotentialSpec, m_max: int, cutoff: int):
    """Cosine coefficients covering every index the expansion sums touch."""
    max_index = 2 * m_max + 2 * cutoff
    n_points = grid_size_for(4 * max_index, minimum=4097) if spec.kind == "grid" else None
    return cosine_coefficients(spec, max_index, n_points)


@dataclass(frozen=True)
class TableReport:
    """Plain table with an optional summary block, for CLI output."""

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    summary: dict[str, object] = field(default_factory=dict)

    def summary_items(self):
        return list(self.summary.items())


# --------------------------------------------------------------------------
# comparison


class ComparisonRow(NamedTuple):
    m: int
    lambda_solver: float
    lambda_first_order: float
    lambda_lemma1: float
    residual_first: float
    residual_lemma1: float


@dataclass(frozen=True)
class ComparisonReport:
    potential_id: str
    settings: dict
    rows: list[ComparisonRow]
    columns = ComparisonRow._fields

    def summary_items(self):
        items = [("potential", self.potential_id)] + list(self.settings.items())
        if self.rows:
            items += [
                ("max_abs_residual_first", max(abs(r.residual_first) for r in self.rows)),
                ("max_abs_residual_lemma1", max(abs(r.residual_lemma1) for r in self.rows)),
            ]
        return items


def compare_spectrum_vs_expansion(
    spec: PotentialSpec,
    m_range: tuple[int, int] = (1, 8),
    *,
    n_basis: int | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    refine: bool = False,
    allow_inadmissible: bool = False,
    potential_id: str = "q",
) -> ComparisonReport:
    """Galerkin eigenvalues against the first-order and second-order expansions."""
    lo, hi = m_range
    if not 1 <= lo <= hi:
        raise ValueError(f"bad m range {m_range}")
    _require_admissible(spec, allow_inadmissible)
    n_basis = n_basis or default_basis(hi)
    spectrum = solve_spectrum_galerkin(spec, hi, n_basis)
    coeffs = expansion_coefficients(spec, hi, cutoff)
    rows = []
    for m in range(lo, hi + 1):
        lam = spectrum[m]
        first = first_order_eigenvalue(m, coeffs)
        total = lemma1_expansion(m, coeffs, cutoff, refine=refine, m_min=1).total
        rows.append(ComparisonRow(m, lam, first, total, lam - first, lam - total))
    settings = {"method": "galerkin", "n_basis": n_basis, "cutoff": cutoff, "refine": refine}
    return ComparisonReport(potential_id, settings, rows)


# --------------------------------------------------------------------------
# decay fits


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit  log|value| = log(prefactor) + exponent * log(m)."""

    exponent: float
    prefactor: float
    m_range: tuple[int, int]
    r_squared: float
    identically_zero: bool = False

    def decays_at_least(self, limit: float) -> bool:
        return self.identically_zero or self.exponent <= limit


def fit_decay_exponent(series) -> DecayFit:
    pts = [(int(m), float(v)) for m, v in series]
    if not pts:
        raise ValueError("empty series")
    m_range = (min(m for m, _ in pts), max(m for m, _ in pts))
    nonzero = [(m, abs(v)) for m, v in pts if v != 0.0]
    if not nonzero:
        return DecayFit(-math.inf, 0.0, m_range, 1.0, identically_zero=True)
    if len(nonzero) < 5:
        raise ValueError(f"need at least 5 nonzero points, got {len(nonzero)}")
    lm = np.log([m for m, _ in nonzero])
    lv = np.log([v for _, v in nonzero])
    slope, intercept = np.polyfit(lm, lv, 1)
    resid = lv - (slope * lm + intercept)
    ss_tot = float(np.sum((lv - lv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return DecayFit(float(slope), float(np.exp(intercept)), m_range, min(max(r2, 0.0), 1.0))


def _tail_fit(ms: np.ndarray, values: np.ndarray, min_tail: int = 5) -> DecayFit:
    """Decay fit, except that a series which is exactly zero on its last
    ``min_tail`` or more points counts as vanishing on that tail."""
    nz = np.flatnonzero(values)
    if nz.size and ms.size - 1 - nz[-1] >= min_tail:
        tail = slice(nz[-1] + 1, None)
        return fit_decay_exponent(zip(ms[tail], values[tail]))
    return fit_decay_exponent(zip(ms, values))


# --------------------------------------------------------------------------
# deviation from the unperturbed spectrum


class DeviationRow(NamedTuple):
    m: int
    d_m: float
    m2_d_m: float


@dataclass(frozen=True)
class DeviationReport:
    rows: list[DeviationRow]
    limit_estimate: float
    predicted_limit: float
    verdict: Literal["zero_potential", "nonzero_potential"]
    tol: float
    hypotheses: HypothesisReport
    columns = DeviationRow._fields

    def summary_items(self):
        h = self.hypotheses
        return [
            ("verdict", self.verdict),
            ("limit_estimate", self.limit_estimate),
            ("predicted_limit", self.predicted_limit),
            ("tol", self.tol),
            ("max_abs_d_m", max((abs(r.d_m) for r in self.rows), default=0.0)),
            ("admissible", h.admissible),
            ("c0", h.c0),
            ("endpoint_value_gap", h.endpoint_value_gap),
            ("endpoint_derivative_gap", h.endpoint_derivative_gap),
        ]


def ambarzumyan_deviation(
    spec: PotentialSpec,
    m_max: int = 32,
    tol: float | None = None,
    n_basis: int | None = None,
) -> DeviationReport:
    """d_m = lambda_m - (m pi)^2 for m = 1..m_max and the limit of m^2 d_m.

    For a mean-free admissible q, m^2 d_m tends to ||q||^2 / (4 pi^2), so the
    unperturbed values can only all be eigenvalues when ||q|| = 0.  The limit
    is estimated by the median of m^2 d_m over the top quarter of m.  A
    nonzero mean is reported in ``hypotheses`` and shows up as d_m -> c0.
    """
    if m_max < 4:
        raise ValueError("m_max must be at least 4")
    if tol is None:
        tol = 1e-8 * (m_max * math.pi) ** 2
    hyp = check_hypotheses(spec)
    spectrum = solve_spectrum_galerkin(spec, m_max, n_basis or default_basis(m_max))
    ms = np.arange(1, m_max + 1)
    d = spectrum.eigenvalues - (ms * math.pi) ** 2
    rows = [DeviationRow(int(m), float(dm), float(m * m * dm)) for m, dm in zip(ms, d)]
    top = ms >= m_max - m_max // 4
    limit = float(np.median(ms[top] ** 2 * d[top]))
    normalized, _ = mean_normalize(spec)
    predicted = l2_norm_squared(normalized) / (4.0 * math.pi**2)
    verdict = "zero_potential" if np.max(np.abs(d)) <= tol else "nonzero_potential"
    return DeviationReport(rows, limit, predicted, verdict, tol, hyp)


# --------------------------------------------------------------------------
# lemma checks


@dataclass(frozen=True)
class LemmaReport:
    m: np.ndarray
    eigenvalues: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    a1_ratio: np.ndarray
    fits: dict[str, DecayFit]
    last_nonzero: dict[str, int | None]
    aux_residuals: dict[str, float]
    checks: dict[str, bool]
    columns = ("m", "lambda", "a1", "b1", "a2", "b2", "a1_ratio")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def rows(self):
        return [
            (int(m), *map(float, vals))
            for m, *vals in zip(self.m, self.eigenvalues, self.a1, self.b1, self.a2, self.b2, self.a1_ratio)
        ]

    def summary_items(self):
        items = [("passed", self.passed)]
        items += [(f"check_{k}", v) for k, v in self.checks.items()]
        for k, f in self.fits.items():
            items.append((f"exponent_{k}", "identically_zero" if f.identically_zero else f.exponent))
        items += [(f"last_nonzero_{k}", "none" if v is None else v) for k, v in self.last_nonzero.items()]
        items += [("max_aux_Q_residual", self.aux_residuals["Q"]), ("max_aux_G_residual", self.aux_residuals["G"])]
        return items


def lemma_checks(
    spec: PotentialSpec,
    m_range: tuple[int, int] = (M_MIN, 64),
    *,
    cutoff: int = DEFAULT_CUTOFF,
    n_basis: int | None = None,
    allow_inadmissible: bool = False,
    aux_points: int = 4097,
) -> LemmaReport:
    """Evaluate a1, b1, a2, b2 at the computed lambda_m and test their decay.

    Checks: |b1|, |b2| and |a2| m^2 decay with fitted exponent <= -2 (or vanish
    identically); a1 * 4 pi^2 m^2 / ||q||^2 lies in [0.9, 1.1] for m >= 16;
    the running integrals Q~, Q^, G~+-, G^+- vanish at the ends.
    """
    lo, hi = m_range
    if not 1 <= lo <= hi:
        raise ValueError(f"bad m range {m_range}")
    _require_admissible(spec, allow_inadmissible)
    normalized, _ = mean_normalize(spec)
    spectrum = solve_spectrum_galerkin(normalized, hi, n_basis or default_basis(hi))
    coeffs = expansion_coefficients(normalized, hi, cutoff)
    ms = np.arange(lo, hi + 1)
    lam = np.array([spectrum[m] for m in ms])
    a1 = np.array([term_a1(m, x, coeffs, cutoff) for m, x in zip(ms, lam)])
    b1 = np.array([term_b1(m, x, coeffs, cutoff) for m, x in zip(ms, lam)])
    a2 = np.array([term_a2(m, x, coeffs, cutoff) for m, x in zip(ms, lam)])
    b2 = np.array([term_b2(m, x, coeffs, cutoff) for m, x in zip(ms, lam)])

    l2 = l2_norm_squared(normalized)
    ratio = a1 * 4.0 * math.pi**2 * ms**2 / l2 if l2 > 0 else np.zeros_like(a1)

    fits = {
        "b1": _tail_fit(ms, b1),
        "b2": _tail_fit(ms, b2),
        "a2_m2": _tail_fit(ms, a2 * ms**2),
    }

    def last(values):
        nz = ms[values != 0.0]
        return int(nz[-1]) if nz.size else None

    pair = even_odd_split(evaluate(normalized, aux_points))
    q_res, g_res = 0.0, 0.0
    for m in sorted({int(lo), int((lo + hi) // 2), int(hi)}):
        res = auxiliary_integrals(pair, m).endpoint_residuals()
        q_res = max(q_res, res["Q_tilde(1)"], res["Q_hat(1)"])
        g_res = max(g_res, *(v for k, v in res.items() if k.startswith("G")))

    late = ms >= A1_RATIO_FROM
    checks = {
        "b1_decay": fits["b1"].decays_at_least(DECAY_LIMIT),
        "b2_decay": fits["b2"].decays_at_least(DECAY_LIMIT),
        "a2_decay": fits["a2_m2"].decays_at_least(DECAY_LIMIT),
        "a1_ratio": bool(
            l2 == 0.0
            or not np.any(late)
            or np.all((ratio[late] >= A1_RATIO_BAND[0]) & (ratio[late] <= A1_RATIO_BAND[1]))
        ),
        "aux_endpoints": bool(q_res <= AUX_Q_TOL and g_res <= AUX_G_TOL),
    }
    return LemmaReport(
        m=ms,
        eigenvalues=lam,
        a1=a1,
        b1=b1,
        a2=a2,
        b2=b2,
        a1_ratio=ratio,
        fits=fits,
        last_nonzero={"b1": last(b1), "b2": last(b2), "a2": last(a2)},
        aux_residuals={"Q": q_res, "G": g_res},
        checks=checks,
    )
