"""Large-m expansion of the Dirichlet eigenvalues, term by term.

With D(s) = lambda - (pi (m + s))^2 and the cosine coefficients c_k of q,

    lambda_m = (m pi)^2 + c_0 - c_2m + a1 - b1 + a2 - b2 + R3

    a1 = sum_{s != 0, -2m} c_s^2 / D(s)
    b1 = sum_{s != 0, -2m} c_s c_{2m+s} / D(s)
    a2 = sum c_{m1} c_{m2} c_{m1+m2}    / (D(m1) D(m1+m2))
    b2 = sum c_{m1} c_{m2} c_{2m+m1+m2} / (D(m1) D(m1+m2))

where the double sums exclude m1 and m1 + m2 from {0, -2m}.  The pair
(m1, m1 + m2) indexes the intermediate sine modes visited when the relation
(lambda - (k pi)^2) (Psi, sin k pi x) = sum_j c_j (Psi, sin (k + j) pi x) is
iterated; the excluded values are exactly the returns to modes +-m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import digamma

from .potential import (
    CosineCoeffs,
    EvenOddPair,
    PotentialError,
    cumulative_simpson_uniform,
    simpson_uniform,
)
from .solver import EigenfunctionCoeffs

__all__ = [
    "SingularDenominatorError",
    "ExpansionTerms",
    "AuxiliaryIntegrals",
    "DEFAULT_CUTOFF",
    "DEFAULT_DELTA",
    "M_MIN",
    "first_order_eigenvalue",
    "single_sum_indices",
    "double_sum_indices",
    "term_a1",
    "term_b1",
    "term_a2",
    "term_b2",
    "tail_bound",
    "lemma1_expansion",
    "leading_l2_correction",
    "auxiliary_integrals",
    "r3_numeric",
    "gap_sum",
]

DEFAULT_CUTOFF = 512
DEFAULT_DELTA = 1.0
M_MIN = 8
R3_MAX_CUTOFF = 16

Convention = Literal["cumulative", "literal"]


class SingularDenominatorError(ArithmeticError):
    pass


def _denominator(m: int, lam: float, s) -> np.ndarray:
    return lam - (np.pi * (m + np.asarray(s, dtype=float))) ** 2


def _guard(m: int, lam: float, s: np.ndarray, delta: float) -> np.ndarray:
    d = _denominator(m, lam, s)
    bad = np.abs(d) <= delta
    if np.any(bad):
        k = int(np.asarray(s)[bad].flat[0])
        raise SingularDenominatorError(
            f"|lambda - (pi (m + s))^2| <= {delta} at s={k} (m={m}, lambda={lam!r})"
        )
    return d


def _excluded(m: int, s: np.ndarray) -> np.ndarray:
    return (s == 0) | (s == -2 * m)


def first_order_eigenvalue(m: int, coeffs: CosineCoeffs) -> float:
    """(m pi)^2 + c_0 - c_2m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not coeffs.covers(2 * m):
        raise ValueError(f"coefficients end at {coeffs.max_index}, need index {2 * m}")
    return (m * math.pi) ** 2 + coeffs[0] - coeffs[2 * m]


def single_sum_indices(m: int, cutoff: int) -> np.ndarray:
    s = np.arange(-cutoff, cutoff + 1)
    return s[~_excluded(m, s)]


def double_sum_indices(
    m: int, m1: np.ndarray, m2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """All admissible (m1, m2) pairs drawn from the two candidate lists."""
    a, b = np.meshgrid(m1, m2, indexing="ij")
    keep = ~(_excluded(m, a) | _excluded(m, a + b))
    return a[keep], b[keep]


def _check_cutoff(m: int, cutoff: int) -> None:
    if m < 1:
        raise ValueError("m must be >= 1")
    if cutoff < 2 * m:
        raise ValueError(f"cutoff={cutoff} must be at least 2m={2 * m}")


def _single_sum(m, lam, coeffs, cutoff, shift, delta) -> float:
    _check_cutoff(m, cutoff)
    s = single_sum_indices(m, cutoff)
    num = coeffs.at(s) * coeffs.at(s + shift)
    live = num != 0.0
    if not np.any(live):
        return 0.0
    return float(np.sum(num[live] / _guard(m, lam, s[live], delta)))


def term_a1(m: int, lam: float, coeffs: CosineCoeffs, cutoff: int = DEFAULT_CUTOFF,
            delta: float = DEFAULT_DELTA) -> float:
    return _single_sum(m, lam, coeffs, cutoff, 0, delta)


def term_b1(m: int, lam: float, coeffs: CosineCoeffs, cutoff: int = DEFAULT_CUTOFF,
            delta: float = DEFAULT_DELTA) -> float:
    return _single_sum(m, lam, coeffs, cutoff, 2 * m, delta)


def _double_sum(m, lam, coeffs, cutoff, shift, delta, convention) -> float:
    _check_cutoff(m, cutoff)
    if convention not in ("cumulative", "literal"):
        raise ValueError(f"unknown index convention {convention!r}")
    supp = coeffs.support(cutoff)
    m1, m2 = double_sum_indices(m, supp, supp)
    num = coeffs.at(m1) * coeffs.at(m2) * coeffs.at(shift + m1 + m2)
    live = num != 0.0
    if not np.any(live):
        return 0.0
    m1, m2, num = m1[live], m2[live], num[live]
    second = m1 + m2 if convention == "cumulative" else m2
    den = _guard(m, lam, m1, delta) * _guard(m, lam, second, delta)
    return float(np.sum(num / den))


def term_a2(m: int, lam: float, coeffs: CosineCoeffs, cutoff: int = DEFAULT_CUTOFF,
            delta: float = DEFAULT_DELTA, convention: Convention = "cumulative") -> float:
    """Double sum with numerator c_{m1} c_{m2} c_{m1+m2} over |m1|, |m2| <= cutoff.

    ``convention="literal"`` takes the second denominator at m2 instead of
    m1 + m2.
    """
    return _double_sum(m, lam, coeffs, cutoff, 0, delta, convention)


def term_b2(m: int, lam: float, coeffs: CosineCoeffs, cutoff: int = DEFAULT_CUTOFF,
            delta: float = DEFAULT_DELTA, convention: Convention = "cumulative") -> float:
    """As :func:`term_a2` with numerator c_{m1} c_{m2} c_{2m+m1+m2}."""
    return _double_sum(m, lam, coeffs, cutoff, 2 * m, delta, convention)


def tail_bound(m: int, coeffs: CosineCoeffs, cutoff: int) -> float:
    """Estimated size of the single-sum terms with |s| > cutoff.

    Uses the largest |c_k| over cutoff/2 < k <= cutoff as an envelope and
    sum_{|s| > C} 1/(pi^2 |s (2m + s)|) = (H_{C+2m} - H_{C-2m}) / (2m pi^2).
    """
    _check_cutoff(m, cutoff)
    if coeffs.exact_beyond and coeffs.max_index <= cutoff:
        return 0.0
    if coeffs.exact_beyond and not np.any(coeffs.c[cutoff + 1 :]):
        return 0.0
    top = coeffs.at(np.arange(cutoff // 2 + 1, cutoff + 1))
    env = float(np.max(np.abs(top))) if top.size else 0.0
    harmonic = digamma(cutoff + 2 * m + 1) - digamma(cutoff - 2 * m + 1)
    return env * env * float(harmonic) / (2 * m * math.pi**2)


def gap_sum(m: int, cutoff: int) -> float:
    """sum_{s != 0, -2m, |s| <= cutoff} 1 / |s (2m + s)|, which is O(ln m / m)."""
    s = single_sum_indices(m, cutoff).astype(float)
    return float(np.sum(1.0 / np.abs(s * (2 * m + s))))


@dataclass(frozen=True)
class ExpansionTerms:
    m: int
    base: float
    c0: float
    minus_c2m: float
    a1: float
    b1: float
    a2: float
    b2: float
    lambda_seed: float
    cutoff: int
    tail_bound: float = 0.0
    r3_estimate: float | None = None

    @property
    def total(self) -> float:
        return self.base + self.c0 + self.minus_c2m + self.a1 - self.b1 + self.a2 - self.b2

    @property
    def first_order(self) -> float:
        return self.base + self.c0 + self.minus_c2m


def lemma1_expansion(
    m: int,
    coeffs: CosineCoeffs,
    cutoff: int = DEFAULT_CUTOFF,
    *,
    refine: bool = False,
    lam: float | None = None,
    m_min: int = M_MIN,
    delta: float = DEFAULT_DELTA,
    convention: Convention = "cumulative",
    eigenfunction: EigenfunctionCoeffs | None = None,
    r3_cutoff: int = 8,
) -> ExpansionTerms:
    """Second-order expansion of lambda_m.

    The sums are evaluated at ``lam`` when given, otherwise at the first-order
    value; ``refine`` re-evaluates them once at the resulting total.  With an
    ``eigenfunction`` the R3 remainder is attached as ``r3_estimate``.
    """
    if m < m_min:
        raise ValueError(f"m={m} is below m_min={m_min}")
    seed = first_order_eigenvalue(m, coeffs) if lam is None else float(lam)

    def at(point):
        return ExpansionTerms(
            m=m,
            base=(m * math.pi) ** 2,
            c0=coeffs[0],
            minus_c2m=-coeffs[2 * m],
            a1=term_a1(m, point, coeffs, cutoff, delta),
            b1=term_b1(m, point, coeffs, cutoff, delta),
            a2=term_a2(m, point, coeffs, cutoff, delta, convention),
            b2=term_b2(m, point, coeffs, cutoff, delta, convention),
            lambda_seed=point,
            cutoff=cutoff,
            tail_bound=tail_bound(m, coeffs, cutoff),
        )

    terms = at(seed)
    if refine:
        terms = at(terms.total)
    if eigenfunction is not None:
        r3 = r3_numeric(m, coeffs, eigenfunction, r3_cutoff, delta)
        terms = ExpansionTerms(**{**terms.__dict__, "r3_estimate": r3})
    return terms


def leading_l2_correction(m: int, q_l2_sq: float) -> float:
    """||q||^2 / (4 pi^2 m^2), the limit form of lambda_m - (m pi)^2."""
    if m < 1 or q_l2_sq < 0:
        raise ValueError("need m >= 1 and a non-negative squared norm")
    return q_l2_sq / (4.0 * math.pi**2 * m * m)


# --------------------------------------------------------------------------
# remainder


def _q_psi_sin(k: np.ndarray, coeffs: CosineCoeffs, eig: EigenfunctionCoeffs) -> np.ndarray:
    """(q Psi, sin(k pi x)) from the sine coefficients of Psi."""
    j = np.arange(1, eig.sine_coeffs.size + 1)
    a = np.abs(k)
    # 2 (q sin j pi x, sin k pi x) = c_{j-k} - c_{j+k}
    kernel = coeffs.at(j[None, :] - a[:, None]) - coeffs.at(j[None, :] + a[:, None])
    return np.sign(k) * (kernel @ eig.sine_coeffs) / math.sqrt(2.0)


def r3_numeric(
    m: int,
    coeffs: CosineCoeffs,
    eig: EigenfunctionCoeffs,
    cutoff: int = 8,
    delta: float = DEFAULT_DELTA,
) -> float:
    """Third-order remainder R3, truncated to |m1|, |m2|, |m3| <= cutoff.

    The partial sums s1 = m1, s2 = m1 + m2, s3 = m1 + m2 + m3 avoid {0, -2m};
    the summand is c_{m1} c_{m2} c_{m3} (q Psi_m, sin((m + s3) pi x)) over
    D(s1) D(s2) D(s3), and the result is divided by (Psi_m, sin(m pi x)) so
    that it adds directly to the expansion total.
    """
    if cutoff > R3_MAX_CUTOFF:
        raise ValueError(f"cutoff must be <= {R3_MAX_CUTOFF}")
    if eig.m != m:
        raise ValueError("eigenfunction belongs to a different index")
    if m + 3 * cutoff > eig.sine_coeffs.size:
        raise ValueError(
            f"eigenvector basis {eig.sine_coeffs.size} too small for m + 3*cutoff = {m + 3 * cutoff}"
        )
    if not coeffs.covers(eig.sine_coeffs.size + m + 3 * cutoff):
        raise ValueError("coefficient range too short for the eigenvector basis")
    lam = eig.eigenvalue
    supp = coeffs.support(cutoff)
    if supp.size == 0:
        return 0.0
    m1, m2, m3 = (g.ravel() for g in np.meshgrid(supp, supp, supp, indexing="ij"))
    s1, s2, s3 = m1, m1 + m2, m1 + m2 + m3
    keep = ~(_excluded(m, s1) | _excluded(m, s2) | _excluded(m, s3))
    s1, s2, s3 = s1[keep], s2[keep], s3[keep]
    num = coeffs.at(m1[keep]) * coeffs.at(m2[keep]) * coeffs.at(m3[keep])
    targets, inverse = np.unique(m + s3, return_inverse=True)
    qpsi = _q_psi_sin(targets, coeffs, eig)[inverse]
    den = _guard(m, lam, s1, delta) * _guard(m, lam, s2, delta) * _guard(m, lam, s3, delta)
    u_m = float(eig.inner_sin(m))
    return float(np.sum(num * qpsi / den)) / u_m


# --------------------------------------------------------------------------
# integrated channels


@dataclass(frozen=True)
class AuxiliaryIntegrals:
    """Running integrals of the even/odd parts on the table grid.

    Q_tilde(x) = int_0^x q~,  Q_hat(x) = int_0^x q^,
    G_tilde_pm(x) = int_0^x q~(t) e^{+-2i m pi t} dt - x int_0^1 q~(t) e^{+-2i m pi t} dt,
    and G_hat_pm likewise with q^.
    """

    m: int
    x: np.ndarray = field(repr=False)
    Q_tilde: np.ndarray = field(repr=False)
    Q_hat: np.ndarray = field(repr=False)
    G_tilde_plus: np.ndarray = field(repr=False)
    G_tilde_minus: np.ndarray = field(repr=False)
    G_hat_plus: np.ndarray = field(repr=False)
    G_hat_minus: np.ndarray = field(repr=False)
    g_hat_coefficient_mismatch: float = float("nan")

    def endpoint_residuals(self) -> dict[str, float]:
        out = {"Q_tilde(1)": abs(self.Q_tilde[-1]), "Q_hat(1)": abs(self.Q_hat[-1])}
        for name in ("G_tilde_plus", "G_tilde_minus", "G_hat_plus", "G_hat_minus"):
            g = getattr(self, name)
            out[f"{name}(0)"] = abs(g[0])
            out[f"{name}(1)"] = abs(g[-1])
        return {k: float(v) for k, v in out.items()}


def _running_oscillatory(values, phase, x, h):
    f = values * np.exp(1j * phase)
    run = cumulative_simpson_uniform(f.real, h) + 1j * cumulative_simpson_uniform(f.imag, h)
    return run - x * run[-1]


def auxiliary_integrals(pair: EvenOddPair, m: int, tol: float = 1e-9) -> AuxiliaryIntegrals:
    """Q~, Q^, G~+-, G^+- for index m from a mean-free potential."""
    even, odd = pair.even_part.values, pair.odd_part.values
    h = pair.even_part.h
    x = pair.even_part.x
    c0 = simpson_uniform(even + odd, h)
    if abs(c0) > tol:
        raise PotentialError(f"potential mean c0={c0:.3e} exceeds {tol:g}; normalise first")
    phase = 2.0 * m * np.pi * x
    g_hat_plus = _running_oscillatory(odd, phase, x, h)
    return AuxiliaryIntegrals(
        m=m,
        x=x,
        Q_tilde=cumulative_simpson_uniform(even, h),
        Q_hat=cumulative_simpson_uniform(odd, h),
        G_tilde_plus=_running_oscillatory(even, phase, x, h),
        G_tilde_minus=_running_oscillatory(even, -phase, x, h),
        G_hat_plus=g_hat_plus,
        G_hat_minus=_running_oscillatory(odd, -phase, x, h),
        g_hat_coefficient_mismatch=_g_hat_mismatch(even + odd, odd, g_hat_plus, m, x, h),
    )


def _g_hat_mismatch(q, odd, g_hat_plus, m, x, h, span: int = 4) -> float:
    """Largest gap between the odd-system Fourier coefficients of G^+ computed by
    quadrature and the closed form c_{k-2m}/(i pi k) + 2/(k pi)^2 int q^ e^{2i m pi t},
    k = 2 m1 + 1 for |m1| <= span.  Diagnostic only."""
    centered = g_hat_plus - simpson_uniform(g_hat_plus.real, h) - 1j * simpson_uniform(g_hat_plus.imag, h)
    tail = simpson_uniform(odd * np.cos(2 * m * np.pi * x), h) + 1j * simpson_uniform(
        odd * np.sin(2 * m * np.pi * x), h
    )
    worst = 0.0
    for m1 in range(-span, span + 1):
        k = 2 * m1 + 1
        basis = np.exp(-1j * k * np.pi * x)
        f = centered * basis
        numeric = simpson_uniform(f.real, h) + 1j * simpson_uniform(f.imag, h)
        c = simpson_uniform(q * np.cos((k - 2 * m) * np.pi * x), h)
        closed = c / (1j * np.pi * k) + 2.0 / (k * np.pi) ** 2 * tail
        worst = max(worst, abs(numeric - closed))
    return float(worst)
