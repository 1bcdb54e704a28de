"""Dirichlet eigenvalues of -y'' + q y on [0, 1].

Two independent routes:

* sine-basis Galerkin: H_jk = (j pi)^2 [j = k] + c_|j-k| - c_(j+k), from
  2 sin(j pi x) sin(k pi x) = cos((j-k) pi x) - cos((j+k) pi x);
* Pruefer shooting: RK4 on (y, y') with zero counting, then root finding on
  the continuous Pruefer angle at x = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numba
import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from .potential import (
    CosineCoeffs,
    PotentialSpec,
    cosine_coefficients,
    grid_size_for,
    mean_normalize,
    sample,
)

__all__ = [
    "SolverError",
    "BracketError",
    "DegenerateSpectrumError",
    "GalerkinOperator",
    "Spectrum",
    "EigenfunctionCoeffs",
    "DEFAULT_BASIS",
    "default_basis",
    "build_galerkin_matrix",
    "galerkin_operator",
    "solve_spectrum_galerkin",
    "solve_spectrum_shooting",
    "solve_eigenvalue_shooting",
    "eigenfunction_sine_coeffs",
]

DEFAULT_BASIS = 256
DEGENERACY_GAP = 1e-10
SHOOTING_STEPS_PER_HALF_WAVE = 4096
MAX_BRACKET_WIDENINGS = 12


class SolverError(RuntimeError):
    pass


class BracketError(SolverError):
    pass


class DegenerateSpectrumError(SolverError):
    pass


def default_basis(n_modes: int) -> int:
    return max(DEFAULT_BASIS, 8 * n_modes)


@dataclass(frozen=True)
class GalerkinOperator:
    n_basis: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.entries.setflags(write=False)


@dataclass(frozen=True)
class Spectrum:
    method: Literal["galerkin", "shooting"]
    n_basis: int
    eigenvalues: np.ndarray
    mean_shift: float = 0.0
    est_error: np.ndarray | None = None

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, m: int) -> float:
        """1-based access: ``spectrum[m]`` is lambda_m."""
        if m < 1:
            raise IndexError("eigenvalue indices start at 1")
        return float(self.eigenvalues[m - 1])


@dataclass(frozen=True)
class EigenfunctionCoeffs:
    """Coefficients (Psi_m, sqrt(2) sin(k pi x)), k = 1..n_basis."""

    m: int
    sine_coeffs: np.ndarray
    eigenvalue: float
    normalized: bool = True

    def inner_sin(self, k) -> np.ndarray:
        """(Psi_m, sin(k pi x)) for integer k of either sign; 0 outside the basis."""
        k = np.asarray(k, dtype=np.int64)
        a = np.abs(k)
        out = np.zeros(k.shape)
        ok = (a >= 1) & (a <= self.sine_coeffs.size)
        out[ok] = np.sign(k[ok]) * self.sine_coeffs[a[ok] - 1] / math.sqrt(2.0)
        return out


# --------------------------------------------------------------------------
# Galerkin


def build_galerkin_matrix(coeffs: CosineCoeffs, n_basis: int) -> GalerkinOperator:
    if n_basis < 1:
        raise ValueError("n_basis must be positive")
    if not coeffs.covers(2 * n_basis):
        raise ValueError(
            f"coefficients cover indices up to {coeffs.max_index}, "
            f"need {2 * n_basis} for n_basis={n_basis}"
        )
    j = np.arange(1, n_basis + 1)
    H = coeffs.at(j[:, None] - j[None, :]) - coeffs.at(j[:, None] + j[None, :])
    H[np.diag_indices(n_basis)] += (j * np.pi) ** 2
    return GalerkinOperator(n_basis, H)


def galerkin_operator(spec: PotentialSpec, n_basis: int) -> GalerkinOperator:
    """Galerkin matrix of q itself (mean included)."""
    return build_galerkin_matrix(_coefficients_for_basis(spec, n_basis), n_basis)


def _coefficients_for_basis(spec: PotentialSpec, n_basis: int) -> CosineCoeffs:
    max_index = 2 * n_basis
    n_points = grid_size_for(4 * max_index, minimum=4097) if spec.kind == "grid" else None
    return cosine_coefficients(spec, max_index, n_points)


def _lowest_eigenvalues(H: np.ndarray, n_modes: int) -> np.ndarray:
    try:
        w = scipy.linalg.eigh(H, eigvals_only=True, subset_by_index=[0, n_modes - 1])
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"symmetric eigensolver failed: {exc}") from exc
    _check_simple(w)
    return w


def _check_simple(w: np.ndarray) -> None:
    gaps = np.diff(w)
    if gaps.size and gaps.min() < DEGENERACY_GAP:
        i = int(np.argmin(gaps))
        raise DegenerateSpectrumError(
            f"eigenvalues {i + 1} and {i + 2} coincide to {gaps[i]:.3e}"
        )


def solve_spectrum_galerkin(
    spec: PotentialSpec,
    n_modes: int,
    n_basis: int | None = None,
    estimate_error: bool = False,
) -> Spectrum:
    """Lowest ``n_modes`` Dirichlet eigenvalues from the sine-basis Galerkin matrix.

    The mean c_0 is removed before assembly and added back afterwards.  With
    ``estimate_error`` the basis is doubled and the eigenvalue change is
    reported as ``est_error`` (Rayleigh-Ritz values decrease with n_basis).
    """
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    if n_basis is None:
        n_basis = default_basis(n_modes)
    if n_basis < 4 * n_modes:
        raise ValueError(f"n_basis={n_basis} must be at least 4*n_modes={4 * n_modes}")

    normalized, c0 = mean_normalize(spec)
    op = galerkin_operator(normalized, n_basis)
    lam = _lowest_eigenvalues(op.entries, n_modes)
    err = None
    if estimate_error:
        fine = _lowest_eigenvalues(galerkin_operator(normalized, 2 * n_basis).entries, n_modes)
        err = np.abs(lam - fine)
    return Spectrum("galerkin", n_basis, lam + c0, mean_shift=c0, est_error=err)


def eigenfunction_sine_coeffs(op: GalerkinOperator, m: int) -> EigenfunctionCoeffs:
    """Normalised m-th eigenvector of H, sign fixed so component m is positive."""
    if not 1 <= m <= op.n_basis:
        raise ValueError(f"m must lie in 1..{op.n_basis}")
    hi = min(m, op.n_basis - 1)
    w, v = scipy.linalg.eigh(op.entries, subset_by_index=[max(m - 2, 0), hi])
    k = m - 1 - max(m - 2, 0)
    gaps = np.abs(np.delete(w, k) - w[k])
    if gaps.size and gaps.min() < DEGENERACY_GAP:
        raise DegenerateSpectrumError(f"eigenvalue {m} is not isolated (gap {gaps.min():.3e})")
    vec = v[:, k]
    vec = vec / np.linalg.norm(vec)
    if vec[m - 1] < 0:
        vec = -vec
    return EigenfunctionCoeffs(m, vec, float(w[k]))


# --------------------------------------------------------------------------
# shooting


@numba.njit(cache=True)
def _shoot(qs, h, lam):
    """RK4 for y'' = (q - lam) y, y(0) = 0, y'(0) = 1.

    ``qs`` holds q at spacing h/2.  Returns (interior sign changes, y(1), y'(1)).
    """
    n = (qs.size - 1) // 2
    y, p = 0.0, 1.0
    zeros = 0
    for i in range(n):
        a0 = qs[2 * i] - lam
        a1 = qs[2 * i + 1] - lam
        a2 = qs[2 * i + 2] - lam
        k1y, k1p = p, a0 * y
        k2y, k2p = p + 0.5 * h * k1p, a1 * (y + 0.5 * h * k1y)
        k3y, k3p = p + 0.5 * h * k2p, a1 * (y + 0.5 * h * k2y)
        k4y, k4p = p + h * k3p, a2 * (y + h * k3y)
        yn = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if i < n - 1 and ((y > 0.0 and yn <= 0.0) or (y < 0.0 and yn >= 0.0)):
            zeros += 1
        y = yn
        # keep the amplitude bounded for strongly negative lam - q
        s = abs(y) + abs(p)
        if s > 1e100:
            y /= s
            p /= s
    return zeros, y, p


class _Shooter:
    def __init__(self, spec: PotentialSpec, lam_ref: float):
        half_waves = max(1, math.ceil(math.sqrt(max(lam_ref, 0.0)) / math.pi))
        n = SHOOTING_STEPS_PER_HALF_WAVE * half_waves
        self.h = 1.0 / n
        self.qs = np.ascontiguousarray(sample(spec, np.linspace(0.0, 1.0, 2 * n + 1)))

    def angle(self, lam: float) -> float:
        """Pruefer angle theta(1) with y = r sin(theta), y' = r cos(theta)."""
        zeros, y, p = _shoot(self.qs, self.h, float(lam))
        s = -1.0 if zeros % 2 else 1.0
        phi = math.atan2(s * y, s * p)
        if phi < 0.0:
            phi += 2.0 * math.pi
        return zeros * math.pi + phi


def solve_eigenvalue_shooting(
    spec: PotentialSpec, m: int, bracket_pad: float = 1.0
) -> float:
    """The m-th Dirichlet eigenvalue by Pruefer shooting.

    lambda_m is the root of theta(1; lambda) = m pi, which is continuous and
    increasing in lambda.  The search starts in [(m pi)^2 - pad, (m pi)^2 + pad]
    and doubles the pad until the root is bracketed.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if bracket_pad <= 0:
        raise ValueError("bracket_pad must be positive")
    center = (m * math.pi) ** 2
    target = m * math.pi
    pad = float(bracket_pad)
    for _ in range(MAX_BRACKET_WIDENINGS + 1):
        lo, hi = center - pad, center + pad
        shooter = _Shooter(spec, hi)
        f_lo = shooter.angle(lo) - target
        f_hi = shooter.angle(hi) - target
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if f_lo < 0.0 < f_hi:
            return brentq(
                lambda lam: shooter.angle(lam) - target,
                lo,
                hi,
                xtol=1e-13 * max(1.0, abs(center)),
                rtol=1e-15,
                maxiter=200,
            )
        pad *= 2.0
    raise BracketError(
        f"eigenvalue {m} not bracketed within +/-{pad / 2:.3g} of (m pi)^2"
    )


def solve_spectrum_shooting(spec: PotentialSpec, n_modes: int, bracket_pad: float = 1.0) -> Spectrum:
    lam = np.array([solve_eigenvalue_shooting(spec, m, bracket_pad) for m in range(1, n_modes + 1)])
    return Spectrum("shooting", 0, lam)
