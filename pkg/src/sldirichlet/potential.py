"""Potentials q on [0, 1]: representation, sampling and cosine analysis.

A potential is described by a :class:`PotentialSpec`, either analytically
(a constant plus a finite trigonometric polynomial in ``cos(k pi x)`` and
``sin(k pi x)``) or by samples that are linearly interpolated.  Everything
downstream consumes the cosine coefficients

    c_m = int_0^1 q(x) cos(m pi x) dx,     c_{-m} = c_m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from scipy import fft
from scipy.integrate import cumulative_simpson, simpson

__all__ = [
    "PotentialError",
    "PotentialSpec",
    "PotentialTable",
    "CosineCoeffs",
    "HypothesisReport",
    "EvenOddPair",
    "TRIG_TOL",
    "GRID_TOL",
    "sample",
    "evaluate",
    "cosine_coefficients",
    "even_odd_split",
    "mean_normalize",
    "check_hypotheses",
    "l2_norm_squared",
    "simpson_uniform",
    "cumulative_simpson_uniform",
    "grid_size_for",
    "parse_potential",
    "format_potential",
    "load_potential",
]

TRIG_TOL = 1e-9
GRID_TOL = 1e-6

# resolution used for quantities that need a table but have no user grid
_DEFAULT_POINTS = 2**14 + 1


class PotentialError(ValueError):
    """Malformed potential description or unusable sampling request."""


Kind = Literal["trig", "grid", "zero", "constant"]
Basis = Literal["cos", "sin"]


@dataclass(frozen=True)
class PotentialSpec:
    """Description of q on [0, 1].

    ``trig``:     q(x) = constant_value + sum amp * {cos,sin}(k pi x)
    ``grid``:     piecewise-linear through ``grid_samples`` (x, value)
    ``zero``:     q = 0
    ``constant``: q = constant_value
    """

    kind: Kind
    trig_terms: tuple[tuple[str, int, float], ...] = ()
    constant_value: float = 0.0
    grid_samples: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("trig", "grid", "zero", "constant"):
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        terms = tuple((str(b), int(k), float(a)) for b, k, a in self.trig_terms)
        samples = tuple((float(x), float(v)) for x, v in self.grid_samples)
        object.__setattr__(self, "trig_terms", terms)
        object.__setattr__(self, "grid_samples", samples)
        object.__setattr__(self, "constant_value", float(self.constant_value))
        if not math.isfinite(self.constant_value):
            raise PotentialError("constant_value must be finite")

        if self.kind == "trig":
            seen = set()
            for basis, k, amp in terms:
                if basis not in ("cos", "sin"):
                    raise PotentialError(f"trig basis must be cos or sin, got {basis!r}")
                if k < 1:
                    raise PotentialError(f"harmonic must be a positive integer, got {k}")
                if not math.isfinite(amp):
                    raise PotentialError("trig amplitudes must be finite")
                if (basis, k) in seen:
                    raise PotentialError(f"duplicate harmonic {basis}:{k}")
                seen.add((basis, k))
        elif terms:
            raise PotentialError(f"{self.kind} potential takes no trig terms")

        if self.kind == "grid":
            if len(samples) < 3:
                raise PotentialError("grid potential needs at least 3 samples")
            xs = np.array([s[0] for s in samples])
            vs = np.array([s[1] for s in samples])
            if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
                raise PotentialError("grid samples must be finite")
            if xs[0] != 0.0 or xs[-1] != 1.0:
                raise PotentialError("grid samples must start at x=0 and end at x=1")
            if np.any(np.diff(xs) <= 0):
                raise PotentialError("grid sample abscissae must be strictly increasing")
        elif samples:
            raise PotentialError(f"{self.kind} potential takes no grid samples")

        if self.kind == "zero" and self.constant_value != 0.0:
            raise PotentialError("zero potential cannot carry a constant")

    # convenience constructors
    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls("zero")

    @classmethod
    def constant(cls, value: float) -> "PotentialSpec":
        return cls("constant", constant_value=value)

    @classmethod
    def trig(cls, terms, constant: float = 0.0) -> "PotentialSpec":
        return cls("trig", trig_terms=tuple(terms), constant_value=constant)

    @classmethod
    def cosines(cls, amplitudes: dict[int, float], constant: float = 0.0) -> "PotentialSpec":
        """Cosine polynomial ``constant + sum_k amplitudes[k] cos(k pi x)``."""
        return cls.trig([("cos", k, a) for k, a in sorted(amplitudes.items())], constant)

    @classmethod
    def from_function(cls, func, n_points: int = 4097) -> "PotentialSpec":
        """Grid potential sampled from a vectorised callable on a uniform grid."""
        x = np.linspace(0.0, 1.0, n_points)
        return cls("grid", grid_samples=tuple(zip(x, np.asarray(func(x), dtype=float))))

    @property
    def is_cosine_polynomial(self) -> bool:
        return self.kind in ("zero", "constant") or (
            self.kind == "trig" and all(b == "cos" for b, _, _ in self.trig_terms)
        )

    @property
    def bandwidth(self) -> int | None:
        """Largest harmonic for cosine polynomials, ``None`` otherwise."""
        if not self.is_cosine_polynomial:
            return None
        return max((k for _, k, a in self.trig_terms if a != 0.0), default=0)

    def reflected(self) -> "PotentialSpec":
        """The potential x -> q(1 - x)."""
        if self.kind == "trig":
            # cos(k pi (1-x)) = (-1)^k cos(k pi x),  sin(k pi (1-x)) = -(-1)^k sin(k pi x)
            terms = [
                (b, k, a * (-1) ** k if b == "cos" else -a * (-1) ** k)
                for b, k, a in self.trig_terms
            ]
            return replace(self, trig_terms=tuple(terms))
        if self.kind == "grid":
            samples = tuple((1.0 - x, v) for x, v in reversed(self.grid_samples))
            samples = ((0.0, samples[0][1]),) + samples[1:-1] + ((1.0, samples[-1][1]),)
            return replace(self, grid_samples=samples)
        return self

    def shifted(self, s: float) -> "PotentialSpec":
        """The potential q + s."""
        if self.kind == "grid":
            return replace(self, grid_samples=tuple((x, v + s) for x, v in self.grid_samples))
        if self.kind == "zero":
            return PotentialSpec.constant(s) if s != 0.0 else self
        if self.kind == "constant" and self.constant_value + s == 0.0:
            return PotentialSpec.zero()
        return replace(self, constant_value=self.constant_value + s)


@dataclass(frozen=True)
class PotentialTable:
    """q sampled on the uniform grid x_i = i / (n_points - 1)."""

    n_points: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != self.n_points:
            raise PotentialError("table length does not match n_points")
        if not np.all(np.isfinite(values)):
            raise PotentialError("table values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_points)

    @property
    def h(self) -> float:
        return 1.0 / (self.n_points - 1)


@dataclass(frozen=True)
class CosineCoeffs:
    """c_0 ... c_M with the symmetric access rule c_{-m} = c_m.

    Indices beyond ``max_index`` read as 0; ``exact_beyond`` records whether
    that convention is exact (band-limited cosine potentials) or a truncation.
    """

    max_index: int
    c: np.ndarray = field(repr=False)
    exact_beyond: bool = False

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.max_index + 1,):
            raise PotentialError("coefficient array must have max_index + 1 entries")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    def __getitem__(self, m: int) -> float:
        m = abs(int(m))
        return float(self.c[m]) if m <= self.max_index else 0.0

    def at(self, idx) -> np.ndarray:
        """Vectorised symmetric lookup; out-of-range indices give 0."""
        a = np.abs(np.asarray(idx, dtype=np.int64))
        out = np.zeros(a.shape)
        ok = a <= self.max_index
        out[ok] = self.c[a[ok]]
        return out

    def covers(self, m: int) -> bool:
        return self.exact_beyond or abs(m) <= self.max_index

    def support(self, cutoff: int) -> np.ndarray:
        """Indices in [-cutoff, cutoff] with nonzero coefficient, ascending."""
        idx = np.arange(-cutoff, cutoff + 1)
        return idx[self.at(idx) != 0.0]


@dataclass(frozen=True)
class HypothesisReport:
    c0: float
    endpoint_value_gap: float
    endpoint_derivative_gap: float
    l1_norm: float
    tol: float
    admissible: bool


@dataclass(frozen=True)
class EvenOddPair:
    even_part: PotentialTable
    odd_part: PotentialTable


# --------------------------------------------------------------------------
# quadrature helpers


def _check_points(n_points: int, min_exponent: int = 1) -> None:
    n = int(n_points) - 1
    if n < 2**min_exponent or n & (n - 1):
        raise PotentialError(
            f"n_points must be 2^k + 1 with k >= {min_exponent}, got {n_points}"
        )


def grid_size_for(n: int, minimum: int = 9) -> int:
    """Smallest 2^k + 1 that is >= max(n, minimum)."""
    target = max(int(n), minimum, 3) - 1
    return (1 << (target - 1).bit_length()) + 1


def simpson_uniform(values: np.ndarray, h: float) -> float:
    return float(simpson(values, dx=h))


def cumulative_simpson_uniform(values: np.ndarray, h: float) -> np.ndarray:
    """Running integral from 0, starting with 0."""
    return cumulative_simpson(values, dx=h, initial=0.0)


def _simpson_weights(n_points: int) -> np.ndarray:
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * (n_points - 1))


# --------------------------------------------------------------------------
# sampling


def sample(spec: PotentialSpec, x) -> np.ndarray:
    """q evaluated at arbitrary points of [0, 1]."""
    x = np.asarray(x, dtype=float)
    if spec.kind == "zero":
        return np.zeros_like(x)
    if spec.kind == "constant":
        return np.full_like(x, spec.constant_value)
    if spec.kind == "grid":
        xs, vs = np.array(spec.grid_samples).T
        return np.interp(x, xs, vs)
    q = np.full_like(x, spec.constant_value)
    for basis, k, amp in spec.trig_terms:
        q += amp * (np.cos if basis == "cos" else np.sin)(k * np.pi * x)
    return q


def _derivative_at_ends(spec: PotentialSpec) -> tuple[float, float]:
    if spec.kind in ("zero", "constant"):
        return 0.0, 0.0
    if spec.kind == "trig":
        d0 = sum(a * k * np.pi for b, k, a in spec.trig_terms if b == "sin")
        d1 = sum(a * k * np.pi * (-1) ** k for b, k, a in spec.trig_terms if b == "sin")
        return float(d0), float(d1)
    (x0, v0), (x1, v1), (x2, v2) = spec.grid_samples[:3]
    d0 = _three_point(x0, x1, x2, v0, v1, v2, x0)
    (x0, v0), (x1, v1), (x2, v2) = spec.grid_samples[-3:]
    d1 = _three_point(x0, x1, x2, v0, v1, v2, x2)
    return d0, d1


def _three_point(x0, x1, x2, v0, v1, v2, at) -> float:
    # derivative of the interpolating parabola; second order on any spacing
    return (
        v0 * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + v1 * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + v2 * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1))
    )


def evaluate(spec: PotentialSpec, n_points: int) -> PotentialTable:
    """Tabulate q on the uniform grid of ``n_points = 2^k + 1`` (k >= 2) points."""
    _check_points(n_points, min_exponent=2)
    return PotentialTable(n_points, sample(spec, np.linspace(0.0, 1.0, n_points)))


def _uniform_samples(spec: PotentialSpec) -> np.ndarray | None:
    if spec.kind != "grid":
        return None
    xs = np.array([s[0] for s in spec.grid_samples])
    n = xs.size
    if (n - 1) & (n - 2) or not np.allclose(xs, np.linspace(0.0, 1.0, n), rtol=0, atol=1e-14):
        return None
    return np.array([s[1] for s in spec.grid_samples])


# --------------------------------------------------------------------------
# Fourier analysis


def _trig_cosine_coefficients(spec: PotentialSpec, max_index: int) -> np.ndarray:
    c = np.zeros(max_index + 1)
    c[0] = spec.constant_value
    m = np.arange(max_index + 1)
    for basis, k, amp in spec.trig_terms:
        if basis == "cos":
            if k <= max_index:
                c[k] += amp / 2.0
        else:
            # int_0^1 sin(k pi x) cos(m pi x) dx = 2k / (pi (k^2 - m^2)) for k + m odd
            odd = (k + m) % 2 == 1
            c[odd] += amp * 2.0 * k / (np.pi * (k * k - m[odd] ** 2))
    return c


def cosine_coefficients(
    spec: PotentialSpec, max_index: int, n_points: int | None = None
) -> CosineCoeffs:
    """c_0 ... c_max_index of q.

    Trig, constant and zero potentials use closed forms.  Grid potentials
    are tabulated on ``n_points`` and integrated with composite Simpson,
    evaluated for all m at once through a type-I DCT of the weighted table.
    """
    if max_index < 0:
        raise PotentialError("max_index must be non-negative")
    if spec.kind != "grid":
        c = _trig_cosine_coefficients(spec, max_index)
        return CosineCoeffs(max_index, c, exact_beyond=spec.is_cosine_polynomial)

    if n_points is None:
        n_points = grid_size_for(4 * max_index, minimum=4097)
    _check_points(n_points)
    if n_points < 4 * max_index:
        raise PotentialError(
            f"quadrature grid too coarse: n_points={n_points} < 4*max_index={4 * max_index}"
        )
    table = evaluate(spec, n_points)
    return CosineCoeffs(max_index, _simpson_cosine_transform(table.values, max_index))


def _simpson_cosine_transform(values: np.ndarray, max_index: int) -> np.ndarray:
    n = values.size
    f = _simpson_weights(n) * values
    # DCT-I counts interior nodes twice and end nodes once
    full = 0.5 * (fft.dct(f, type=1) + f[0] + f[-1] * (-1.0) ** np.arange(n))
    if max_index < n:
        return full[: max_index + 1]
    return np.concatenate([full, np.zeros(max_index + 1 - n)])


def even_odd_split(table: PotentialTable) -> EvenOddPair:
    """q~ = (q(x) + q(1-x))/2 and q^ = (q(x) - q(1-x))/2 by index reflection."""
    q = table.values
    r = q[::-1]
    return EvenOddPair(
        PotentialTable(table.n_points, (q + r) / 2.0),
        PotentialTable(table.n_points, (q - r) / 2.0),
    )


def _mean(spec: PotentialSpec) -> float:
    if spec.kind != "grid":
        return float(_trig_cosine_coefficients(spec, 0)[0])
    vals = _uniform_samples(spec)
    if vals is not None:
        return simpson_uniform(vals, 1.0 / (vals.size - 1))
    # exact mean of the piecewise-linear interpolant
    xs, vs = np.array(spec.grid_samples).T
    return float(np.sum(np.diff(xs) * (vs[1:] + vs[:-1]) / 2.0))


def mean_normalize(spec: PotentialSpec) -> tuple[PotentialSpec, float]:
    """Remove c_0 from q.  Returns the shifted spec and the removed mean."""
    c0 = _mean(spec)
    if c0 == 0.0:
        return spec, 0.0
    if spec.kind == "constant":
        return PotentialSpec.zero(), c0
    if spec.kind == "trig":
        return replace(spec, constant_value=spec.constant_value - c0), c0
    return spec.shifted(-c0), c0


def l2_norm_squared(spec: PotentialSpec) -> float:
    """int_0^1 q^2 dx; closed form for trig specs."""
    if spec.kind in ("zero", "constant"):
        return spec.constant_value**2
    if spec.kind == "grid":
        vals = _uniform_samples(spec)
        if vals is None:
            vals = evaluate(spec, _DEFAULT_POINTS).values
        return simpson_uniform(vals**2, 1.0 / (vals.size - 1))
    funcs = [("one", 0, spec.constant_value)] + list(spec.trig_terms)
    total = 0.0
    for b1, k1, a1 in funcs:
        for b2, k2, a2 in funcs:
            total += a1 * a2 * _product_integral(b1, k1, b2, k2)
    return float(total)


def _product_integral(b1: str, k1: int, b2: str, k2: int) -> float:
    """int_0^1 f1 f2 for f in {1, cos(k pi x), sin(k pi x)}."""
    if b1 == "one" and b2 == "one":
        return 1.0
    if b2 == "one":
        b1, k1, b2, k2 = b2, k2, b1, k1
    if b1 == "one":
        return 0.0 if b2 == "cos" else (1.0 - (-1) ** k2) / (k2 * np.pi)
    if b1 == b2:
        return 0.5 if k1 == k2 else 0.0
    s, c = (k1, k2) if b1 == "sin" else (k2, k1)
    if (s + c) % 2 == 0:
        return 0.0
    return 2.0 * s / (np.pi * (s * s - c * c))


def check_hypotheses(spec: PotentialSpec, tol: float | None = None) -> HypothesisReport:
    """Check c_0 = 0 and matching endpoint values and derivatives."""
    if tol is None:
        tol = GRID_TOL if spec.kind == "grid" else TRIG_TOL
    c0 = _mean(spec)
    q0, q1 = sample(spec, [0.0, 1.0])
    d0, d1 = _derivative_at_ends(spec)
    vals = _uniform_samples(spec)
    if vals is None:
        vals = evaluate(spec, _DEFAULT_POINTS).values
    l1 = simpson_uniform(np.abs(vals), 1.0 / (vals.size - 1))
    value_gap, deriv_gap = abs(q0 - q1), abs(d0 - d1)
    return HypothesisReport(
        c0=c0,
        endpoint_value_gap=float(value_gap),
        endpoint_derivative_gap=float(deriv_gap),
        l1_norm=float(l1),
        tol=tol,
        admissible=bool(abs(c0) <= tol and value_gap <= tol and deriv_gap <= tol),
    )


# --------------------------------------------------------------------------
# text format:  key = value lines, '#' comments


def parse_potential(text: str) -> PotentialSpec:
    kind = None
    terms, samples, value = [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (p.strip() for p in line.partition("="))
        if not sep:
            raise PotentialError(f"line {lineno}: expected key = value")
        try:
            if key == "type":
                if kind is not None:
                    raise PotentialError(f"line {lineno}: type given twice")
                kind = val
            elif key == "term":
                basis, k, amp = (p.strip() for p in val.split(":"))
                terms.append((basis, int(k), float(amp)))
            elif key == "sample":
                x, v = (p.strip() for p in val.split(","))
                samples.append((float(x), float(v)))
            elif key == "value":
                value = float(val)
            else:
                raise PotentialError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, PotentialError):
                raise
            raise PotentialError(f"line {lineno}: cannot parse {val!r}") from exc
    if kind is None:
        raise PotentialError("missing 'type = ...' line")
    if kind == "constant" and value is None:
        raise PotentialError("constant potential needs 'value = V'")
    if kind in ("zero", "grid") and value is not None:
        raise PotentialError(f"'value' is not allowed for {kind} potentials")
    return PotentialSpec(
        kind,
        trig_terms=tuple(terms),
        constant_value=0.0 if value is None else value,
        grid_samples=tuple(samples),
    )


def format_potential(spec: PotentialSpec) -> str:
    lines = [f"type = {spec.kind}"]
    if spec.kind == "constant" or (spec.kind == "trig" and spec.constant_value != 0.0):
        lines.append(f"value = {spec.constant_value!r}")
    lines += [f"term = {b}:{k}:{a!r}" for b, k, a in spec.trig_terms]
    lines += [f"sample = {x!r},{v!r}" for x, v in spec.grid_samples]
    return "\n".join(lines) + "\n"


def load_potential(path) -> PotentialSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_potential(fh.read())
