"""Batch front end.

    python -m sldirichlet spectrum --potential cos2.pot --modes 8
    python -m sldirichlet ambarzumyan --potential cos2.pot --m-max 32 --expect nonzero

Exit status: 0 success, 1 failed expectation (``--expect`` mismatch or a
failed lemma check), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from .asymptotics import DEFAULT_CUTOFF, M_MIN, lemma1_expansion
from .harness import (
    TableReport,
    ambarzumyan_deviation,
    compare_spectrum_vs_expansion,
    expansion_coefficients,
    lemma_checks,
)
from .potential import PotentialError, cosine_coefficients, format_potential, load_potential
from .solver import SolverError, solve_spectrum_galerkin, solve_spectrum_shooting

COMMANDS = ("spectrum", "coeffs", "expand", "compare", "ambarzumyan", "lemmas")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential_path: str
    n_modes: int = 8
    m_max: int | None = None
    max_m: int = 16
    n_basis: int | None = 256
    cutoff: int = DEFAULT_CUTOFF
    method: str = "galerkin"
    tol: float | None = None
    out_path: str | None = None
    fmt: str = "csv"
    expect: str | None = None
    dump_spec: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for name in ("n_modes", "m_max", "max_m", "n_basis", "cutoff", "tol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise UsageError(f"{name} must be positive")
        if self.method not in ("galerkin", "shooting"):
            raise UsageError(f"unknown method {self.method!r}")
        if self.fmt not in ("csv", "summary"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.expect not in (None, "zero", "nonzero"):
            raise UsageError("--expect takes zero or nonzero")


# --------------------------------------------------------------------------
# rendering


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


def format_report(report, style: str = "csv") -> str:
    """Render a report as CSV (header + rows) or as a ``key: value`` block."""
    if style == "csv":
        lines = [",".join(report.columns)]
        lines += [",".join(_cell(v) for v in row) for row in report.rows]
        return "\n".join(lines) + "\n"
    if style == "summary":
        items = report.summary_items()
        width = max((len(k) for k, _ in items), default=0)
        return "".join(f"{k.ljust(width)} : {_cell(v)}\n" for k, v in items)
    raise ValueError(f"unknown report style {style!r}")


# --------------------------------------------------------------------------
# commands


def _spectrum(cfg, spec):
    if cfg.method == "shooting":
        s = solve_spectrum_shooting(spec, cfg.n_modes)
        err = [math.nan] * cfg.n_modes
    else:
        s = solve_spectrum_galerkin(spec, cfg.n_modes, max(cfg.n_basis, 4 * cfg.n_modes), estimate_error=True)
        err = s.est_error
    rows = [(m, float(lam), float(e)) for m, lam, e in zip(range(1, cfg.n_modes + 1), s.eigenvalues, err)]
    return TableReport(
        ("m", "eigenvalue", "est_error"),
        rows,
        {"method": s.method, "n_basis": s.n_basis, "mean_shift": s.mean_shift, "n_modes": cfg.n_modes},
    )


def _coeffs(cfg, spec):
    c = cosine_coefficients(spec, cfg.max_m)
    return TableReport(
        ("m", "c_m"),
        [(m, float(v)) for m, v in enumerate(c.c)],
        {"max_index": c.max_index, "exact_beyond": c.exact_beyond},
    )


def _expand(cfg, spec):
    coeffs = expansion_coefficients(spec, cfg.n_modes, cfg.cutoff)
    rows = []
    for m in range(1, cfg.n_modes + 1):
        t = lemma1_expansion(m, coeffs, cfg.cutoff, m_min=1)
        rows.append((m, t.base, t.c0, t.minus_c2m, t.a1, t.b1, t.a2, t.b2, t.total, t.tail_bound))
    return TableReport(
        ("m", "base", "c0", "minus_c2m", "a1", "b1", "a2", "b2", "total", "tail_bound"),
        rows,
        {"cutoff": cfg.cutoff, "n_modes": cfg.n_modes},
    )


def _compare(cfg, spec):
    return compare_spectrum_vs_expansion(
        spec,
        (1, cfg.n_modes),
        n_basis=max(cfg.n_basis, 8 * cfg.n_modes),
        cutoff=cfg.cutoff,
        allow_inadmissible=True,
        potential_id=cfg.potential_path,
    )


def _ambarzumyan(cfg, spec):
    m_max = cfg.m_max or 32
    return ambarzumyan_deviation(spec, m_max, cfg.tol, max(cfg.n_basis, 8 * m_max))


def _lemmas(cfg, spec):
    hi = cfg.m_max or 64
    return lemma_checks(
        spec, (M_MIN, hi), cutoff=cfg.cutoff, n_basis=max(cfg.n_basis, 8 * hi), allow_inadmissible=True
    )


_DISPATCH = {
    "spectrum": _spectrum,
    "coeffs": _coeffs,
    "expand": _expand,
    "compare": _compare,
    "ambarzumyan": _ambarzumyan,
    "lemmas": _lemmas,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sldirichlet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--potential", required=True, metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--basis", type=int, default=256, metavar="N")
        p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, metavar="C")
        p.add_argument("--tol", type=float, metavar="T")
        p.add_argument("--format", choices=("csv", "summary"), default="csv")
        p.add_argument("--dump-spec", action="store_true", help="echo the parsed potential and exit")
        return p

    for name in ("spectrum", "expand", "compare"):
        p = common(sub.add_parser(name))
        p.add_argument("--modes", type=int, default=8, metavar="M")
        if name == "spectrum":
            p.add_argument("--method", choices=("galerkin", "shooting"), default="galerkin")
    p = common(sub.add_parser("coeffs"))
    p.add_argument("--max-m", type=int, default=16, metavar="M")
    p = common(sub.add_parser("ambarzumyan"))
    p.add_argument("--m-max", type=int, default=32, metavar="M")
    p.add_argument("--expect", choices=("zero", "nonzero"))
    p = common(sub.add_parser("lemmas"))
    p.add_argument("--m-max", type=int, default=64, metavar="M")
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(
        command=ns.command,
        potential_path=ns.potential,
        n_modes=getattr(ns, "modes", 8),
        m_max=getattr(ns, "m_max", None),
        max_m=getattr(ns, "max_m", 16),
        n_basis=ns.basis,
        cutoff=ns.cutoff,
        method=getattr(ns, "method", "galerkin"),
        tol=ns.tol,
        out_path=ns.out,
        fmt=ns.format,
        expect=getattr(ns, "expect", None),
        dump_spec=ns.dump_spec,
    )


def parse_and_dispatch(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(ns)
        spec = load_potential(cfg.potential_path)
        if cfg.dump_spec:
            text = format_potential(spec)
            status = EXIT_OK
        else:
            report = _DISPATCH[cfg.command](cfg, spec)
            text = format_report(report, cfg.fmt)
            status = EXIT_OK
            if cfg.command == "ambarzumyan" and cfg.expect:
                wanted = "zero_potential" if cfg.expect == "zero" else "nonzero_potential"
                if report.verdict != wanted:
                    status = EXIT_FAILED
            if cfg.command == "lemmas" and not report.passed:
                status = EXIT_FAILED
    except (UsageError, PotentialError, OSError, ValueError) as exc:
        print(f"sldirichlet: error: {exc}", file=stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"sldirichlet: solver error: {exc}", file=stderr)
        return EXIT_USAGE

    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
