"""Command-line front end.

Subcommands: transform, iterate, verify, spectral, figures. All outputs are
deterministic data files (CSV with 17-significant-digit values, or JSON), so
identical flags produce byte-identical bytes. Exit codes: 0 success, 1 a
verification check failed, 2 usage error, 3 I/O error.

The DLAB_THREADS environment variable caps the worker count. Quadrature
reductions are pairwise and order-fixed, so results do not depend on it; it
exists to bound resource use on shared machines.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import residuals as res
from . import spectral
from .distributions import FAMILIES, DistributionSpec, median
from .grid import GridDensity, cdf_of, from_analytic, format_value, simpson
from .transforms import (
    TransformKind,
    iterate,
    trace_csv,
    trace_diagnostics_json,
    transform,
    transform_values,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

_KINDS = {k.value: k for k in TransformKind}
_SUITES = ("normalization", "constants", "ode", "cf", "median", "convergence", "all")


class UsageError(Exception):
    pass


def _worker_cap() -> int:
    raw = os.environ.get("DLAB_THREADS", "")
    if not raw:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise UsageError(f"DLAB_THREADS must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise UsageError(f"DLAB_THREADS must be >= 1, got {cap}")
    return cap


def _parse_params(raw: str | None) -> dict[str, float]:
    if not raw:
        return {}
    out: dict[str, float] = {}
    for item in raw.split(","):
        if not item:
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--params entries must look like key=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise UsageError(f"--params value for {key.strip()!r} is not a number: {val!r}") from exc
    return out


def _build_spec(args: argparse.Namespace) -> DistributionSpec:
    try:
        return DistributionSpec(args.dist, _parse_params(args.params))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _build_grid(spec: DistributionSpec, grid_n: int) -> GridDensity:
    try:
        return from_analytic(spec, grid_n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _reference_specs() -> list[DistributionSpec]:
    return [DistributionSpec(name) for name in FAMILIES]


def cmd_transform(args: argparse.Namespace) -> int:
    spec = _build_spec(args)
    g = _build_grid(spec, args.grid)
    kind = _KINDS[args.kind]
    out = transform(kind, g)
    c = cdf_of(g)
    lines = ["x,f,F,transformed"]
    xs = g.xs
    for i in range(g.n):
        lines.append(
            f"{format_value(float(xs[i]))},{format_value(float(g.values[i]))},"
            f"{format_value(float(c.cumvals[i]))},{format_value(float(out.values[i]))}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_iterate(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError(f"iterate requires --n >= 1, got {args.n}")
    if args.out is None:
        raise UsageError("iterate requires --out (a diagnostics sidecar is written next to it)")
    spec = _build_spec(args)
    g = _build_grid(spec, args.grid)
    trace = iterate(_KINDS[args.kind], g, args.n)
    _write_text(args.out, trace_csv(trace))
    root, _ = os.path.splitext(args.out)
    _write_text(root + ".diagnostics.json", trace_diagnostics_json(trace))
    return EXIT_OK


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    observed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.tolerance


def _checks_constants() -> list[Check]:
    from .transforms import bernoulli_entropy

    n = 65537
    z = np.linspace(0.0, 1.0, n)
    entropy = bernoulli_entropy(z)
    sin = np.sin(math.pi * z)
    return [
        Check("type1_normalizer", math.pi * math.e / 24.0, simpson(sin * np.exp(-entropy), 0.0, 1.0), 1e-8),
        Check("type2_normalizer", math.pi / math.e, simpson(sin * np.exp(entropy), 0.0, 1.0), 1e-8),
    ]


def _checks_normalization() -> list[Check]:
    out = []
    for spec in _reference_specs():
        g = from_analytic(spec, 4097)
        for kind in TransformKind:
            mass = simpson(transform_values(kind, g), g.lo, g.hi)
            out.append(Check(f"{spec.family}/{kind.value}/raw_integral", 1.0, mass, 1e-4))
    return out


def _checks_ode() -> list[Check]:
    out = []
    for report in (res.residual_type1(), res.residual_type2(), res.residual_type3()):
        out.append(Check(f"{report.kind.value}/max_abs_residual", 0.0, report.max_abs_residual, 1e-8))
        for ic in report.ic_checks:
            # relative tolerance against the expected limit; absolute at zero
            tol = 1e-4 * max(abs(ic.expected), 1.0)
            out.append(Check(f"{report.kind.value}/{ic.name}", ic.expected, ic.observed, tol))
    return out


def _checks_cf() -> list[Check]:
    out = []
    tmax = 20.0
    for spec in _reference_specs():
        g = from_analytic(spec, 4097)
        gap = spectral.type3_cf_identity_gap(g, tmax=tmax)
        tol = 1e-4 if spec.family == "arcsine" else 1e-5
        out.append(Check(f"{spec.family}/cf_identity_gap", 0.0, gap, tol))
        for sign, label in ((1, "plus"), (-1, "minus")):
            phi = spectral.modulated_char(g, sign, tmax=1.0)
            out.append(Check(f"{spec.family}/modulated_{label}_at_zero", 0.0, abs(phi.at_zero()), 1e-6))
    uni = from_analytic(DistributionSpec("uniform"), 4097)
    nu = transform_values(TransformKind.TYPE3, uni)
    phi_nu = spectral.cf_of_values(uni, nu, spectral.DEFAULT_TSTEP, tmax)
    closed = spectral.uniform_closed_form_cf(phi_nu.ts)
    out.append(Check("uniform/closed_form_match", 0.0, float(np.max(np.abs(phi_nu.values - closed))), 1e-6))
    phi0 = spectral.char_function(uni)
    one = spectral.t_operator(phi0)
    raw_cf = spectral.cf_of_values(uni, nu, spectral.DEFAULT_TSTEP, one.tmax)
    out.append(Check("uniform/t_operator_vs_raw_cf", 0.0, float(np.max(np.abs(one.values - raw_cf.values))), 1e-6))
    two = spectral.t_operator(one)
    out.append(Check("uniform/t_operator_twice_at_zero", 1.5, two.at_zero().real, 1e-9))
    return out


def _checks_median() -> list[Check]:
    out = []
    for spec in _reference_specs():
        g = from_analytic(spec, 4097)
        m = median(spec)
        F = cdf_of(g)
        for kind in TransformKind:
            t = transform(kind, g)
            out.append(Check(f"{spec.family}/{kind.value}/cdf_at_median", 0.5, cdf_of(t).at(m), 1e-4))
        t3 = cdf_of(transform(TransformKind.TYPE3, g))
        closed = F.cumvals - np.sin(math.tau * F.cumvals) / math.tau
        gap = float(np.max(np.abs(t3.cumvals - closed)))
        out.append(Check(f"{spec.family}/type3_closed_cdf_gap", 0.0, gap, 1e-6))
    return out


def _checks_convergence() -> list[Check]:
    out = []
    for spec in _reference_specs():
        g = from_analytic(spec, 4097)
        d = spectral.gaussian_convergence(TransformKind.TYPE3, g, 30)
        out.append(Check(f"{spec.family}/sup_distance_at_30", 0.0, float(d.sup_distance[-1]), 0.05))
        if spec.family == "uniform":
            expected = 1.0 / 12.0 - 1.0 / (2.0 * math.pi**2)
            out.append(Check("uniform/step1_variance", expected, float(d.variance[1]), 1e-5))
    return out


_SUITE_BUILDERS = {
    "constants": _checks_constants,
    "normalization": _checks_normalization,
    "ode": _checks_ode,
    "cf": _checks_cf,
    "median": _checks_median,
    "convergence": _checks_convergence,
}


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(_SUITE_BUILDERS) if args.suite == "all" else [args.suite]
    checks: list[Check] = []
    for name in names:
        checks.extend(_SUITE_BUILDERS[name]())
    passed = all(c.passed for c in checks)
    if args.format == "csv":
        lines = ["name,expected,observed,tolerance,passed"]
        for c in checks:
            lines.append(
                f"{c.name},{format_value(c.expected)},{format_value(c.observed)},"
                f"{format_value(c.tolerance)},{str(c.passed).lower()}"
            )
        _write_text(args.out, "\n".join(lines) + "\n")
    else:
        report = {
            "suite": args.suite,
            "passed": passed,
            "checks": [
                {
                    "name": c.name,
                    "expected": c.expected,
                    "observed": c.observed,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in checks
            ],
        }
        _write_text(args.out, json.dumps(report, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_spectral(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError(f"spectral requires --n >= 0, got {args.n}")
    spec = _build_spec(args)
    g = _build_grid(spec, args.grid)
    kind = _KINDS[args.kind]
    tstep = math.tau / args.tstep_div
    diag = spectral.gaussian_convergence(kind, g, args.n, tmax=args.tmax, tstep=tstep)
    outdir = args.outdir if args.outdir is not None else "spectral"
    os.makedirs(outdir, exist_ok=True)
    _write_text(os.path.join(outdir, "diagnostics.csv"), spectral.diagnostics_csv(diag))
    phi0 = spectral.char_function(g, tstep=tstep)
    _write_text(os.path.join(outdir, "cf_source.csv"), spectral.cf_csv(phi0))
    # the shift operator sequence, raw and renormalized to 1 at t=0, so the
    # non-preservation of normalization is visible in the emitted data
    current = phi0
    for step in (1, 2):
        current = spectral.t_operator(current)
        _write_text(os.path.join(outdir, f"cf_shift_step{step}_raw.csv"), spectral.cf_csv(current))
        scale = current.at_zero()
        renorm = spectral.CharFunction(current.tstep, current.tmax, current.values / scale)
        _write_text(os.path.join(outdir, f"cf_shift_step{step}_renormalized.csv"), spectral.cf_csv(renorm))
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    outdir = args.outdir if args.outdir is not None else args.which
    os.makedirs(outdir, exist_ok=True)
    for spec in _reference_specs():
        g = _build_grid(spec, args.grid)
        xs = g.xs
        if args.which == "fig1":
            header = "x,f,rho,tau"
            a = transform(TransformKind.TYPE1, g)
            b = transform(TransformKind.TYPE2, g)
        else:
            header = "x,f,nu1,nu2"
            a = transform(TransformKind.TYPE3, g)
            b = transform(TransformKind.TYPE3, a)
        lines = [header]
        for i in range(g.n):
            lines.append(
                f"{format_value(float(xs[i]))},{format_value(float(g.values[i]))},"
                f"{format_value(float(a.values[i]))},{format_value(float(b.values[i]))}"
            )
        _write_text(os.path.join(outdir, f"{spec.family}.csv"), "\n".join(lines) + "\n")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlab",
        description="Entropy-modulated density transforms: grids, verification, spectra, figure data.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, *, kind_default: str = "type3") -> None:
        p.add_argument("--dist", default="uniform", choices=FAMILIES)
        p.add_argument("--params", default=None, help="family parameters as k=v,...")
        p.add_argument("--kind", default=kind_default, choices=sorted(_KINDS))
        p.add_argument("--grid", type=int, default=4097, metavar="N")

    p = sub.add_parser("transform", help="write x,f,F,transformed for one application")
    add_common(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("iterate", help="write a long-format iteration trace plus diagnostics")
    add_common(p)
    p.add_argument("--n", type=int, default=30, metavar="K")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    p.add_argument("--suite", default="all", choices=_SUITES)
    p.add_argument("--format", default="json", choices=("csv", "json"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectral", help="write convergence diagnostics and CF dumps")
    add_common(p)
    p.add_argument("--n", type=int, default=30, metavar="K")
    p.add_argument("--tmax", type=float, default=spectral.DEFAULT_SUP_TMAX,
                   help="half-width of the Gaussian-comparison frequency window")
    p.add_argument("--tstep-div", type=int, default=64, metavar="D", help="tstep = 2*pi/D")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("figures", help="write per-family CSV data for the figure panels")
    p.add_argument("--which", default="fig1", choices=("fig1", "fig2"))
    p.add_argument("--grid", type=int, default=4097, metavar="N")
    p.add_argument("--outdir", default=None)
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        _worker_cap()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
