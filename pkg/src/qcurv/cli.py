"""Command-line entry point: every computation and verification suite as a
subcommand emitting machine-readable reports.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
configuration error.  All randomness derives from a single 64-bit seed
through counter-based generators, and serialized reports carry no timing,
so a fixed (subcommand, config, seed) triple reproduces its report byte
for byte.  QCURV_THREADS, when set, caps worker parallelism; every
computation here is also correct (and identical) single-threaded.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction

import click
import numpy as np

from . import asymptotics as asym
from . import parametrix as par
from . import polyalg, report, sphereforms, spectral, tensor
from .report import VerificationReport, close_check, dump_report, exact_check


def _echo_report(payload: dict, out: str | None):
    text = dump_report(payload, out)
    if out:
        click.echo(f"report written to {out}", err=True)
    else:
        click.echo(text, nl=False)


def _finish(reports: list[VerificationReport], payload: dict, out: str | None):
    ok = all(r.passed for r in reports)
    payload["reports"] = [r.to_json() for r in reports]
    payload["pass"] = ok
    _echo_report(payload, out)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        click.echo(f"[{status}] {r.check_id}", err=True)
    sys.exit(0 if ok else 1)


def _parse_n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise click.UsageError(f"bad dimension range {text!r}; use e.g. 5..8 or 5,7,9")


def threads_cap() -> int | None:
    """Parallelism cap from QCURV_THREADS; None means unrestricted.

    All computations here are single-threaded and thread-count
    independent, so the cap is recorded in report configs and trivially
    honored."""
    cap = os.environ.get("QCURV_THREADS")
    if cap is None:
        return None
    try:
        return max(1, int(cap))
    except ValueError:
        raise click.UsageError("QCURV_THREADS must be an integer")


@click.group()
def main():
    """Paneitz / Q-curvature computation and verification engine."""


# ---------------------------------------------------------------- constants


@main.command("constants")
@click.option("--n", "n_range", default="5..12", show_default=True, help="dimension range")
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "latex"]), default="csv")
@click.option("--report", "out", type=click.Path(), default=None, help="write JSON report here")
def cmd_constants(n_range, fmt, out):
    """Sphere constants Q, omega_n, Y4, Theta4 with cross-check residuals."""
    ns = _parse_n_range(n_range)
    if any(n < 5 for n in ns):
        raise click.UsageError("constants need n >= 5")
    rows = sphereforms.constants_table(ns)
    ok = all(r["resid_Y4_vs_moments"] < 1e-12 and r["resid_duality"] < 1e-14 for r in rows)

    if fmt == "csv":
        cols = ["n", "Q_sphere", "omega_n", "Y4", "Theta4", "resid_Y4_vs_moments", "resid_duality"]
        lines = [",".join(cols)]
        for r in rows:
            lines.append(
                ",".join(
                    str(r[c]) if c in ("n", "Q_sphere") else repr(float(r[c])) for c in cols
                )
            )
        click.echo("\n".join(lines))
    elif fmt == "latex":
        lines = [r"\begin{tabular}{rrrrr}", r"$n$ & $Q$ & $\omega_n$ & $Y_4$ & $\Theta_4$ \\"]
        for r in rows:
            lines.append(
                f"{r['n']} & {r['Q_sphere']} & {r['omega_n']:.12g} & "
                f"{r['Y4']:.12g} & {r['Theta4']:.12g} \\\\"
            )
        lines.append(r"\end{tabular}")
        click.echo("\n".join(lines))
    else:
        click.echo(dump_report({"command": "constants", "rows": rows, "pass": ok}), nl=False)

    if out:
        dump_report({"command": "constants", "rows": rows, "pass": ok}, out)
    sys.exit(0 if ok else 1)


# ---------------------------------------------------------------- parametrix


@main.command("parametrix")
@click.option("--n", type=int, required=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--flat", is_flag=True, help="use the flat jet")
@click.option("--jet-file", type=click.Path(exists=True), default=None, help="JSON jet input")
@click.option("--report", "out", type=click.Path(), default=None)
def cmd_parametrix(n, seed, flat, jet_file, out):
    """Green's-function expansion at the leading curvature order."""
    if n < 5:
        raise click.UsageError("n >= 5 required")
    if jet_file:
        with open(jet_file) as f:
            jet = par.CurvatureJet.from_json(json.load(f))
        if jet.n != n:
            raise click.UsageError("jet dimension does not match --n")
    elif flat:
        jet = par.CurvatureJet.flat(n)
    else:
        jet = par.random_jet(n, seed)

    green = par.green_leading(jet)
    payload = {
        "command": "parametrix",
        "config": {"n": n, "seed": seed, "flat": flat},
        "n": n,
        "jet": jet.to_json(),
        "expansion": green.expansion.to_json(),
        "remainder": green.remainder,
        "log_terms": green.log_terms(),
    }
    checks = [par.verify_recursion_residual(jet, green)]
    if n >= 9 and not jet.is_flat():
        match = par.psi4_solve(jet) == par.psi4_closed_form(jet)
        payload["psi4_matches_closed_form"] = match
        checks.append(
            exact_check(
                "parametrix.psi4_closed_form",
                {"n": n, "seed": seed},
                True,
                "degree-4 correction closed form",
                match,
            )
        )
    if n == 8 and not jet.is_flat():
        coeff = par.n8_log_coefficient(jet)
        psi_log = green.expansion.get(4, 1)
        want = polyalg.HomogPoly.r_squared(8).mul_r2k(1).scale(coeff)
        checks.append(
            exact_check(
                "parametrix.n8_log_coefficient",
                {"seed": seed},
                want.to_json(),
                "log-shell coefficient, quadratic in the Weyl norm",
                psi_log.to_json(),
            )
        )
        payload["n8_log_coefficient"] = report.jsonable(coeff)
    _finish(checks, payload, out)


# ---------------------------------------------------------------- asymptotics


@main.command("asymptotics")
@click.option("--case", "case", type=click.Choice(list(asym.CASES)), required=True)
@click.option("--n", type=int, required=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--a0", type=float, default=1.0, show_default=True, help="flat/lowdim constant")
@click.option("--lambdas", default=None, help="comma-separated lam grid override")
@click.option("--cutoff-degree", type=int, default=9, show_default=True)
@click.option("--report", "out", type=click.Path(), default=None)
def cmd_asymptotics(case, n, seed, a0, lambdas, cutoff_degree, out):
    """Fit the test-function expansion coefficient for one case."""
    lam_grid = tuple(float(v) for v in lambdas.split(",")) if lambdas else ()
    jet = None
    if case in ("n8", "n9", "high"):
        jet = par.random_jet(n, seed, normalize=True)
    try:
        model = asym.TestFunctionModel(
            case=case, n=n, jet=jet, A0=a0, lambdas=lam_grid, cutoff_degree=cutoff_degree
        )
        fit = asym.fit_expansion(model)
        extra = asym.numerator_coefficient_check(model)
    except ValueError as e:
        raise click.UsageError(str(e))
    tol = {"flat": 0.02, "lowdim": 0.02, "high": 0.02, "n9": 0.05, "n8": 0.10}[case]
    checks = [
        close_check(
            f"asymptotics.ratio_coefficient[{case},n={n}]",
            {"seed": seed, "lambdas": list(fit.lambdas)},
            fit.expected,
            "test-function expansion coefficient",
            fit.coefficient,
            rtol=tol,
        )
    ] + extra
    payload = {
        "command": "asymptotics",
        "config": {
            "case": case,
            "n": n,
            "seed": seed,
            "A0": a0,
            "lambdas": list(fit.lambdas),
            "cutoff_degree": cutoff_degree,
        },
        "fit": fit.to_json(),
    }
    _finish(checks, payload, out)


# ------------------------------------------------------------------- spectral


@main.command("spectral")
@click.option("--n", type=int, default=5, show_default=True)
@click.option("--l", "--L", "trunc", type=int, default=64, show_default=True)
@click.option("--iters", type=int, default=200, show_default=True)
@click.option("--damping", type=float, default=0.5, show_default=True)
@click.option("--init", type=click.Choice(["constant", "perturbed"]), default="constant")
@click.option("--report", "out", type=click.Path(), default=None)
def cmd_spectral(n, trunc, iters, damping, init, out):
    """Zonal extremal iteration plus invariance checks."""
    try:
        rep = spectral.spectral_report(n, trunc, iters, damping, init)
    except ValueError as e:
        raise click.UsageError(str(e))
    sc = sphereforms.sharp_constants(n)
    vals = rep["functional_values"]
    checks = [
        close_check(
            "spectral.theta4_constant",
            {"n": n, "L": trunc},
            sc.Theta4_sphere,
            "dual functional at the constant extremal",
            rep["theta4_constant"],
            rtol=1e-8,
        ),
        VerificationReport(
            check_id="spectral.iteration_bounded",
            inputs={"n": n, "L": trunc, "iters": iters, "init": init},
            expected=f"<= {sc.Theta4_sphere} + 1e-6",
            provenance="sharp maximality of constants on the sphere",
            computed=max(vals),
            tolerance=1e-6,
            passed=max(vals) <= sc.Theta4_sphere + 1e-6,
        ),
        VerificationReport(
            check_id="spectral.mobius_invariance",
            inputs={"n": n, "L": trunc, "t": [1.5, 2.0, 4.0]},
            expected="relative drift <= 1e-6",
            provenance="conformal invariance of the dual functional",
            computed=max(c["theta4_drift"] for c in rep["invariance_checks"]),
            tolerance=1e-6,
            passed=all(c["theta4_drift"] <= 1e-6 for c in rep["invariance_checks"]),
        ),
    ]
    if init == "constant":
        checks.append(
            VerificationReport(
                check_id="spectral.fixed_point_drift",
                inputs={"n": n, "L": trunc, "iters": iters},
                expected="<= 1e-8",
                provenance="constants solve the dual extremal equation",
                computed=abs(vals[-1] - vals[0]),
                tolerance=1e-8,
                passed=abs(vals[-1] - vals[0]) <= 1e-8,
            )
        )
    payload = {
        "command": "spectral",
        "config": {"n": n, "L": trunc, "iters": iters, "damping": damping, "init": init},
        "result": rep,
    }
    _finish(checks, payload, out)


# --------------------------------------------------------------------- verify


def _verify_weyl(ns, trials, seed) -> list[VerificationReport]:
    out = []
    for n in ns:
        all_ok = True
        for k in range(trials):
            W = tensor.random_weyl(n, seed + k)
            q = W.quartic_form()
            ok = (
                tensor.invariants_hold(W)
                and polyalg.laplacian(q) == W.gradient_square_form().scale(2)
                and polyalg.laplacian(polyalg.laplacian(q))
                == polyalg.HomogPoly.constant(n, 12 * W.norm_sq())
                and W.cross_contraction() == W.norm_sq() / 2
            )
            blocks = W.quartic_harmonic_split()
            ok = ok and polyalg.reassemble(n, 4, blocks) == q
            ok = ok and all(polyalg.laplacian(b.h).is_zero() for b in blocks)
            ok = ok and blocks[2].h == polyalg.HomogPoly.constant(
                n, W.norm_sq() * Fraction(3, 2 * n * (n + 2))
            )
            Jh = tensor.random_schouten_hessian(n, seed + k, W)
            ok = ok and Jh.trace() == -W.norm_sq() / (12 * (n - 1))
            all_ok = all_ok and ok
        out.append(
            exact_check(
                f"weyl.identities[n={n},trials={trials}]",
                {"n": n, "trials": trials, "seed": seed},
                True,
                "curvature quartic and trace identities, exact",
                all_ok,
            )
        )
    return out


def _verify_polyalg(trials, seed) -> list[VerificationReport]:
    rng = np.random.Generator(np.random.Philox(seed))
    ok_dec, ok_solve = True, True
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(0, 9))
        terms = {}
        for _ in range(int(rng.integers(1, 6))):
            e = rng.multinomial(m, np.ones(n) / n)
            terms[tuple(int(v) for v in e)] = Fraction(
                int(rng.integers(-9, 10)), int(rng.integers(1, 10))
            )
        p = polyalg.HomogPoly(n, m, terms)
        blocks = polyalg.harmonic_decompose(p)
        ok_dec = ok_dec and polyalg.reassemble(n, m, blocks) == p
        ok_dec = ok_dec and all(polyalg.laplacian(b.h).is_zero() for b in blocks)
        psi = polyalg.solve_AA(n, p)
        residual = polyalg.apply_AA(n, psi) + polyalg.LogRadialExpansion.from_poly(p)
        ok_solve = ok_solve and residual.is_zero()
    return [
        exact_check(
            f"polyalg.decomposition[trials={trials}]",
            {"trials": trials, "seed": seed},
            True,
            "harmonic reassembly, exact",
            ok_dec,
        ),
        exact_check(
            f"polyalg.solver[trials={trials}]",
            {"trials": trials, "seed": seed},
            True,
            "radial bilaplacian-family inversion, exact",
            ok_solve,
        ),
    ]


def _verify_parametrix(ns, trials, seed) -> list[VerificationReport]:
    out = []
    for n in ns:
        if n < 8:
            continue
        ok = True
        for k in range(trials):
            jet = par.random_jet(n, seed + k)
            if n >= 9:
                ok = ok and par.psi4_solve(jet) == par.psi4_closed_form(jet)
            else:
                w2 = jet.W.norm_sq()
                want = polyalg.HomogPoly.r_squared(8).mul_r2k(1).scale(-w2 / 1440)
                ok = ok and par.psi4_solve(jet).get(4, 1) == want
            ok = ok and par.verify_recursion_residual(jet, par.green_leading(jet)).passed
        label = "closed-form" if n >= 9 else "log-coefficient"
        out.append(
            exact_check(
                f"parametrix.{label}[n={n},trials={trials}]",
                {"n": n, "trials": trials, "seed": seed},
                True,
                "degree-4 expansion shell, exact",
                ok,
            )
        )
    return out


def _verify_constants(ns) -> list[VerificationReport]:
    rows = sphereforms.constants_table(ns)
    out = []
    for r in rows:
        out.append(
            close_check(
                f"constants.moments[n={r['n']}]",
                {"n": r["n"]},
                0.0,
                "moment quotient vs closed form",
                r["resid_Y4_vs_moments"],
                rtol=1e-12,
            )
        )
        out[-1].passed = r["resid_Y4_vs_moments"] < 1e-12
        out.append(
            VerificationReport(
                check_id=f"constants.duality[n={r['n']}]",
                inputs={"n": r["n"]},
                expected=1.0,
                provenance="dual sharp constant is the reciprocal",
                computed=1.0 + r["resid_duality"],
                tolerance=1e-14,
                passed=r["resid_duality"] < 1e-14,
            )
        )
    return out


def _verify_bubbles(ns) -> list[VerificationReport]:
    out = []
    radii = np.geomspace(0.1, 10.0, 100)
    for n in ns:
        worst = 0.0
        for lam in (0.5, 1.0, 2.0):
            worst = max(worst, float(sphereforms.bubble_pde_residual(lam, n, radii).max()))
        out.append(
            VerificationReport(
                check_id=f"bubble.pde[n={n}]",
                inputs={"n": n, "lambdas": [0.5, 1.0, 2.0], "radii": 100},
                expected="relative residual <= 1e-10",
                provenance="bubble solves the critical bilaplacian equation",
                computed=worst,
                tolerance=1e-10,
                passed=worst <= 1e-10,
            )
        )
    return out


def _verify_spectral(ns, L) -> list[VerificationReport]:
    out = []
    for n in ns:
        solver = spectral.SphereSolver(n, L)
        sc = sphereforms.sharp_constants(n)
        const = solver.constant_field(1.0)
        th = solver.theta4_functional(const)
        y4 = solver.y4_functional(const)
        th2 = solver.theta2_functional(const)
        y2 = solver.yamabe_functional(const)
        drift = max(
            abs(solver.theta4_functional(solver.mobius_pullback(const, t)) - th) / th
            for t in (1.5, 2.0, 4.0)
        )
        out += [
            close_check(
                f"spectral.theta4_const[n={n},L={L}]",
                {"n": n, "L": L},
                sc.Theta4_sphere,
                "dual functional at constants",
                th,
                rtol=1e-8,
            ),
            close_check(
                f"spectral.duality[n={n},L={L}]",
                {"n": n, "L": L},
                1.0,
                "product of primal and dual sharp values",
                th * y4,
                rtol=1e-10,
            ),
            close_check(
                f"spectral.theta2_duality[n={n},L={L}]",
                {"n": n, "L": L},
                1.0,
                "second-order analogue duality",
                th2 * y2,
                rtol=1e-8,
            ),
            VerificationReport(
                check_id=f"spectral.mobius[n={n},L={L}]",
                inputs={"n": n, "L": L, "t": [1.5, 2.0, 4.0]},
                expected="drift <= 1e-6",
                provenance="conformal invariance",
                computed=drift,
                tolerance=1e-6,
                passed=drift <= 1e-6,
            ),
        ]
    return out


def _verify_asymptotics(seed) -> list[VerificationReport]:
    out = []
    for case, n, tol in (("flat", 5, 0.02), ("high", 10, 0.02), ("n9", 9, 0.05), ("n8", 8, 0.10)):
        jet = par.random_jet(n, seed, normalize=True) if case != "flat" else None
        fit = asym.fit_expansion(asym.TestFunctionModel(case=case, n=n, jet=jet))
        out.append(
            close_check(
                f"asymptotics.{case}[n={n}]",
                {"n": n, "seed": seed if case != "flat" else None},
                fit.expected,
                "expansion coefficient vs closed form",
                fit.coefficient,
                rtol=tol,
            )
        )
    return out


SUITES = ("weyl", "polyalg", "parametrix", "constants", "bubbles", "spectral", "asymptotics", "all")


@main.command("verify")
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--n", "n_range", default=None, help="dimension range, e.g. 5..10")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--l", "--L", "trunc", type=int, default=None, help="spectral truncation degree")
@click.option("--report", "out", type=click.Path(), default=None)
def cmd_verify(suite, n_range, trials, seed, trunc, out):
    """Run a verification suite; exit 0 only if every check passes."""
    reports: list[VerificationReport] = []
    config = {"suite": suite, "n": n_range, "trials": trials, "seed": seed, "L": trunc}
    if suite in ("weyl", "all"):
        ns = _parse_n_range(n_range) if n_range and suite == "weyl" else range(5, 11)
        reports += _verify_weyl(ns, trials or (50 if suite == "weyl" else 10), seed)
    if suite in ("polyalg", "all"):
        reports += _verify_polyalg(trials or 40, seed)
    if suite in ("parametrix", "all"):
        ns = _parse_n_range(n_range) if n_range and suite == "parametrix" else range(8, 13)
        reports += _verify_parametrix(ns, trials or 10, seed)
    if suite in ("constants", "all"):
        ns = _parse_n_range(n_range) if n_range and suite == "constants" else range(5, 13)
        reports += _verify_constants(ns)
    if suite in ("bubbles", "all"):
        ns = _parse_n_range(n_range) if n_range and suite == "bubbles" else range(5, 13)
        reports += _verify_bubbles(ns)
    if suite in ("spectral", "all"):
        ns = _parse_n_range(n_range) if n_range and suite == "spectral" else range(5, 10)
        reports += _verify_spectral(ns, trunc or 64)
    if suite in ("asymptotics", "all"):
        reports += _verify_asymptotics(seed)
    config["threads_cap"] = threads_cap()
    payload = {"command": "verify", "config": config}
    _finish(reports, payload, out)


if __name__ == "__main__":
    main()
