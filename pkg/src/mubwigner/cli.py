"""Command-line front end.

Subcommands: mub, wigner, check, evolve. Exit codes: 0 success / all checks
passed, 1 a requested check failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (
    UnsupportedDynamicsError,
    build_char_generator,
    char_dynamics_table,
    density_from_dynamics_char,
    evolve,
)
from .fields import FieldError, is_prime
from .serialize import (
    load_matrix,
    load_state,
    matrix_to_json,
    mub_to_json,
    trajectory_record,
    wigner_csv_lines,
    wigner_pgm_lines,
    wigner_table_to_json,
)
from .mub import full_mub, mub_projector, verify_mub
from .wigner import (
    ConventionError,
    check_product_factorization,
    default_convention,
    marginal_along,
    plancherel_inner,
    positivity_check,
    random_density,
    reconstruct_density,
    wigner_function,
    wigner_kernel,
    wigner_partial_transpose,
)

MATRIX_DIM_LIMIT = 2**10
KNOWN_CHECKS = ("marginals", "plancherel", "separability", "positivity", "pt")


def _common_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="prime subsystem dimension")
    sp.add_argument("--n", type=int, default=1, help="number of subsystems (d = p^n)")
    sp.add_argument("--tol", type=float, default=1e-10, help="comparison tolerance")
    sp.add_argument("--seed", type=int, default=0, help="seed for random-state inputs")
    sp.add_argument("--out", type=str, required=True, help="output path or prefix")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mubwigner", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mub", help="construct and verify a complete MUB set")
    _common_flags(sp)

    sp = sub.add_parser("wigner", help="Wigner table of a state file")
    _common_flags(sp)
    sp.add_argument("--input", type=str, required=True, help="state file (JSON)")
    sp.add_argument("--convention", type=str, default=None)
    sp.add_argument(
        "--format",
        type=str,
        default="json,csv",
        help="comma list from {json,csv,pgm}; pgm needs n=1",
    )

    sp = sub.add_parser("check", help="run consistency checks on a state")
    _common_flags(sp)
    sp.add_argument("--input", type=str, required=True)
    sp.add_argument("--convention", type=str, default=None)
    sp.add_argument(
        "--checks",
        type=str,
        default="marginals,plancherel,positivity",
        help="comma list from " + ",".join(KNOWN_CHECKS),
    )

    sp = sub.add_parser("evolve", help="evolve a state under a Hamiltonian")
    _common_flags(sp)
    sp.add_argument("--input", type=str, required=True)
    sp.add_argument("--hamiltonian", type=str, required=True)
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=16)
    return ap


def _validate_pn(p: int, n: int) -> None:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("n must be >= 1")
    if p**n > MATRIX_DIM_LIMIT:
        raise FieldError(f"p^n = {p ** n} exceeds the matrix command limit {MATRIX_DIM_LIMIT}")


def cmd_mub(args) -> int:
    _validate_pn(args.p, args.n)
    bases = full_mub(args.p, args.n)
    report = verify_mub(bases, args.p, args.n)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out.with_suffix(".json") if out.suffix != ".json" else out, "w") as fh:
        json.dump(mub_to_json(bases, args.p, args.n), fh)
    report_path = Path(str(out).removesuffix(".json") + ".report.json")
    with open(report_path, "w") as fh:
        json.dump(report.to_json(), fh, indent=2)
    print(f"{args.p}^{args.n}: {report.num_bases} bases, "
          f"max unbiasedness defect {report.max_unbiasedness_defect:.3e}")
    return 0 if report.passed else 1


def cmd_wigner(args) -> int:
    _validate_pn(args.p, args.n)
    rng = np.random.default_rng(args.seed)
    rho = load_state(args.input, args.p, args.n, rng)
    hermitian = np.abs(rho - rho.conj().T).max() <= args.tol
    conv = args.convention or default_convention(args.p, args.n)
    wt = wigner_function(rho, args.p, args.n, conv)
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    unknown = set(formats) - {"json", "csv", "pgm"}
    if unknown:
        raise ValueError(f"unknown format(s): {sorted(unknown)}")
    if "pgm" in formats and args.n != 1:
        raise ValueError("pgm export is only available for n=1")
    if not hermitian:
        # operator tables are well defined but complex-valued, so only the
        # JSON form can hold them
        print("warning: input is not Hermitian; writing complex table values "
              "(csv/pgm skipped)", file=sys.stderr)
        formats = [f for f in formats if f == "json"]
    base = Path(args.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    stem = str(base).removesuffix(base.suffix) if base.suffix else str(base)
    if "json" in formats:
        with open(stem + ".json", "w") as fh:
            json.dump(wigner_table_to_json(wt, max(args.tol, 1e-8)), fh)
    if "csv" in formats:
        Path(stem + ".csv").write_text("\n".join(wigner_csv_lines(wt, max(args.tol, 1e-8))) + "\n")
    if "pgm" in formats:
        Path(stem + ".pgm").write_text("\n".join(wigner_pgm_lines(wt, max(args.tol, 1e-8))) + "\n")
    print(f"wrote Wigner table ({conv}) for d={args.p}^{args.n} to {stem}.*")
    return 0


def _check_state(args, rho, conv) -> dict:
    import itertools

    p, n, tol = args.p, args.n, args.tol
    rng = np.random.default_rng(args.seed + 1)
    results: dict = {}
    requested = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in requested:
        if c not in KNOWN_CHECKS:
            raise ValueError(f"unknown check {c!r}; known: {', '.join(KNOWN_CHECKS)}")
    wt = wigner_function(rho, p, n, conv)
    kern = wigner_kernel(p, n, conv)
    if "marginals" in requested:
        dev = 0.0
        for alpha in range(kern.geom.num_classes):
            for s in itertools.product(range(p), repeat=n):
                prob = marginal_along(wt, alpha, s)
                want = float(np.trace(rho @ mub_projector(kern.geom, alpha, s).matrix).real)
                dev = max(dev, abs(prob - want))
        results["marginals"] = {"max_deviation": dev, "passed": dev < tol}
    if "plancherel" in requested:
        sigma = random_density(p**n, rng)
        ws = wigner_function(sigma, p, n, conv)
        dev = max(
            abs(plancherel_inner(wt, wt) - float(np.trace(rho @ rho).real)),
            abs(plancherel_inner(wt, ws) - float(np.trace(rho @ sigma).real)),
        )
        results["plancherel"] = {"max_deviation": dev, "passed": dev < tol}
    if "separability" in requested:
        if n != 2:
            raise ValueError("the separability check needs n=2")
        tau = np.trace(rho.reshape(p, p, p, p), axis1=1, axis2=3)
        mu = np.trace(rho.reshape(p, p, p, p), axis1=0, axis2=2)
        rep = check_product_factorization(tau, mu, p)
        results["separability"] = {
            "max_deviation": rep.max_deviation,
            "transpose_on": rep.transpose_on,
            "passed": rep.max_deviation < tol,
        }
    if "positivity" in requested:
        res = positivity_check(rho, p, n, tol)
        results["positivity"] = {
            "min_eigenvalue": res.min_eigenvalue,
            "passed": res.positive,
        }
    if "pt" in requested:
        if n != 2:
            raise ValueError("the pt check needs n=2")
        pt_conv = conv if conv in ("separable", "p2-left", "p2-right") else None
        if pt_conv is None:
            raise ValueError("pt check needs a separability convention")
        wpt = wigner_partial_transpose(wigner_function(rho, p, n, pt_conv))
        lam = float(np.linalg.eigvalsh(reconstruct_density(wpt))[0])
        results["pt"] = {"min_eigenvalue": lam, "passed": lam >= -tol}
    return results


def cmd_check(args) -> int:
    _validate_pn(args.p, args.n)
    rng = np.random.default_rng(args.seed)
    rho = load_state(args.input, args.p, args.n, rng)
    conv = args.convention or default_convention(args.p, args.n)
    results = _check_state(args, rho, conv)
    passed = all(r["passed"] for r in results.values())
    report = {
        "p": args.p,
        "n": args.n,
        "convention": conv,
        "tol": args.tol,
        "checks": results,
        "passed": passed,
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2)
    for name, r in results.items():
        print(f"{name}: {'pass' if r['passed'] else 'FAIL'} {r}")
    return 0 if passed else 1


def cmd_evolve(args) -> int:
    _validate_pn(args.p, args.n)
    rng = np.random.default_rng(args.seed)
    rho = load_state(args.input, args.p, args.n, rng)
    H = load_matrix(args.hamiltonian)
    gen = build_char_generator(H, args.p, args.n)
    chi0 = char_dynamics_table(rho, args.p, args.n)
    if args.steps < 1:
        raise ValueError("steps must be >= 1")
    times = np.linspace(args.t0, args.t1, args.steps)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    purity0 = float(np.trace(rho @ rho).real)
    trace_drift = 0.0
    purity_drift = 0.0
    with open(out, "w") as fh:
        for t in times:
            chit = evolve(chi0, gen, float(t))
            rhot = density_from_dynamics_char(chit)
            fh.write(json.dumps(trajectory_record(float(t), chit, rhot)) + "\n")
            trace_drift = max(trace_drift, abs(float(np.trace(rhot).real) - 1.0))
            purity_drift = max(purity_drift, abs(float(np.trace(rhot @ rhot).real) - purity0))
    report = {
        "t0": args.t0,
        "t1": args.t1,
        "steps": args.steps,
        "trace_drift": trace_drift,
        "purity_drift": purity_drift,
    }
    report_path = Path(str(out) + ".report.json")
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2)
    print(f"trajectory with {args.steps} samples; trace drift {trace_drift:.3e}, "
          f"purity drift {purity_drift:.3e}")
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        if args.command == "mub":
            return cmd_mub(args)
        if args.command == "wigner":
            return cmd_wigner(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "evolve":
            return cmd_evolve(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (FieldError, ConventionError, UnsupportedDynamicsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
