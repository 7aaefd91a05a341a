"""Command-line front end: figure sweeps as CSV, property verification,
the classical-classical hierarchy demo and single-point evaluation.

Exit codes: 0 success, 1 property/bound failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, properties
from . import quantifiers as q
from .channels import check_strength
from .observables import computational, mub_partner, qubit_observable
from .optimizer import (OptimizerConfig, bilocal_suppression, local_suppression,
                        max_context_rbn)
from .states import (DensityMatrix, InvalidStateError, classical_classical_state, psi_alpha,
                     two_parameter_state)

log = logging.getLogger("rbn")

HIERARCHY = "s_BN ⊊ s_S ⊊ s_E ⊊ s_D ⊊ s_SD ⊊ s_RBN"
BOUND_SLACK = 1e-8


class UsageError(Exception):
    pass


class PropertyFailure(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``"a:b:n"`` -> ``n`` uniform points on ``[a, b]`` inside ``[0, 1]``."""
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"grid must look like a:b:n, got {text!r}") from None
    if n < 1 or not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise UsageError(f"grid {text!r} must have n >= 1 and endpoints in [0, 1]")
    return np.linspace(a, b, n)


def parse_floats(text: str, what: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what} is empty")
    return vals


def parse_strengths(text: str) -> list:
    vals = parse_floats(text, "--eps")
    for v in vals:
        try:
            check_strength(v)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return vals


def parse_angles(text: str) -> tuple:
    vals = parse_floats(text, "angles")
    if len(vals) != 2:
        raise UsageError(f"angles must be theta,phi, got {text!r}")
    return vals[0], vals[1] % (2.0 * np.pi)


def config_from(args) -> OptimizerConfig:
    return OptimizerConfig().updated(grid_theta=args.grid_theta, grid_phi=args.grid_phi,
                                     tol=args.tol, seed=args.seed)


def fmt(x) -> str:
    return format(float(x), ".12g")


def header(command: str, args, cfg: OptimizerConfig) -> str:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "command", "jobs", "verbose")}
    return (f"# rbn {__version__} {command} flags={json.dumps(flags, sort_keys=True)} "
            f"seed={cfg.seed} optimizer={json.dumps(asdict(cfg), sort_keys=True)}")


def write_csv(path: Path, comment: str, columns: list, rows: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(comment + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(x) if not isinstance(x, str) else x for x in row])


def run_ordered(fn, tasks, jobs: int) -> list:
    """Map ``fn`` over ``tasks``; results always come back in task order."""
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _werner_row(task):
    beta, eps, cfg, check_sides = task
    rho = two_parameter_state(0.5, beta)
    n_val = max_context_rbn(rho, cfg).value
    rep = local_suppression(rho, eps, cfg, n_value=n_val)
    b = rep.bounds
    row = [beta, rep.value, n_val, b.lb1, b.ub1, b.lb2, b.ub2,
           q.closed_form_werner_suppression(beta, eps)]
    if check_sides:
        row.append(local_suppression(rho, eps, cfg, side="A").value)
    return row, b.violation(rep.value)


def _pure_row(task):
    alpha, eps, cfg, check_sides = task
    psi = psi_alpha(alpha)
    rep = local_suppression(psi.density(), eps, cfg)
    ent = q.entanglement_entropy(psi)
    row = [alpha, rep.value, ent, eps * ent, q.closed_form_pure_suppression(alpha, eps)]
    if check_sides:
        row.append(local_suppression(psi.density(), eps, cfg, side="A").value)
    return row, max(eps * ent - rep.value, rep.value - ent)


def cmd_figure1(args) -> int:
    cfg = config_from(args)
    eps_list = parse_strengths(args.eps or "0.1,0.6")
    betas = parse_grid(args.beta_grid)
    alphas = parse_grid(args.alpha_grid)
    out = Path(args.out)
    comment = header("figure1", args, cfg)
    extra = ["Delta_A"] if args.check_sides else []
    failures = []
    for eps in eps_list:
        results = run_ordered(_werner_row, [(b, eps, cfg, args.check_sides) for b in betas], args.jobs)
        rows = [r for r, _ in results]
        failures += [(eps, r[0]) for r, v in results if v > BOUND_SLACK + cfg.tol]
        write_csv(out / f"figure1a_werner_eps{eps:g}.csv", comment,
                  ["beta", "Delta_B", "N", "LB1", "UB1", "LB2", "UB2", "closed_form"] + extra, rows)
        results = run_ordered(_pure_row, [(a, eps, cfg, args.check_sides) for a in alphas], args.jobs)
        rows = [r for r, _ in results]
        failures += [(eps, r[0]) for r, v in results if v > BOUND_SLACK + cfg.tol]
        write_csv(out / f"figure1b_pure_eps{eps:g}.csv", comment,
                  ["alpha", "Delta_B", "E", "eps_times_E", "closed_form"] + extra, rows)
    if failures:
        raise PropertyFailure(f"bounds violated at (eps, parameter) = {failures}")
    print(f"wrote figure 1 tables for eps in {eps_list} to {out}")
    return 0


def _figure2_rows(task):
    beta, eps_list, cfg = task
    rho = two_parameter_state(0.5, beta)
    n_val = max_context_rbn(rho, cfg).value
    rows = []
    for eps in eps_list:
        local = local_suppression(rho, eps, cfg, n_value=n_val).value
        bi = bilocal_suppression(rho, eps, eps, cfg, local_value=local).value
        rows.append([beta, eps, n_val, local, bi])
    return rows


def cmd_figure2(args) -> int:
    cfg = config_from(args)
    eps_list = parse_strengths(args.eps or "0.1,0.6")
    betas = parse_grid(args.beta_grid)
    per_beta = run_ordered(_figure2_rows, [(b, eps_list, cfg) for b in betas], args.jobs)
    rows = sorted((r for group in per_beta for r in group), key=lambda r: (r[1], r[0]))
    failures = []
    for beta, eps, n_val, local, bi in rows:
        if min(n_val - local, local - bi, bi) < -BOUND_SLACK:
            failures.append((beta, eps))
    write_csv(Path(args.out), header("figure2", args, cfg),
              ["beta", "eps", "N", "Delta_B", "Delta_bilocal"], rows)
    if failures:
        raise PropertyFailure(f"N >= Delta_B >= Delta_bilocal >= 0 violated at {failures}")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_hierarchy(args) -> int:
    cfg = config_from(args)
    probs = np.array(parse_floats(args.probs, "--probs"))
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
        raise UsageError(f"--probs must be nonnegative and sum to 1, got {probs.tolist()}")
    d = max(2, len(probs))
    probs = np.concatenate([probs, np.zeros(d - len(probs))])
    basis = computational(d)
    rho = classical_classical_state(probs, basis.projectors, basis.projectors)
    partner = mub_partner(basis)
    eta_mub = q.eta(partner, partner, rho)
    shannon = q.shannon_entropy(probs)
    n_val = max_context_rbn(rho, cfg).value
    checks = {
        "eta_equals_shannon": abs(eta_mub - shannon) <= 1e-10,
        "N_at_least_shannon": n_val >= shannon - cfg.tol,
    }
    lines = [
        f"probs = {','.join(fmt(p) for p in probs)}",
        f"dimension = {d}x{d}",
        f"H(p) = {fmt(shannon)}",
        f"eta(Fourier partners) = {fmt(eta_mub)}",
        f"N = {fmt(n_val)}",
    ] + [f"{k} = {'pass' if ok else 'FAIL'}" for k, ok in checks.items()] + [
        "classical-classical state: no Bell nonlocality, steering, entanglement, discord "
        "or symmetric discord; realism-based nonlocality "
        + ("present" if shannon > 0 else "absent (product state)"),
        f"hierarchy: {HIERARCHY}",
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if not all(checks.values()):
        raise PropertyFailure("hierarchy checks failed")
    return 0


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    results = properties.run_all(seed=args.seed, samples=args.samples)
    for r in results:
        print(json.dumps(r, sort_keys=True))
    failed = [r["property"] for r in results if not r["passed"]]
    print(json.dumps({"summary": "fail" if failed else "pass", "failed": failed}))
    if failed:
        raise PropertyFailure(f"properties violated: {', '.join(failed)}")
    return 0


def load_state(path: str) -> DensityMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read state file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return DensityMatrix.from_dict(data)
    except (InvalidStateError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_eval(args) -> int:
    rho = load_state(args.state)
    if rho.dA != 2 or rho.dB != 2:
        raise UsageError("eval takes Bloch angles and therefore needs a two-qubit state")
    eps = parse_strengths(args.eps if args.eps is not None else "1")[0]
    eps_b = parse_strengths(args.eps_b)[0] if args.eps_b is not None else eps
    obs_a = qubit_observable(*parse_angles(args.angles_a))
    obs_b = qubit_observable(*parse_angles(args.angles_b))
    bounds = q.local_bounds(rho, eps_b, obs_a, obs_b)
    lb_bi, ub_bi = q.bilocal_bounds(rho, eps, obs_a, obs_b, eps_b=eps_b)
    report = {
        "irreality_A": q.irreality(obs_a, rho, "A"),
        "irreality_B": q.irreality(obs_b, rho, "B"),
        "eta": q.eta(obs_a, obs_b, rho),
        "delta": q.delta(obs_a, obs_b, rho, eps, eps_b),
        "delta_local_B": q.delta(obs_a, obs_b, rho, 1.0, eps_b),
        "reality_gain_B": q.reality_gain(obs_b, rho, eps_b, "B"),
        "gamma_B": q.gamma_bound(obs_b, rho, eps_b, "B"),
        "LB1": bounds.lb1, "UB1": bounds.ub1, "LB2": bounds.lb2, "UB2": bounds.ub2,
        "lb1_bilocal": lb_bi, "ub1_bilocal": ub_bi,
        "eps": eps, "eps_b": eps_b,
    }
    print(json.dumps({k: float(v) for k, v in report.items()}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rbn {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def optimizer_flags(p):
        p.add_argument("--grid-theta", type=int, default=None, help="theta lattice points per side (24)")
        p.add_argument("--grid-phi", type=int, default=None, help="phi lattice points per side (12)")
        p.add_argument("--tol", type=float, default=None, help="objective tolerance used in bound checks (1e-6)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")

    p = sub.add_parser("figure1", help="local suppression sweeps for the Werner and pure families")
    p.add_argument("--eps", help="comma-separated monitoring strengths (0.1,0.6)")
    p.add_argument("--beta-grid", default="0:1:101")
    p.add_argument("--alpha-grid", default="0:1:101")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--check-sides", action="store_true", help="add a Delta_A column")
    optimizer_flags(p)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("figure2", help="N, local and bilocal suppression for the Werner family")
    p.add_argument("--eps", help="comma-separated monitoring strengths (0.1,0.6)")
    p.add_argument("--beta-grid", default="0:1:101")
    p.add_argument("--out", default="figure2.csv", help="output CSV file")
    optimizer_flags(p)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("hierarchy", help="classical-classical state with nonzero RBN")
    p.add_argument("--probs", default="0.5,0.5")
    p.add_argument("--out", default=None, help="also write the report to this file")
    optimizer_flags(p)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("verify", help="run the randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="quantifiers for one state and one pair of qubit observables")
    p.add_argument("--state", required=True, help="JSON file {dA, dB, re, im}")
    p.add_argument("--angles-a", default="0,0", help="theta,phi of A (sigma_z)")
    p.add_argument("--angles-b", default="0,0", help="theta,phi of B (sigma_z)")
    p.add_argument("--eps", default=None, help="strength on A (default 1: projective)")
    p.add_argument("--eps-b", default=None, help="strength on B (default: --eps)")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rbn {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except PropertyFailure as exc:
        print(f"rbn {args.command}: FAILED: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
