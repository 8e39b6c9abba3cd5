"""``tfgkp`` command line: sweeps, Monte Carlo runs and reports as CSV/JSON.

Exit codes: 0 success, 2 usage or validation error, 3 internal numeric failure.
Output files are written to a temporary sibling and renamed into place, so a
failed run never leaves a partial file at ``--out``.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from ._parallel import THREADS_ENV, default_threads
from .algebra import SQRT_PI, CombParams, DomainError
from .correction import run_cycles, run_uncorrected
from .decoder import failure_line, failure_map, p_fail_analytic, p_fail_monte_carlo
from .feasibility import (
    DEFAULT_ACTUATORS,
    CapacityError,
    actuator_response,
    bandwidth_check,
    lattice_scales,
    resolution_check,
    scales_dict,
)
from .grid_states import (
    DEFAULT_N_PEAKS,
    DEFAULT_SIGMA,
    GridStateModel,
    marginal,
    supermode_weights,
    wigner,
)
from .noise import LabNoiseBudget, NoiseModel, lab_to_dimensionless

FAILURE_MAP_HEADER = "sigma_tau,sigma_omega,p_fail"
WIGNER_HEADER = "tau,omega,W"
CYCLES_HEADER = "cycle,per_cycle_error,cumulative_error,stderr"
UNCORRECTED_COLUMNS = "uncorrected_failure,uncorrected_stderr"

BUDGET_FIELDS = {
    "t_jitter_s": "t_jitter",
    "t_disp_s": "t_disp",
    "t_tech_s": "t_tech",
    "w_seed_rad_s": "w_seed",
    "w_pump_rad_s": "w_pump",
    "w_tech_rad_s": "w_tech",
}


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


def fmt(x: float) -> str:
    """CSV number format: 9 significant digits."""
    return format(float(x), ".9g")


def parse_range(text: str, scale: float = 1.0) -> list[float]:
    """``a:b:n`` -> n evenly spaced points from a to b inclusive; n = 1 needs a == b."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} is not of the form a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"range {text!r} has non-numeric fields") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise UsageError(f"range {text!r} has non-finite endpoints")
    if n < 1:
        raise UsageError(f"range {text!r} needs n >= 1")
    if n == 1:
        if a != b:
            raise UsageError(f"range {text!r}: n = 1 requires a == b")
        return [a * scale]
    if b <= a:
        raise UsageError(f"range {text!r} must be increasing")
    return [float(v) * scale for v in np.linspace(a, b, n)]


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_json(obj: object) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _finite(values: np.ndarray | Sequence[float], what: str) -> None:
    if not np.all(np.isfinite(np.asarray(values, dtype=float))):
        raise NumericFailure(f"non-finite {what}")


def _emit(args: argparse.Namespace, text: str, echo: bool) -> None:
    if args.out is not None:
        write_atomic(args.out, text)
    if echo:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------


def cmd_failure_map(args: argparse.Namespace) -> None:
    scale = SQRT_PI if args.in_sqrt_pi else 1.0
    omega_axis = parse_range(args.sigma_omega, scale)
    if args.anisotropy is not None:
        rows = failure_line(
            omega_axis, args.anisotropy, args.mode, args.trials, args.seed, args.threads
        )
    else:
        if args.sigma_tau is None:
            raise UsageError("--sigma-tau is required unless --anisotropy is given")
        tau_axis = parse_range(args.sigma_tau, scale)
        rows = failure_map(
            tau_axis, omega_axis, args.mode, args.trials, args.seed, args.threads
        ).rows()
    p = [r[2] for r in rows]
    _finite(p, "failure probability")
    lines = [FAILURE_MAP_HEADER] + [",".join(fmt(v) for v in r) for r in rows]
    write_atomic(args.out, "\n".join(lines) + "\n")
    print(f"cells={len(rows)} min={fmt(min(p))} max={fmt(max(p))} -> {args.out}")


def cmd_mc_failure(args: argparse.Namespace) -> None:
    model = NoiseModel(args.sigma_tau, args.sigma_omega)
    est, err = p_fail_monte_carlo(model, args.trials, args.seed, args.threads)
    report = {
        "sigma_tau": model.sigma_tau,
        "sigma_omega": model.sigma_omega,
        "estimate": est,
        "stderr": err,
        "analytic": p_fail_analytic(model),
        "trials": args.trials,
        "seed": args.seed,
    }
    _emit(args, to_json(report), echo=True)


def _parse_grid(text: str) -> tuple[list[float], list[float]]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--grid must be tmin:tmax:n,omin:omax:n")
    return parse_range(parts[0]), parse_range(parts[1])


def _trapezoid_weights(x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x)
    if len(x) < 2:
        return np.ones(len(x))
    w = np.zeros(len(x))
    d = np.diff(x)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


def cmd_wigner(args: argparse.Namespace) -> None:
    state = GridStateModel(args.state, args.sigma_tau, args.sigma_omega, args.n_peaks)
    taus, omegas = _parse_grid(args.grid)
    T, O = np.meshgrid(taus, omegas, indexing="ij")
    W = wigner(state, T, O)
    _finite(W, "Wigner values")
    lines = [WIGNER_HEADER]
    for i, t in enumerate(taus):
        for j, o in enumerate(omegas):
            lines.append(f"{fmt(t)},{fmt(o)},{fmt(W[i, j])}")
    write_atomic(args.out, "\n".join(lines) + "\n")
    integral = float(_trapezoid_weights(taus) @ W @ _trapezoid_weights(omegas))
    print(
        f"cells={W.size} integral={fmt(integral)} min={fmt(W.min())} max={fmt(W.max())}"
        f" -> {args.out}"
    )


def cmd_cycles(args: argparse.Namespace) -> None:
    channel = NoiseModel(args.sigma_tau, args.sigma_omega)
    anc = NoiseModel(
        args.sigma_tau if args.anc_sigma_tau is None else args.anc_sigma_tau,
        args.sigma_omega if args.anc_sigma_omega is None else args.anc_sigma_omega,
    )
    stats = run_cycles(channel, anc, args.cycles, args.trials, args.seed, args.threads)
    cols = [stats.cycles, stats.per_cycle_error, stats.cumulative_error, stats.stderr]
    header = CYCLES_HEADER
    if args.uncorrected:
        unc = run_uncorrected(channel, args.cycles, args.trials, args.seed, args.threads)
        cols += [unc.failure, unc.stderr]
        header += "," + UNCORRECTED_COLUMNS
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join([str(int(row[0]))] + [fmt(v) for v in row[1:]]))
    write_atomic(args.out, "\n".join(lines) + "\n")
    print(
        f"cycles={args.cycles} trials={args.trials} "
        f"final_cumulative={fmt(stats.cumulative_error[-1])} -> {args.out}"
    )


def load_budget(path: Path) -> tuple[LabNoiseBudget, Optional[float]]:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read budget {path}: {e}") from None
    if not isinstance(raw, dict):
        raise UsageError("budget JSON must be an object")
    unknown = set(raw) - set(BUDGET_FIELDS) - {"f_rep_hz"}
    if unknown:
        raise UsageError(f"unknown budget fields: {', '.join(sorted(unknown))}")
    values = {}
    for key, attr in BUDGET_FIELDS.items():
        v = raw.get(key, 0.0)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise UsageError(f"budget field {key} must be a number")
        values[attr] = float(v)
    f_rep = raw.get("f_rep_hz")
    if f_rep is not None and (isinstance(f_rep, bool) or not isinstance(f_rep, (int, float))):
        raise UsageError("budget field f_rep_hz must be a number")
    try:
        return LabNoiseBudget(**values), None if f_rep is None else float(f_rep)
    except DomainError as e:
        raise UsageError(str(e)) from None


def cmd_feasibility(args: argparse.Namespace) -> None:
    budget, budget_frep = (None, None) if args.budget is None else load_budget(args.budget)
    f_rep = args.frep_hz
    if f_rep is None:
        f_rep = budget_frep
    elif budget_frep is not None and budget_frep != f_rep:
        raise UsageError(f"--frep-hz {f_rep} disagrees with budget f_rep_hz {budget_frep}")
    if f_rep is None:
        raise UsageError("--frep-hz is required (or f_rep_hz in the budget)")
    comb = CombParams(f_rep, args.fceo_hz)

    inputs: dict[str, object] = {"f_rep_hz": comb.f_rep, "f_ceo_hz": comb.f_ceo}
    report: dict[str, object] = {
        "inputs": inputs,
        "comb": {"t_rep_s": comb.t_rep, "omega_rep_rad_s": comb.omega_rep},
        "lattice_scales": scales_dict(lattice_scales(comb)),
    }
    if budget is not None:
        inputs["budget"] = {k: getattr(budget, a) for k, a in BUDGET_FIELDS.items()}
        model = lab_to_dimensionless(budget, comb)
        report["noise"] = {
            "sigma_t_s": budget.sigma_t,
            "sigma_w_rad_s": budget.sigma_w,
            "sigma_tau": model.sigma_tau,
            "sigma_omega": model.sigma_omega,
            "p_fail": p_fail_analytic(model),
        }
    if args.res_tau is not None or args.res_omega is not None:
        inputs.update(res_tau=args.res_tau or 0.0, res_omega=args.res_omega or 0.0, margin=args.margin)
        r = resolution_check(args.res_tau or 0.0, args.res_omega or 0.0, args.margin)
        report["resolution"] = {
            "margin": r.margin,
            "tau": asdict(r.tau),
            "omega": asdict(r.omega),
            "passed": r.passed,
        }
    if args.f_ctrl is not None or args.f_op is not None:
        if args.f_ctrl is None or args.f_op is None:
            raise UsageError("--f-ctrl and --f-op must be given together")
        inputs.update(f_ctrl_hz=args.f_ctrl, f_op_hz=args.f_op)
        b = bandwidth_check(args.f_ctrl, args.f_op)
        report["bandwidth"] = {"f_ctrl_hz": b.f_ctrl, "f_op_hz": b.f_op, "margin": b.margin, "passed": b.passed}
    if args.actuator_freq is not None:
        inputs["actuator_freq_hz"] = args.actuator_freq
        report["actuators"] = {
            kind.value: {
                "corner_hz": a.corner_hz,
                "order": a.order,
                "magnitude": actuator_response(a, args.actuator_freq),
            }
            for kind, a in DEFAULT_ACTUATORS.items()
        }
    _emit(args, to_json(report), echo=True)


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse couplings {text!r}") from None


def cmd_supermode(args: argparse.Namespace) -> None:
    sw = supermode_weights(_parse_complex_list(args.g))
    report = {
        "weights": [[float(u.real), float(u.imag)] for u in sw.weights],
        "lambda": sw.lam,
    }
    _emit(args, to_json(report), echo=True)


# -- parser -------------------------------------------------------------------


def _threads(text: str) -> int:
    if text == "auto":
        return default_threads()
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _seed(text: str) -> int:
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line diagnostic, exit 2
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tfgkp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser, out_required: bool) -> None:
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument(
            "--threads", type=_threads, default=None,
            help=f"worker threads (default: ${THREADS_ENV} or CPU count)",
        )
        sp.add_argument("--out", type=Path, required=out_required)

    fm = sub.add_parser("failure-map", help="failure probability over a grid of noise widths")
    fm.add_argument("--sigma-tau", help="a:b:n")
    fm.add_argument("--sigma-omega", required=True, help="a:b:n")
    fm.add_argument("--mode", choices=("analytic", "mc"), default="analytic")
    fm.add_argument("--trials", type=int, default=100_000)
    fm.add_argument("--anisotropy", type=float, help="sweep sigma_tau = R * sigma_omega instead of a grid")
    fm.add_argument("--in-sqrt-pi", action="store_true", help="range values are multiples of sqrt(pi)")
    common(fm, True)
    fm.set_defaults(func=cmd_failure_map)

    mc = sub.add_parser("mc-failure", help="Monte Carlo failure estimate for one noise model")
    mc.add_argument("--sigma-tau", type=float, required=True)
    mc.add_argument("--sigma-omega", type=float, required=True)
    mc.add_argument("--trials", type=int, default=1_000_000)
    common(mc, False)
    mc.set_defaults(func=cmd_mc_failure)

    wg = sub.add_parser("wigner", help="Wigner function of a logical grid state on a grid")
    wg.add_argument("--state", type=int, choices=(0, 1), default=0)
    wg.add_argument("--sigma-tau", type=float, default=DEFAULT_SIGMA)
    wg.add_argument("--sigma-omega", type=float, default=DEFAULT_SIGMA)
    wg.add_argument("--n-peaks", type=int, default=DEFAULT_N_PEAKS)
    wg.add_argument("--grid", default="-8:8:161,-8:8:161", help="tmin:tmax:n,omin:omax:n")
    common(wg, True)
    wg.set_defaults(func=cmd_wigner)

    cy = sub.add_parser("cycles", help="repeated syndrome extraction and recovery")
    cy.add_argument("--sigma-tau", type=float, required=True)
    cy.add_argument("--sigma-omega", type=float, required=True)
    cy.add_argument("--anc-sigma-tau", type=float, help="default: channel sigma_tau")
    cy.add_argument("--anc-sigma-omega", type=float, help="default: channel sigma_omega")
    cy.add_argument("--cycles", type=int, default=25)
    cy.add_argument("--trials", type=int, default=100_000)
    cy.add_argument("--uncorrected", action="store_true")
    common(cy, True)
    cy.set_defaults(func=cmd_cycles)

    fe = sub.add_parser("feasibility", help="lattice scales and hardware margin report")
    fe.add_argument("--frep-hz", type=float)
    fe.add_argument("--fceo-hz", type=float, default=0.0)
    fe.add_argument("--budget", type=Path, help="lab noise budget JSON")
    fe.add_argument("--res-tau", type=float)
    fe.add_argument("--res-omega", type=float)
    fe.add_argument("--margin", type=float, default=10.0)
    fe.add_argument("--f-ctrl", type=float)
    fe.add_argument("--f-op", type=float)
    fe.add_argument("--actuator-freq", type=float, help="evaluate default actuator responses here (Hz)")
    common(fe, False)
    fe.set_defaults(func=cmd_feasibility)

    sm = sub.add_parser("supermode", help="normalise comb couplings to supermode weights")
    sm.add_argument("--g", required=True, help="comma-separated couplings, e.g. 1,1j")
    common(sm, False)
    sm.set_defaults(func=cmd_supermode)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    func: Callable[[argparse.Namespace], None] = args.func
    try:
        with np.errstate(invalid="raise", divide="raise", over="raise"):
            func(args)
    except (UsageError, DomainError, CapacityError) as e:
        sys.stderr.write(f"tfgkp {args.command}: error: {e}\n")
        return 2
    except (NumericFailure, FloatingPointError, OverflowError) as e:
        sys.stderr.write(f"tfgkp {args.command}: numeric failure: {e}\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
