"""Command-line interface.

Exit codes: 0 ok, 1 table cells deviate from their references, 2 bad
input or a solver error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bell import cglmp_value, critical_lr, optimize_settings
from .channels import ChannelKind, ChannelSpec, channel_output
from .criteria import (critical_analytic, critical_bisection, default_metric,
                       is_entangled, scan_surface)
from .errors import QnlError
from .fidelity import critical_fidelity, werner_gap
from .gellmann import gellmann_basis
from .reports import (CSV_DECIMALS, RunConfig, diff_report, surface_csv,
                      write_tables)
from .states import SchmidtState, max_entangled, qutrit_family, rank_k_state, schmidt_state
from .tensor import (Metric, colored_metric, correlation_tensor,
                     damping_metric, identity_metric)


def parse_state(d: int, text: str) -> SchmidtState:
    """Parse mes | qutrit:A,B | rank:K:C1,.. | coeffs:C0,.. specifiers."""
    if text == "mes":
        return max_entangled(d)
    name, sep, rest = text.partition(":")
    if not sep:
        raise QnlError(f"unknown state specifier {text!r}")
    if name == "qutrit":
        if d != 3:
            raise QnlError("qutrit states require --d 3")
        parts = [float(x) for x in rest.split(",")]
        if len(parts) != 2:
            raise QnlError("qutrit specifier needs two angles: qutrit:ALPHA,BETA")
        return qutrit_family(parts[0], parts[1])
    if name == "rank":
        k_text, sep2, coeff_text = rest.partition(":")
        if not sep2:
            raise QnlError("rank specifier needs rank:K:C1,C2,...")
        coeffs = np.array([float(x) for x in coeff_text.split(",")])
        return rank_k_state(d, int(k_text), coeffs)
    if name == "coeffs":
        coeffs = np.array([float(x) for x in rest.split(",")])
        if len(coeffs) != d:
            raise QnlError(f"coeffs specifier needs {d} values for --d {d}")
        return schmidt_state(d, coeffs)
    raise QnlError(f"unknown state specifier {text!r}")


def parse_metric(name: str, d: int, spec: ChannelSpec) -> Metric:
    if name in ("", "default"):
        return default_metric(spec.kind, d, spec.noise_free_fraction)
    if name == "identity":
        return identity_metric(d)
    if name == "colored":
        return colored_metric(d, spec.noise_free_fraction)
    if name == "ad":
        return damping_metric(d)
    raise QnlError(f"unknown metric {name!r}")


def _emit(text: str, out: str) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_matrix(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{x:.{CSV_DECIMALS}f}" for x in row))
    return "\n".join(lines) + "\n"


def cmd_basis(args) -> int:
    basis = gellmann_basis(args.d)
    if args.fmt == "csv":
        lines = ["index,group,j,k,row,col,re,im"]
        for idx in range(basis.size):
            j, k = basis.pair_of[idx]
            m = basis.matrices[idx]
            for r in range(args.d):
                for c in range(args.d):
                    if abs(m[r, c]) < 1e-15:
                        continue
                    lines.append(f"{idx},{basis.group_of[idx]},{j},{k},"
                                 f"{r},{c},{m[r, c].real:.{CSV_DECIMALS}f},"
                                 f"{m[r, c].imag:.{CSV_DECIMALS}f}")
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    payload = {
        "d": args.d,
        "count": basis.size,
        "matrices": [{
            "index": idx,
            "group": basis.group_of[idx],
            "pair": list(basis.pair_of[idx]),
            "re": basis.matrices[idx].real.tolist(),
            "im": basis.matrices[idx].imag.tolist(),
        } for idx in range(basis.size)],
    }
    _emit(_json(payload), args.out)
    return 0


def _state_and_output(args):
    spec = ChannelSpec.parse(args.channel)
    psi = parse_state(args.d, args.state)
    rho = channel_output(psi, spec)
    return spec, psi, rho


def cmd_tensor(args) -> int:
    spec, psi, rho = _state_and_output(args)
    t = correlation_tensor(rho)
    g = parse_metric(args.metric, args.d, spec)
    verdict = is_entangled(t, g)
    if args.fmt == "csv":
        n = t.t.shape[0]
        _emit(_csv_matrix([f"c{j}" for j in range(n)], t.t), args.out)
        return 0
    payload = {
        "d": args.d,
        "state": args.state,
        "channel": args.channel,
        "metric": args.metric or "default",
        "spectral_norm": verdict.spectral_norm,
        "norm_sq": verdict.norm_sq,
        "margin": verdict.margin,
        "entangled": verdict.entangled,
        "tensor": t.t.tolist(),
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_crit(args) -> int:
    spec = ChannelSpec.parse(args.channel)
    psi = parse_state(args.d, args.state)
    g = None if args.metric in ("", "default") else \
        parse_metric(args.metric, args.d, spec)
    if args.method == "analytic":
        res = critical_analytic(args.d, spec.kind)
    else:
        res = critical_bisection(psi, spec.kind, g)
    payload = {
        "parameter_name": res.parameter_name,
        "value": res.value,
        "method": res.method,
        "channel": res.channel.value,
        "state": res.state,
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_scan(args) -> int:
    spec = ChannelSpec.parse(args.channel) if ":" in args.channel \
        else ChannelSpec(ChannelKind(args.channel), 0.0)
    alphas = np.linspace(0.0, np.pi / 2.0, args.grid)
    betas = np.linspace(0.0, np.pi / 2.0, args.grid)
    scan = scan_surface(spec.kind, alphas, betas, quantity=args.quantity)
    if args.fmt == "json":
        value, alpha, beta = scan.minimum()
        payload = {
            "channel": spec.kind.value,
            "quantity": scan.quantity,
            "grid": args.grid,
            "minimum": {"value": value, "alpha": alpha, "beta": beta},
            "alphas": scan.alphas.tolist(),
            "betas": scan.betas.tolist(),
            "values": scan.values.tolist(),
            "never_detected": scan.flags.tolist(),
        }
        _emit(_json(payload), args.out)
        return 0
    _emit(surface_csv(scan), args.out)
    return 0


def cmd_cglmp(args) -> int:
    _, _, rho = _state_and_output(args)
    if args.optimize:
        bv = optimize_settings(rho, restarts=args.restarts, seed=args.seed)
    else:
        bv = cglmp_value(rho)
    payload = {
        "d": args.d,
        "state": args.state,
        "channel": args.channel,
        "optimized": bool(args.optimize),
        "i_d": bv.i_d,
        "violated": bv.violated,
        "probabilities": bv.probabilities.tolist(),
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_cglmp_crit(args) -> int:
    spec = ChannelSpec.parse(args.channel)
    psi = parse_state(args.d, args.state)
    res = critical_lr(psi, spec.kind)
    payload = {
        "parameter_name": res.parameter_name,
        "value": res.value,
        "method": res.method,
        "channel": res.channel.value,
        "state": res.state,
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_fidelity(args) -> int:
    spec = ChannelSpec.parse(args.channel)
    rep = critical_fidelity(args.d, spec.kind)
    payload = {
        "d": rep.d,
        "channel": rep.channel.value,
        "f_crit": rep.f_crit,
        "strength_at_threshold": rep.r_or_v_crit,
        "formula_value": rep.formula_value,
        "direct_value": rep.direct_value,
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_werner_gap(args) -> int:
    spec = ChannelSpec.parse(args.channel)
    gap = werner_gap(args.d, spec.kind)
    bell = critical_lr(max_entangled(args.d), spec.kind).value
    payload = {
        "d": args.d,
        "channel": spec.kind.value,
        "bell_threshold": bell,
        "detection_threshold": bell - gap,
        "gap": gap,
    }
    _emit(_json(payload), args.out)
    return 0


def cmd_tables(args) -> int:
    out_dir = args.out or "qnl_tables"
    bundle = write_tables(out_dir, tol=args.tolerance)
    report = diff_report(bundle)
    for entry in report["entries"]:
        status = "ok" if entry["ok"] else "FAIL"
        if entry["flags"]:
            status += f" [{','.join(entry['flags'])}]"
        sys.stdout.write(
            f"{entry['table']:9s} {entry['noise']:5s} d={entry['d']:3s} "
            f"{entry['state']:14s} computed={_opt(entry['computed'])} "
            f"expected={_opt(entry['expected'])} {status}\n")
    sys.stdout.write(f"{report['cells']} cells, {report['failures']} failures, "
                     f"{report['flagged']} flagged; written to {out_dir}\n")
    return 1 if bundle.failures else 0


def _opt(x: float | None) -> str:
    return "   n/a" if x is None else f"{x:.{CSV_DECIMALS}f}"


def build_parser() -> argparse.ArgumentParser:
    defaults = RunConfig()

    # fresh parent per subcommand: argparse set_defaults mutates shared
    # action objects, so a single parent would leak defaults across commands
    def common(fmt=defaults.fmt):
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument("--format", dest="fmt",
                            choices=("json", "csv"), default=fmt)
        parent.add_argument("--out", default=defaults.out,
                            help="output path (tables: output directory)")
        parent.add_argument("--seed", type=int, default=defaults.seed)
        return parent

    parser = argparse.ArgumentParser(
        prog="qnl",
        description="Entanglement detection and Bell analysis for noisy "
                    "two-qudit states.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("basis", parents=[common()],
                       help="dump the traceless Hermitian operator basis")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--json", action="store_const", const="json", dest="fmt")
    p.set_defaults(func=cmd_basis)

    for name, func, needs_state in (
            ("tensor", cmd_tensor, True),
            ("crit", cmd_crit, True),
            ("cglmp", cmd_cglmp, True),
            ("cglmp-crit", cmd_cglmp_crit, True)):
        p = sub.add_parser(name, parents=[common()])
        p.add_argument("--d", type=int, required=True)
        if needs_state:
            p.add_argument("--state", default=defaults.state)
        p.add_argument("--channel", default=defaults.channel)
        if name in ("tensor", "crit"):
            p.add_argument("--metric", default=defaults.metric,
                           choices=("", "default", "identity", "colored", "ad"))
        if name == "crit":
            p.add_argument("--method", default="bisection",
                           choices=("bisection", "analytic"))
        if name == "cglmp":
            p.add_argument("--optimize", action="store_true")
            p.add_argument("--restarts", type=int, default=defaults.restarts)
        p.set_defaults(func=func)

    p = sub.add_parser("scan", parents=[common(fmt="csv")],
                       help="critical-value surface over the qutrit family")
    p.add_argument("--channel", required=True,
                   help="channel kind, strength part ignored (white, product, ad)")
    p.add_argument("--grid", type=int, default=defaults.grid)
    p.add_argument("--quantity", default=defaults.quantity,
                   choices=("crit", "xi"))
    p.set_defaults(func=cmd_scan)

    for name, func in (("fidelity", cmd_fidelity),
                       ("werner-gap", cmd_werner_gap)):
        p = sub.add_parser(name, parents=[common()])
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--channel", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("tables", parents=[common()],
                       help="recompute the five summary tables and diff them")
    p.add_argument("--tolerance", type=float, default=defaults.cell_tolerance)
    p.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QnlError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
