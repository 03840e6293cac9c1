"""Command-line front end: purity reports, threshold scans, run simulation.

Output contracts kept stable for downstream tooling: CSV is UTF-8 with LF
endings and a fixed header row, numbers in full-precision scientific
notation; JSON is emitted in one canonical form (two-space indent, sorted
keys) so identical data is byte-identical on disk.
"""

import argparse
import json
import os
import sys

import numpy as np

from .chsh import max_chsh
from .experiment import RunConfig, witness_from_run
from .fock import coincidence_curves
from .qstate import (
    DensityOperator,
    make_density,
    partial_trace,
    ppt_min_eigenvalue,
    purity,
    singlet,
    werner,
)
from .two_copy import collision_probabilities, entropic_witness, purities_from_probabilities

_CONFIG_FIELDS = (
    "phi_grid",
    "shots_per_phase",
    "visibility",
    "background_rate",
    "seed",
    "detector_model",
)


def _fmt(x: float) -> str:
    return np.format_float_scientific(float(x), unique=True)


def _canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_state(spec: str) -> DensityOperator:
    if spec == "singlet":
        return singlet()
    if spec.startswith("werner:"):
        try:
            p = float(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"werner parameter is not a number in {spec!r}") from None
        return werner(p)
    if spec.startswith("file:"):
        return _load_matrix_file(spec.split(":", 1)[1])
    raise ValueError(f"unknown state family {spec!r} (expected singlet, werner:P or file:PATH)")


def _load_matrix_file(path: str) -> DensityOperator:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed matrix file {path}: {exc}") from None
    try:
        dim_a, dim_b = int(data["dim_a"]), int(data["dim_b"])
        raw = data["matrix"]
        mat = np.array(
            [[complex(e[0], e[1]) if isinstance(e, list) else complex(e) for e in row] for row in raw]
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed matrix file {path}: {exc!r}") from None
    return make_density(mat, dim_a, dim_b)


def _parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:n, got {spec!r}")
    try:
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"grid must look like start:stop:n, got {spec!r}") from None
    if n < 1:
        raise ValueError("phase grid is empty")
    return np.linspace(start, stop, n)


def cmd_purity(args) -> int:
    rho = _load_state(args.state)
    p = collision_probabilities(rho)
    rec = purities_from_probabilities(p)
    direct = (
        purity(rho),
        purity(partial_trace(rho, "A")),
        purity(partial_trace(rho, "B")),
    )
    verdict = entropic_witness(p)

    if args.format == "json":
        payload = {
            "state": args.state,
            "collisions": {"p_cc": p.p_cc, "p_ca": p.p_ca, "p_ac": p.p_ac, "p_aa": p.p_aa},
            "purities": {
                "joint": {"reconstructed": rec[0], "direct": direct[0]},
                "side_a": {"reconstructed": rec[1], "direct": direct[1]},
                "side_b": {"reconstructed": rec[2], "direct": direct[2]},
            },
            "witness": {
                "margin_a": verdict.margin_a,
                "margin_b": verdict.margin_b,
                "violated": verdict.entangled,
            },
        }
        _emit(_canonical_json(payload), args.out)
    elif args.format == "csv":
        header = (
            "p_cc,p_ca,p_ac,p_aa,"
            "tr_rho2_rec,tr_rho2,tr_rhoA2_rec,tr_rhoA2,tr_rhoB2_rec,tr_rhoB2,"
            "margin_a,margin_b"
        )
        row = [
            _fmt(v)
            for v in (
                p.p_cc, p.p_ca, p.p_ac, p.p_aa,
                rec[0], direct[0], rec[1], direct[1], rec[2], direct[2],
                verdict.margin_a, verdict.margin_b,
            )
        ]
        _emit(_csv(header, [row]), args.out)
    else:
        lines = [
            f"state: {args.state}",
            f"collision probabilities: p_cc={p.p_cc:.6f} p_ca={p.p_ca:.6f} "
            f"p_ac={p.p_ac:.6f} p_aa={p.p_aa:.6f}",
            f"tr rho^2  : reconstructed {rec[0]:.6f}  direct {direct[0]:.6f}",
            f"tr rhoA^2 : reconstructed {rec[1]:.6f}  direct {direct[1]:.6f}",
            f"tr rhoB^2 : reconstructed {rec[2]:.6f}  direct {direct[2]:.6f}",
            f"witness margins: a={verdict.margin_a:+.6f} b={verdict.margin_b:+.6f} "
            f"({'violated' if verdict.entangled else 'not violated'})",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_werner_scan(args) -> int:
    if not (0.0 <= args.pmin < args.pmax <= 1.0):
        raise ValueError(f"bad range: need 0 <= pmin < pmax <= 1, got [{args.pmin}, {args.pmax}]")
    if args.steps < 2:
        raise ValueError(f"steps must be at least 2, got {args.steps}")
    rows = []
    for p in np.linspace(args.pmin, args.pmax, args.steps):
        rho = werner(float(p))
        margin = entropic_witness(collision_probabilities(rho)).margin_a
        rows.append(
            {
                "p": float(p),
                "ppt_min_eig": float(ppt_min_eigenvalue(rho)),
                "entropic_margin": float(margin),
                "max_chsh": float(max_chsh(rho)),
            }
        )
    if args.format == "json":
        _emit(_canonical_json(rows), args.out)
    else:
        header = "p,ppt_min_eig,entropic_margin,max_chsh"
        body = [
            [_fmt(r["p"]), _fmt(r["ppt_min_eig"]), _fmt(r["entropic_margin"]), _fmt(r["max_chsh"])]
            for r in rows
        ]
        _emit(_csv(header, body), args.out)
    return 0


def cmd_phase_scan(args) -> int:
    grid = _parse_grid(args.grid) if args.grid else np.linspace(0.0, np.pi, 25)
    rows = coincidence_curves(grid)
    if args.format == "json":
        payload = [
            {"phi": phi, "p_cc": cc, "p_ca": ca, "p_ac": ac, "p_aa": aa}
            for phi, cc, ca, ac, aa in rows
        ]
        _emit(_canonical_json(payload), args.out)
    else:
        header = "phi,p_cc,p_ca,p_ac,p_aa"
        body = [[_fmt(v) for v in row] for row in rows]
        _emit(_csv(header, body), args.out)
    return 0


def cmd_simulate(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed config file {args.config}: {exc}") from None
    if not isinstance(raw, dict):
        raise ValueError(f"config file {args.config} must hold a JSON object")
    unknown = sorted(set(raw) - set(_CONFIG_FIELDS))
    if unknown:
        raise ValueError(f"unknown config field(s): {', '.join(unknown)}")
    if args.seed is not None:
        raw["seed"] = args.seed
    try:
        config = RunConfig(**raw)
    except TypeError:
        missing = [f for f in ("phi_grid", "shots_per_phase") if f not in raw]
        raise ValueError(f"config is missing required field(s): {', '.join(missing)}") from None

    report = witness_from_run(config)

    os.makedirs(args.out, exist_ok=True)
    counts_rows = [
        [_fmt(rec["phi"])] + [str(rec[k]) for k in ("n_cc", "n_ca", "n_ac", "n_aa", "n_other")]
        for rec in report["counts"]
    ]
    with open(os.path.join(args.out, "counts.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(_csv("phi,n_cc,n_ca,n_ac,n_aa,n_other", counts_rows))
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8", newline="") as fh:
        fh.write(_canonical_json(report))

    w = report["witness"]
    print(f"witness {w['verdict']} (significance {w['significance']:.2f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi2",
        description="Two-copy collision probabilities: purity reports, threshold scans, run simulation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_pur = sub.add_parser("purity", help="collision probabilities and purities of one state")
    p_pur.add_argument("--state", required=True, help="singlet | werner:P | file:PATH")
    p_pur.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_pur.add_argument("--out", default=None, help="write to this file instead of stdout")
    p_pur.set_defaults(func=cmd_purity)

    p_wer = sub.add_parser("werner-scan", help="threshold table over the Werner family")
    p_wer.add_argument("--pmin", type=float, default=0.0)
    p_wer.add_argument("--pmax", type=float, default=1.0)
    p_wer.add_argument("--steps", type=int, default=21)
    p_wer.add_argument("--format", choices=("csv", "json"), default="csv")
    p_wer.add_argument("--out", default=None)
    p_wer.set_defaults(func=cmd_werner_scan)

    p_phs = sub.add_parser("phase-scan", help="ideal four-photon outcome curves")
    p_phs.add_argument("--grid", default=None, help="start:stop:n (default 0:pi:25)")
    p_phs.add_argument("--format", choices=("csv", "json"), default="csv")
    p_phs.add_argument("--out", default=None)
    p_phs.set_defaults(func=cmd_phase_scan)

    p_sim = sub.add_parser("simulate", help="simulate a run and analyze it")
    p_sim.add_argument("--config", required=True, help="JSON file with run settings")
    p_sim.add_argument("--out", required=True, help="output directory for counts.csv and report.json")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
