"""Command-line interface: build, classify, analyze, scan, and reproduce.

Exit codes: 0 when every requested check holds, 1 when a certified property
fails (the witness is emitted), 2 on usage or parameter errors.  All output
is deterministic byte-for-byte for a given configuration: exact values are
printed as "num/den" strings, numeric values as decimal strings with an
explicit precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .charpoly import charpoly, eta
from .classify import (
    PAIR_SWEEP_CAP,
    ClassReport,
    SweepCapExceeded,
    gkk_structured,
    is_GKK,
    is_omega,
    is_P_matrix,
    is_positive_stable,
    is_tau,
    is_weakly_sign_symmetric,
    varga_wedge_check,
)
from .exact import RatMatrix, frac_str
from .family import FamilyParams, build_A, build_B
from .hurwitz import (
    build_hurwitz,
    closed_form_minor,
    hurwitz_minor_2to5,
    routh_stable,
    scan_csv_lines,
    threshold_scan,
    tnn_spot_check,
)
from .rootfind import complex_roots, refine, root_strings, sturm_isolate
from .verify import run_verification

ALL_PROPERTIES = ["P", "WSS", "GKK", "OMEGA", "TAU", "POS_STABLE", "VARGA_WEDGE"]


@dataclass
class RunConfig:
    """Resolved options shared by the subcommands."""

    n: int | None = None
    k: int | None = None
    t: str | None = None
    limit: bool = False
    properties: str = "all"
    cap_n: int = PAIR_SWEEP_CAP
    precision: int = 80
    jobs: int = 1
    k_max: int = 40
    max_order: int = 4
    output: str | None = None
    format: str = "json"


def _load_config_file(path: str) -> dict:
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    for key, value in file_values.items():
        if not hasattr(cfg, key):
            _usage_error(f"unknown config key: {key}")
        setattr(cfg, key, value)
    for key in vars(cfg):
        if hasattr(args, key) and getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    return cfg


def _usage_error(message: str):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(2)


def _parse_t(text: str) -> Fraction:
    try:
        t = Fraction(text)
    except (ValueError, ZeroDivisionError):
        _usage_error(f"cannot parse t={text!r} as a rational")
    if not 0 < t < 1:
        _usage_error(f"t must lie in (0,1), got {t}")
    return t


def _build_matrix(cfg: RunConfig) -> tuple[RatMatrix, dict, FamilyParams | None]:
    try:
        if cfg.limit:
            if cfg.k is None:
                _usage_error("--limit needs --k")
            mat = build_B(cfg.k)
            return mat, {"k": cfg.k, "limit": True}, None
        if cfg.n is None or cfg.k is None or cfg.t is None:
            _usage_error("need --n, --k and --t (or --k with --limit)")
        params = FamilyParams(cfg.n, cfg.k, _parse_t(cfg.t))
    except ValueError as exc:
        _usage_error(str(exc))
    return build_A(params), {"n": cfg.n, "k": cfg.k, "t": frac_str(params.t)}, params


def _emit(text: str, cfg: RunConfig):
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)


def cmd_build(args) -> int:
    cfg = _merge_config(args)
    mat, _, _ = _build_matrix(cfg)
    _emit(mat.to_json(), cfg)
    return 0


def cmd_charpoly(args) -> int:
    cfg = _merge_config(args)
    mat, _, _ = _build_matrix(cfg)
    _emit(charpoly(mat).to_json(), cfg)
    return 0


def cmd_roots(args) -> int:
    cfg = _merge_config(args)
    mat, params, _ = _build_matrix(cfg)
    p = charpoly(mat)
    width = Fraction(1, 2**cfg.precision)
    real = [
        {"lo": frac_str(e.lo), "hi": frac_str(e.hi), "simple": e.multiplicity_simple}
        for e in (refine(e, p, width) for e in sturm_isolate(p))
    ]
    payload = {
        "params": params,
        "degree": p.degree,
        "real_root_enclosures": real,
        "complex_roots": root_strings(complex_roots(p), digits=25),
        "precision_digits": 25,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), cfg)
    return 0


def cmd_classify(args) -> int:
    cfg = _merge_config(args)
    mat, params, family_params = _build_matrix(cfg)
    requested = ALL_PROPERTIES if cfg.properties == "all" else cfg.properties.split(",")
    for prop in requested:
        if prop not in ALL_PROPERTIES:
            _usage_error(f"unknown property {prop!r}; choose from {','.join(ALL_PROPERTIES)}")
    reports: list[ClassReport] = []
    try:
        for prop in requested:
            reports.append(_run_property(prop, mat, family_params, cfg))
    except SweepCapExceeded as exc:
        _usage_error(str(exc))
    for rep in reports:
        rep.params = params
        print(json.dumps(rep.to_dict(), sort_keys=True))
    return 0 if all(r.holds for r in reports) else 1


def _run_property(prop: str, mat: RatMatrix, family_params, cfg: RunConfig) -> ClassReport:
    cap = cfg.cap_n
    if prop == "P":
        return is_P_matrix(mat, cap=max(cap, 14))
    if prop == "WSS":
        return is_weakly_sign_symmetric(mat, cap=cap)
    if prop == "GKK":
        if mat.rows <= cap:
            return is_GKK(mat, cap=cap, jobs=cfg.jobs)
        if family_params is not None:
            return gkk_structured(family_params)
        raise SweepCapExceeded(
            f"Hadamard-Fischer sweep capped at n <= {cap} and no structured certificate applies"
        )
    if prop == "OMEGA":
        return is_omega(mat, cap=cap)
    if prop == "TAU":
        return is_tau(mat, cap=cap)
    if prop == "POS_STABLE":
        return is_positive_stable(mat)
    if prop == "VARGA_WEDGE":
        return varga_wedge_check(mat)
    raise AssertionError(prop)


def cmd_hurwitz(args) -> int:
    cfg = _merge_config(args)
    if cfg.k is None or cfg.k < 1:
        _usage_error("hurwitz needs --k >= 1")
    p = eta(cfg.k)
    h = build_hurwitz(p)
    payload = {
        "k": cfg.k,
        "order": h.matrix.rows,
        "eta_coeffs": [frac_str(c) for c in p.coeffs],
        "routh_verdict": routh_stable(p),
    }
    if cfg.k >= 3:
        payload["minor_2to5"] = frac_str(hurwitz_minor_2to5(cfg.k))
        payload["closed_form_minor"] = frac_str(closed_form_minor(cfg.k))
    if args.tnn:
        rep = tnn_spot_check(h, max_order=min(cfg.max_order, h.matrix.rows))
        payload["tnn_negative_minor"] = (
            None
            if rep.negative_minor is None
            else {
                "order": rep.negative_minor[0],
                "rows": rep.negative_minor[1],
                "cols": rep.negative_minor[2],
                "value": frac_str(rep.negative_minor[3]),
            }
        )
        payload["tnn_minors_checked"] = rep.minors_checked
    _emit(json.dumps(payload, sort_keys=True, indent=2), cfg)
    return 0


def cmd_scan_k(args) -> int:
    cfg = _merge_config(args)
    try:
        scan = threshold_scan(cfg.k_max)
    except ValueError as exc:
        _usage_error(str(exc))
    lines = scan_csv_lines(scan)
    text = "\n".join(lines)
    if cfg.format == "json":
        payload = {
            "first_unstable_k": scan.first_negative_k,
            "rows": [
                {
                    "k": r.k,
                    "cubic_factor": r.cubic,
                    "minor_value": frac_str(r.minor_value),
                    "sign": r.sign,
                }
                for r in scan.rows
            ],
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2), cfg)
    else:
        _emit(text, cfg)
    print(f"first unstable k = {scan.first_negative_k}")
    return 0


def cmd_verify_paper(args) -> int:
    cfg = _merge_config(args)
    ok = run_verification(jobs=cfg.jobs, quick=args.quick)
    return 0 if ok else 1


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="TOML config file; flags override file values")
    sub.add_argument("--output", help="write the main payload to this path")
    sub.add_argument("--format", choices=["json", "csv"], default=None)
    sub.add_argument("--precision", type=int, default=None, help="root refinement width exponent")
    sub.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    sub.add_argument("--cap-n", dest="cap_n", type=int, default=None, help="brute-force sweep cap")


def _add_matrix_args(sub: argparse.ArgumentParser):
    sub.add_argument("--n", type=int, default=None, help="matrix order")
    sub.add_argument("--k", type=int, default=None, help="band parameter")
    sub.add_argument("--t", default=None, help="rational weight as num/den, in (0,1)")
    # store_const keeps the default at None so a config-file value survives
    sub.add_argument(
        "--limit",
        action="store_const",
        const=True,
        default=None,
        help="build the t->0 limit matrix for --k",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkktau",
        description="Exact construction and certification of a Toeplitz Hessenberg "
        "matrix family, its positivity classes, and its instability threshold.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("build", help="emit a family matrix in the JSON exchange format")
    _add_matrix_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_build)

    sub = subs.add_parser("charpoly", help="emit the characteristic polynomial")
    _add_matrix_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_charpoly)

    sub = subs.add_parser("roots", help="real root enclosures and complex roots of the charpoly")
    _add_matrix_args(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_roots)

    sub = subs.add_parser("classify", help="certify matrix classes with witnesses")
    _add_matrix_args(sub)
    sub.add_argument(
        "--properties",
        default=None,
        help=f"comma list from {','.join(ALL_PROPERTIES)}, or 'all'",
    )
    _add_common(sub)
    sub.set_defaults(func=cmd_classify)

    sub = subs.add_parser("hurwitz", help="Hurwitz matrix report for the reversed stability polynomial")
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--tnn", action="store_true", help="run the totally-nonnegative spot check")
    sub.add_argument("--max-order", dest="max_order", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_hurwitz)

    sub = subs.add_parser("scan-k", help="sign table of the threshold minor for k = 3..k_max")
    sub.add_argument("--k-max", dest="k_max", type=int, default=None)
    _add_common(sub)
    sub.set_defaults(func=cmd_scan_k)

    sub = subs.add_parser("verify-paper", help="run the full reproduction suite")
    sub.add_argument("--quick", action="store_true", help="skip the slowest sweeps")
    _add_common(sub)
    sub.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
