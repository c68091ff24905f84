"""Command line front end.

Subcommands read a JSON config file, run one library operation, and write a
report to stdout or --out as JSON (full fidelity, byte-stable) or CSV (the
tabular core of the same report).  Exit codes: 0 when the requested check or
bound holds (or the command is purely informational), 2 when a bound or check
is violated beyond statistical slack, 1 for usage, config, or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Mapping, Sequence

import numpy as np

from ._version import __version__
from .experiments import (
    ExperimentConfig,
    choose_bound,
    run_single_volume,
    run_two_volume,
)
from .hamiltonian import HamiltonianSpec, HamiltonianTemplate, InteractionSpec
from .lattice import PairPoint, classify_separation, make_box
from .potential import DistributionSpec, RngStream, sample_field
from .spectral import verify_dm_eigenvalues
from .stollmann import (
    DMFunctionSpec,
    IntervalSpec,
    check_dm_function,
    coordinate_max,
    coordinate_sum,
    layer_sets_check,
    order_statistic,
    positive_linear,
    single_coordinate,
    stollmann_exact,
    stollmann_mc,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems via exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _check_keys(data: Mapping, allowed: set[str], required: set[str], what: str) -> None:
    extra = set(data) - allowed
    if extra:
        raise ValueError(f"unknown keys in {what} config: {sorted(extra)}")
    missing = required - set(data)
    if missing:
        raise ValueError(f"{what} config lacks required keys: {sorted(missing)}")


def _load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"config is not valid JSON: {err}") from None
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data


def _pair(raw, what: str) -> PairPoint:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ValueError(f"{what} must be a pair of coordinate lists")
    return PairPoint.of(raw[0], raw[1])


def _csv_lines(payload: dict) -> list[str]:
    kind = payload.get("kind")
    if kind == "single_volume":
        lines = ["trial,distance"]
        for i, d in enumerate(payload["per_trial_dist"], start=1):
            lines.append(f"{i},{d!r}")
        return lines
    if kind == "two_volume":
        cols = [
            "round_index",
            "frozen_digest",
            "trials",
            "hits",
            "empirical_probability",
            "std_error",
            "verdict",
            "dist_min",
            "dist_mean",
        ]
        lines = [",".join(cols)]
        for r in payload["rounds"]:
            lines.append(",".join(str(r[c]) for c in cols))
        return lines
    if kind == "spectrum":
        lines = ["index,eigenvalue"]
        for i, v in enumerate(payload["eigenvalues"]):
            lines.append(f"{i},{v!r}")
        return lines
    if kind == "hamiltonian":
        return [",".join(repr(v) for v in row) for row in payload["matrix"]]
    if kind == "geometry":
        return ["separation_class"] + list(payload["separation_classes"])
    # flat field,value table for the remaining report kinds
    lines = ["field,value"]
    for k, v in payload.items():
        if isinstance(v, (dict, list)):
            continue
        lines.append(f"{k},{v}")
    return lines


def write_report(report, fmt: str, out: str | None) -> None:
    """Serialise a report (object with to_dict, or a plain dict) and write it.

    JSON output is the full report with a trailing newline; identical reports
    serialise to identical bytes.  CSV output carries the tabular core only.
    """
    payload = report.to_dict() if hasattr(report, "to_dict") else report
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        text = "\n".join(_csv_lines(payload)) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _experiment_config(args, *, two_volume: bool) -> ExperimentConfig:
    data = _load_config(args.config)
    if args.seed is not None:
        data = {**data, "master_seed": args.seed}
    config = ExperimentConfig.from_dict(data, threads=args.threads)
    if two_volume:
        if config.center_prime is None or config.conditioning_rounds is None:
            raise ValueError(
                "two-volume config needs center_prime and conditioning_rounds"
            )
    else:
        if config.energy is None:
            raise ValueError("single-volume config needs an energy")
    return config


def _cmd_wegner_single(args) -> int:
    report = run_single_volume(_experiment_config(args, two_volume=False))
    write_report(report, args.format, args.out)
    return 0 if report.verdict == "holds" else 2


def _cmd_wegner_two(args) -> int:
    report = run_two_volume(_experiment_config(args, two_volume=True))
    write_report(report, args.format, args.out)
    return 0 if report.verdict == "holds" else 2


def _cmd_geometry_classify(args) -> int:
    data = _load_config(args.config)
    _check_keys(
        data,
        allowed={"dimension", "radius", "center", "center_prime"},
        required={"dimension", "radius", "center", "center_prime"},
        what="geometry",
    )
    u = _pair(data["center"], "center")
    u_prime = _pair(data["center_prime"], "center_prime")
    radius = int(data["radius"])
    if u.dimension != int(data["dimension"]):
        raise ValueError("box centres must match the configured dimension")
    classes = classify_separation(u, u_prime, radius)
    payload = {
        "kind": "geometry",
        "dimension": int(data["dimension"]),
        "radius": radius,
        "center": [list(u.first), list(u.second)],
        "center_prime": [list(u_prime.first), list(u_prime.second)],
        "separation_classes": sorted(c.value for c in classes),
        "bound_choice": choose_bound(classes).value,
    }
    write_report(payload, args.format, args.out)
    return 0


_HAMILTONIAN_KEYS = {
    "dimension",
    "radius",
    "center",
    "interaction",
    "coupling",
    "hopping_norm",
    "dist",
    "master_seed",
}


def _assembled_from_config(args) -> tuple[HamiltonianTemplate, np.ndarray, np.ndarray]:
    """Template, sampled field values (site order), and assembled matrix."""
    data = _load_config(args.config)
    if args.seed is not None:
        data = {**data, "master_seed": args.seed}
    _check_keys(
        data,
        allowed=_HAMILTONIAN_KEYS,
        required={"dimension", "radius", "center", "dist", "master_seed"},
        what="hamiltonian",
    )
    center = _pair(data["center"], "center")
    if center.dimension != int(data["dimension"]):
        raise ValueError("box centre must match the configured dimension")
    box = make_box(center, int(data["radius"]))
    spec = HamiltonianSpec(
        box=box,
        interaction=InteractionSpec.from_dict(
            data.get("interaction", {"entries": []}),
            default_r_max=int(data["dimension"]),
        ),
        coupling=float(data.get("coupling", 1.0)),
        hopping_norm=data.get("hopping_norm", "sup"),
    )
    template = HamiltonianTemplate(spec)
    dist = DistributionSpec.from_dict(data["dist"])
    field = sample_field(template.sites, dist, RngStream(int(data["master_seed"]), 0))
    site_values = field.array(template.sites)
    matrix = template.assemble_values(site_values)
    return template, site_values, matrix


def _cmd_build_hamiltonian(args) -> int:
    template, site_values, matrix = _assembled_from_config(args)
    payload = {
        "kind": "hamiltonian",
        "dim": template.dim,
        "points": [[list(p.first), list(p.second)] for p in template.points],
        "sites": [list(s) for s in template.sites],
        "field": [float(v) for v in site_values],
        "matrix": [[float(v) for v in row] for row in matrix],
    }
    write_report(payload, args.format, args.out)
    return 0


def _cmd_spectrum(args) -> int:
    _, _, matrix = _assembled_from_config(args)
    eigs = np.linalg.eigvalsh(matrix)
    payload = {
        "kind": "spectrum",
        "source_dim": int(matrix.shape[0]),
        "eigenvalues": [float(v) for v in eigs],
    }
    write_report(payload, args.format, args.out)
    return 0


def _function_from_config(data: Mapping) -> DMFunctionSpec:
    if "form" not in data:
        raise ValueError("function config needs a 'form'")
    form = data["form"]
    allowed_by_form = {
        "sum": {"form", "arity"},
        "max": {"form", "arity"},
        "coordinate": {"form", "arity", "index"},
        "linear": {"form", "coeffs"},
        "order": {"form", "arity", "k", "shifts"},
    }
    if form not in allowed_by_form:
        raise ValueError(f"unknown function form {form!r}")
    _check_keys(data, allowed=allowed_by_form[form], required={"form"}, what=f"{form} function")
    if form == "sum":
        return coordinate_sum(int(data["arity"]))
    if form == "max":
        return coordinate_max(int(data["arity"]))
    if form == "coordinate":
        return single_coordinate(int(data["arity"]), int(data.get("index", 0)))
    if form == "linear":
        return positive_linear([float(c) for c in data["coeffs"]])
    shifts = data.get("shifts")
    return order_statistic(
        int(data["arity"]),
        int(data["k"]),
        None if shifts is None else [float(s) for s in shifts],
    )


def _cmd_stollmann_check(args) -> int:
    data = _load_config(args.config)
    if args.seed is not None:
        data = {**data, "master_seed": args.seed}
    _check_keys(
        data,
        allowed={"function", "dist", "interval", "mode", "trials", "master_seed", "grid"},
        required={"function", "dist", "interval"},
        what="stollmann",
    )
    f = _function_from_config(data["function"])
    dist = DistributionSpec.from_dict(data["dist"])
    raw_interval = data["interval"]
    if not isinstance(raw_interval, (list, tuple)) or len(raw_interval) != 2:
        raise ValueError("interval must be [lower, upper]")
    interval = IntervalSpec(lower=float(raw_interval[0]), upper=float(raw_interval[1]))
    mode = data.get("mode", "exact")
    if mode == "exact":
        res = stollmann_exact(f, dist, interval)
        payload = {
            "kind": "stollmann_exact",
            "function": f.name,
            "interval": [interval.lower, interval.upper],
            "probability": res.probability,
            "bound": res.bound,
            "holds": res.holds,
        }
        write_report(payload, args.format, args.out)
        return 0 if res.holds else 2
    if mode == "mc":
        if "trials" not in data or "master_seed" not in data:
            raise ValueError("mc mode needs trials and master_seed")
        res = stollmann_mc(
            f, dist, interval, int(data["trials"]), RngStream(int(data["master_seed"]), 0)
        )
        payload = {
            "kind": "stollmann_mc",
            "function": f.name,
            "interval": [interval.lower, interval.upper],
            "estimate": res.estimate,
            "std_error": res.std_error,
            "bound": res.bound,
            "holds_within_3sigma": res.holds_within_3sigma,
        }
        write_report(payload, args.format, args.out)
        return 0 if res.holds_within_3sigma else 2
    if mode == "layers":
        if "grid" not in data:
            raise ValueError("layers mode needs a grid")
        res = layer_sets_check(f, [float(x) for x in data["grid"]], interval)
        payload = {
            "kind": "stollmann_layers",
            "function": f.name,
            "interval": [interval.lower, interval.upper],
            "passed": res.passed,
            "chain_ok": res.chain_ok,
            "inclusion_ok": res.inclusion_ok,
            "inclusion_failures": res.inclusion_failures,
            "grid_points": res.grid_points,
        }
        write_report(payload, args.format, args.out)
        return 0 if res.passed else 2
    raise ValueError(f"unknown mode {mode!r}; pick exact, mc, or layers")


def _cmd_dm_check(args) -> int:
    data = _load_config(args.config)
    if args.seed is not None:
        data = {**data, "master_seed": args.seed}
    target = data.get("target", "function")
    if target == "function":
        _check_keys(
            data,
            allowed={"target", "function", "domain", "samples", "master_seed", "tolerance"},
            required={"function", "domain", "samples", "master_seed"},
            what="dm function",
        )
        f = _function_from_config(data["function"])
        domain = data["domain"]
        if not isinstance(domain, (list, tuple)) or len(domain) != 2:
            raise ValueError("domain must be [lo, hi]")
        report = check_dm_function(
            f,
            (float(domain[0]), float(domain[1])),
            int(data["samples"]),
            RngStream(int(data["master_seed"]), 0),
            tolerance=float(data.get("tolerance", 1e-12)),
        )
    elif target == "eigenvalues":
        _check_keys(
            data,
            allowed={
                "target",
                "dimension",
                "radius",
                "center",
                "interaction",
                "coupling",
                "hopping_norm",
                "dist",
                "trials",
                "master_seed",
                "tolerance",
            },
            required={"dimension", "radius", "center", "dist", "trials", "master_seed"},
            what="dm eigenvalue",
        )
        center = _pair(data["center"], "center")
        if center.dimension != int(data["dimension"]):
            raise ValueError("box centre must match the configured dimension")
        spec = HamiltonianSpec(
            box=make_box(center, int(data["radius"])),
            interaction=InteractionSpec.from_dict(
                data.get("interaction", {"entries": []}),
                default_r_max=int(data["dimension"]),
            ),
            coupling=float(data.get("coupling", 1.0)),
            hopping_norm=data.get("hopping_norm", "sup"),
        )
        template = HamiltonianTemplate(spec)
        dist = DistributionSpec.from_dict(data["dist"])
        seed = int(data["master_seed"])
        field = sample_field(template.sites, dist, RngStream(seed, 0))
        report = verify_dm_eigenvalues(
            spec,
            field,
            int(data["trials"]),
            RngStream(seed, 1),
            tolerance=float(data.get("tolerance", 1e-9)),
        )
    else:
        raise ValueError(f"unknown dm-check target {target!r}")
    payload = {
        "kind": "dm_check",
        "name": report.name,
        "passed": report.passed,
        "checks": report.checks,
        "worst_monotonicity_violation": report.worst_monotonicity_violation,
        "worst_diagonal_defect": report.worst_diagonal_defect,
        "tolerance": report.tolerance,
        "witnesses": report.witnesses,
    }
    write_report(payload, args.format, args.out)
    return 0 if report.passed else 2


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="wegner2p",
        description="Two-particle disorder models: spectra and concentration bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.set_defaults(handler=handler)
        return p

    add("geometry-classify", _cmd_geometry_classify, "separation classes of two box centres")
    add("build-hamiltonian", _cmd_build_hamiltonian, "assemble one sampled operator matrix")
    add("spectrum", _cmd_spectrum, "eigenvalues of one sampled operator")
    add("wegner-single", _cmd_wegner_single, "single-volume concentration bound experiment")
    add("wegner-two", _cmd_wegner_two, "two-volume conditional bound experiment")
    add("stollmann-check", _cmd_stollmann_check, "interval probability vs DM bound")
    add("dm-check", _cmd_dm_check, "diagonal monotonicity checks")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    parser = _build_parser()
    args_list = list(sys.argv[1:] if argv is None else argv)
    if not args_list:
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(args_list)
    except _UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SystemExit as err:  # --help and --version land here
        return int(err.code or 0)
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        print("error: a subcommand is required", file=sys.stderr)
        return 1
    try:
        return args.handler(args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except KeyError as err:
        print(f"error: missing config key {err}", file=sys.stderr)
        return 1
    except RuntimeError as err:
        print(f"invariant violated: {err}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
