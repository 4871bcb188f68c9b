"""Command line interface.

    secular series --model mathieu-2pi-even --state 1 --order 4
    secular table  --model mathieu-2pi-even --states 1,2 --orders 10..13
    secular check  --model mathieu-2pi-even --lambda 1/10 --order 13

Exit status: 0 success, 2 configuration error, 3 numerical failure,
4 model error.

Model files (``--model-file``) are YAML or JSON mappings::

    kind: generic            # or one of the mathieu-* kinds
    dim: 3                   # optional for mathieu kinds
    diag0: ["1", "2", "3"]
    bands:
      "1": ["1", "1/2"]
      "-1": ["1", "1/2"]
      "0": ["0", "0", "1"]
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple

import mpmath
import yaml

from . import __version__
from .ese import TruncationMode, build_ese, ese_discriminant
from .eplocate import (
    REFERENCE_MODULUS,
    ExceptionalPointEstimate,
    InsufficientCoefficientsError,
    NoExceptionalPointError,
    OracleConvergenceError,
    TableRow,
    eigen_series,
    ep_table,
    locate_ep,
    oracle_eigenvalues,
    radius_estimates,
)
from .exactnum import format_rational, parse_rational, series_eval
from .models import ModelError, ModelKind, ModelSpec
from .roots import DEFAULT_PRECISION_BITS, DEFAULT_SEED, RootFindingError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_MODEL = 4

COMMANDS = ("series", "ese", "ep", "table", "check", "radius")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: str = ModelKind.MATHIEU_2PI_EVEN.value
    model_spec: dict | None = None
    states: list[int] = field(default_factory=lambda: [1, 2])
    orders: list[int] = field(default_factory=lambda: [13])
    mode: str = TruncationMode.FULL.value
    precision_bits: int = DEFAULT_PRECISION_BITS
    output_format: str = "human"
    seed: int = DEFAULT_SEED
    lam: str | None = None
    dim: int | None = None

    def spec(self) -> ModelSpec:
        if self.model_spec is not None:
            return ModelSpec.from_mapping(self.model_spec)
        return ModelSpec(kind=self.model, dim=self.dim)


def parse_orders(text: str) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad order specification {text!r}") from exc
    if not out or any(k < 0 for k in out):
        raise ConfigError(f"bad order specification {text!r}")
    return out


def parse_states(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad state list {text!r}") from exc
    if not out or any(n < 1 for n in out):
        raise ConfigError(f"bad state list {text!r}")
    return out


def load_model_file(path: str) -> dict:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"model file {path} is not a mapping")
    # YAML turns bare offsets into ints; keep keys as strings for the report
    data["bands"] = {str(k): [str(v) for v in vals] for k, vals in (data.get("bands") or {}).items()}
    data["diag0"] = [str(v) for v in data.get("diag0") or ()]
    return data


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default=ModelKind.MATHIEU_2PI_EVEN.value,
                        choices=[k.value for k in ModelKind if k.is_mathieu])
    common.add_argument("--model-file", help="YAML/JSON model description")
    common.add_argument("--dim", type=int, help="matrix section size for Mathieu models")
    common.add_argument("--states", help="comma separated 1-based state indices")
    common.add_argument("--state", type=int, help="single state index")
    common.add_argument("--order", type=int, help="perturbation order K")
    common.add_argument("--orders", help="order range a..b or list a,b,c")
    common.add_argument("--mode", default=TruncationMode.FULL.value, choices=[m.value for m in TruncationMode])
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
    common.add_argument("--format", dest="output_format", default="human", choices=("human", "json", "csv"))
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--lambda", dest="lam", help="coupling, rational or decimal string")

    parser = argparse.ArgumentParser(prog="secular", description="Effective secular equation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "series": "exact eigenvalue perturbation series",
        "ese": "effective secular equation and its discriminant",
        "ep": "exceptional point at one order",
        "table": "exceptional point for a range of orders",
        "check": "series against direct diagonalisation",
        "radius": "radius of convergence from the coefficients",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.states and args.state is not None:
        raise ConfigError("give either --states or --state")
    if args.order is not None and args.orders:
        raise ConfigError("give either --order or --orders")
    if args.precision_bits < 53:
        raise ConfigError("--precision-bits must be at least 53")

    defaults = {
        "series": ([1], [4]),
        "ese": ([1, 2], [13]),
        "ep": ([1, 2], [13]),
        "table": ([1, 2], list(range(10, 14))),
        "check": ([1, 2], [13]),
        "radius": ([1], [13]),
    }
    states, orders = defaults[args.command]
    if args.states:
        states = parse_states(args.states)
    elif args.state is not None:
        if args.state < 1:
            raise ConfigError("state index must be >= 1")
        states = [args.state]
    if args.orders:
        orders = parse_orders(args.orders)
    elif args.order is not None:
        if args.order < 0:
            raise ConfigError("order must be >= 0")
        orders = [args.order]
    if args.command != "table" and len(orders) != 1:
        raise ConfigError(f"'{args.command}' takes a single order")

    lam = args.lam
    if args.command == "check":
        lam = lam or "1/10"
    if lam is not None:
        try:
            parse_rational(lam)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    model_spec = load_model_file(args.model_file) if args.model_file else None
    return RunConfig(
        command=args.command,
        model=model_spec["kind"] if model_spec else args.model,
        model_spec=model_spec,
        states=states,
        orders=orders,
        mode=args.mode,
        precision_bits=args.precision_bits,
        output_format=args.output_format,
        seed=args.seed,
        lam=lam,
        dim=args.dim,
    )


# --------------------------------------------------------------------------
# reports


def _digits(bits: int) -> int:
    return int(bits * math.log10(2))


def _num(x, bits: int) -> str:
    return mpmath.nstr(x, _digits(bits), min_fixed=-math.inf, max_fixed=math.inf)


def _estimate_row(e: ExceptionalPointEstimate, bits: int) -> dict:
    with mpmath.workprec(bits):
        dev = abs(e.modulus - mpmath.mpf(REFERENCE_MODULUS))
        return {
            "K": e.K,
            "lambda_p": {"re": _num(e.lambda_p.real, bits), "im": _num(e.lambda_p.imag, bits)},
            "modulus": _num(e.modulus, bits),
            "deviation": mpmath.nstr(dev, 6),
            "gap": mpmath.nstr(e.coalescence_gap, 6),
            "residual": mpmath.nstr(e.discriminant_residual, 6),
        }


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, human: str, header: list[str], rows: list[list]) -> str:
    if cfg.output_format == "json":
        return json.dumps({"config": asdict(cfg), **payload}, indent=2) + "\n"
    if cfg.output_format == "csv":
        return _csv(header, rows)
    return human


def cmd_series(cfg: RunConfig) -> tuple[int, str]:
    series = eigen_series(cfg.spec(), cfg.states, cfg.orders[0])
    items = [{"state": s.state_index, "coeffs": [format_rational(c) for c in s.coeffs]} for s in series]
    if len(items) == 1:
        human = ", ".join(items[0]["coeffs"]) + "\n"
    else:
        human = "".join(f"E_{it['state']}: {', '.join(it['coeffs'])}\n" for it in items)
    rows = [[it["state"], j, c] for it in items for j, c in enumerate(it["coeffs"])]
    return EXIT_OK, _emit(cfg, {"series": items}, human, ["state", "j", "coeff"], rows)


def cmd_ese(cfg: RunConfig) -> tuple[int, str]:
    order = cfg.orders[0]
    ese = build_ese(eigen_series(cfg.spec(), cfg.states, order))
    disc = ese_discriminant(ese, cfg.mode)
    p = [[format_rational(c) for c in pj.coeffs] for pj in ese.p]
    d = [format_rational(c) for c in disc.coeffs]
    lines = [f"ESE  N={ese.n_states}  K={order}  states={list(ese.states)}"]
    lines += [f"p_{j + 1}(lambda) = {pj.format('lambda')}" for j, pj in enumerate(ese.p)]
    lines.append(f"discriminant ({cfg.mode}, degree {disc.degree}) = {disc.format('lambda')}")
    rows = [[f"p{j + 1}", k, c] for j, cs in enumerate(p) for k, c in enumerate(cs)]
    rows += [["disc", k, c] for k, c in enumerate(d)]
    return EXIT_OK, _emit(cfg, {"p": p, "discriminant": d}, "\n".join(lines) + "\n", ["poly", "k", "coeff"], rows)


def _table_output(cfg: RunConfig, rows) -> str:
    bits = cfg.precision_bits
    json_rows, csv_rows = [], []
    lines = [f"{'K':>3}  {'|lambda_p|':>14}  {'lambda_p':>34}  {'deviation':>10}  {'gap':>10}"]
    for r in rows:
        if r.estimate is None:
            json_rows.append({"K": r.K, "error": r.error})
            csv_rows.append([r.K, "", "", "", "", "", "", r.error])
            lines.append(f"{r.K:>3}  failed: {r.error}")
            continue
        row = _estimate_row(r.estimate, bits)
        json_rows.append(row)
        csv_rows.append([row["K"], row["lambda_p"]["re"], row["lambda_p"]["im"], row["modulus"],
                         row["deviation"], row["gap"], row["residual"], ""])
        e = r.estimate
        lam = f"{mpmath.nstr(e.lambda_p.real, 10)} +/- {mpmath.nstr(e.lambda_p.imag, 10)}i"
        lines.append(f"{r.K:>3}  {mpmath.nstr(e.modulus, 10):>14}  {lam:>34}  "
                     f"{mpmath.nstr(abs(e.modulus - mpmath.mpf(REFERENCE_MODULUS)), 3):>10}  "
                     f"{mpmath.nstr(e.coalescence_gap, 3):>10}")
    if cfg.model_spec is None and cfg.model == ModelKind.MATHIEU_2PI_EVEN.value:
        lines.append(f"reference |lambda_p| = {REFERENCE_MODULUS}  (mode {cfg.mode})")
    else:
        lines.append(f"(deviation is from the Mathieu 2pi-even reference {REFERENCE_MODULUS}; mode {cfg.mode})")
    header = ["K", "re", "im", "modulus", "deviation", "gap", "residual", "error"]
    return _emit(cfg, {"rows": json_rows, "reference": REFERENCE_MODULUS}, "\n".join(lines) + "\n", header, csv_rows)


def cmd_table(cfg: RunConfig) -> tuple[int, str]:
    rows = ep_table(cfg.spec(), cfg.states, cfg.orders, cfg.mode, cfg.precision_bits, cfg.seed)
    status = EXIT_OK if any(r.ok for r in rows) else EXIT_NUMERIC
    return status, _table_output(cfg, rows)


def cmd_ep(cfg: RunConfig) -> tuple[int, str]:
    est = locate_ep(cfg.spec(), cfg.states, cfg.orders[0], cfg.mode, cfg.precision_bits, cfg.seed)
    return EXIT_OK, _table_output(cfg, [TableRow(est.K, estimate=est)])


def cmd_check(cfg: RunConfig, tol: float = 1e-8) -> tuple[int, str]:
    order = cfg.orders[0]
    lam = parse_rational(cfg.lam)
    spec = cfg.spec()
    series = eigen_series(spec, cfg.states, order)
    count = max(cfg.states)
    dim = max(cfg.dim or 30, count + 10)
    oracle = oracle_eigenvalues(spec, float(lam), dim=dim, count=count)
    items = []
    for s in series:
        val = float(series_eval(s.series, lam, cfg.precision_bits))
        ref = oracle[s.state_index - 1]
        items.append({"state": s.state_index, "series": repr(val), "oracle": repr(ref), "delta": f"{abs(val - ref):.3e}"})
    worst = max(float(it["delta"]) for it in items)
    lines = [f"lambda = {format_rational(lam)}  K = {order}"]
    lines += [f"E_{it['state']}: series {it['series']}  oracle {it['oracle']}  |delta| {it['delta']}" for it in items]
    lines.append(f"max |delta| = {worst:.3e}  ({'ok' if worst < tol else 'FAIL'} at {tol:g})")
    rows = [[it["state"], it["series"], it["oracle"], it["delta"]] for it in items]
    payload = {"lambda": format_rational(lam), "checks": items, "max_delta": f"{worst:.3e}", "ok": worst < tol}
    out = _emit(cfg, payload, "\n".join(lines) + "\n", ["state", "series", "oracle", "delta"], rows)
    return (EXIT_OK if worst < tol else EXIT_NUMERIC), out


def cmd_radius(cfg: RunConfig) -> tuple[int, str]:
    items = []
    for s in eigen_series(cfg.spec(), cfg.states, cfg.orders[0]):
        est = radius_estimates(s)
        items.append({"state": s.state_index, "radius": f"{est.radius:.6f}", "uncertainty": f"{est.uncertainty:.2e}",
                      "method": est.method, "root_test": f"{est.root_test:.6f}"})
    human = "".join(f"E_{it['state']}: radius {it['radius']} +/- {it['uncertainty']} ({it['method']}); "
                    f"root test {it['root_test']}\n" for it in items)
    rows = [[it[k] for k in ("state", "radius", "uncertainty", "method", "root_test")] for it in items]
    return EXIT_OK, _emit(cfg, {"radii": items}, human, ["state", "radius", "uncertainty", "method", "root_test"], rows)


HANDLERS = {
    "series": cmd_series,
    "ese": cmd_ese,
    "ep": cmd_ep,
    "table": cmd_table,
    "check": cmd_check,
    "radius": cmd_radius,
}


class RunResult(NamedTuple):
    status: int
    report: str
    # True when ``report`` is an error message rather than a report
    failed: bool = False


def run(cfg: RunConfig) -> RunResult:
    """Execute one configured command."""
    try:
        return RunResult(*HANDLERS[cfg.command](cfg))
    except ModelError as exc:
        return RunResult(EXIT_MODEL, f"model error: {exc}\n", True)
    except (RootFindingError, OracleConvergenceError, NoExceptionalPointError,
            InsufficientCoefficientsError, ArithmeticError) as exc:
        return RunResult(EXIT_NUMERIC, f"numerical failure: {exc}\n", True)
    except ValueError as exc:
        return RunResult(EXIT_CONFIG, f"configuration error: {exc}\n", True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = run(cfg)
    (sys.stderr if result.failed else sys.stdout).write(result.report)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
