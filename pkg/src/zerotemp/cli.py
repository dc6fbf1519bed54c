"""Batch front end.

Exit codes: 0 resolved, 2 undetermined classification, 1 malformed input or
reducible shift.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import io
from .ergodic import classify, residual_entropy_zero_temp, zero_temperature_measure
from .errors import NotSeparated
from .experiments import cycle_perturbation, intro_fixture, star_fixture
from .intervals import Interval, as_fraction
from .measures import ErgodicComponents
from .potential import LocallyConstantPotential
from .sft import topological_entropy
from .thermo import PressureFunction, anneal, pressure_point, residual_entropy_upper

COMMANDS = ("classify", "pressure", "residual-upper", "anneal", "fixture")
EXIT_OK, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    fixture: str | None = None
    precision: int = 30
    mode: str = "exact"
    betas: tuple[Fraction, ...] = ()
    steps: int = 12
    depth: int = 8
    out: Path | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.mode not in ("exact", "interval"):
            raise ValueError("mode must be 'exact' or 'interval'")
        if (self.input is None) == (self.fixture is None):
            raise ValueError("give exactly one of --input and --fixture")


def parse_betas(text: str) -> tuple[Fraction, ...]:
    text = text.strip()
    if text.startswith("geom:"):
        start, ratio, count = text[5:].split(",")
        start, ratio = as_fraction(start), as_fraction(ratio)
        return tuple(start * ratio ** i for i in range(int(count)))
    return tuple(as_fraction(b) for b in text.split(",") if b.strip())


def fixture_potential(name: str) -> LocallyConstantPotential:
    kind, _, arg = name.partition(":")
    if kind == "intro":
        a1, a2 = arg.split(",")
        return intro_fixture(a1, a2).phi
    if kind == "star":
        if not arg:
            return star_fixture(1)[0].phi
        return star_fixture(int(arg))[1].phi
    if kind == "boundary":
        a1, a2, y, m, eps = arg.split(",")
        phi = intro_fixture(a1, a2).phi
        return cycle_perturbation(phi, phi.sft.parse(y), int(m), as_fraction(eps))
    raise ValueError(f"unknown fixture {name!r}")


def load_potential(cfg: RunConfig) -> LocallyConstantPotential:
    if cfg.fixture is not None:
        phi = fixture_potential(cfg.fixture)
    else:
        phi = io.load_problem(cfg.input)
    if cfg.mode == "exact" and not phi.exact:
        raise ValueError("exact mode needs rational values; use --mode interval")
    return phi


def _decimal(x: Fraction, digits: int, rounding) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 30
        ctx.rounding = rounding
        q = Decimal(x.numerator) / Decimal(x.denominator)
        return str(q.quantize(Decimal(1).scaleb(-digits), rounding=rounding))


def lo_str(x: Fraction, digits: int) -> str:
    return _decimal(x, digits, ROUND_FLOOR)


def hi_str(x: Fraction, digits: int) -> str:
    return _decimal(x, digits, ROUND_CEILING)


def _digits(precision: int) -> int:
    return math.ceil(precision * math.log10(2)) + 3


def _interval_cells(x: Interval | None, digits: int) -> list[str]:
    if x is None:
        return ["", ""]
    return [lo_str(x.lo, digits), hi_str(x.hi, digits)]


def cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    phi = load_potential(cfg)
    c = classify(phi, precision=cfg.precision if cfg.mode == "interval" else None)
    if not c.resolved:
        return io.classification_to_json(c), EXIT_UNDETERMINED
    measure = zero_temperature_measure(c)
    return io.classification_to_json(c, residual_entropy_zero_temp(c, cfg.precision), measure), EXIT_OK


def _pressure_row(args):
    phi, beta, precision = args
    return pressure_point(phi, beta, precision)


def cmd_pressure(cfg: RunConfig) -> str:
    phi = load_potential(cfg)
    digits = _digits(cfg.precision)
    jobs = [(phi, b, cfg.precision) for b in cfg.betas]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            points = list(pool.map(_pressure_row, jobs))
    else:
        f = PressureFunction(phi)
        points = [pressure_point(f, b, cfg.precision) for b in cfg.betas]
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "P_lo", "P_hi", "dPm_lo", "dPm_hi", "dPp_lo", "dPp_hi", "h_lo", "h_hi", "flags"])
    for pt in sorted(points, key=lambda p: p.beta):
        flags = "" if pt.derivative.separated else "not_separated"
        w.writerow([io.fraction_str(pt.beta), *_interval_cells(pt.P, digits),
                    *_interval_cells(pt.derivative.minus, digits), *_interval_cells(pt.derivative.plus, digits),
                    *_interval_cells(pt.h, digits), flags])
    return buf.getvalue()


def cmd_residual_upper(cfg: RunConfig) -> str:
    phi = load_potential(cfg)
    steps = residual_entropy_upper(phi, cfg.steps)
    digits = _digits(max(cfg.steps, 8))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    # upper bounds only: the sequence converges from above at no guaranteed rate
    w.writerow(["n", "beta1", "beta2", "sandwich_lo", "sandwich_hi", "u_n", "upper_bound_semicomputable", "flags"])
    for s in steps:
        flags = "" if s.sandwich.reached else "width_not_reached"
        w.writerow([s.n, io.fraction_str(s.sandwich.beta1), io.fraction_str(s.sandwich.beta2),
                    *_interval_cells(s.sandwich.interval, digits), hi_str(s.u, digits), hi_str(s.bound, digits), flags])
    return buf.getvalue()


def cmd_anneal(cfg: RunConfig) -> str:
    phi = load_potential(cfg)
    c = classify(phi)
    limit = zero_temperature_measure(c) if c.resolved else None
    if isinstance(limit, ErgodicComponents):  # no weights, so no distance column
        limit = None
    htop = topological_entropy(phi.sft)
    steps = anneal(phi, cfg.betas, cfg.precision, limit, cfg.depth)
    digits = _digits(cfg.precision)
    b = c.b if isinstance(c.b, Interval) else Interval.point(c.b)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "P_lo", "P_hi", "mu_lo", "mu_hi", "h_lo", "h_hi", "w1_lo", "w1_hi", "flags"])
    prev = None
    for s in steps:
        flags = []
        if prev is not None:
            if s.integral.hi < prev.integral.lo:
                flags.append("mu_decreased")
            if s.entropy.lo > prev.entropy.hi:
                flags.append("h_increased")
        if s.beta > 0 and b.lo - s.integral.hi > htop.hi / s.beta:
            flags.append("gap_bound_violated")
        w.writerow([io.fraction_str(s.beta), *_interval_cells(s.P, digits), *_interval_cells(s.integral, digits),
                    *_interval_cells(s.entropy, digits), *_interval_cells(s.w1, digits), ";".join(flags)])
        prev = s
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zerotemp", description=__doc__.splitlines()[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="JSON file with 'sft' and 'potential'")
    src.add_argument("--fixture", help="named fixture: intro:A1,A2 | star | star:N | boundary:A1,A2,Y,M,EPS")
    p.add_argument("--precision", type=int, default=30, help="enclosure widths <= 2^-N")
    p.add_argument("--mode", choices=("exact", "interval"), default="exact")
    p.add_argument("--betas", default="0,1,2,5,10", help="'b0,b1,...' or 'geom:start,ratio,count'")
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--out", type=Path)
    p.add_argument("--jobs", type=int, default=1)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.input, args.fixture, args.precision, args.mode,
                        parse_betas(args.betas), args.steps, args.depth, args.out, args.jobs)
        code = EXIT_OK
        if cfg.command == "classify":
            obj, code = cmd_classify(cfg)
            text = json.dumps(obj, indent=2) + "\n"
        elif cfg.command == "fixture":
            text = json.dumps(io.problem_to_json(load_potential(cfg)), indent=2) + "\n"
        elif cfg.command == "pressure":
            text = cmd_pressure(cfg)
        elif cfg.command == "residual-upper":
            text = cmd_residual_upper(cfg)
        else:
            text = cmd_anneal(cfg)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError, OSError, NotSeparated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
