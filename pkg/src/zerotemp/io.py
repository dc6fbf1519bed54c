"""JSON encoding of shifts, potentials, measures and classifications.

Rationals travel as "p/q" strings and intervals as {"lo": "p/q", "hi": "p/q"}, so a
round trip is exact.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .ergodic import Classification
from .intervals import Interval, Scalar, as_fraction
from .measures import ErgodicComponents, MarkovMeasure, PeriodicOrbitMeasure
from .potential import LocallyConstantPotential
from .sft import Sft, orbit_of


def fraction_str(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(obj) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise ValueError(f"expected a rational string or integer, got {obj!r}")
    return as_fraction(obj)


def scalar_to_json(x: Scalar):
    if isinstance(x, Interval):
        return {"lo": fraction_str(x.lo), "hi": fraction_str(x.hi)}
    return fraction_str(x)


def interval_to_json(x: Scalar) -> dict:
    x = x if isinstance(x, Interval) else Interval.point(x)
    return {"lo": fraction_str(x.lo), "hi": fraction_str(x.hi)}


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        if set(obj) != {"lo", "hi"}:
            raise ValueError(f"interval needs exactly 'lo' and 'hi': {obj!r}")
        return Interval(parse_fraction(obj["lo"]), parse_fraction(obj["hi"]))
    return parse_fraction(obj)


def sft_to_json(sft: Sft) -> dict:
    return {"d": sft.d, "transitions": [list(r) for r in sft.transitions], "theta": fraction_str(sft.theta)}


def sft_from_json(obj: dict) -> Sft:
    theta = parse_fraction(obj["theta"]) if "theta" in obj else Fraction(1, 2)
    return Sft(int(obj["d"]), tuple(tuple(r) for r in obj["transitions"]), theta)


def potential_to_json(phi: LocallyConstantPotential) -> dict:
    return {"k": phi.k, "values": {phi.sft.fmt(w): scalar_to_json(v) for w, v in phi.values.items()}}


def potential_from_json(obj: dict, sft: Sft) -> LocallyConstantPotential:
    if "k" not in obj:
        raise ValueError("potential needs an explicit cylinder length 'k'")
    k = int(obj["k"])
    values = {}
    for text, v in obj["values"].items():
        w = sft.parse(text)
        if len(w) != k:
            raise ValueError(f"cylinder {text!r} does not have length {k}")
        values[w] = scalar_from_json(v)
    return LocallyConstantPotential(sft, k, values)


def problem_to_json(phi: LocallyConstantPotential) -> dict:
    return {"sft": sft_to_json(phi.sft), "potential": potential_to_json(phi)}


def problem_from_json(obj: dict) -> LocallyConstantPotential:
    sft = sft_from_json(obj["sft"])
    return potential_from_json(obj["potential"], sft)


def load_problem(path) -> LocallyConstantPotential:
    return problem_from_json(json.loads(Path(path).read_text()))


def measure_to_json(mu) -> dict:
    if isinstance(mu, PeriodicOrbitMeasure):
        return {"type": "periodic", "orbit": mu.orbit.label()}
    if isinstance(mu, MarkovMeasure):
        out = {
            "type": "markov",
            "block": mu.block,
            "nodes": [mu.sft.fmt(w) for w in mu.nodes],
            "pi": [fraction_str(x) for x in mu.pi],
            "p": [[fraction_str(x) for x in row] for row in mu.p],
            "stationarity_defect": fraction_str(mu.stationarity_defect),
        }
        if mu.beta is not None:
            out["beta"] = fraction_str(mu.beta)
        if mu.variational_defect is not None:
            out["variational_defect"] = fraction_str(mu.variational_defect)
        return out
    if isinstance(mu, ErgodicComponents):
        return {"type": "components", "components": [measure_to_json(c) for c in mu.components]}
    raise TypeError(f"not a measure: {type(mu).__name__}")


def measure_from_json(obj: dict, sft: Sft):
    kind = obj["type"]
    if kind == "periodic":
        return PeriodicOrbitMeasure(orbit_of(sft, sft.parse(obj["orbit"])))
    if kind == "markov":
        opt = lambda key: parse_fraction(obj[key]) if key in obj else None  # noqa: E731
        return MarkovMeasure(
            sft, int(obj["block"]), tuple(sft.parse(w) for w in obj["nodes"]),
            tuple(parse_fraction(x) for x in obj["pi"]),
            tuple(tuple(parse_fraction(x) for x in row) for row in obj["p"]),
            opt("beta"), opt("stationarity_defect") or Fraction(0), opt("variational_defect"))
    if kind == "components":
        return ErgodicComponents(tuple(measure_from_json(c, sft) for c in obj["components"]))
    raise ValueError(f"unknown measure type {kind!r}")


def classification_to_json(c: Classification, residual_entropy: Interval | None = None, measure=None) -> dict:
    radius = c.certificate_radius
    return {
        "tag": c.tag,
        "k": c.k,
        "b": interval_to_json(c.b),
        "orbits": [o.label() for o in c.orbits],
        "certificate_radius": None if radius is None else fraction_str(radius),
        "residual_entropy": None if residual_entropy is None else interval_to_json(residual_entropy),
        "measure": None if measure is None else measure_to_json(measure),
        "precision": c.precision,
        "candidates": sorted(c.candidates),
    }
