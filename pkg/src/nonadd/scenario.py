"""Scenario files: JSON schema validation and conversion to library objects."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .analysis import SequenceSpec
from .errors import NonAddError
from .ground import EpSet, GroundSpace, NatFunction, points_mask
from .iv_integral import IvFunction, IvSetFunction
from .setfunc import (
    AdditiveWeights,
    CardinalityRule,
    ClampedAffineMap,
    Distortion,
    PiecewiseLinearMap,
    PowerMap,
    Scaled,
    SetFunction,
    SumOf,
    Table,
)

COMMANDS = (
    "integrate",
    "variation",
    "atoms",
    "classify",
    "compare",
    "inequality",
    "converge",
    "iv-integrate",
    "iv-suite",
    "atom-integrate",
)


class ScenarioError(NonAddError):
    """Input error with the offending scenario path and field."""

    def __init__(self, source, where, message):
        self.source, self.where = str(source), where
        super().__init__(f"{source}: {where}: {message}")


def load_schema(name: str) -> dict:
    return json.loads(resources.files("nonadd").joinpath("schemas", name).read_text())


def validate(doc: dict, source="<scenario>", schema: str = "scenario.schema.json"):
    v = jsonschema.Draft202012Validator(load_schema(schema))
    errs = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        where = "/" + "/".join(str(p) for p in e.absolute_path)
        raise ScenarioError(source, where, e.message)


@dataclass
class Scenario:
    source: str
    name: str
    command: str
    space: GroundSpace
    params: dict
    tags: tuple
    doc: dict = field(repr=False)

    def get(self, key):
        return self.doc.get(key)

    def field(self, key, build, required=True):
        raw = self.doc.get(key)
        if raw is None:
            if required:
                raise ScenarioError(self.source, f"/{key}", f"command {self.command!r} needs this field")
            return None
        try:
            return build(self, raw, f"/{key}")
        except ScenarioError:
            raise
        except (NonAddError, ValueError, TypeError, KeyError) as exc:
            raise ScenarioError(self.source, f"/{key}", str(exc)) from exc


def load(path) -> Scenario:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(path, f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from exc
    except OSError as exc:
        raise ScenarioError(path, "/", str(exc)) from exc
    return from_dict(doc, path)


def from_dict(doc: dict, source="<scenario>") -> Scenario:
    validate(doc, source)
    sp = doc["space"]
    space = GroundSpace.finite(sp["finite"]) if "finite" in sp else GroundSpace.nat()
    name = doc.get("name") or Path(str(source)).stem
    return Scenario(str(source), name, doc["command"], space, dict(doc.get("params", {})), tuple(doc.get("tags", ())), doc)


# --------------------------------------------------------------------------- #
# builders (scenario, raw json, json path)


def build_set(sc: Scenario, raw, where):
    if sc.space.is_finite:
        if isinstance(raw, str):
            raise ScenarioError(sc.source, where, "finite-space sets are integer lists")
        pts = list(raw)
        for p in pts:
            if not 0 <= p < sc.space.n:
                raise ScenarioError(sc.source, where, f"point {p} outside the space")
        return points_mask(pts)
    if isinstance(raw, str):
        return EpSet.parse(raw)
    return EpSet.finite(raw)


def build_function(sc: Scenario, raw, where):
    if sc.space.is_finite:
        if not isinstance(raw, list):
            raise ScenarioError(sc.source, where, "finite-space functions are value lists")
        if len(raw) != sc.space.n:
            raise ScenarioError(sc.source, where, f"expected {sc.space.n} values, got {len(raw)}")
        return np.asarray(raw, dtype=float)
    return build_nat_function(sc, raw, where)


def build_nat_function(sc, raw, where):
    if isinstance(raw, (int, float)):
        return NatFunction.constant(float(raw))
    if isinstance(raw, list):
        return NatFunction.from_values(raw)
    prefix = tuple(raw.get("prefix", ()))
    tail = raw.get("tail", {"const": 0.0})
    if "const" in tail:
        return NatFunction(prefix, (((float(tail["const"]), 1.0),),))
    if "geometric" in tail:
        g = tail["geometric"]
        return NatFunction(prefix, (((float(g["coef"]), float(g["ratio"])),),))
    return NatFunction(prefix, tuple(tuple((float(c), float(r)) for c, r in terms) for terms in tail["residues"]))


def build_setfunc(sc: Scenario, raw, where) -> SetFunction:
    sp = sc.space
    (kind, body), = raw.items()
    if kind == "table":
        if not sp.is_finite:
            raise ScenarioError(sc.source, where + "/table", "tables need a finite space")
        entries = {}
        for key, v in body.items():
            try:
                m = int(key, 0)
            except ValueError as exc:
                raise ScenarioError(sc.source, f"{where}/table/{key}", "mask keys are binary strings like 0b101") from exc
            entries[m] = v
        return Table.from_masks(sp, entries)
    if kind == "additive":
        w = build_function(sc, body, where + "/additive")
        return AdditiveWeights(sp, w)
    if kind == "cardinality_rule":
        return CardinalityRule(sp, body["finite"], body["infinite"])
    if kind == "distortion":
        g = body["g"]
        if "power" in g:
            gm = PowerMap(float(g["power"]))
        elif "affine" in g:
            gm = ClampedAffineMap(float(g["affine"]["slope"]), float(g["affine"].get("cap", math.inf)))
        else:
            gm = PiecewiseLinearMap(tuple(tuple(k) for k in g["knots"]))
        base = build_setfunc(sc, body["base"], where + "/distortion/base")
        return Distortion(gm, base)
    if kind == "scaled":
        return Scaled(float(body["alpha"]), build_setfunc(sc, body["inner"], where + "/scaled/inner"))
    if kind == "sum":
        return SumOf(tuple(build_setfunc(sc, b, f"{where}/sum/{i}") for i, b in enumerate(body)))
    raise ScenarioError(sc.source, where, f"unknown set function {kind!r}")


def build_iv_setfunc(sc, raw, where) -> IvSetFunction:
    return IvSetFunction(build_setfunc(sc, raw["nu1"], where + "/nu1"), build_setfunc(sc, raw["nu2"], where + "/nu2"))


def build_iv_function(sc, raw, where) -> IvFunction:
    return IvFunction(sc.space, build_function(sc, raw["h1"], where + "/h1"), build_function(sc, raw["h2"], where + "/h2"))


def _fn_or_iv(sc, raw, where):
    if isinstance(raw, dict) and "h1" in raw:
        return build_iv_function(sc, raw, where)
    return build_function(sc, raw, where)


def build_sequence(sc, raw, where) -> SequenceSpec:
    fam = raw.get("family", "geometric")
    opt = lambda k: None if raw.get(k) is None else _fn_or_iv(sc, raw[k], f"{where}/{k}")  # noqa: E731
    terms = tuple(_fn_or_iv(sc, t, f"{where}/terms/{i}") for i, t in enumerate(raw.get("terms", ())))
    return SequenceSpec(
        family=fam,
        base=opt("base"),
        delta=opt("delta"),
        ratio=float(raw.get("ratio", 0.5)),
        N=int(raw.get("N", 30)),
        spike=opt("spike"),
        terms=terms,
        direction=raw.get("direction", "above"),
    )
