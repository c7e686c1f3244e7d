"""JSON spec files for algebras, modules, complexes and bimodules.

Every parser rejects keys it does not know.  Vertex and projective indices
in module specs are 0-based positions in ``alg.reps``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import catalog
from .algebra import Algebra, QuiverSpec, build_bound_quiver_algebra, build_structure_constant_algebra
from .complexes import Shift, WindowedComplex, direct_sum_complex, literal, stalk
from .errors import KatoHullError, ParseError
from .modules import (
    Module,
    direct_sum,
    dual,
    projective_module,
    quiver_module,
    simple_module,
)

ALGEBRA_KEYS = {"name", "field", "quiver", "relations", "nilpotency_cap", "structure_constants", "catalog"}
MODULE_KEYS = {"name", "simple", "projective", "injective", "dimension_vector", "arrows", "dimension",
               "action", "sum"}
COMPLEX_KEYS = {"name", "kato", "resolution", "stalk", "literal", "shift", "by", "sum", "window"}
BIMODULE_KEYS = {"left_algebra", "right_algebra", "left_action", "right_action", "name"}

_ALGEBRAS = {}


def read_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def _check_keys(data, allowed, what):
    if not isinstance(data, dict):
        raise ParseError(f"{what} spec must be an object")
    unknown = set(data) - allowed
    if unknown:
        raise ParseError(f"unknown {what} keys: {sorted(unknown)}")


def _int_array(value, what):
    try:
        return np.asarray(value, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what} must be an integer array") from exc


def parse_algebra(data: dict) -> Algebra:
    """Build (or reuse) the algebra described by ``data``.

    Identical specs give the identical object, so bimodule files that repeat
    an algebra refer to the same instance.
    """
    _check_keys(data, ALGEBRA_KEYS, "algebra")
    key = json.dumps(data, sort_keys=True)
    if key in _ALGEBRAS:
        return _ALGEBRAS[key]
    p = int(data.get("field", 2))
    sources = [k for k in ("quiver", "structure_constants", "catalog") if k in data]
    if len(sources) != 1:
        raise ParseError("algebra spec needs exactly one of quiver, structure_constants, catalog")
    try:
        if "catalog" in data:
            alg = catalog.by_name(data["catalog"], p=p)
        elif "quiver" in data:
            alg = _parse_quiver(data, p)
        else:
            alg = _parse_structure_constants(data, p)
    except KeyError as exc:
        raise ParseError(f"unknown name {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, KatoHullError):
            raise
        raise ParseError(str(exc)) from exc
    _ALGEBRAS[key] = alg
    return alg


def _parse_quiver(data, p):
    q = data["quiver"]
    _check_keys(q, {"vertices", "arrows"}, "quiver")
    verts = tuple(str(v) for v in q.get("vertices", ()))
    arrows = []
    for a in q.get("arrows", ()):
        _check_keys(a, {"name", "from", "to"}, "arrow")
        arrows.append((str(a["name"]), str(a["from"]), str(a["to"])))
    spec = QuiverSpec(verts, tuple(arrows), tuple(data.get("relations", ())), p,
                      int(data.get("nilpotency_cap", 2)))
    return build_bound_quiver_algebra(spec, name=data.get("name", ""))


def _parse_structure_constants(data, p):
    sc = data["structure_constants"]
    _check_keys(sc, {"dim", "mul", "unit", "labels"}, "structure_constants")
    n = int(sc["dim"])
    mul = _int_array(sc["mul"], "mul")
    if mul.shape != (n, n, n):
        raise ParseError(f"mul must have shape ({n}, {n}, {n})")
    return build_structure_constant_algebra(n, mul, _int_array(sc["unit"], "unit"), p,
                                            labels=sc.get("labels"), name=data.get("name", ""))


def parse_module(data: dict, alg: Algebra) -> Module:
    _check_keys(data, MODULE_KEYS, "module")
    label = data.get("name", "")
    kinds = [k for k in ("simple", "projective", "injective", "dimension_vector", "dimension", "sum") if k in data]
    if len(kinds) != 1:
        raise ParseError("module spec needs exactly one of simple, projective, injective, "
                         "dimension_vector, dimension, sum")
    kind = kinds[0]
    try:
        if kind in ("simple", "projective", "injective"):
            i = int(data[kind])
            if not 0 <= i < alg.num_projectives:
                raise ParseError(f"index {i} out of range 0..{alg.num_projectives - 1}")
            if kind == "simple":
                m = simple_module(alg, i)
            elif kind == "projective":
                m = projective_module(alg, i)
            else:
                m = dual(projective_module(alg.opposite(), i))
        elif kind == "dimension_vector":
            arrows = {k: _int_array(v, f"arrow {k}") for k, v in data.get("arrows", {}).items()}
            m = quiver_module(alg, {str(k): v for k, v in data["dimension_vector"].items()}, arrows)
        elif kind == "dimension":
            d = int(data["dimension"])
            act = _int_array(data["action"], "action")
            if act.shape != (alg.dim, d, d):
                raise ParseError(f"action must have shape ({alg.dim}, {d}, {d})")
            m = Module(alg, act)
        else:
            m = direct_sum(*[parse_module(s, alg) for s in data["sum"]])
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad module spec: {exc}") from exc
    if label:
        # projective modules are cached and shared, so relabel a copy
        m = Module(alg, m.action, check=False, proj_types=m.proj_types, label=label)
    return m


def parse_complex(data: dict, alg: Algebra, window) -> WindowedComplex:
    """Complex expressions: kato / resolution of a module, stalk, literal, shift, sum."""
    from .complexes import ResolutionOf
    from .kato import kato_node

    _check_keys(data, COMPLEX_KEYS, "complex")
    lo, hi = data.get("window", window)
    if "kato" in data:
        return kato_node(parse_module(data["kato"], alg)).build(lo, hi)
    if "resolution" in data:
        return ResolutionOf(parse_module(data["resolution"], alg)).build(lo, hi)
    if "stalk" in data:
        s = data["stalk"]
        _check_keys(s, {"types", "degree"}, "stalk")
        return stalk(tuple(int(t) for t in s["types"]), int(s.get("degree", 0)), alg)
    if "literal" in data:
        s = data["literal"]
        _check_keys(s, {"terms", "diffs"}, "literal")
        terms = {int(k): tuple(int(t) for t in v) for k, v in s["terms"].items()}
        diffs = {int(k): _int_array(v, "differential") for k, v in s.get("diffs", {}).items()}
        c = literal(alg, terms, diffs)
        if not c.check_square_zero():
            raise ParseError("literal differentials do not square to zero")
        return c
    if "shift" in data:
        inner = parse_complex(data["shift"], alg, window)
        return Shift(inner.expr, int(data.get("by", 1))).build(lo, hi)
    if "sum" in data:
        parts = [parse_complex(s, alg, window) for s in data["sum"]]
        out = parts[0]
        for q in parts[1:]:
            out = direct_sum_complex(out, q)
        return out
    raise ParseError("complex spec needs one of kato, resolution, stalk, literal, shift, sum")


def parse_bimodule(data: dict):
    from .morita import Bimodule

    _check_keys(data, BIMODULE_KEYS, "bimodule")
    a = parse_algebra(data["left_algebra"])
    b = parse_algebra(data["right_algebra"])
    try:
        return Bimodule(a, b, _int_array(data["left_action"], "left_action"),
                        _int_array(data["right_action"], "right_action"), label=data.get("name", ""))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, KatoHullError):
            raise
        raise ParseError(f"bad bimodule spec: {exc}") from exc


def algebra_to_spec(alg: Algebra) -> dict:
    """Structure-constant spec reproducing ``alg`` exactly."""
    return {"name": alg.name, "field": alg.p,
            "structure_constants": {"dim": alg.dim, "mul": alg.mul.tolist(), "unit": alg.unit.tolist(),
                                    "labels": list(alg.labels)}}


def bimodule_to_spec(m, left_spec: dict, right_spec: dict) -> dict:
    return {"name": m.label, "left_algebra": left_spec, "right_algebra": right_spec,
            "left_action": m.left_action.tolist(), "right_action": m.right_action.tolist()}
