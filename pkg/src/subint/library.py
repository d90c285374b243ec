"""Built-in examples and parsers for monoid / extension descriptions.

The same JSON shapes are used by instance files and by the shipped
``data/library.json``.
"""
from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from typing import Optional, Union

from .algebra import (FiniteAlgebra, MonomialExtension, SubalgebraExtension, product_algebra,
                      quadratic_algebra, truncated_polynomial_algebra)
from .linalg import Field
from .monoid import AffineMonoid

Extension = Union[SubalgebraExtension, MonomialExtension]

_ZPLUS = re.compile(r"^\s*(Zplus|Z\+|N)\s*(\^\s*(\d+))?\s*$")


def parse_monoid(spec, named: Optional[dict] = None) -> AffineMonoid:
    """Accepts a name from ``named`` (or the library), ``"<2,5>"``,
    ``"<(2,0),(3,0),(0,1)>"``, ``"Zplus"``, ``"Zplus^2"``, a list of generators,
    or ``{"generators": [...], "rank": d}``."""
    named = named or {}
    if isinstance(spec, AffineMonoid):
        return spec
    if isinstance(spec, dict):
        gens = spec.get("generators", [])
        gens = [[g] if isinstance(g, int) else g for g in gens]
        return AffineMonoid(gens, spec.get("rank"))
    if isinstance(spec, list):
        gens = [[g] if isinstance(g, int) else g for g in spec]
        return AffineMonoid(gens)
    s = str(spec).strip()
    if s in named:
        return parse_monoid(named[s], {})
    lib = library_monoids()
    if s in lib:
        return lib[s]
    m = _ZPLUS.match(s)
    if m:
        return AffineMonoid.free(int(m.group(3) or 1))
    if s.startswith("<") and s.endswith(">"):
        body = s[1:-1].strip()
        if "(" in body:
            gens = [[int(x) for x in t.split(",")] for t in re.findall(r"\(([^()]*)\)", body)]
        else:
            gens = [[int(x)] for x in body.split(",") if x.strip()]
        return AffineMonoid(gens)
    raise ValueError(f"cannot parse monoid {spec!r}")


def _sub_basis(alg: FiniteAlgebra, spec) -> list:
    return [alg.element(v) for v in spec]


def build_finite(spec: dict) -> SubalgebraExtension:
    F = Field.parse(spec.get("field", "Q"))
    names = spec.get("names")
    alg = FiniteAlgebra.from_structure_constants(
        F, [[[F(c) for c in row] for row in plane] for plane in spec["structureConstants"]],
        [F(c) for c in spec["unit"]], names)
    if alg.dim != spec.get("dim", alg.dim):
        raise ValueError(f"dim {spec['dim']} does not match the structure constants")
    return SubalgebraExtension(alg, _sub_basis(alg, spec["subBasis"]))


def build_extension(spec, named_monoids: Optional[dict] = None,
                    named_extensions: Optional[dict] = None) -> Extension:
    """From a name (instance-defined or built-in) or an inline description."""
    named_extensions = named_extensions or {}
    if isinstance(spec, str):
        if spec in named_extensions:
            return build_extension(named_extensions[spec], named_monoids, {})
        lib = library_extensions()
        if spec in lib:
            return lib[spec]
        raise KeyError(f"unknown extension {spec!r}")
    kind = spec.get("kind") or ("monomial" if "inner" in spec else "finite")
    if kind == "monomial":
        F = Field.parse(spec.get("field", "Q"))
        return MonomialExtension(F, parse_monoid(spec["inner"], named_monoids),
                                 parse_monoid(spec["outer"], named_monoids))
    if kind == "finite":
        return build_finite(spec)
    raise ValueError(f"unknown extension kind {kind!r}")


def finite_spec(ext: SubalgebraExtension, description: str = "") -> dict:
    """Inverse of :func:`build_finite` (used to write the library file)."""
    alg = ext.ambient
    F = alg.field
    out = {
        "kind": "finite",
        "field": F.name,
        "dim": alg.dim,
        "names": list(alg.names),
        "structureConstants": [[[F.to_json(c) for c in row] for row in plane]
                               for plane in alg.structure_constants()],
        "unit": [F.to_json(c) for c in alg.unit],
        "subBasis": [[F.to_json(c) for c in v] for v in ext.sub.rows],
    }
    if description:
        out["description"] = description
    return out


def builtin_specs() -> dict:
    """The built-in examples, constructed directly from the algebra builders."""
    Q = Field()
    t4 = truncated_polynomial_algebra(4, Q)
    t3 = truncated_polynomial_algebra(3, Q)
    dual = truncated_polynomial_algebra(2, Q, var="e")
    qq = product_algebra(truncated_polynomial_algebra(1, Q), truncated_polynomial_algebra(1, Q))
    mixed = product_algebra(truncated_polynomial_algebra(1, Q), dual)
    sq2 = quadratic_algebra(2, Q)
    ext = {
        "cusp": (SubalgebraExtension(t4, [t4.element(x) for x in ("1", "t2", "t3")]),
                 "span{1,t^2,t^3} in Q[t]/(t^4)"),
        "cusp-t3": (SubalgebraExtension(t4, [t4.element(x) for x in ("1", "t3")]),
                    "span{1,t^3} in Q[t]/(t^4)"),
        "dual-numbers": (SubalgebraExtension(dual, [dual.one()]), "Q in Q[e]/(e^2)"),
        "dual-self": (SubalgebraExtension(dual, [dual.one(), dual.element("e")]),
                      "Q[e]/(e^2) in itself"),
        "trivial-self": (SubalgebraExtension(t3, [t3.basis(i) for i in range(3)]),
                         "Q[t]/(t^3) in itself"),
        "diagonal": (SubalgebraExtension(qq, [qq.one()]), "Q diagonally in Q x Q"),
        "sqrt2": (SubalgebraExtension(sq2, [sq2.one()]), "Q in Q(sqrt 2)"),
        "split-dual": (SubalgebraExtension(mixed, [mixed.one()]), "Q diagonally in Q x Q[e]"),
    }
    out = {name: finite_spec(e, d) for name, (e, d) in ext.items()}
    out["even"] = {"kind": "monomial", "field": "Q", "inner": "<2>", "outer": "Zplus",
                   "description": "Q[x^2] in Q[x]"}
    return out


_MONOIDS = {
    "<2,5>": {"generators": [[2], [5]], "rank": 1},
    "<2,3>": {"generators": [[2], [3]], "rank": 1},
    "<3,7>": {"generators": [[3], [7]], "rank": 1},
    "<4,5,6,7>": {"generators": [[4], [5], [6], [7]], "rank": 1},
    "2Zplus": {"generators": [[2]], "rank": 1},
    "Zplus": {"generators": [[1]], "rank": 1},
    "Zplus^2": {"generators": [[0, 1], [1, 0]], "rank": 2},
}


@lru_cache(maxsize=1)
def _library_data() -> dict:
    text = resources.files("subint").joinpath("data/library.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=1)
def library_monoids() -> dict:
    data = _library_data().get("monoids", _MONOIDS)
    return {k: AffineMonoid([g for g in v["generators"]], v["rank"]) for k, v in data.items()}


@lru_cache(maxsize=1)
def library_extensions() -> dict:
    return {k: build_extension(v, {}, {}) for k, v in _library_data()["extensions"].items()}


def library_document() -> dict:
    return {"monoids": _MONOIDS, "extensions": builtin_specs()}
