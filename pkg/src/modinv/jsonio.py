"""JSON documents for fields, polynomials, groups, ideals and fractions.

Every loader validates against the versioned schema in ``schemas/`` first, so
a malformed document fails with a :class:`SchemaError` naming the offending
path (``$.terms[2].coeff`` style) before any mathematical checks run.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from .cartan_frac import Fraction
from .gf import FieldSpec
from .group_action import Group, GroupElement, close
from .localcoh import IdealSpec
from .poly import PolyRing, Polynomial

__all__ = [
    "SCHEMA_VERSION",
    "SchemaError",
    "validate",
    "field_from_json",
    "field_to_json",
    "polynomial_from_json",
    "group_from_json",
    "ideal_from_json",
    "fraction_from_json",
    "load_document",
]

SCHEMA_VERSION = "v1"
KINDS = ("field", "element", "ring", "polynomial", "group", "ideal", "fraction")


class SchemaError(ValueError):
    """A document does not match its schema (or is inconsistent after parsing)."""

    def __init__(self, path: str, message: str, source: str | None = None):
        self.path = path
        self.message = message
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {message}")


@lru_cache(maxsize=None)
def _schema() -> dict:
    text = resources.files("modinv").joinpath(f"schemas/{SCHEMA_VERSION}.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(kind: str) -> Draft202012Validator:
    if kind not in KINDS:
        raise KeyError(kind)
    full = _schema()
    return Draft202012Validator({"$defs": full["$defs"], "$ref": f"#/$defs/{kind}"})


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(doc: Any, kind: str, source: str | None = None) -> None:
    errors = sorted(_validator(kind).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(_path(e.absolute_path), e.message, source)


# --- parsing ---------------------------------------------------------------


def _field(doc: dict, path: str) -> FieldSpec:
    try:
        return FieldSpec(doc["p"], doc.get("s", 1), doc.get("modulus"))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _code(field: FieldSpec, coeffs: list[int], path: str) -> int:
    if len(coeffs) > field.s or any(c >= field.p for c in coeffs):
        raise SchemaError(path, f"{coeffs} is not an element of GF({field.q})")
    return field(coeffs).code


def field_to_json(field: FieldSpec) -> dict:
    return {"p": field.p, "s": field.s, "modulus": list(field.modulus)}


def field_from_json(doc: dict) -> FieldSpec:
    validate(doc, "field")
    return _field(doc, "$")


def _ring(doc: dict, path: str) -> PolyRing:
    field = _field(doc["field"], path + ".field")
    try:
        return PolyRing(field, doc["nvars"], doc.get("names"))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _poly(doc: dict, path: str, ring: PolyRing | None = None) -> Polynomial:
    own = _ring(doc["ring"], path + ".ring")
    if ring is None:
        ring = own
    elif own.field != ring.field or own.nvars != ring.nvars:
        raise SchemaError(path + ".ring", "ring differs from the other polynomials in this document")
    terms: dict[tuple[int, ...], int] = {}
    for k, t in enumerate(doc["terms"]):
        if len(t["exp"]) != ring.nvars:
            raise SchemaError(f"{path}.terms[{k}].exp", f"expected {ring.nvars} exponents")
        e = tuple(t["exp"])
        c = _code(ring.field, t["coeff"], f"{path}.terms[{k}].coeff")
        terms[e] = ring.field.addl[terms.get(e, 0)][c]
    return Polynomial(ring, terms)


def polynomial_from_json(doc: dict, ring: PolyRing | None = None) -> Polynomial:
    validate(doc, "polynomial")
    return _poly(doc, "$", ring)


def group_from_json(doc: dict, cap: int | None = None) -> Group:
    """Close the listed generators into a group (an empty list gives the trivial group)."""
    validate(doc, "group")
    field = _field(doc["q"], "$.q")
    d = doc["d"]
    gens = []
    for k, m in enumerate(doc["generators"]):
        path = f"$.generators[{k}]"
        if len(m) != d or any(len(row) != d for row in m):
            raise SchemaError(path, f"expected a {d}x{d} matrix")
        codes = [[_code(field, c, f"{path}[{i}][{j}]") for j, c in enumerate(row)] for i, row in enumerate(m)]
        try:
            gens.append(GroupElement(codes, field))
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from None
    if not gens:
        gens = [GroupElement([[int(i == j) for j in range(d)] for i in range(d)], field)]
    return close(gens) if cap is None else close(gens, cap)


def ideal_from_json(doc: dict, ring: PolyRing | None = None) -> IdealSpec:
    validate(doc, "ideal")
    gens = []
    for k, g in enumerate(doc["generators"]):
        f = _poly(g, f"$.generators[{k}]", ring)
        ring = f.ring
        gens.append(f)
    try:
        return IdealSpec(tuple(gens))
    except ValueError as exc:
        raise SchemaError("$.generators", str(exc)) from None


def fraction_from_json(doc: dict, ring: PolyRing | None = None) -> Fraction:
    validate(doc, "fraction")
    num = _poly(doc["num"], "$.num", ring)
    base = _poly(doc["base"], "$.base", num.ring)
    try:
        return Fraction(num, base, doc.get("exp", 0), normalize=False)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("$", str(exc)) from None


def load_document(path: str | Path) -> Any:
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"$ (line {exc.lineno})", exc.msg, str(p)) from None
