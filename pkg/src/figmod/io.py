"""Module files: a JSON serialization of a presentation with its field, group and truncation.

Layout::

    {
      "field": {"kind": "prime", "p": 5},
      "group": {"order": 1, "table": [[0]], "identity": 0, "generators": [0]},
      "truncation": 8,
      "generators": [{"degree": 0}],
      "relations": [{"degree": 2, "coeffs": {"0": 1}}]
    }

Relation coefficients are keyed by basis index in the free module at the
relation's degree: canonical hom-set order, generator blocks concatenated in
file order.  Zero coefficients are omitted by the emitter.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .category import FiniteGroup, hom_count
from .errors import FigmodError, ParseError, ValidationError
from .linalg import PrimeField, RationalField, field_from_spec
from .module import Presentation, TruncatedModule, realize_presentation


@dataclass
class ModuleFile:
    presentation: Presentation
    field: object
    group: FiniteGroup
    T: int
    name: str | None = None

    def realize(self, T: int | None = None) -> TruncatedModule:
        V = realize_presentation(self.presentation, self.group, self.field, self.T if T is None else T)
        if self.name:
            V.name = self.name
        return V


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _require(obj, key, kind, text, where):
    path = f"{where}.{key}" if where else key
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError("missing field", _line_of(text, where.split(".")[-1]) if where else None, path)
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ParseError(f"expected an integer, got {val!r}", _line_of(text, key), path)
    if kind is list and not isinstance(val, list):
        raise ParseError("expected a list", _line_of(text, key), path)
    if kind is dict and not isinstance(val, dict):
        raise ParseError("expected an object", _line_of(text, key), path)
    return val


def _parse_field(spec, text):
    if not isinstance(spec, dict):
        raise ParseError("expected an object", _line_of(text, "field"), "field")
    kind = spec.get("kind")
    if kind == "prime":
        _require(spec, "p", int, text, "field")
    elif kind != "rational":
        raise ParseError(f"unknown field kind {kind!r}", _line_of(text, "kind"), "field.kind")
    return field_from_spec(spec)


def _parse_value(field, x, text, path):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"coefficient must be an integer or a fraction string, got {x!r}", _line_of(text, "coeffs"), path)
    try:
        return field.element(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {x!r}: {exc}", _line_of(text, "coeffs"), path) from None


def parse_module_file(text: str) -> ModuleFile:
    """Parse and validate a module file; raises ParseError or ValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, None) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, None)
    known = {"field", "group", "truncation", "generators", "relations", "name"}
    for key in doc:
        if key not in known:
            raise ParseError("unknown field", _line_of(text, key), key)
    field = _parse_field(_require(doc, "field", dict, text, ""), text)
    gspec = _require(doc, "group", dict, text, "")
    for key, kind in (("order", int), ("table", list), ("identity", int), ("generators", list)):
        _require(gspec, key, kind, text, "group")
    try:
        group = FiniteGroup.from_spec(gspec)
    except (TypeError, KeyError, IndexError) as exc:
        raise ParseError(f"malformed group: {exc}", _line_of(text, "group"), "group") from None
    T = _require(doc, "truncation", int, text, "")
    if T < 0:
        raise ValidationError("truncation must be nonnegative")
    gens = []
    for i, g in enumerate(_require(doc, "generators", list, text, "")):
        gens.append(_require(g, "degree", int, text, f"generators[{i}]"))
    rels = []
    for i, r in enumerate(doc.get("relations", [])):
        where = f"relations[{i}]"
        d = _require(r, "degree", int, text, where)
        coeffs = _require(r, "coeffs", dict, text, where)
        if not 0 <= d <= T:
            raise ValidationError(f"{where}: degree {d} outside 0..{T}")
        size = sum(hom_count(g, d, group) for g in gens if g <= d)
        vec = [field.element(0)] * size
        for key, val in coeffs.items():
            if not re.fullmatch(r"\d+", key):
                raise ParseError(f"basis index must be a nonnegative integer, got {key!r}", _line_of(text, "coeffs"), where)
            idx = int(key)
            if idx >= size:
                raise ValidationError(f"{where}: basis index {idx} outside 0..{size - 1}")
            vec[idx] = _parse_value(field, val, text, f"{where}.coeffs.{key}")
        rels.append((d, vec))
    P = Presentation(gens, rels)
    P.validate(group, T)
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("expected a string", _line_of(text, "name"), "name")
    return ModuleFile(P, field, group, T, name)


def _emit_value(field, x):
    if isinstance(field, RationalField):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return int(x)


def emit_module_file(mf: ModuleFile) -> str:
    """Canonical text: sorted keys, two-space indent, zero coefficients dropped."""
    rels = []
    for d, vec in mf.presentation.relations:
        coeffs = {str(i): _emit_value(mf.field, x) for i, x in enumerate(vec) if x != 0}
        rels.append({"degree": int(d), "coeffs": coeffs})
    doc = {
        "field": mf.field.spec(),
        "group": mf.group.spec(),
        "truncation": int(mf.T),
        "generators": [{"degree": int(g)} for g in mf.presentation.generator_degrees],
        "relations": rels,
    }
    if mf.name:
        doc["name"] = mf.name
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def canonicalize(text: str) -> str:
    return emit_module_file(parse_module_file(text))


def load_module_file(path) -> ModuleFile:
    with open(path, encoding="utf-8") as fh:
        return parse_module_file(fh.read())


def module_file_for(P: Presentation, group: FiniteGroup, field=None, T: int = 8, name: str | None = None) -> ModuleFile:
    return ModuleFile(P, field or PrimeField(5), group, T, name)


__all__ = [
    "FigmodError",
    "ModuleFile",
    "canonicalize",
    "emit_module_file",
    "load_module_file",
    "module_file_for",
    "parse_module_file",
]
