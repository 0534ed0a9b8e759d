"""Module files: a JSON presentation together with its field and window.

Example::

    {"field": "Q", "truncation": 8,
     "generators": [{"degree": 0, "label": "g"}],
     "relations": [{"degree": 1,
                    "terms": [{"gen": "g", "injection": [], "coeff": "1"}]}]}

``injection`` lists the images of 1..m, where m is the generator degree and
the target is the relation degree.  Coefficients are exact strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactla import FieldError, FieldSpec, parse_exact
from .fimodule import Presentation, Relation, RelationTerm
from .fincat import Injection


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _int(obj: Any, path: str, minimum: int = 0) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(path, f"expected an integer, got {obj!r}")
    if obj < minimum:
        raise SchemaError(path, f"must be >= {minimum}, got {obj}")
    return obj


def _list(obj: Any, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(path, f"expected a list, got {type(obj).__name__}")
    return obj


def _dict(obj: Any, path: str, required: tuple[str, ...]) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    for key in required:
        if key not in obj:
            raise SchemaError(f"{path}.{key}", "missing")
    return obj


def _coeff(obj: Any, path: str, field: FieldSpec) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise SchemaError(path, f"coefficients must be exact strings, got {obj!r}")
    try:
        value = Fraction(obj) if isinstance(obj, int) else Fraction(parse_exact(obj, allow_fraction=field.is_rational))
        field.scalar(value)
    except FieldError as exc:
        raise SchemaError(path, str(exc)) from None
    return value


def parse_module_obj(obj: Any) -> tuple[Presentation, FieldSpec, int]:
    root = _dict(obj, "$", ("field", "truncation", "generators"))
    try:
        field = FieldSpec.from_json(root["field"])
    except FieldError as exc:
        raise SchemaError("$.field", str(exc)) from None
    N = _int(root["truncation"], "$.truncation")

    degrees, labels, index = [], [], {}
    for i, gen in enumerate(_list(root["generators"], "$.generators")):
        path = f"$.generators[{i}]"
        gen = _dict(gen, path, ("degree", "label"))
        label = gen["label"]
        if not isinstance(label, str):
            raise SchemaError(f"{path}.label", "labels must be strings")
        if label in index:
            raise SchemaError(f"{path}.label", f"duplicate label {label!r}")
        index[label] = i
        labels.append(label)
        degrees.append(_int(gen["degree"], f"{path}.degree"))

    relations = []
    for r, rel in enumerate(_list(root.get("relations", []), "$.relations")):
        path = f"$.relations[{r}]"
        rel = _dict(rel, path, ("degree", "terms"))
        e = _int(rel["degree"], f"{path}.degree")
        terms = []
        for t, term in enumerate(_list(rel["terms"], f"{path}.terms")):
            tpath = f"{path}.terms[{t}]"
            term = _dict(term, tpath, ("gen", "injection", "coeff"))
            if term["gen"] not in index:
                raise SchemaError(f"{tpath}.gen", f"unknown generator {term['gen']!r}")
            g = index[term["gen"]]
            values = [_int(v, f"{tpath}.injection[{j}]", 1) for j, v in enumerate(_list(term["injection"], f"{tpath}.injection"))]
            if len(values) != degrees[g]:
                raise SchemaError(f"{tpath}.injection", f"needs {degrees[g]} values for generator {labels[g]!r}")
            try:
                inj = Injection.from_json(values, e)
            except ValueError as exc:
                raise SchemaError(f"{tpath}.injection", str(exc)) from None
            terms.append(RelationTerm(g, inj, _coeff(term["coeff"], f"{tpath}.coeff", field)))
        relations.append(Relation(e, tuple(terms)))
    return Presentation(tuple(degrees), tuple(relations), tuple(labels)), field, N


def parse_module_file(text: str) -> tuple[Presentation, FieldSpec, int]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return parse_module_obj(obj)


def presentation_to_json(p: Presentation, field: FieldSpec, N: int) -> dict:
    labels = p.labels or tuple(f"g{i}" for i in range(len(p.generator_degrees)))
    return {
        "field": field.to_json(),
        "truncation": N,
        "generators": [{"degree": m, "label": lab} for m, lab in zip(p.generator_degrees, labels)],
        "relations": [
            {
                "degree": rel.degree,
                "terms": [
                    {"gen": labels[t.gen], "injection": t.injection.to_json(), "coeff": str(Fraction(t.coeff))}
                    for t in rel.terms
                ],
            }
            for rel in p.relations
        ],
    }


def dump_module_file(p: Presentation, field: FieldSpec, N: int) -> str:
    return json.dumps(presentation_to_json(p, field, N), indent=2)
