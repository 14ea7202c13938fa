"""The on-disk generating-function description format.

A ``.gf`` file is a JSON document:

    {
      "vars": ["z", "w"],
      "numerator":   [ {"coeff": "1",  "exps": [0, 0]} ],
      "denominator": [ {"coeff": "1",  "exps": [0, 0]},
                       {"coeff": "-1", "exps": [1, 0]},
                       {"coeff": "-1", "exps": [0, 1]},
                       {"coeff": "-1", "exps": [1, 1]} ]
    }

``coeff`` is a decimal rational string ("p" or "p/q", optional sign);
``exps`` lists one nonnegative decimal integer per declared variable.
Negative exponents are rejected with a pointer to the clearing transform.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import LAURENT_HINT, PolyParseError
from .poly import MultiPoly, RationalGF, gf_new
from .scalars import parse_rational


def _poly_from_records(records, variables, what: str) -> MultiPoly:
    if not isinstance(records, list):
        raise PolyParseError(f"{what} must be a list of term records")
    terms: dict = {}
    for i, rec in enumerate(records):
        if not isinstance(rec, dict) or set(rec) - {"coeff", "exps"}:
            raise PolyParseError(
                f"{what}[{i}] must be an object with fields 'coeff' and 'exps'"
            )
        try:
            coeff = parse_rational(str(rec["coeff"]))
            exps = rec["exps"]
        except KeyError as exc:
            raise PolyParseError(f"{what}[{i}] is missing field {exc}") from exc
        if not isinstance(exps, list) or len(exps) != len(variables):
            raise PolyParseError(
                f"{what}[{i}].exps must list {len(variables)} exponents"
            )
        clean = []
        for e in exps:
            if not isinstance(e, int) or isinstance(e, bool):
                raise PolyParseError(
                    f"{what}[{i}].exps must contain plain integers"
                )
            if e < 0:
                raise PolyParseError(f"{what}[{i}] has a negative exponent; " + LAURENT_HINT)
            clean.append(e)
        key = tuple(clean)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return MultiPoly(variables, terms)


def loads_gf(text: str) -> RationalGF:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolyParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PolyParseError("a .gf document must be a JSON object")
    missing = {"vars", "numerator", "denominator"} - set(doc)
    if missing:
        raise PolyParseError(f"missing fields: {sorted(missing)}")
    variables = doc["vars"]
    if (
        not isinstance(variables, list)
        or not variables
        or not all(isinstance(v, str) for v in variables)
    ):
        raise PolyParseError("'vars' must be a nonempty list of names")
    variables = tuple(variables)
    num = _poly_from_records(doc["numerator"], variables, "numerator")
    den = _poly_from_records(doc["denominator"], variables, "denominator")
    return gf_new(num, den)


def load_gf(path) -> RationalGF:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_gf(fh.read())


def dumps_gf(gf: RationalGF) -> str:
    def records(poly: MultiPoly):
        out = []
        for exps, coeff in poly.terms.items():
            if not isinstance(coeff, Fraction):
                raise PolyParseError(
                    "the .gf format carries rational coefficients only"
                )
            out.append({"coeff": str(coeff), "exps": list(exps)})
        return out

    doc = {
        "vars": list(gf.vars),
        "numerator": records(gf.numerator),
        "denominator": records(gf.denominator),
    }
    return json.dumps(doc, indent=2) + "\n"


def dump_gf(gf: RationalGF, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_gf(gf))
