"""Reading and writing function documents (JSON, rationals as strings)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema

from .corpus import ORACLES, oracle_piece
from .exact.numbers import format_rational, format_vector
from .pieces import OraclePiece, PiecewiseFunction, PlqPiece
from .polyhedra import Polyhedron

VERSION = 1


class DocumentError(ValueError):
    """A document that does not parse, validate or make sense."""


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """``name`` is ``"function_document"`` or ``"report"``."""
    text = resources.files("pwcvx.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _validator(name: str):
    return jsonschema.Draft202012Validator(load_schema(name))


def _path(parts) -> str:
    return "/".join(str(p) for p in parts) or "<root>"


# -- writing ------------------------------------------------------------------


def _poly_json(P: Polyhedron) -> dict:
    return P.to_json()


def to_document(f: PiecewiseFunction) -> dict:
    pieces = []
    for p in f.pieces:
        if p.is_plq:
            pieces.append(
                {
                    "type": "plq",
                    "domain": _poly_json(p.domain),
                    "Q": [format_vector(row) for row in p.Q],
                    "b": format_vector(p.b),
                    "gamma": format_rational(p.gamma),
                }
            )
        elif p.label in ORACLES:
            pieces.append({"type": "builtin_oracle", "name": p.label, "domain": _poly_json(p.domain)})
        else:
            raise DocumentError(f"oracle piece {p.label!r} is not in the builtin registry")
    return {
        "version": VERSION,
        "name": f.name,
        "n": f.n,
        "pieces": pieces,
        "exceptional": [format_vector(e) for e in f.exceptional],
        "declared_domain": None if f.declared_domain is None else _poly_json(f.declared_domain),
        "infinite_E": None if f.infinite_E is None else _poly_json(f.infinite_E),
    }


def dumps(f: PiecewiseFunction) -> str:
    return json.dumps(to_document(f), indent=2) + "\n"


def save(f: PiecewiseFunction, path) -> None:
    Path(path).write_text(dumps(f), encoding="utf-8")


# -- reading ------------------------------------------------------------------


def _check_poly(d: dict, n: int, where: str) -> Polyhedron:
    if d["n"] != n:
        raise DocumentError(f"{where}/n: polyhedron has n = {d['n']}, document has n = {n}")
    for kind in ("ineq", "eq"):
        for k, (a, _) in enumerate(d.get(kind, [])):
            if len(a) != n:
                raise DocumentError(f"{where}/{kind}/{k}: normal has length {len(a)}, expected {n}")
    try:
        return Polyhedron.from_json(d)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{where}: {exc}") from None


def from_document(doc: dict) -> PiecewiseFunction:
    errors = sorted(_validator("function_document").iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"field {_path(e.absolute_path)}: {e.message}" for e in errors[:10]]
        raise DocumentError("schema validation failed:\n  " + "\n  ".join(lines))
    n = doc["n"]
    pieces = []
    for k, pd in enumerate(doc["pieces"]):
        where = f"pieces/{k}"
        dom = _check_poly(pd["domain"], n, f"{where}/domain")
        if pd["type"] == "plq":
            Q, b = pd["Q"], pd["b"]
            if len(Q) != n or any(len(r) != n for r in Q):
                raise DocumentError(f"{where}/Q: expected a {n}x{n} matrix")
            if len(b) != n:
                raise DocumentError(f"{where}/b: expected length {n}, got {len(b)}")
            try:
                pieces.append(PlqPiece(Q, b, pd["gamma"], dom, label=f"f{k + 1}"))
            except (ValueError, ZeroDivisionError) as exc:
                raise DocumentError(f"{where}: {exc}") from None
        else:
            if pd["name"] not in ORACLES:
                known = ", ".join(sorted(ORACLES))
                raise DocumentError(f"{where}/name: unknown builtin oracle {pd['name']!r} (known: {known})")
            if dom.n != 2:
                raise DocumentError(f"{where}: builtin oracles are functions on R^2")
            pieces.append(oracle_piece(pd["name"], dom))
    for k, e in enumerate(doc.get("exceptional", [])):
        if len(e) != n:
            raise DocumentError(f"exceptional/{k}: point has length {len(e)}, expected {n}")
    extra = {}
    for key in ("declared_domain", "infinite_E"):
        if doc.get(key) is not None:
            extra[key] = _check_poly(doc[key], n, key)
    return PiecewiseFunction(tuple(pieces), exceptional=tuple(doc.get("exceptional", [])), name=doc.get("name", ""), **extra)


def loads(text: str) -> PiecewiseFunction:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def load(path: Union[str, Path]) -> PiecewiseFunction:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def validate_report(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``report`` does not match the report schema."""
    _validator("report").validate(report)
