"""TOML configuration files for curve configurations.

Layout::

    name = "example"
    curves = ["A", "B", "C"]
    edges = [["A", "B", 1], ["B", "C", 2]]
    reference = "H"                      # optional: a declared class name

    [extra_generators.half]              # rational classes added to the lattice
    coefficients = { A = [1, 2], C = [1, 2] }

    [classes.F]                          # named classes, not generators
    null_vector_of = ["A", "B", "C"]     # primitive null vector of a sub-diagram
    divide_by = 1                        # optional
    coefficients = { A = 1 }             # optional, added to the null vector

    [sequences.main]                     # a 10-sequence by names
    blocks = [{ half_fiber = "F", tail = ["A", "B"] }]   # all prefixes of each tail
    # or: entries = [{ half_fiber = "F", tail = [] }, ...]

Rationals are written as integers or ``[numerator, denominator]`` pairs.
Errors are raised as :class:`ConfigFileError` carrying the offending field
path and, when it can be located, the line number.
"""
from __future__ import annotations

import re
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .curve_config import ClassSpec, ConfigError, CurveConfig, SequenceDecl

__all__ = ["ConfigFileError", "parse_config", "load_config", "bundled_names", "bundled_path", "resolve_config"]

BUNDLED = ("E8_tilde", "D8_tilde", "E7_tilde", "type_VII")


class ConfigFileError(ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None,
                 source: str | None = None):
        self.field, self.line, self.source = field, line, source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        super().__init__((": ".join([", ".join(where), message])) if where else message)


def _find_line(text: str, needle: str) -> int | None:
    pat = re.compile(re.escape(needle))
    for k, line in enumerate(text.splitlines(), 1):
        if pat.search(line):
            return k
    return None


def _edge_line(text: str, k: int) -> int | None:
    start = _find_line(text, "edges")
    if start is None:
        return None
    lines = text.splitlines()
    count = -1
    for n in range(start - 1, len(lines)):
        for _ in re.finditer(r"\[\s*\"", lines[n]):
            count += 1
            if count == k:
                return n + 1
    return None


def _rational(value: Any, field: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigFileError("expected an integer or [num, den]", field)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        if value[1] <= 0:
            raise ConfigFileError("denominator must be positive", field)
        return Fraction(value[0], value[1])
    raise ConfigFileError(f"expected an integer or [num, den], got {value!r}", field)


def _names(value: Any, field: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ConfigFileError("expected a list of names", field)
    return tuple(value)


def _class_spec(tbl: Any, field: str) -> ClassSpec:
    if not isinstance(tbl, dict):
        raise ConfigFileError("expected a table", field)
    unknown = set(tbl) - {"coefficients", "null_vector_of", "divide_by"}
    if unknown:
        raise ConfigFileError(f"unknown keys {sorted(unknown)}", field)
    coeffs = tbl.get("coefficients", {})
    if not isinstance(coeffs, dict):
        raise ConfigFileError("coefficients must be a table", f"{field}.coefficients")
    cs = tuple((k, _rational(v, f"{field}.coefficients.{k}")) for k, v in coeffs.items())
    support = _names(tbl.get("null_vector_of", []), f"{field}.null_vector_of")
    div = tbl.get("divide_by", 1)
    if not isinstance(div, int) or isinstance(div, bool) or div <= 0:
        raise ConfigFileError("divide_by must be a positive integer", f"{field}.divide_by")
    if not cs and not support:
        raise ConfigFileError("class needs coefficients or null_vector_of", field)
    return ClassSpec(cs, support, div)


def _sequence(tbl: Any, field: str) -> SequenceDecl:
    if not isinstance(tbl, dict) or len(set(tbl) & {"entries", "blocks"}) != 1 or set(tbl) - {"entries", "blocks"}:
        raise ConfigFileError("sequence needs exactly one of 'entries' or 'blocks'", field)
    out = []
    key = "entries" if "entries" in tbl else "blocks"
    items = tbl[key]
    if not isinstance(items, list):
        raise ConfigFileError("expected a list", f"{field}.{key}")
    for k, item in enumerate(items):
        f = f"{field}.{key}[{k}]"
        if not isinstance(item, dict) or not isinstance(item.get("half_fiber"), str):
            raise ConfigFileError("expected {half_fiber = name, tail = [...]}", f)
        tail = _names(item.get("tail", []), f"{f}.tail")
        if key == "entries":
            out.append((item["half_fiber"], tail))
        else:
            out.extend((item["half_fiber"], tail[:j]) for j in range(len(tail) + 1))
    return SequenceDecl(tuple(out))


def parse_config(text: str, source: str | None = None) -> CurveConfig:
    """Parse TOML text into a validated :class:`CurveConfig`."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        if line is None:
            m = re.search(r"line (\d+)", str(exc))
            line = int(m.group(1)) if m else max(1, len(text.splitlines()))
        raise ConfigFileError(str(exc), line=line, source=source) from None

    def fail(msg, field, needle=None, line=None):
        if line is None and needle:
            line = _find_line(text, needle)
        raise ConfigFileError(msg, field, line, source)

    known = {"name", "curves", "edges", "extra_generators", "classes", "sequences", "reference"}
    for k in data:
        if k not in known:
            fail(f"unknown key {k!r}", k, k)
    name = data.get("name", source or "config")
    if not isinstance(name, str):
        fail("name must be a string", "name", "name")
    curves = data.get("curves", [])
    if not isinstance(curves, list) or not all(isinstance(c, str) for c in curves):
        fail("curves must be a list of names", "curves", "curves")
    if not curves:
        fail("no curves", "curves", "curves")

    edges = []
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        fail("edges must be a list", "edges", "edges")
    for k, e in enumerate(raw_edges):
        ok = (isinstance(e, list) and len(e) in (2, 3) and isinstance(e[0], str) and isinstance(e[1], str)
              and (len(e) == 2 or (isinstance(e[2], int) and not isinstance(e[2], bool))))
        if not ok:
            fail("edge must be [name, name] or [name, name, multiplicity]", f"edges[{k}]", line=_edge_line(text, k))
        edges.append((e[0], e[1], e[2] if len(e) == 3 else 1))

    def specs(key):
        tbl = data.get(key, {})
        if not isinstance(tbl, dict):
            fail("expected a table", key, key)
        out = {}
        for nm, spec in tbl.items():
            try:
                out[nm] = _class_spec(spec, f"{key}.{nm}")
            except ConfigFileError as exc:
                fail(str(exc).split(": ", 1)[-1], exc.field, f"[{key}.{nm}]")
        return out

    gens = specs("extra_generators")
    classes = specs("classes")
    seqs = {}
    for nm, tbl in data.get("sequences", {}).items():
        try:
            seqs[nm] = _sequence(tbl, f"sequences.{nm}")
        except ConfigFileError as exc:
            fail(str(exc).split(": ", 1)[-1], exc.field, f"[sequences.{nm}]")
    declared = set(curves) | set(gens) | set(classes)
    for nm, decl in seqs.items():
        for k, (f, tail) in enumerate(decl.entries):
            if f not in declared:
                fail(f"unknown half-fiber {f!r}", f"sequences.{nm}", f"[sequences.{nm}]")
            for r in tail:
                if r not in curves:
                    fail(f"unknown curve {r!r} in tail", f"sequences.{nm}", f"[sequences.{nm}]")
    ref = data.get("reference")
    if ref is not None and (not isinstance(ref, str) or ref not in declared):
        fail(f"reference {ref!r} is not a declared class", "reference", "reference")

    try:
        return CurveConfig(name, tuple(curves), tuple(edges), gens, classes, seqs, ref)
    except ConfigError as exc:
        msg = str(exc)
        m = re.match(r"edges\[(\d+)\]", msg)
        if m:
            k = int(m.group(1))
            raise ConfigFileError(msg.split(": ", 1)[-1], f"edges[{k}]", _edge_line(text, k), source) from None
        raise ConfigFileError(msg, None, None, source) from None


def bundled_names() -> tuple[str, ...]:
    return BUNDLED


def bundled_path(name: str):
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled configuration {name!r}; choose from {', '.join(BUNDLED)}")
    return resources.files("enriques_lattice") / "data" / f"{name}.toml"


def load_config(path: str | Path) -> CurveConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigFileError(f"cannot read file: {exc.strerror}", source=str(p)) from None
    return parse_config(text, source=str(p))


def resolve_config(spec: str) -> CurveConfig:
    """A bundled name or a path to a TOML file."""
    if spec in BUNDLED:
        ref = bundled_path(spec)
        return parse_config(ref.read_text(encoding="utf-8"), source=spec)
    return load_config(spec)
