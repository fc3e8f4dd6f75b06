"""Command-line front end.

Exit status: 0 when the answer is true / the check passes, 1 when it is
false / no witness exists, 2 on any error (bad file, unknown name, violated
precondition).  With ``--json`` every rational is written as a
``[numerator, denominator]`` pair.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any, Sequence

from .config_io import ConfigFileError, bundled_names, resolve_config
from .curve_config import CurveConfig, build_ambient, curve_gram
from .divisor_calculus import (
    ModelIntegrityError,
    ReductionError,
    negative_definite_witness,
    phi,
    reference_ample,
    weyl_reduce,
)
from .exact_lattice import DivClass, lattice_profile
from .fano_reye import (
    InvalidSequenceError,
    NotFanoError,
    fano_from_sequence,
    reye_criterion,
    sequence_from_decl,
    validate_sequence,
)
from .scenarios import SCENARIOS, run_all, type_vii_structure

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


# -- serialization -------------------------------------------------------------

def to_jsonable(x: Any) -> Any:
    """Plain JSON structure; rationals become [num, den] pairs."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, int):
        return x
    if isinstance(x, DivClass):
        return [to_jsonable(c) for c in x.coords]
    if is_dataclass(x):
        return {f.name: to_jsonable(getattr(x, f.name)) for f in fields(x)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)


def from_pair(p: Sequence[int]) -> Fraction:
    return Fraction(p[0], p[1])


def _fmt(x: Any) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, DivClass):
        return "(" + ", ".join(_fmt(c) for c in x.coords) + ")"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


# -- class expressions -----------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)(?:/(\d+))?\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_']*)\s*")


class Context:
    def __init__(self, cfg: CurveConfig, sequence: str | None = None):
        self.cfg = cfg
        self.model = build_ambient(cfg)
        self.sequence = sequence
        self._fano = None

    def seq(self):
        name = self.sequence or ("main" if "main" in self.cfg.sequences else next(iter(self.cfg.sequences), None))
        if name is None or name not in self.cfg.sequences:
            raise CliError(f"configuration has no sequence {name!r}")
        return sequence_from_decl(self.model, self.cfg.sequences[name])

    def fano(self):
        if self._fano is None:
            self._fano = fano_from_sequence(self.seq(), self.model)
        return self._fano

    def reference(self) -> DivClass:
        if self.model.reference is not None:
            return self.model.reference
        if self.cfg.sequences:
            return reference_ample(self.model, self.fano().H)
        return reference_ample(self.model)

    def curve_coeffs(self, name: str) -> list[Fraction]:
        cfg = self.cfg
        if name in cfg.index:
            return [Fraction(int(c == name)) for c in cfg.curves]
        for table in (cfg.extra_generators, cfg.named_classes):
            if name in table:
                return list(self.model.coefficients_of(table[name]))
        if name == "H" and cfg.sequences:
            return self._h_coeffs()
        raise CliError(f"unknown class name {name!r}")

    def _h_coeffs(self) -> list[Fraction]:
        seq = self.seq()
        total = [Fraction(0)] * len(self.cfg.curves)
        for f, tail in seq.decomposition:
            for k, c in enumerate(self.curve_coeffs(f)):
                total[k] += c
            for r in tail:
                total[self.cfg.index[r]] += 1
        return [x / 3 for x in total]

    def expression(self, text: str) -> list[Fraction]:
        """Curve coefficients of an expression such as ``H1 - 2*F + E3``."""
        pos, total, first = 0, [Fraction(0)] * len(self.cfg.curves), True
        text = text.strip()
        if not text:
            raise CliError("empty class expression")
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m or m.end() == pos or (m.group(1) is None and not first):
                raise CliError(f"cannot parse class expression at {text[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            c = Fraction(int(m.group(2) or 1), int(m.group(3) or 1)) * sign
            for k, v in enumerate(self.curve_coeffs(m.group(4))):
                total[k] += c * v
            pos, first = m.end(), False
        return total

    def ambient(self, text: str) -> DivClass:
        return self.model.embed_coefficients(self.expression(text))

    def over_curves(self, cls: DivClass) -> dict[str, Fraction] | None:
        return self.model.curve_coordinates(cls)


# -- commands --------------------------------------------------------------------

def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(to_jsonable(payload), sort_keys=False))
    else:
        print("\n".join(lines))


def cmd_check(args) -> int:
    cfg = resolve_config(args.config)
    model = build_ambient(cfg)
    p = lattice_profile(model.lattice)
    checks = []
    if {c[:1] for c in cfg.curves} == {"E", "K"}:
        checks += [(c.name, c.passed) for c in type_vii_structure(cfg)]
    for nm, decl in cfg.sequences.items():
        v = validate_sequence(sequence_from_decl(model, decl), model)
        checks.append((f"sequence {nm}: 10-sequence conditions", v.valid))
        checks += [(f"sequence {nm}: {msg}", False) for msg in v.violations]
    ok = all(v for _, v in checks)
    payload = {"name": cfg.name, "curves": len(cfg.curves), "rank": p.rank, "determinant": p.determinant,
               "signature": list(p.signature), "even": p.is_even, "basis": list(model.lattice.basis_names),
               "checks": [{"name": n, "passed": v} for n, v in checks], "passed": ok}
    lines = [f"{cfg.name}: {len(cfg.curves)} curves, {len(cfg.edges)} edges",
             f"rank {p.rank}  det {p.determinant}  signature {p.signature}  {'even' if p.is_even else 'odd'}"]
    lines += [f"  [{'ok' if v else 'FAIL'}] {n}" for n, v in checks]
    _emit(args, payload, lines)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_phi(args) -> int:
    ctx = Context(resolve_config(args.config), args.sequence)
    h = ctx.ambient(args.expr)
    res = phi(h, ctx.model)
    curves = ctx.over_curves(res.witness)
    payload = {"class": args.expr, "H": h, "phi": res.value, "witness": res.witness,
               "witness_over_curves": curves, "slice_sizes": res.slice_sizes}
    lines = [f"Φ = {res.value}", f"witness (ambient): {_fmt(res.witness)}"]
    if curves is not None:
        lines.append("witness over curves: " + ", ".join(f"{k}: {_fmt(v)}" for k, v in curves.items() if v))
    lines.append("slice sizes: " + ", ".join(f"t={t}: {n}" for t, n in res.slice_sizes.items()))
    _emit(args, payload, lines)
    return EXIT_TRUE


def cmd_reduce(args) -> int:
    ctx = Context(resolve_config(args.config), args.sequence)
    d = ctx.ambient(args.expr)
    tr = weyl_reduce(d, ctx.model, ctx.reference())
    mult = {k: v for k, v in tr.multiplicities.items() if v}
    payload = {"class": args.expr, "input": d, "steps": [list(s) for s in tr.steps],
               "multiplicities": mult, "result": tr.result, "result_over_curves": ctx.over_curves(tr.result)}
    lines = [f"{len(tr.steps)} reflection(s)"]
    lines += [f"  reflect in {nm} (pairing {_fmt(v)})" for nm, v in tr.steps]
    lines.append("subtracted: " + (", ".join(f"{k}: {v}" for k, v in mult.items()) or "nothing"))
    lines.append(f"result (ambient): {_fmt(tr.result)}")
    _emit(args, payload, lines)
    return EXIT_TRUE


def cmd_negdef(args) -> int:
    ctx = Context(resolve_config(args.config), args.sequence)
    coeffs = ctx.expression(args.expr)
    if any(c.denominator != 1 or c < 0 for c in coeffs):
        raise CliError("negdef needs a non-negative integral combination of curves")
    gram = curve_gram(ctx.cfg).gram
    w = negative_definite_witness([int(c) for c in coeffs], gram)
    if w is None:
        payload = {"class": args.expr, "negative_definite": True, "witness": None}
        _emit(args, payload, ["true"])
        return EXIT_TRUE
    sq = sum(w[i] * gram[i][j] * w[j] for i in range(len(w)) for j in range(len(w)))
    named = {c: x for c, x in zip(ctx.cfg.curves, w) if x}
    payload = {"class": args.expr, "negative_definite": False, "witness": named, "witness_square": sq}
    _emit(args, payload, [f"false (witness subdivisor with square {sq})",
                          "  " + ", ".join(f"{k}: {v}" for k, v in named.items())])
    return EXIT_FALSE


def cmd_fano(args) -> int:
    ctx = Context(resolve_config(args.config), args.sequence_name)
    seq = ctx.seq()
    val = validate_sequence(seq, ctx.model)
    if not val.valid:
        payload = {"valid": False, "violations": list(val.violations), "is_fano": False}
        _emit(args, payload, ["invalid 10-sequence:"] + [f"  {v}" for v in val.violations])
        return EXIT_FALSE
    try:
        rep = fano_from_sequence(seq, ctx.model)
    except (NotFanoError, InvalidSequenceError) as exc:
        _emit(args, {"valid": True, "is_fano": False, "reason": str(exc)}, [f"not Fano: {exc}"])
        return EXIT_FALSE
    payload = {"valid": True, "degeneracy": val.degeneracy, "sum_square": val.sum_square, "H": rep.H,
               "H_over_curves": ctx.over_curves(rep.H), "H_square": rep.h_square, "phi": rep.phi_value,
               "is_nef": rep.is_nef, "is_fano": rep.is_fano, "tails": rep.tails,
               "tails_consistent": rep.tails_consistent}
    lines = [f"valid 10-sequence, c = {val.degeneracy}, (ΣE)² = {_fmt(val.sum_square)}",
             f"H = {_fmt(rep.H)}", f"H² = {_fmt(rep.h_square)}  Φ = {rep.phi_value}  nef: {rep.is_nef}",
             f"Fano: {rep.is_fano}"]
    lines += [f"  tail of {f}: {' '.join(t) or '(empty)'}" for f, t in rep.tails.items()]
    _emit(args, payload, lines)
    return EXIT_TRUE if rep.is_fano else EXIT_FALSE


def cmd_reye(args) -> int:
    ctx = Context(resolve_config(args.config), args.sequence_name)
    seq = ctx.seq()
    if args.half_fiber not in seq.half_fibers:
        raise CliError(f"{args.half_fiber!r} is not a half-fiber of the sequence")
    rep = ctx.fano()
    tail = rep.tails[args.half_fiber]
    model = ctx.model.with_reference(ctx.reference())
    res = reye_criterion(rep.H, seq.half_fibers[args.half_fiber], [model.curve(r) for r in tail], model)
    wit = res.named_witness()
    payload = {"half_fiber": args.half_fiber, "tail": list(tail), "generators": list(res.generator_names),
               "witness": wit, "negative_definite": res.negative_definite}
    if wit is None:
        _emit(args, payload, [f"H - 2({args.half_fiber} + T) is not a non-negative combination of the curves"])
        return EXIT_FALSE
    lines = [f"H - 2({args.half_fiber} + {' + '.join(tail) or '0'}) = effective divisor:"]
    lines += [f"  {k}: {v}" for k, v in wit.items()]
    lines.append(f"negative definite: {res.negative_definite}")
    _emit(args, payload, lines)
    return EXIT_TRUE


def cmd_paper_verify(args) -> int:
    agg = run_all(args.config_dir)
    if args.json:
        for r in agg.reports:
            print(json.dumps(to_jsonable({"scenario": r.name, "passed": r.passed, "error": r.error,
                                          "structural": r.structural, "checks": r.checks})))
        print(json.dumps({"summary": {"passed": sum(r.passed for r in agg.reports), "total": len(agg.reports)}}))
        return agg.exit_status
    width = max(len(n) for n in SCENARIOS)
    for r in agg.reports:
        n = len(r.structural) + len(r.checks)
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  ({n} checks)")
        if r.error:
            print(f"    error: {r.error}")
        for c in r.failures():
            print(f"    failed: {c.name}: expected {_fmt(c.expected)}, got {_fmt(c.computed)} [{c.anchor}]")
        if args.verbose:
            for c in r.structural + r.checks:
                mark = {True: "ok", False: "FAIL", None: "info"}[c.passed]
                print(f"    [{mark}] {c.name}: {_fmt(c.computed)} [{c.anchor}]")
    good = sum(r.passed for r in agg.reports)
    print(f"{good}/{len(agg.reports)} scenarios pass")
    return agg.exit_status


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    cfgp = argparse.ArgumentParser(add_help=False)
    cfgp.add_argument("--config", required=True,
                      help=f"TOML file or bundled name ({', '.join(bundled_names())})")
    p = argparse.ArgumentParser(prog="enriques-lattice", description="Exact lattice computations on curve configurations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common, cfgp], help="lattice profile and structural checks")
    s.set_defaults(func=cmd_check)
    for name, func, helptext in (("phi", cmd_phi, "Φ of a class"), ("reduce", cmd_reduce, "Weyl reduction of a class"),
                                 ("negdef", cmd_negdef, "negative definiteness of a curve combination")):
        s = sub.add_parser(name, parents=[common, cfgp], help=helptext)
        s.add_argument("expr", help="class expression, e.g. 'H1 - 2*F + E3'; H is the class of the sequence")
        s.add_argument("--sequence", default=None, help="sequence defining H (default: main)")
        s.set_defaults(func=func)
    s = sub.add_parser("fano", parents=[common, cfgp], help="validate a sequence and its Fano polarization")
    s.add_argument("sequence_name", nargs="?", default=None)
    s.set_defaults(func=cmd_fano)
    s = sub.add_parser("reye", parents=[common, cfgp], help="effectivity of H - 2(F + T)")
    s.add_argument("sequence_name")
    s.add_argument("half_fiber")
    s.set_defaults(func=cmd_reye)
    s = sub.add_parser("paper-verify", parents=[common], help="run all bundled scenarios")
    s.add_argument("--config-dir", default=None, help="directory with replacement configuration files")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_paper_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    try:
        return args.func(args)
    except (ConfigFileError, CliError, KeyError, ValueError, ModelIntegrityError, ReductionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if getattr(args, "json", False):
            print(json.dumps({"error": msg}))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
