"""Command line front end.

    cellnet [--format json|human] DOCUMENT COMMAND [options]

Every command prints one JSON report on stdout (or a human summary with
``--format human``).  Exit codes: 0 success, 1 invalid input, 2 refused
by a size guard, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from fractions import Fraction

from .colored import (ColoredNetworkSpec, colored_a_map, colored_bracket,
                      colored_compose, colored_kernel_gamma, colored_variable_names,
                      semigroupoid_closure)
from .document import NetworkDocument, dumps, parse_network
from .errors import CellNetError, DocumentError, ValidationError
from .finmap import FiniteMap
from .liealg import kernel_gamma, sigma_bracket, sigma_compose
from .network import NetworkSpec, a_map, fundamental_network
from .normalform import normal_form, sn_decompose
from .polyspace import PolyMap, format_polymap, format_rational
from .structure import (InputSymmetryPair, balanced_partitions, dynamical_input_symmetries,
                        extend_input_symmetry, generate_group, network_symmetries)
from .verify import verify_colored, verify_network

log = logging.getLogger("cellnet")

COMMANDS = ("complete", "fundamental", "symmetries", "synchrony", "input-symmetries", "compose",
            "bracket", "kernel-gamma", "sn", "normal-form", "verify")
_HOMOGENEOUS_ONLY = {"fundamental", "symmetries", "synchrony", "input-symmetries"}

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _sub(k) -> str:
    return str(k).translate(_SUB)


def _q(x) -> str:
    return format_rational(Fraction(x))


def _matrix(rows) -> list:
    return [[_q(x) for x in row] for row in rows]


def _terms(f: PolyMap) -> list:
    return [{"component": c, "exponent": list(e), "coefficient": _q(v)} for c, e, v in f.terms()]


# closing the document's maps and naming new elements

class Context:
    """A document together with its closed network and element names."""

    def __init__(self, doc: NetworkDocument):
        self.doc = doc
        if doc.colored:
            self.closed = semigroupoid_closure(doc.spec) if not doc.spec.is_semigroupoid else doc.spec
            self.names = None
        else:
            self.closed = doc.spec if doc.spec.is_semigroup else doc.spec.closure()
            self.names = _element_names(doc.map_names, self.closed)

    def function(self, name: str):
        if name not in self.doc.functions:
            known = ", ".join(self.doc.functions) or "none"
            raise ValidationError(f"unknown function {name!r} (defined: {known})")
        return self.doc.functions[name]

    def format(self, f) -> object:
        if self.doc.colored:
            return {str(c): format_polymap(f.color(c), colored_variable_names(self.closed, c, f.p))
                    for c in range(1, self.closed.C + 1)}
        return format_polymap(f)

    def terms(self, f) -> object:
        if self.doc.colored:
            return {str(c): _terms(f.color(c)) for c in range(1, self.closed.C + 1)}
        return _terms(f)


def _element_names(user: list, closed: NetworkSpec) -> list:
    """User names first; each added element is named after a product that produces it."""
    table = closed.table.table
    names = list(user)
    for k in range(len(user) + 1, closed.n + 1):
        for a in range(1, k):
            b = next((b for b in range(1, k) if table[a - 1][b - 1] == k), None)
            if b is not None:
                names.append(f"{names[a - 1]}∘{names[b - 1]}")
                break
        else:
            names.append(f"σ{k}")
    return names


# commands

def _complete(ctx: Context, args) -> tuple[dict, list]:
    if ctx.doc.colored:
        return _complete_colored(ctx)
    spec, names = ctx.closed, ctx.names
    table = spec.table
    n0 = len(ctx.doc.map_names)
    a_maps = {names[j - 1]: list(a_map(spec, j).selector) for j in range(1, spec.n + 1)}
    report = {
        "cells": spec.N,
        "maps": {nm: list(s.images) for nm, s in zip(names, spec.maps)},
        "order": names,
        "added": names[n0:],
        "table": [list(r) for r in table.table],
        "tilde": [list(t.images) for t in table.tilde],
        "a_maps": a_maps,
    }
    xs = ",".join(f"X{_sub(k)}" for k in range(1, spec.n + 1))
    lines = [f"closure has {spec.n} maps ({spec.n - n0} added)"]
    for j, (nm, s) in enumerate(zip(names, spec.maps), start=1):
        lines.append(f"σ{_sub(j)} = {nm}: {tuple(s.images)}")
    lines.append("composition table, entry (a, b) is the index of σ_a∘σ_b:")
    lines.extend("  " + " ".join(str(x) for x in row) for row in table.table)
    for j, t in enumerate(table.tilde, start=1):
        lines.append(f"tilde σ{_sub(j)} = {tuple(t.images)}")
    for j in range(1, spec.n + 1):
        sel = ",".join(f"X{_sub(s)}" for s in a_map(spec, j).selector)
        lines.append(f"A_{{σ{_sub(j)}}}({xs}) = ({sel})")
    return report, lines


def _complete_colored(ctx: Context):
    spec: ColoredNetworkSpec = ctx.closed
    C = spec.C
    maps, a_maps, lines = {}, {}, []
    for d in range(1, C + 1):
        for c in range(1, C + 1):
            for j, s in enumerate(spec.typed(d, c), start=1):
                key = f"σ{j}@({d}<-{c})"
                maps[key] = list(s.images)
                a_maps[key] = list(colored_a_map(spec, d, c, j).selector)
                lines.append(f"σ^({d},{c})_{j}: {tuple(s.images)}, A selects slots {tuple(a_maps[key])}")
    table = [{"e": e, "d": d, "c": c, "j1": j1, "j2": j2, "product": j3}
             for (e, d, c, j1, j2), j3 in spec.table]
    report = {
        "colors": [{"cells": spec.N(c), "dim": spec.dim(c)} for c in range(1, C + 1)],
        "maps": maps,
        "added": {f"{d}<-{c}": spec.n(d, c) - spec.original_counts[d - 1][c - 1]
                  for d in range(1, C + 1) for c in range(1, C + 1)},
        "table": table,
        "a_maps": a_maps,
        "profiles": {str(c): [list(x) for x in spec.profile(c)] for c in range(1, C + 1)},
    }
    lines.insert(0, f"closure has {sum(spec.n(d, c) for d in range(1, C + 1) for c in range(1, C + 1))} typed maps")
    return report, lines


def _fundamental(ctx: Context, args):
    spec = ctx.closed
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fund = fundamental_network(spec)
    faithful = not caught
    xs = ",".join(f"X{_sub(k)}" for k in range(1, spec.n + 1))
    comps = [f"f({','.join(f'X{_sub(s)}' for s in sel)})"
             for sel in (tuple(s(i) for s in fund.maps) for i in range(1, fund.N + 1))]
    report = {
        "cells": fund.N,
        "maps": {nm: list(s.images) for nm, s in zip(ctx.names, fund.maps)},
        "faithful": faithful,
        "inputs": [[s(i) for s in fund.maps] for i in range(1, fund.N + 1)],
    }
    lines = [f"Γ_f({xs}) = ({', '.join(comps)})"]
    if not faithful:
        lines.append("warning: left multiplication is not faithful; remove slave cells first")
    return report, lines


def _symmetries(ctx: Context, args):
    syms = network_symmetries(ctx.closed)
    return ({"symmetries": [list(p.images) for p in syms]},
            [f"{len(syms)} network symmetries"] + [f"  {tuple(p.images)}" for p in syms])


def _synchrony(ctx: Context, args):
    parts = balanced_partitions(ctx.doc.spec)
    return ({"balanced_partitions": [[list(b) for b in P.blocks] for P in parts]},
            [f"{len(parts)} balanced partitions"] + [f"  {P}" for P in parts])


def _pair_json(pair):
    return {"p": list(pair.p.images), "q": list(pair.q.images)}


def _input_symmetries(ctx: Context, args):
    pairs = dynamical_input_symmetries(ctx.doc.spec)
    extended = [extend_input_symmetry(ctx.closed, pr) for pr in pairs]
    lines = [f"{len(pairs)} dynamical input symmetries"]
    lines.extend(f"  p = {tuple(a.p.images)}, q = {tuple(a.q.images)}, on the closure q = {tuple(b.q.images)}"
                 for a, b in zip(pairs, extended))
    return ({"pairs": [_pair_json(p) for p in pairs], "closure_pairs": [_pair_json(p) for p in extended]},
            lines)


def _binary(ctx: Context, args, op_name):
    f, g = ctx.function(args.f), ctx.function(args.g)
    if ctx.doc.colored:
        op = colored_compose if op_name == "compose" else colored_bracket
    else:
        op = sigma_compose if op_name == "compose" else sigma_bracket
    r = op(ctx.closed, f, g)
    head = f"{args.f} ∘_Σ {args.g}" if op_name == "compose" else f"[{args.f}, {args.g}]_Σ"
    return {"result": ctx.format(r), "terms": ctx.terms(r)}, [f"{head} = {_human(ctx.format(r))}"]


def _human(x) -> str:
    if isinstance(x, dict):
        return "; ".join(f"color {c}: {_human(v)}" for c, v in x.items())
    if isinstance(x, list):
        return "(" + ", ".join(x) + ")"
    return x


def _kernel(ctx: Context, args):
    k, l = args.degree, args.param_degree
    p = ctx.doc.params
    if l > 0 and p == 0:
        raise ValidationError("--param-degree needs a document with parameters")
    if ctx.doc.colored:
        basis = colored_kernel_gamma(ctx.closed, k, l, p)
    else:
        basis = kernel_gamma(ctx.closed, k, l, p)
    shown = [ctx.format(b) for b in basis]
    return ({"degree": k, "param_degree": l, "dimension": len(basis), "basis": shown},
            [f"ker γ in grade ({k},{l}) has dimension {len(basis)}"] + [f"  {_human(s)}" for s in shown])


def _linear_part(ctx: Context, name):
    f = ctx.function(name)
    parts = f.grade_parts()
    if (0, 0) not in parts:
        raise ValidationError(f"function {name!r} has no linear part")
    return parts[(0, 0)].with_params(0)


def _sn(ctx: Context, args):
    f0 = _linear_part(ctx, args.f0)
    split = sn_decompose(ctx.closed, f0)
    report = {
        "f0": ctx.format(split.f0),
        "f0_S": ctx.format(split.f0_S),
        "f0_N": ctx.format(split.f0_N),
        "S": _matrix(split.S),
        "N": _matrix(split.N),
        "witness_polynomial": [_q(c) for c in split.witness_polynomial],
        "unique": split.unique,
    }
    lines = [f"f0   = {_human(report['f0'])}",
             f"f0^S = {_human(report['f0_S'])}",
             f"f0^N = {_human(report['f0_N'])}"]
    if not split.unique:
        lines.append("note: ker γ contains linear maps, f0^S is the reduced representative")
    return report, lines


def _parse_pairs(spec: NetworkSpec, text: str) -> list:
    pairs = []
    for chunk in text.split(";"):
        try:
            ps, qs = chunk.split(":")
            pair = InputSymmetryPair(FiniteMap([int(x) for x in ps.split(",")]),
                                     FiniteMap([int(x) for x in qs.split(",")]))
        except ValueError:
            raise ValidationError(f"cannot read input symmetry {chunk!r}; use p1,p2,..:q1,q2,..") from None
        if not pair.holds(spec):
            raise ValidationError(f"{chunk!r} is not a dynamical input symmetry of the network")
        pairs.append(pair)
    return pairs


def _normal_form(ctx: Context, args):
    if ctx.doc.colored and args.invariant:
        raise ValidationError("--invariant is only available for homogeneous networks")
    f = ctx.function(args.f)
    invariance = None
    if args.invariant:
        raw = ctx.doc.spec
        pairs = dynamical_input_symmetries(raw) if args.invariant == "auto" else _parse_pairs(raw, args.invariant)
        invariance = generate_group([extend_input_symmetry(ctx.closed, pr) for pr in pairs])
    result = normal_form(ctx.closed, f, args.degree, args.param_degree, args.strategy, invariance=invariance)
    grades = []
    lines = [f"normal form to state degree {args.degree + 1}, parameter degree {args.param_degree}"]
    for (k, l) in result.order:
        entry = {
            "grade": [k, l],
            "generator": ctx.format(result.generators[(k, l)]),
            "residual": ctx.format(result.residuals[(k, l)]),
            "normal_space": [ctx.format(b) for b in result.normal_spaces[(k, l)]],
            "kernel": [ctx.format(b) for b in result.quotient_bases[(k, l)].kernel],
        }
        grades.append(entry)
        lines.append(f"  ({k},{l}): {_human(entry['residual'])}")
    report = {"strategy": args.strategy, "degree": args.degree, "param_degree": args.param_degree,
              "fbar": ctx.format(result.fbar), "terms": ctx.terms(result.fbar), "grades": grades}
    if invariance is not None:
        report["invariance"] = [_pair_json(p) for p in invariance]
    lines.append(f"f̄ = {_human(report['fbar'])}")
    return report, lines


def _verify(ctx: Context, args):
    run = verify_colored if ctx.doc.colored else verify_network
    rep = run(ctx.doc.spec, samples=args.samples, seed=args.seed)
    checks = [{"name": c.name, "passed": c.passed, "informational": c.informational, "detail": c.detail}
              for c in rep.checks]
    lines = []
    for c in rep.checks:
        tag = "info" if c.informational else ("ok" if c.passed else "FAIL")
        lines.append(f"[{tag}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    return {"passed": rep.passed, "seed": args.seed, "checks": checks}, lines


_HANDLERS = {
    "complete": _complete,
    "fundamental": _fundamental,
    "symmetries": _symmetries,
    "synchrony": _synchrony,
    "input-symmetries": _input_symmetries,
    "compose": lambda ctx, a: _binary(ctx, a, "compose"),
    "bracket": lambda ctx, a: _binary(ctx, a, "bracket"),
    "kernel-gamma": _kernel,
    "sn": _sn,
    "normal-form": _normal_form,
    "verify": _verify,
}


def run_command(command: str, document, options: argparse.Namespace | None = None) -> tuple[dict, list]:
    """Run one command on a document (text, dict or NetworkDocument).

    Returns the machine-readable report and the human-readable lines.
    """
    if command not in _HANDLERS:
        raise ValidationError(f"unknown command {command!r}")
    doc = document if isinstance(document, NetworkDocument) else parse_network(document)
    if doc.colored and command in _HOMOGENEOUS_ONLY:
        raise ValidationError(f"{command} is only available for homogeneous networks")
    options = options or argparse.Namespace()
    report, lines = _HANDLERS[command](Context(doc), options)
    return {"command": command, **report}, lines


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors; exit code 2 is reserved for guard refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cellnet", description="Exact algebra for coupled cell networks.")
    parser.add_argument("--format", choices=("json", "human"), default="json")
    parser.add_argument("document", help="network document (JSON file, or - for stdin)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_Parser)
    for name in ("complete", "fundamental", "symmetries", "synchrony", "input-symmetries"):
        sub.add_parser(name)
    for name in ("compose", "bracket"):
        sp = sub.add_parser(name)
        sp.add_argument("f")
        sp.add_argument("g")
    sp = sub.add_parser("kernel-gamma")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--param-degree", type=int, default=0)
    sp = sub.add_parser("sn")
    sp.add_argument("f0")
    sp = sub.add_parser("normal-form")
    sp.add_argument("f")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--param-degree", type=int, default=0)
    sp.add_argument("--strategy", choices=("sn", "image"), default="sn")
    sp.add_argument("--invariant", default=None, metavar="auto|P:Q[;P:Q...]")
    sp = sub.add_parser("verify")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=5)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def main(argv=None) -> int:
    logging.basicConfig(level=logging.DEBUG if os.environ.get("CELLNET_VERBOSE") else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    for opt in ("degree", "param_degree", "samples"):
        if getattr(args, opt, 0) is not None and getattr(args, opt, 0) < 0:
            print(f"cellnet: error: --{opt.replace('_', '-')} must be non-negative", file=sys.stderr)
            return 1
    try:
        doc = parse_network(_read(args.document))
        log.debug("parsed %s with %d maps", args.document, len(doc.map_names))
        report, lines = run_command(args.command, doc, args)
    except DocumentError as exc:
        print(f"cellnet: {args.document}: {exc}", file=sys.stderr)
        return exc.exit_code
    except CellNetError as exc:
        print(f"cellnet: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    if args.command == "verify" and not report["passed"]:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
