"""Command line front end.

Every subcommand reads one or more documents (``--input``, repeatable), runs
one computation and writes a report.  Exit status: 0 success, 1 validation
failure, 2 parse or reference error, 3 a checked invariant failed.  Failures
also print one JSON error record on standard error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import docformat as fmt
from .corners import double, product_corners, validate_corners
from .geochain import boundary, product, product_target
from .homology import chain_map_check, comparison, kunneth_check, simplicial_homology
from .quotient import (
    NotRegularError,
    RegularizationError,
    check_frontier,
    check_strata_descend,
    orbit_type_strata,
    regularize,
    validate_action,
)
from .simplicial import SimplexChain, ValidationReport, Violation, validate_complex

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, status: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.kind = kind
        self.extra = extra


@dataclass
class Report:
    """Report lines for text output and a parallel JSON-ready payload."""

    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    status: int = EXIT_OK

    def fail(self, status: int) -> None:
        self.status = max(self.status, status)


def _violations(report: ValidationReport) -> list[dict]:
    return [{"code": v.code, "detail": v.detail} for v in report.violations]


def _chain_lines(z: SimplexChain) -> list[str]:
    c = z.complex
    out = []
    for s, coef in sorted(z.coefficients.items(), key=lambda kv: (len(kv[0]), kv[0])):
        out.append(f"  {_signed(coef)} [{' '.join(fmt.token(v) for v in c.labels(s))}]")
    return out


def _signed(q) -> str:
    return f"+{q}" if q > 0 else str(q)


def _chain_data(z: SimplexChain) -> list[dict]:
    c = z.complex
    return [
        {"simplex": [fmt.token(v) for v in c.labels(s)], "coefficient": str(coef)}
        for s, coef in sorted(z.coefficients.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]


def _pick(ws: fmt.Workspace, names: Sequence[str], kind: type) -> list[str]:
    if names:
        for n in names:
            ws.record(n, kind)
        return list(names)
    return ws.names_of(kind)


# -- commands --------------------------------------------------------------


def cmd_validate(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"records": []})
    for r in ws.document.records:
        kind = type(r).__name__[: -len("Record")].lower()
        try:
            report = _validate_record(ws, r)
        except fmt.BuildError as exc:
            report = exc.report or ValidationReport((Violation("malformed", str(exc)),))
        ok = report.ok
        rep.lines.append(f"{kind} {r.name}: {'ok' if ok else 'invalid'}")
        rep.lines += [f"  {v.code}: {v.detail}" for v in report.violations]
        rep.data["records"].append(
            {"kind": kind, "name": r.name, "ok": ok, "violations": _violations(report)}
        )
        if not ok:
            rep.fail(EXIT_INVALID)
    return rep


def _validate_record(ws: fmt.Workspace, r) -> ValidationReport:
    if isinstance(r, fmt.ComplexRecord):
        report = validate_complex(ws.complex(r.name))
        if r.corners and report.ok:
            report = report + validate_corners(ws.manifold(r.name))
        return report
    if isinstance(r, fmt.MapRecord):
        return ws.map(r.name).validate()
    if isinstance(r, fmt.GroupRecord):
        ws.group(r.name)
        return ValidationReport()
    if isinstance(r, fmt.ActionRecord):
        report = validate_corners(ws.manifold(r.complex))
        return report + validate_action(ws.action(r.name)) if report.ok else report
    report = ValidationReport()
    for _, t in ws.chain_terms(r.name):
        report = report + t.validate()
    if report.ok:
        ws.chain(r.name)
    return report


def cmd_betti(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"betti": {}})
    for name in _pick(ws, args.names, fmt.ComplexRecord):
        c = ws.complex(name)
        _require(validate_complex(c), f"complex {name!r}")
        b = simplicial_homology(c).betti
        rep.lines.append(f"{name}: {' '.join(map(str, b))}")
        rep.data["betti"][name] = list(b)
    return rep


def _require(report: ValidationReport, what: str) -> None:
    if not report.ok:
        raise CommandError(
            EXIT_INVALID, "validation", f"{what} is invalid", violations=_violations(report)
        )


def cmd_boundary(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"chains": {}})
    docs = fmt.Document()
    for name in _pick(ws, args.names, fmt.ChainRecord):
        c = ws.chain(name)
        if c.dim < 1:
            raise CommandError(EXIT_INVALID, "validation", f"chain {name!r} has dimension 0")
        b = boundary(c)
        bb = boundary(b) if b.dim >= 1 else None
        ok = bb is None or bb.is_empty()
        target = ws.record(name, fmt.ChainRecord).target
        doc = fmt.chain_document(f"{name}.boundary", b, target)
        docs = docs + doc
        rep.lines.append(f"# boundary of {name}: {len(b)} terms; boundary squared empty: {ok}")
        rep.data["chains"][name] = {"terms": len(b), "boundary_squared_empty": ok}
        if not ok:
            rep.fail(EXIT_INVARIANT)
    rep.lines.append(fmt.serialize(docs).rstrip("\n"))
    rep.data["document"] = fmt.serialize(docs)
    return rep


def cmd_compare(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"chains": {}})
    for name in _pick(ws, args.names, fmt.ChainRecord):
        c = ws.chain(name)
        z = comparison(c)
        rep.lines.append(f"chain {name}: comparison")
        rep.lines += _chain_lines(z)
        entry = {"comparison": _chain_data(z)}
        if c.dim >= 1:
            ok, diff = chain_map_check(c)
            rep.lines.append(f"chain-map {name}: {'ok' if ok else 'FAILED'}")
            rep.lines += _chain_lines(diff)
            entry.update(chain_map_ok=ok, difference=_chain_data(diff))
            if not ok:
                rep.fail(EXIT_INVARIANT)
        rep.data["chains"][name] = entry
    return rep


def cmd_product(ws: fmt.Workspace, args) -> Report:
    left = ws.records.get(args.left)
    right = ws.records.get(args.right)
    kinds = {type(left), type(right)}
    if kinds == {fmt.ChainRecord}:
        x, y = ws.chain(args.left), ws.chain(args.right)
        try:
            c = product(x, y)
        except ValueError as exc:
            raise CommandError(EXIT_INVALID, "validation", str(exc)) from None
        tname = f"{left.target}.x.{right.target}"
        target = product_target(x.target, y.target).complex
        doc = fmt.Document((fmt.complex_record(tname, target),)) + fmt.chain_document(
            f"{args.left}.x.{args.right}", c, tname
        )
        summary = {"kind": "chain", "dim": c.dim, "terms": len(c)}
    elif kinds == {fmt.ComplexRecord} and left.corners and right.corners:
        p, q = ws.manifold(args.left), ws.manifold(args.right)
        _require(validate_corners(p), f"manifold {args.left!r}")
        _require(validate_corners(q), f"manifold {args.right!r}")
        m = product_corners(p, q)
        doc = fmt.Document((fmt.manifold_record(f"{args.left}.x.{args.right}", m),))
        summary = {"kind": "manifold", "dim": m.dim, "facets": len(m.facets)}
    else:
        for n in (args.left, args.right):
            ws.record(n, (fmt.ChainRecord, fmt.ComplexRecord))
        raise CommandError(
            EXIT_PARSE, "reference", "product needs two chains or two corners complexes"
        )
    text = fmt.serialize(doc)
    return Report([text.rstrip("\n")], {**summary, "document": text})


def cmd_double(ws: fmt.Workspace, args) -> Report:
    p = ws.manifold(args.name)
    _require(validate_corners(p), f"manifold {args.name!r}")
    by_token = {fmt.token(lab): lab for lab in p.facets}
    chosen = args.facets or sorted(by_token)
    unknown = [f for f in chosen if f not in by_token]
    if unknown:
        raise CommandError(EXIT_PARSE, "reference", f"unknown facet {unknown[0]!r}")
    m, swap = double(p, [by_token[f] for f in chosen])
    report = validate_corners(m)
    name = f"{args.name}.double"
    doc = fmt.Document(
        (fmt.manifold_record(name, m), fmt.map_record(f"{name}.swap", swap, name, name))
    )
    text = fmt.serialize(doc)
    b = simplicial_homology(m.complex).betti
    rep = Report(
        [f"# double of {args.name} along {' '.join(chosen)}: betti {' '.join(map(str, b))}",
         text.rstrip("\n")],
        {"betti": list(b), "valid": report.ok, "document": text},
    )
    if not report.ok:
        rep.fail(EXIT_INVARIANT)
    return rep


def _regular_action(ws: fmt.Workspace, name: str):
    a = ws.action(name)
    _require(validate_corners(a.space), f"space of action {name!r}")
    _require(validate_action(a), f"action {name!r}")
    try:
        return regularize(a)
    except (NotRegularError, RegularizationError) as exc:
        raise CommandError(EXIT_INVARIANT, "invariant", str(exc)) from None


def cmd_quotient(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"actions": {}})
    docs = fmt.Document()
    for name in _pick(ws, args.names, fmt.ActionRecord):
        reg = _regular_action(ws, name)
        _, _, orb = orbit_type_strata(reg.action)
        up, down = f"{name}.space", f"{name}.orbits"
        p = orb.as_corners()
        valid = validate_corners(p).ok
        rec = fmt.manifold_record(down, p) if valid else fmt.complex_record(down, orb.complex)
        docs = docs + fmt.Document(
            (
                fmt.manifold_record(up, reg.action.space),
                rec,
                fmt.map_record(f"{name}.quotient", orb.quotient, up, down),
            )
        )
        b = simplicial_homology(orb.complex).betti
        rep.lines.append(
            f"# {name}: {reg.steps} subdivisions, orbit space betti {' '.join(map(str, b))}"
        )
        rep.data["actions"][name] = {
            "subdivisions": reg.steps,
            "betti": list(b),
            "orbit_space_is_manifold": valid,
        }
    text = fmt.serialize(docs)
    rep.lines.append(text.rstrip("\n"))
    rep.data["document"] = text
    return rep


def cmd_strata(ws: fmt.Workspace, args) -> Report:
    rep = Report(data={"actions": {}})
    for name in _pick(ws, args.names, fmt.ActionRecord):
        reg = _regular_action(ws, name)
        upstairs, downstairs, orb = orbit_type_strata(reg.action)
        entry = {"subdivisions": reg.steps}
        rep.lines.append(f"action {name}: {reg.steps} subdivisions")
        for side, s in (("space", upstairs), ("orbit space", downstairs)):
            checks = s.validate() + check_frontier(s)
            part = []
            rep.lines.append(f"  {side}:")
            for depth, strata in sorted(s.by_depth().items()):
                rep.lines.append(f"    depth {depth}: {len(strata)} strata")
                for st in strata:
                    rep.lines.append(
                        f"      dim {st.dim} isotropy {list(st.isotropy)} simplices {len(st.simplices)}"
                    )
                part.append(
                    {
                        "depth": depth,
                        "strata": [
                            {"dim": st.dim, "isotropy": list(st.isotropy), "simplices": len(st.simplices)}
                            for st in strata
                        ],
                    }
                )
            rep.lines.append(f"    frontier: {'ok' if checks.ok else 'FAILED'}")
            rep.lines += [f"      {v.code}: {v.detail}" for v in checks.violations]
            entry[side.replace(" ", "_")] = {"by_depth": part, "violations": _violations(checks)}
            if not checks.ok:
                rep.fail(EXIT_INVARIANT)
        desc = check_strata_descend(upstairs, downstairs, orb.quotient)
        rep.lines.append(f"  strata descend: {'ok' if desc.ok else 'FAILED'}")
        entry["descend_ok"] = desc.ok
        if not desc.ok:
            rep.fail(EXIT_INVARIANT)
        rep.data["actions"][name] = entry
    return rep


def cmd_kunneth(ws: fmt.Workspace, args) -> Report:
    x, y = ws.complex(args.left), ws.complex(args.right)
    _require(validate_complex(x), f"complex {args.left!r}")
    _require(validate_complex(y), f"complex {args.right!r}")
    k = kunneth_check(x, y)

    def show(b):
        return " ".join(map(str, b))

    rep = Report(
        [
            f"{args.left}: {show(k.left)}",
            f"{args.right}: {show(k.right)}",
            f"product: {show(k.product)}",
            f"expected: {show(k.expected)}",
            f"kunneth: {'ok' if k.ok else 'FAILED'}",
        ],
        {
            "left": list(k.left),
            "right": list(k.right),
            "product": list(k.product),
            "expected": list(k.expected),
            "ok": k.ok,
        },
    )
    if not k.ok:
        rep.fail(EXIT_INVARIANT)
    return rep


COMMANDS = {
    "validate": cmd_validate,
    "betti": cmd_betti,
    "boundary": cmd_boundary,
    "compare": cmd_compare,
    "product": cmd_product,
    "double": cmd_double,
    "quotient": cmd_quotient,
    "strata": cmd_strata,
    "kunneth": cmd_kunneth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geohom", description="Geometric chains and rational homology of small complexes."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", required=True, metavar="PATH",
                        help="document to load (repeatable)")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--report", choices=("text", "structured"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate every record")
    p = sub.add_parser("betti", parents=[common], help="Betti numbers over Q")
    p.add_argument("names", nargs="*", metavar="COMPLEX")
    for cmd, what in (("boundary", "geometric boundary of chains"),
                      ("compare", "comparison chain and chain-map check")):
        p = sub.add_parser(cmd, parents=[common], help=what)
        p.add_argument("names", nargs="*", metavar="CHAIN")
    p = sub.add_parser("product", parents=[common], help="product of two chains or manifolds")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("double", parents=[common], help="double a manifold along facets")
    p.add_argument("name", metavar="COMPLEX")
    p.add_argument("--facets", nargs="+", metavar="LABEL", help="facets to glue along (default all)")
    for cmd, what in (("quotient", "orbit space of an action"),
                      ("strata", "orbit-type strata and frontier check")):
        p = sub.add_parser(cmd, parents=[common], help=what)
        p.add_argument("names", nargs="*", metavar="ACTION")
    p = sub.add_parser("kunneth", parents=[common], help="Kunneth check for two complexes")
    p.add_argument("left")
    p.add_argument("right")
    return parser


def _load(paths: Sequence[str]) -> fmt.Document:
    doc = fmt.Document()
    seen: set[str] = set()
    for path in paths:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CommandError(EXIT_PARSE, "io", f"{path}: {exc.strerror}") from None
        try:
            part = fmt.parse(text)
        except fmt.ParseError as exc:
            raise CommandError(EXIT_PARSE, "parse", exc.message, file=path, line=exc.line) from None
        for r in part.records:
            if r.name in seen:
                raise CommandError(EXIT_PARSE, "parse", f"duplicate record name {r.name!r}", file=path)
            seen.add(r.name)
        doc = doc + part
    return doc


def _render(rep: Report, mode: str) -> str:
    if mode == "structured":
        return json.dumps({"status": rep.status, **rep.data}, indent=2, sort_keys=True) + "\n"
    return "\n".join(rep.lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ws = fmt.Workspace(_load(args.input))
        try:
            rep = COMMANDS[args.command](ws, args)
        except fmt.ResolveError as exc:
            raise CommandError(EXIT_PARSE, "reference", exc.message) from None
        except fmt.BuildError as exc:
            extra = {"violations": _violations(exc.report)} if exc.report else {}
            raise CommandError(EXIT_INVALID, "validation", str(exc), **extra) from None
    except CommandError as exc:
        record = {"error": exc.kind, "message": str(exc), "status": exc.status, **exc.extra}
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return exc.status
    out = _render(rep, args.report)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    if rep.status:
        sys.stderr.write(
            json.dumps({"error": "validation" if rep.status == EXIT_INVALID else "invariant",
                        "message": f"{args.command} reported failures", "status": rep.status},
                       sort_keys=True) + "\n"
        )
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
