"""Line-based text documents for complexes, maps, groups, actions and chains.

Each record opens with a header line and closes with ``end``.  Tokens are
separated by whitespace and ``#`` starts a comment.  Vertex and facet labels are
opaque tokens; after parsing they are plain strings.  See docs/FORMAT.md.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Optional, Union

from .corners import CornersManifold
from .geochain import GeometricChain, GeometricTerm
from .quotient import CornersAction, FiniteGroup
from .simplicial import SimplicialComplex, SimplicialMap, ValidationReport, sort_with_sign

__all__ = [
    "ParseError",
    "ComplexRecord",
    "MapRecord",
    "GroupRecord",
    "ActionRecord",
    "ChainRecord",
    "Document",
    "parse",
    "serialize",
    "token",
    "Workspace",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class ComplexRecord:
    name: str
    dim: int
    vertices: tuple[str, ...]
    simplices: tuple[tuple[int, tuple[str, ...]], ...]  # (sign, vertices) of maximal simplices
    faces: tuple[tuple[str, tuple[str, ...]], ...] = ()
    corners: bool = False


@dataclass(frozen=True)
class MapRecord:
    name: str
    source: str
    target: str
    send: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class GroupRecord:
    name: str
    order: int
    rows: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ActionRecord:
    name: str
    group: str
    complex: str
    elements: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class ChainRecord:
    name: str
    target: str
    dim: int
    terms: tuple[tuple[Fraction, str, str, Optional[str]], ...]


Record = Union[ComplexRecord, MapRecord, GroupRecord, ActionRecord, ChainRecord]


@dataclass(frozen=True)
class Document:
    records: tuple[Record, ...] = ()

    def names(self) -> dict[str, Record]:
        return {r.name: r for r in self.records}

    def __add__(self, other: "Document") -> "Document":
        return Document(self.records + other.records)


def token(label: Hashable) -> str:
    """Render a label as a whitespace-free token; tuples become ``(a,b)``."""
    if isinstance(label, tuple):
        return "(" + ",".join(token(x) for x in label) + ")"
    text = str(label)
    if not text or any(ch.isspace() for ch in text) or "#" in text:
        raise ValueError(f"label {label!r} cannot be written as a token")
    return text


# -- parsing ---------------------------------------------------------------

_HEADERS = {"complex": (3, 4), "map": (4, 4), "group": (3, 3), "action": (4, 4), "chain": (4, 4)}


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line) from None


def _coef(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {tok!r}", line) from None


def parse(text: str) -> Document:
    records: list[Record] = []
    seen: set[str] = set()
    header = None
    body: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if header is None:
            kind = toks[0]
            if kind not in _HEADERS:
                raise ParseError(f"unknown record type {kind!r}", lineno)
            lo, hi = _HEADERS[kind]
            if not lo <= len(toks) <= hi:
                raise ParseError(f"malformed {kind} header", lineno)
            if toks[1] in seen:
                raise ParseError(f"duplicate record name {toks[1]!r}", lineno)
            seen.add(toks[1])
            header, body = (lineno, toks), []
        elif toks == ["end"]:
            records.append(_build(header[0], header[1], body))
            header = None
        else:
            body.append((lineno, toks))
    if header is not None:
        raise ParseError(f"record {header[1][1]!r} is missing 'end'", header[0])
    return Document(tuple(records))


def _build(lineno: int, head: list[str], body: list[tuple[int, list[str]]]) -> Record:
    kind, name = head[0], head[1]

    def expect(allowed: set[str]) -> None:
        for ln, toks in body:
            if toks[0] not in allowed:
                raise ParseError(f"unexpected {toks[0]!r} in {kind} record", ln)

    if kind == "complex":
        expect({"vertices", "simplex", "face"})
        if len(head) == 4 and head[3] != "corners":
            raise ParseError(f"unknown complex flag {head[3]!r}", lineno)
        dim = _int(head[2], lineno, "dimension")
        vlines = [t for _, t in body if t[0] == "vertices"]
        if len(vlines) != 1:
            raise ParseError("complex needs exactly one 'vertices' line", lineno)
        simplices, faces = [], []
        for ln, toks in body:
            if toks[0] == "simplex":
                if len(toks) < 3 or toks[1] not in ("+", "-"):
                    raise ParseError("simplex line is 'simplex +|- v...'", ln)
                simplices.append((1 if toks[1] == "+" else -1, tuple(toks[2:])))
            elif toks[0] == "face":
                if len(toks) < 3:
                    raise ParseError("face line is 'face LABEL v...'", ln)
                faces.append((toks[1], tuple(toks[2:])))
        return ComplexRecord(
            name, dim, tuple(vlines[0][1:]), tuple(simplices), tuple(faces), len(head) == 4
        )
    if kind == "map":
        expect({"send"})
        pairs = []
        for ln, toks in body:
            if len(toks) != 3:
                raise ParseError("send line is 'send v w'", ln)
            pairs.append((toks[1], toks[2]))
        return MapRecord(name, head[2], head[3], tuple(pairs))
    if kind == "group":
        expect({"row"})
        rows = tuple(
            tuple(_int(t, ln, "table entry") for t in toks[1:]) for ln, toks in body
        )
        return GroupRecord(name, _int(head[2], lineno, "order"), rows)
    if kind == "action":
        expect({"element"})
        return ActionRecord(name, head[2], head[3], tuple(tuple(t[1:]) for _, t in body))
    expect({"term"})
    terms = []
    for ln, toks in body:
        if len(toks) not in (4, 5):
            raise ParseError("term line is 'term COEF SOURCE MAP [ACTION]'", ln)
        terms.append((_coef(toks[1], ln), toks[2], toks[3], toks[4] if len(toks) == 5 else None))
    return ChainRecord(name, head[2], _int(head[3], lineno, "dimension"), tuple(terms))


# -- serialization ---------------------------------------------------------


def _record_lines(r: Record) -> list[str]:
    if isinstance(r, ComplexRecord):
        out = [f"complex {r.name} {r.dim}" + (" corners" if r.corners else "")]
        out.append(" ".join(["vertices", *r.vertices]))
        for sign, s in r.simplices:
            out.append(" ".join(["simplex", "+" if sign > 0 else "-", *s]))
        for lab, s in r.faces:
            out.append(" ".join(["face", lab, *s]))
    elif isinstance(r, MapRecord):
        out = [f"map {r.name} {r.source} {r.target}"]
        out += [f"send {v} {w}" for v, w in r.send]
    elif isinstance(r, GroupRecord):
        out = [f"group {r.name} {r.order}"]
        out += [" ".join(["row", *map(str, row)]) for row in r.rows]
    elif isinstance(r, ActionRecord):
        out = [f"action {r.name} {r.group} {r.complex}"]
        out += [" ".join(["element", *e]) for e in r.elements]
    else:
        out = [f"chain {r.name} {r.target} {r.dim}"]
        for coef, src, mp, act in r.terms:
            out.append(" ".join(["term", str(coef), src, mp] + ([act] if act else [])))
    return out + ["end"]


def serialize(doc: Document) -> str:
    blocks = ["\n".join(_record_lines(r)) for r in doc.records]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# -- conversion between records and objects --------------------------------


def complex_record(name: str, c: SimplicialComplex) -> ComplexRecord:
    verts = tuple(token(v) for v in c.vertices)
    tops = sorted(c.maximal_simplices())
    return ComplexRecord(
        name, c.dim, verts, tuple((1, tuple(verts[i] for i in s)) for s in tops)
    )


def manifold_record(name: str, p: CornersManifold) -> ComplexRecord:
    c = p.complex
    verts = tuple(token(v) for v in c.vertices)
    simplices = tuple(
        (p.orientation[t], tuple(verts[i] for i in t)) for t in sorted(p.tops())
    )
    faces = tuple(
        (token(lab), tuple(verts[i] for i in s))
        for lab in p.facet_labels()
        for s in sorted(p.facets[lab])
    )
    return ComplexRecord(name, c.dim, verts, simplices, faces, True)


def map_record(name: str, f: SimplicialMap, source: str, target: str) -> MapRecord:
    return MapRecord(
        name,
        source,
        target,
        tuple(
            (token(v), token(f.target.vertices[f.images[i]]))
            for i, v in enumerate(f.source.vertices)
        ),
    )


def group_record(name: str, g: FiniteGroup) -> GroupRecord:
    if g.identity != 0:
        raise ValueError("documents store groups with identity 0")
    return GroupRecord(name, g.order, g.table)


def action_record(name: str, a: CornersAction, group: str, space: str) -> ActionRecord:
    verts = [token(v) for v in a.space.complex.vertices]
    return ActionRecord(
        name, group, space, tuple(tuple(verts[x] for x in p) for p in a.perms)
    )


def chain_document(name: str, c: GeometricChain, target: str) -> Document:
    """Records for a chain whose target is already named ``target``.

    Each term's source, map and (for quotients) group and action become
    records named ``NAME.tI.src`` and so on.
    """
    records: list[Record] = []
    terms = []
    for i, (coef, term) in enumerate(c.items()):
        base = f"{name}.t{i}"
        src = term.source
        records.append(manifold_record(f"{base}.src", src.manifold))
        records.append(map_record(f"{base}.map", term.map, f"{base}.src", target))
        act = None
        if src.action is not None:
            records.append(group_record(f"{base}.grp", src.action.group))
            act = f"{base}.act"
            records.append(action_record(act, src.action, f"{base}.grp", f"{base}.src"))
        terms.append((coef, f"{base}.src", f"{base}.map", act))
    records.append(ChainRecord(name, target, c.dim, tuple(terms)))
    return Document(tuple(records))


class ResolveError(ParseError):
    """A record refers to something missing or ill-typed."""


class BuildError(ValueError):
    """Record contents are well formed but do not describe a valid object."""

    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        super().__init__(message)
        self.report = report


@dataclass
class Workspace:
    """Lazily built objects for the records of a document."""

    document: Document
    _cache: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.records = self.document.names()

    def record(self, name: str, kind: type) -> Record:
        r = self.records.get(name)
        if r is None:
            raise ResolveError(f"no record named {name!r}")
        if not isinstance(r, kind):
            kinds = kind if isinstance(kind, tuple) else (kind,)
            what = " or ".join(k.__name__[: -len("Record")].lower() for k in kinds)
            raise ResolveError(f"record {name!r} is not a {what}")
        return r

    def names_of(self, kind: type) -> list[str]:
        return [r.name for r in self.document.records if isinstance(r, kind)]

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def complex(self, name: str) -> SimplicialComplex:
        r = self.record(name, ComplexRecord)

        def build():
            if len(set(r.vertices)) != len(r.vertices):
                raise BuildError(f"complex {name!r} repeats a vertex")
            known = set(r.vertices)
            for _, s in r.simplices + r.faces:
                bad = [v for v in s if v not in known]
                if bad:
                    raise BuildError(f"complex {name!r} uses unknown vertex {bad[0]!r}")
            try:
                c = SimplicialComplex.from_simplices([s for _, s in r.simplices], r.vertices)
            except ValueError as exc:
                raise BuildError(f"complex {name!r}: {exc}") from None
            if c.dim != r.dim:
                raise BuildError(f"complex {name!r} declares dimension {r.dim}, has {c.dim}")
            return c

        return self._memo(("complex", name), build)

    def manifold(self, name: str) -> CornersManifold:
        r = self.record(name, ComplexRecord)

        def build():
            c = self.complex(name)
            orientation = {}
            for sign, s in r.simplices:
                key, perm = sort_with_sign([c.index(v) for v in s])
                orientation[key] = sign * perm
            groups: dict[str, set] = {}
            for lab, s in r.faces:
                key, _ = sort_with_sign([c.index(v) for v in s])
                groups.setdefault(lab, set()).add(key)
            return CornersManifold(c, orientation, {k: frozenset(v) for k, v in groups.items()})

        return self._memo(("manifold", name), build)

    def map(self, name: str) -> SimplicialMap:
        r = self.record(name, MapRecord)

        def build():
            src, tgt = self.complex(r.source), self.complex(r.target)
            send = dict(r.send)
            if len(send) != len(r.send):
                raise BuildError(f"map {name!r} sends a vertex twice")
            missing = [v for v in src.vertices if v not in send]
            if missing:
                raise BuildError(f"map {name!r} does not send vertex {missing[0]!r}")
            extra = [v for v in send if v not in set(src.vertices)]
            if extra:
                raise BuildError(f"map {name!r} sends unknown vertex {extra[0]!r}")
            bad = [w for w in send.values() if w not in set(tgt.vertices)]
            if bad:
                raise BuildError(f"map {name!r} hits unknown target vertex {bad[0]!r}")
            return SimplicialMap.from_labels(src, tgt, send)

        return self._memo(("map", name), build)

    def group(self, name: str) -> FiniteGroup:
        r = self.record(name, GroupRecord)

        def build():
            try:
                return FiniteGroup(r.order, r.rows, 0)
            except ValueError as exc:
                raise BuildError(f"group {name!r}: {exc}") from None

        return self._memo(("group", name), build)

    def action(self, name: str) -> CornersAction:
        r = self.record(name, ActionRecord)

        def build():
            g = self.group(r.group)
            p = self.manifold(r.complex)
            c = p.complex
            if len(r.elements) != g.order:
                raise BuildError(f"action {name!r} lists {len(r.elements)} elements for order {g.order}")
            perms = []
            for e in r.elements:
                if len(e) != len(c.vertices):
                    raise BuildError(f"action {name!r} element has the wrong length")
                try:
                    perms.append(tuple(c.index(v) for v in e))
                except KeyError as exc:
                    raise BuildError(f"action {name!r} uses unknown vertex {exc.args[0]!r}") from None
            return CornersAction(g, p, tuple(perms))

        return self._memo(("action", name), build)

    def term(self, source: str, mapname: str, action: Optional[str]) -> GeometricTerm:
        p = self.manifold(source)
        f = self.map(mapname)
        if self.record(mapname, MapRecord).source != source:
            raise ResolveError(f"map {mapname!r} does not start at {source!r}")
        a = None
        if action is not None:
            a = self.action(action)
            if self.record(action, ActionRecord).complex != source:
                raise ResolveError(f"action {action!r} does not act on {source!r}")
        return GeometricTerm.of(p, f, a)

    def chain_terms(self, name: str) -> list[tuple[Fraction, GeometricTerm]]:
        r = self.record(name, ChainRecord)
        out = []
        for coef, src, mp, act in r.terms:
            if self.record(mp, MapRecord).target != r.target:
                raise ResolveError(f"map {mp!r} does not land in {r.target!r}")
            out.append((coef, self.term(src, mp, act)))
        return out

    def chain(self, name: str) -> GeometricChain:
        r = self.record(name, ChainRecord)

        def build():
            terms = self.chain_terms(name)
            for coef, t in terms:
                rep = t.validate()
                if not rep.ok:
                    raise BuildError(f"chain {name!r} has an invalid term", rep)
            try:
                return GeometricChain.from_terms(self.complex(r.target), r.dim, terms)
            except ValueError as exc:
                raise BuildError(f"chain {name!r}: {exc}") from None

        return self._memo(("chain", name), build)


def documents(objects: Iterable[tuple[str, object]]) -> Document:
    """Convenience: records for named complexes or manifolds."""
    records: list[Record] = []
    for name, obj in objects:
        if isinstance(obj, CornersManifold):
            records.append(manifold_record(name, obj))
        else:
            records.append(complex_record(name, obj))
    return Document(tuple(records))
