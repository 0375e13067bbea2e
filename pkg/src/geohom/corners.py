"""Combinatorial manifolds with corners.

A :class:`CornersManifold` is a pure simplicial complex with a sign on every
top simplex and a labelled partition of its boundary (d-1)-simplices into
facets.  The corner structure is input data: the depth of a face is the
number of distinct facet labels whose closure contains it, which plays the
role of the number of vanishing coordinates in the local model.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional

from .simplicial import (
    Simplex,
    SimplicialComplex,
    SimplicialMap,
    ValidationReport,
    Violation,
    barycentric_subdivision,
    connected_components,
    faces_of,
    flag_sign,
    shuffle_product,
    validate_complex,
)

__all__ = [
    "CornersManifold",
    "CornerFaceRecord",
    "coherent_orientation",
    "simplex_manifold",
    "validate_corners",
    "bord",
    "boundary_components",
    "subdivide",
    "double",
    "product_corners",
]


def _label_key(label: Hashable):
    return repr(label)


@dataclass(frozen=True, eq=False)
class CornersManifold:
    complex: SimplicialComplex
    orientation: Mapping[Simplex, int]
    facets: Mapping[Hashable, frozenset] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.complex.dim

    def tops(self) -> list[Simplex]:
        return self.complex.simplices_of_dim(self.dim)

    def facet_labels(self) -> list[Hashable]:
        return sorted(self.facets, key=_label_key)

    def boundary_simplices(self) -> set[Simplex]:
        if self.dim < 1:
            return set()
        count: dict[Simplex, int] = {}
        for t in self.tops():
            for _, f in faces_of(t):
                count[f] = count.get(f, 0) + 1
        return {f for f, n in count.items() if n == 1}

    def facet_closures(self) -> dict[Hashable, set[Simplex]]:
        out = {}
        for label, group in self.facets.items():
            faces: set[Simplex] = set()
            for s in group:
                _close_into(s, faces)
            out[label] = faces
        return out

    def depths(self) -> dict[Simplex, int]:
        closures = self.facet_closures()
        return {
            s: sum(1 for faces in closures.values() if s in faces)
            for s in self.complex.all_simplices()
        }

    def depth(self, face: Simplex) -> int:
        return sum(1 for faces in self.facet_closures().values() if tuple(face) in faces)

    def fundamental_chain(self):
        from .simplicial import SimplexChain

        return SimplexChain(self.complex, dict(self.orientation))

    def reversed(self) -> "CornersManifold":
        return CornersManifold(
            self.complex, {t: -s for t, s in self.orientation.items()}, self.facets
        )

    def validate(self) -> ValidationReport:
        return validate_corners(self)

    def __repr__(self) -> str:
        return f"CornersManifold(dim={self.dim}, {self.complex!r}, facets={len(self.facets)})"


def _close_into(s: Simplex, faces: set) -> None:
    if s in faces:
        return
    faces.add(s)
    if len(s) > 1:
        for _, f in faces_of(s):
            _close_into(f, faces)


@dataclass(frozen=True)
class CornerFaceRecord:
    face: Simplex
    depth: int


def coherent_orientation(c: SimplicialComplex) -> Optional[dict[Simplex, int]]:
    """Signs on top simplices making every interior face cancel, or None.

    The first top simplex of each connected piece gets +1; signs propagate
    across shared codimension-one faces.
    """
    d = c.dim
    tops = c.simplices_of_dim(d)
    if d == 0:
        return {t: 1 for t in tops}
    incid: dict[Simplex, list[tuple[Simplex, int]]] = {}
    for t in tops:
        for i, f in faces_of(t):
            incid.setdefault(f, []).append((t, (-1) ** i))
    signs: dict[Simplex, int] = {}
    for start in tops:
        if start in signs:
            continue
        signs[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for i, f in faces_of(t):
                nbrs = incid[f]
                if len(nbrs) != 2:
                    continue
                (u, su), = [(u, su) for u, su in nbrs if u != t]
                want = -signs[t] * (-1) ** i * su
                if u in signs:
                    if signs[u] != want:
                        return None
                else:
                    signs[u] = want
                    queue.append(u)
    return signs


def simplex_manifold(k: int, labels: Optional[Iterable[Hashable]] = None) -> CornersManifold:
    """The standard k-simplex, each codimension-one face its own facet.

    Facets are labelled by the tuple of vertex labels of the face.
    """
    labels = list(range(k + 1)) if labels is None else list(labels)
    c = SimplicialComplex.from_simplices([labels], vertices=labels)
    top = tuple(range(k + 1))
    facets = {} if k == 0 else {c.labels(f): frozenset([f]) for _, f in faces_of(top)}
    return CornersManifold(c, {top: 1}, facets)


def closed_manifold(c: SimplicialComplex) -> CornersManifold:
    signs = coherent_orientation(c)
    if signs is None:
        raise ValueError("complex is not orientable")
    return CornersManifold(c, signs, {})


def manifold_from_complex(
    c: SimplicialComplex, facets: Optional[Mapping[Hashable, Iterable]] = None
) -> CornersManifold:
    """Orient ``c`` coherently; facets given by labels of vertex-label tuples.

    Without ``facets`` each connected component of the boundary becomes one facet.
    """
    signs = coherent_orientation(c)
    if signs is None:
        raise ValueError("complex is not orientable")
    if facets is None:
        bd = CornersManifold(c, signs, {}).boundary_simplices()
        groups = {}
        if bd:
            for i, comp in enumerate(connected_components(c.subcomplex(bd))):
                groups[f"b{i}"] = frozenset(
                    c.simplex(comp.labels(s)) for s in comp.simplices_of_dim(c.dim - 1)
                )
        return CornersManifold(c, signs, groups)
    return CornersManifold(
        c,
        signs,
        {lab: frozenset(c.simplex(f) for f in faces) for lab, faces in facets.items()},
    )


def validate_corners(p: CornersManifold) -> ValidationReport:
    report = validate_complex(p.complex)
    if not report.ok:
        return report
    out: list[Violation] = []
    c = p.complex
    d = c.dim
    if d < 0:
        return ValidationReport((Violation("empty", "manifold has no simplices"),))
    if not c.is_pure():
        out.append(Violation("not-pure", f"complex is not pure of dimension {d}"))
    tops = set(c.simplices_of_dim(d))
    if set(p.orientation) != tops:
        out.append(Violation("orientation-domain", "orientation must sign exactly the top simplices"))
    if any(v not in (1, -1) for v in p.orientation.values()):
        out.append(Violation("orientation-value", "orientation signs must be +1 or -1"))
    if out:
        return ValidationReport(tuple(out))
    if d == 0:
        if len(c.vertices) != 1:
            out.append(Violation("disconnected", "a 0-dimensional source is a single point"))
        if p.facets:
            out.append(Violation("facet-on-point", "a point has no facets"))
        return ValidationReport(tuple(out))

    incid: dict[Simplex, list[tuple[Simplex, int]]] = {}
    for t in sorted(tops):
        for i, f in faces_of(t):
            incid.setdefault(f, []).append((t, p.orientation[t] * (-1) ** i))
    boundary = set()
    for f, inc in sorted(incid.items()):
        if len(inc) > 2:
            out.append(Violation("branching", f"face {c.labels(f)} lies in {len(inc)} top simplices", (f,)))
        elif len(inc) == 2:
            if inc[0][1] + inc[1][1] != 0:
                out.append(
                    Violation(
                        "orientation-coherence",
                        f"induced orientations disagree across {c.labels(f)}",
                        (f, inc[0][0], inc[1][0]),
                    )
                )
        else:
            boundary.add(f)

    owner: dict[Simplex, Hashable] = {}
    for label in p.facet_labels():
        group = p.facets[label]
        if not group:
            out.append(Violation("empty-facet", f"facet {label!r} is empty", (label,)))
        for s in sorted(group):
            if s not in boundary:
                out.append(Violation("facet-not-boundary", f"facet {label!r} holds non-boundary {s}", (label, s)))
            elif s in owner:
                out.append(Violation("facet-overlap", f"{c.labels(s)} in facets {owner[s]!r} and {label!r}", (s,)))
            else:
                owner[s] = label
    for s in sorted(boundary - set(owner)):
        out.append(Violation("unlabelled-boundary", f"boundary face {c.labels(s)} has no facet", (s,)))
    if len(connected_components(c)) != 1:
        out.append(Violation("disconnected", "complex is not connected"))
    if not out:
        for s, depth in sorted(p.depths().items()):
            if depth > d:
                out.append(Violation("corner-depth", f"{c.labels(s)} lies in {depth} facets", (s,)))
    if out:
        return ValidationReport(tuple(out))

    for label in p.facet_labels():
        fm, _, problems = _facet_manifold(p, label)
        out.extend(problems)
        for v in validate_corners(fm).violations:
            out.append(Violation(v.code, f"in facet {label!r}: {v.detail}", (label,) + v.witness))
    return ValidationReport(tuple(out))


def _facet_manifold(
    p: CornersManifold, label: Hashable
) -> tuple[CornersManifold, SimplicialMap, list[Violation]]:
    """Facet ``label`` as a manifold one dimension down, with inherited facets."""
    c = p.complex
    d = p.dim
    group = sorted(p.facets[label])
    induced: dict[Simplex, int] = {}
    for t in p.tops():
        for i, f in faces_of(t):
            if f in p.facets[label]:
                induced[f] = p.orientation[t] * (-1) ** i
    sub = c.subcomplex(group)
    used = sorted({v for s in group for v in s})
    renum = {v: i for i, v in enumerate(used)}
    incl = SimplicialMap(sub, c, tuple(used))
    orientation = {tuple(renum[v] for v in s): induced[s] for s in group}
    problems: list[Violation] = []
    facets: dict[Hashable, frozenset] = {}
    if d >= 2:
        count: dict[Simplex, int] = {}
        for s in group:
            for _, f in faces_of(s):
                count[f] = count.get(f, 0) + 1
        rim = sorted(f for f, n in count.items() if n == 1)
        closures = p.facet_closures()
        by_label: dict[Hashable, list[Simplex]] = {}
        for f in rim:
            owners = [g for g in p.facet_labels() if g != label and f in closures[g]]
            if len(owners) == 1:
                by_label.setdefault(owners[0], []).append(f)
            elif len(owners) > 1:
                problems.append(
                    Violation("corner-overlap", f"{c.labels(f)} lies in facets {owners!r}", (f,))
                )
        for g in sorted(by_label, key=_label_key):
            faces = by_label[g]
            local = [tuple(renum[v] for v in f) for f in faces]
            comps = connected_components(sub.subcomplex(local))
            if len(comps) == 1:
                facets[g] = frozenset(local)
            else:
                for j, comp in enumerate(comps):
                    facets[(g, j)] = frozenset(
                        sub.simplex(comp.labels(s)) for s in comp.simplices_of_dim(d - 2)
                    )
    return CornersManifold(sub, orientation, facets), incl, problems


def boundary_components(p: CornersManifold) -> list[tuple[CornersManifold, SimplicialMap]]:
    """Each facet as a (d-1)-manifold with the induced orientation and its inclusion.

    The induced orientation of a boundary face ``t - t[i]`` of a top simplex ``t``
    is ``orientation[t] * (-1)**i``; for an interval this is ``[v1] - [v0]``.
    """
    if p.dim < 1:
        raise ValueError("a point has no boundary")
    out = []
    for label in p.facet_labels():
        fm, incl, _ = _facet_manifold(p, label)
        out.append((fm, incl))
    return out


def bord(p: CornersManifold, k: int) -> list[list[CornerFaceRecord]]:
    """Faces of depth exactly ``k`` grouped into connected components."""
    if k < 0 or k > p.dim:
        raise ValueError(f"corner depth {k} outside 0..{p.dim}")
    depths = p.depths()
    members = sorted((s for s, dep in depths.items() if dep == k), key=lambda s: (len(s), s))
    return [
        [CornerFaceRecord(s, k) for s in comp]
        for comp in open_components(members)
    ]


def open_components(members: Iterable[Simplex]) -> list[list[Simplex]]:
    """Connected components of a union of open simplices (adjacent = face relation)."""
    members = sorted(set(members), key=lambda s: (len(s), s))
    mset = set(members)
    parent = {s: s for s in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in members:
        if len(s) > 1:
            for _, f in faces_of(s):
                if f in mset:
                    a, b = find(s), find(f)
                    if a != b:
                        parent[a] = b
    groups: dict = {}
    for s in members:
        groups.setdefault(find(s), []).append(s)
    return sorted(groups.values(), key=lambda g: (len(g[0]), g[0]))


@dataclass(frozen=True)
class Subdivision:
    manifold: CornersManifold
    carrier: Mapping[int, Simplex]

    def vertex_of(self, s: Simplex) -> int:
        return self._inverse[s]

    @property
    def _inverse(self) -> dict[Simplex, int]:
        return {s: i for i, s in self.carrier.items()}


def subdivide(p: CornersManifold) -> Subdivision:
    """First barycentric subdivision with orientation and facets carried along."""
    sd, carrier = barycentric_subdivision(p.complex)
    d = p.dim
    orientation = {}
    for t in sd.simplices_of_dim(d):
        flag = [carrier[v] for v in t]
        orientation[t] = p.orientation[flag[-1]] * flag_sign(flag)
    facets = {}
    if d >= 1:
        for label, group in p.facets.items():
            facets[label] = frozenset(
                s for s in sd.simplices_of_dim(d - 1) if carrier[s[-1]] in group
            )
    return Subdivision(CornersManifold(sd, orientation, facets), carrier)


def double(
    p: CornersManifold, facet_labels: Iterable[Hashable]
) -> tuple[CornersManifold, SimplicialMap]:
    """Glue two copies of the subdivided manifold along the chosen facets.

    The second copy carries the reversed orientation.  Vertices on the glued
    facets keep their subdivision label; the others become ``(label, 0)`` and
    ``(label, 1)``.  An unselected facet whose two copies meet along the
    glued part becomes one facet under its old label (the mirror halves form a
    single hypersurface); otherwise it is duplicated as ``(label, 0)`` and
    ``(label, 1)``.  Returns the doubled manifold and the swap involution.
    """
    chosen = set(facet_labels)
    if not chosen:
        raise ValueError("doubling along no facets is the identity; pick at least one facet")
    unknown = chosen - set(p.facets)
    if unknown:
        raise ValueError(f"unknown facet labels {sorted(map(repr, unknown))}")
    sub = subdivide(p).manifold
    sd = sub.complex
    d = p.dim
    glued_faces: set[Simplex] = set()
    for lab in chosen:
        for s in sub.facets[lab]:
            _close_into(s, glued_faces)
    glued = {s[0] for s in glued_faces if len(s) == 1}
    labels: list = []
    where: list[tuple[int, int]] = []
    for v, lab in enumerate(sd.vertices):
        if v in glued:
            where.append((len(labels), len(labels)))
            labels.append(lab)
        else:
            where.append((len(labels), len(labels) + 1))
            labels.extend([(lab, 0), (lab, 1)])

    def copy(s: Simplex, side: int) -> Simplex:
        return tuple(where[v][side] for v in s)

    tops = []
    orientation = {}
    for t in sd.simplices_of_dim(d):
        for side, sign in ((0, 1), (1, -1)):
            ct = copy(t, side)
            tops.append(ct)
            orientation[ct] = sign * sub.orientation[t]
    out = SimplicialComplex.from_index_simplices(labels, tops)
    facets = {}
    for lab in p.facets:
        if lab in chosen:
            continue
        halves = [frozenset(copy(s, side) for s in sub.facets[lab]) for side in (0, 1)]
        if any(v in glued for s in sub.facets[lab] for v in s):
            facets[lab] = halves[0] | halves[1]
        else:
            facets[(lab, 0)], facets[(lab, 1)] = halves
    images = list(range(len(labels)))
    for a, b in where:
        images[a], images[b] = b, a
    manifold = CornersManifold(out, orientation, facets)
    return manifold, SimplicialMap(out, out, tuple(images))


def product_corners(p: CornersManifold, q: CornersManifold) -> CornersManifold:
    """Shuffle-triangulated product with product orientation and facets.

    Facets are ``("L", a)`` for each facet ``a`` of ``p`` (times all of ``q``) and
    ``("R", b)`` for each facet ``b`` of ``q``.
    """
    sp = shuffle_product(p.complex, q.complex)
    orientation = {}
    for a in p.tops():
        for b in q.tops():
            for s, sign in sp.signs[(a, b)]:
                orientation[s] = sign * p.orientation[a] * q.orientation[b]
    facets = {}
    for lab, group in p.facets.items():
        facets[("L", lab)] = frozenset(
            s for a in group for b in q.tops() for s, _ in sp.signs[(a, b)]
        )
    for lab, group in q.facets.items():
        facets[("R", lab)] = frozenset(
            s for a in p.tops() for b in group for s, _ in sp.signs[(a, b)]
        )
    return CornersManifold(sp.complex, orientation, facets)
