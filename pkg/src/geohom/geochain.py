"""Geometric chains: rational combinations of maps from oriented manifolds with corners.

A term is a source (a manifold with corners, or its quotient by a finite
orientation-preserving action) together with a simplicial map into the
target.  Terms are stored in canonical form, so isomorphic sources are
identified, and a term whose source has the opposite orientation is the
negative of the original.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .canon import Decorated, canonical_form
from .corners import (
    CornersManifold,
    boundary_components,
    product_corners,
    subdivide,
    validate_corners,
)
from .quotient import CornersAction, FiniteGroup, facet_action, validate_action
from .simplicial import (
    SimplicialComplex,
    SimplicialMap,
    ShuffleProduct,
    ValidationReport,
    Violation,
    shuffle_product,
    sort_with_sign,
)

__all__ = [
    "GeometricSource",
    "GeometricTerm",
    "GeometricChain",
    "normalize",
    "add",
    "boundary",
    "product",
    "pullback",
    "pushforward",
    "fundamental_chain",
    "term_chain",
    "product_target",
    "subdivide_term",
]


@dataclass(frozen=True, eq=False)
class GeometricSource:
    manifold: CornersManifold
    action: Optional[CornersAction] = None
    certificate: Optional[tuple] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.manifold.dim

    @property
    def is_quotient(self) -> bool:
        return self.action is not None


@dataclass(frozen=True, eq=False)
class GeometricTerm:
    source: GeometricSource
    map: SimplicialMap

    def __post_init__(self) -> None:
        if self.map.source is not self.source.manifold.complex and (
            self.map.source != self.source.manifold.complex
        ):
            raise ValueError("map must start at the source complex")

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def target(self) -> SimplicialComplex:
        return self.map.target

    @classmethod
    def of(
        cls, manifold: CornersManifold, f: SimplicialMap, action: Optional[CornersAction] = None
    ) -> "GeometricTerm":
        return cls(GeometricSource(manifold, action), f)

    def validate(self) -> ValidationReport:
        report = validate_corners(self.source.manifold) + self.map.validate()
        a = self.source.action
        if a is not None:
            report = report + validate_action(a)
            if report.ok:
                bad = [
                    v
                    for g in range(a.group.order)
                    for v in range(len(a.perms[g]))
                    if self.map.images[a.perms[g][v]] != self.map.images[v]
                ]
                if bad:
                    report = report + ValidationReport(
                        (Violation("map-not-invariant", "map is not constant on orbits", (bad[0],)),)
                    )
        return report


def normalize(t: GeometricTerm) -> tuple[GeometricTerm, int]:
    """Canonical representative of ``t`` and the sign relating them.

    The sign is -1 when the canonical source carries the opposite orientation,
    and 0 when the source admits an orientation-reversing automorphism over the
    map (the term then equals its own negative).
    """
    if t.source.certificate is not None:
        return t, 1
    m = t.source.manifold
    a = t.source.action
    if a is not None and a.group.order == 1:
        a = None
    kind = "Q" if a is not None else "M"
    labels = m.facet_labels()
    obj = Decorated(
        colors=t.map.images,
        tops=tuple(m.tops()),
        orientation=m.orientation,
        facets=tuple(m.facets[lab] for lab in labels),
        perms=a.perms if a is not None else (),
    )
    form = canonical_form(obj)
    if form.sign == 0:
        return t, 0
    order = form.order
    rank = {old: new for new, old in enumerate(order)}
    n = len(order)
    tops = {}
    for tp in m.tops():
        img, s = sort_with_sign([rank[v] for v in tp])
        tops[img] = s * m.orientation[tp] * form.sign
    cx = SimplicialComplex.from_index_simplices(tuple(range(n)), tops)
    groups = sorted(
        tuple(sorted(tuple(sorted(rank[v] for v in s)) for s in m.facets[lab])) for lab in labels
    )
    facets = {i: frozenset(g) for i, g in enumerate(groups)}
    cm = CornersManifold(cx, tops, facets)
    action = None
    if a is not None:
        perms = sorted(tuple(rank[p[order[i]]] for i in range(n)) for p in a.perms)
        index = {p: i for i, p in enumerate(perms)}
        table = tuple(tuple(index[tuple(p[x] for x in q)] for q in perms) for p in perms)
        action = CornersAction(FiniteGroup(len(perms), table, 0), cm, tuple(perms))
    cert = (kind, m.dim) + form.certificate
    source = GeometricSource(cm, action, cert)
    f = SimplicialMap(cx, t.map.target, tuple(t.map.images[order[i]] for i in range(n)))
    return GeometricTerm(source, f), form.sign


@dataclass(frozen=True, eq=False)
class GeometricChain:
    target: SimplicialComplex
    dim: int
    terms: Mapping[tuple, tuple[GeometricTerm, Fraction]] = field(default_factory=dict)

    @classmethod
    def zero(cls, target: SimplicialComplex, dim: int) -> "GeometricChain":
        return cls(target, dim, {})

    @classmethod
    def from_terms(
        cls,
        target: SimplicialComplex,
        dim: int,
        terms: Iterable[tuple[object, GeometricTerm]],
    ) -> "GeometricChain":
        acc: dict[tuple, list] = {}
        for coef, term in terms:
            coef = Fraction(coef)
            if not coef:
                continue
            if term.dim != dim:
                raise ValueError(f"term of dimension {term.dim} in a {dim}-chain")
            if term.target is not target and term.target != target:
                raise ValueError("term maps into a different target")
            canon, sign = normalize(term)
            if sign == 0:
                continue
            key = canon.source.certificate
            if key in acc:
                acc[key][1] += sign * coef
            else:
                acc[key] = [canon, sign * coef]
        return cls(target, dim, {k: (t, c) for k, (t, c) in acc.items() if c})

    def items(self) -> list[tuple[Fraction, GeometricTerm]]:
        return [(c, t) for _, (t, c) in sorted(self.terms.items(), key=lambda kv: kv[0])]

    def is_empty(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "GeometricChain") -> None:
        if other.dim != self.dim:
            raise ValueError(f"cannot add chains of dimensions {self.dim} and {other.dim}")
        if other.target is not self.target and other.target != self.target:
            raise ValueError("chains map into different targets")

    def __add__(self, other: "GeometricChain") -> "GeometricChain":
        self._check(other)
        acc = {k: list(v) for k, v in self.terms.items()}
        for k, (t, c) in other.terms.items():
            if k in acc:
                acc[k][1] += c
            else:
                acc[k] = [t, c]
        return GeometricChain(self.target, self.dim, {k: (t, c) for k, (t, c) in acc.items() if c})

    def __neg__(self) -> "GeometricChain":
        return Fraction(-1) * self

    def __sub__(self, other: "GeometricChain") -> "GeometricChain":
        return self + (-other)

    def __rmul__(self, a) -> "GeometricChain":
        a = Fraction(a)
        if not a:
            return GeometricChain.zero(self.target, self.dim)
        return GeometricChain(self.target, self.dim, {k: (t, a * c) for k, (t, c) in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeometricChain):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.target == other.target
            and {k: c for k, (_, c) in self.terms.items()}
            == {k: c for k, (_, c) in other.terms.items()}
        )

    def __repr__(self) -> str:
        return f"GeometricChain(dim={self.dim}, terms={len(self.terms)})"


def term_chain(term: GeometricTerm, coef=1) -> GeometricChain:
    return GeometricChain.from_terms(term.target, term.dim, [(coef, term)])


def fundamental_chain(p: CornersManifold) -> GeometricChain:
    """The identity map of ``p`` into its own complex."""
    return term_chain(GeometricTerm.of(p, SimplicialMap.identity(p.complex)))


def add(c1: GeometricChain, c2: GeometricChain) -> GeometricChain:
    return c1 + c2


def _term_boundary(term: GeometricTerm) -> list[tuple[int, GeometricTerm]]:
    src = term.source
    f = term.map
    if src.action is None:
        return [
            (1, GeometricTerm.of(fm, incl.compose(f))) for fm, incl in boundary_components(src.manifold)
        ]
    a = src.action
    out = []
    done = set()
    for lab in src.manifold.facet_labels():
        if lab in done:
            continue
        done |= {a.facet_permutation(g)[lab] for g in range(a.group.order)}
        sub, incl = facet_action(a, lab)
        fm = sub.space
        out.append((1, GeometricTerm.of(fm, incl.compose(f), sub if sub.group.order > 1 else None)))
    return out


def boundary(c: GeometricChain) -> GeometricChain:
    """Sum over terms of the codimension-one faces of the source, each restricted."""
    if c.dim < 1:
        raise ValueError("boundary is defined for chains of dimension at least 1")
    terms = []
    for coef, term in c.items():
        terms.extend((coef * s, bt) for s, bt in _term_boundary(term))
    return GeometricChain.from_terms(c.target, c.dim - 1, terms)


@lru_cache(maxsize=64)
def _product_cached(x: SimplicialComplex, y: SimplicialComplex) -> ShuffleProduct:
    return shuffle_product(x, y)


def product_target(x: SimplicialComplex, y: SimplicialComplex) -> ShuffleProduct:
    """Shuffle product of two targets, memoized so chains share one target object."""
    return _product_cached(x, y)


def _term_product(a: GeometricTerm, b: GeometricTerm, target: SimplicialComplex) -> GeometricTerm:
    if a.source.action is not None or b.source.action is not None:
        raise ValueError("products are defined for manifold sources only")
    pm = product_corners(a.source.manifold, b.source.manifold)
    nb = len(b.source.manifold.complex.vertices)
    ny = len(b.target.vertices)
    images = tuple(
        a.map.images[i // nb] * ny + b.map.images[i % nb]
        for i in range(len(pm.complex.vertices))
    )
    return GeometricTerm.of(pm, SimplicialMap(pm.complex, target, images))


def product(cx: GeometricChain, cy: GeometricChain) -> GeometricChain:
    """Bilinear product into the shuffle-triangulated product of the targets.

    Canonical sources are ordered compatibly with their maps, so the product
    of the maps is simplicial on the staircase triangulation.
    """
    target = product_target(cx.target, cy.target).complex
    terms = [
        (ca * cb, _term_product(ta, tb, target))
        for ca, ta in cx.items()
        for cb, tb in cy.items()
    ]
    return GeometricChain.from_terms(target, cx.dim + cy.dim, terms)


def pullback(fiber: CornersManifold, c: GeometricChain) -> GeometricChain:
    """Pull ``c`` back along the projection X x F -> X: each (P, f) becomes (P x F, f x id)."""
    return product(c, fundamental_chain(fiber))


def pushforward(c: GeometricChain, g: SimplicialMap) -> GeometricChain:
    if g.source is not c.target and g.source != c.target:
        raise ValueError("map does not start at the chain's target")
    return GeometricChain.from_terms(
        g.target,
        c.dim,
        [
            (coef, GeometricTerm.of(t.source.manifold, t.map.compose(g), t.source.action))
            for coef, t in c.items()
        ],
    )


def subdivide_term(t: GeometricTerm, pick=min) -> GeometricTerm:
    """Same map on the barycentric subdivision of a manifold source.

    Each new vertex goes to ``pick`` of the target vertices hit by the simplex
    it subdivides.  Any choice among those vertices is a simplicial
    approximation of the original map; the default takes the least one.
    """
    if t.source.action is not None:
        raise ValueError("subdivide quotient sources through regularize")
    sub = subdivide(t.source.manifold)
    images = tuple(
        pick([t.map.images[v] for v in sub.carrier[i]]) for i in range(len(sub.carrier))
    )
    return GeometricTerm.of(sub.manifold, SimplicialMap(sub.manifold.complex, t.target, images))


def relabel_target(c: GeometricChain, target: SimplicialComplex) -> GeometricChain:
    """Same chain seen in an equal target object."""
    if target != c.target:
        raise ValueError("targets differ")
    return pushforward(c, SimplicialMap(c.target, target, tuple(range(len(target.vertices)))))
