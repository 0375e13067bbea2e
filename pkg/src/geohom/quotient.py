"""Finite group actions on manifolds with corners, orbit spaces and orbit-type strata."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .corners import CornersManifold, _facet_manifold, _label_key, open_components, subdivide
from .simplicial import (
    Simplex,
    SimplicialComplex,
    SimplicialMap,
    ValidationReport,
    Violation,
    faces_of,
    sort_with_sign,
)

__all__ = [
    "FiniteGroup",
    "CornersAction",
    "NotRegularError",
    "RegularizationError",
    "Regularized",
    "OrbitSpace",
    "Stratum",
    "Stratification",
    "validate_action",
    "is_weakly_regular",
    "is_regular",
    "regularize",
    "orbit_space",
    "orbit_type_strata",
    "check_frontier",
    "check_strata_descend",
    "facet_action",
    "trivial_action",
    "action_from_generator",
]

MAX_SUBDIVISIONS = 2


class NotRegularError(ValueError):
    pass


class RegularizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self) -> None:
        n = self.order
        table = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("multiplication table must be order x order")
        elems = set(range(n))
        if any(set(row) != elems for row in table) or any(
            {table[i][j] for i in range(n)} != elems for j in range(n)
        ):
            raise ValueError("multiplication table is not a Latin square")
        e = self.identity
        if not 0 <= e < n or any(table[e][g] != g or table[g][e] != g for g in range(n)):
            raise ValueError("identity element does not act as identity")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                for c in range(n):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise ValueError(f"associativity fails at ({a}, {b}, {c})")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.cyclic(1)

    @classmethod
    def from_permutations(
        cls, generators: Iterable[Sequence[int]]
    ) -> tuple["FiniteGroup", list[tuple[int, ...]]]:
        """Close permutations under composition; element 0 is the identity.

        Elements are listed in breadth-first order from the generators, so the
        result is deterministic for a given generator sequence.
        """
        gens = [tuple(g) for g in generators]
        n = len(gens[0]) if gens else 0
        ident = tuple(range(n))
        elems = [ident]
        seen = {ident: 0}
        i = 0
        while i < len(elems):
            for g in gens:
                h = tuple(g[x] for x in elems[i])
                if h not in seen:
                    seen[h] = len(elems)
                    elems.append(h)
            i += 1
        table = tuple(
            tuple(seen[tuple(a[x] for x in b)] for b in elems) for a in elems
        )
        return cls(len(elems), table, 0), elems

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def conjugacy_label(self, subgroup: Iterable[int]) -> tuple[int, ...]:
        """Lexicographically least conjugate of ``subgroup``, as a sorted tuple."""
        h = list(subgroup)
        return min(
            tuple(sorted(self.mul(self.mul(g, x), self.inverse(g)) for x in h))
            for g in range(self.order)
        )


@dataclass(frozen=True, eq=False)
class CornersAction:
    """Left action: ``perms[g][v]`` is the image of vertex index ``v`` under ``g``."""

    group: FiniteGroup
    space: CornersManifold
    perms: tuple[tuple[int, ...], ...]

    def act(self, g: int, v: int) -> int:
        return self.perms[g][v]

    def act_simplex(self, g: int, s: Simplex) -> Simplex:
        return tuple(sorted(self.perms[g][v] for v in s))

    def orbit(self, v: int) -> frozenset:
        return frozenset(p[v] for p in self.perms)

    def stabilizer(self, s: Simplex) -> frozenset:
        """Elements mapping ``s`` to itself setwise."""
        s = tuple(s)
        return frozenset(g for g in range(self.group.order) if self.act_simplex(g, s) == s)

    def pointwise_stabilizer(self, s: Simplex) -> frozenset:
        return frozenset(
            g for g in range(self.group.order) if all(self.perms[g][v] == v for v in s)
        )

    def facet_permutation(self, g: int) -> dict[Hashable, Optional[Hashable]]:
        groups = {grp: lab for lab, grp in self.space.facets.items()}
        out = {}
        for lab, grp in self.space.facets.items():
            out[lab] = groups.get(frozenset(self.act_simplex(g, s) for s in grp))
        return out

    def is_free(self) -> bool:
        return all(
            self.perms[g][v] != v
            for g in range(self.group.order)
            if g != self.group.identity
            for v in range(len(self.perms[g]))
        )

    def validate(self) -> ValidationReport:
        return validate_action(self)


def trivial_action(space: CornersManifold) -> CornersAction:
    return CornersAction(FiniteGroup.trivial(), space, (tuple(range(len(space.complex.vertices))),))


def action_from_generator(space: CornersManifold, generator: Mapping) -> CornersAction:
    """Cyclic action generated by a vertex-label permutation."""
    c = space.complex
    gen = tuple(c.index(generator[v]) for v in c.vertices)
    group, perms = FiniteGroup.from_permutations([gen])
    return CornersAction(group, space, tuple(perms))


def validate_action(a: CornersAction) -> ValidationReport:
    out: list[Violation] = []
    c = a.space.complex
    n = len(c.vertices)
    G = a.group
    if len(a.perms) != G.order:
        return ValidationReport((Violation("action-size", "one permutation per group element required"),))
    for g, p in enumerate(a.perms):
        if sorted(p) != list(range(n)):
            out.append(Violation("not-permutation", f"element {g} is not a vertex permutation", (g,)))
    if out:
        return ValidationReport(tuple(out))
    if any(a.perms[G.identity][v] != v for v in range(n)):
        out.append(Violation("identity", "identity element moves a vertex"))
    for g in range(G.order):
        if g != G.identity and a.perms[g] == tuple(range(n)):
            out.append(Violation("not-effective", f"element {g} acts trivially", (g,)))
    for g in range(G.order):
        for h in range(G.order):
            gh = G.mul(g, h)
            if any(a.perms[gh][v] != a.perms[g][a.perms[h][v]] for v in range(n)):
                out.append(Violation("not-homomorphism", f"perm({g}*{h}) != perm({g}) o perm({h})", (g, h)))
    all_s = c.all_simplices()
    for g in range(G.order):
        bad = [s for s in all_s if a.act_simplex(g, s) not in c]
        if bad:
            out.append(Violation("not-simplicial", f"element {g} maps {bad[0]} off the complex", (g, bad[0])))
    if out:
        return ValidationReport(tuple(out))
    depths = a.space.depths()
    for g in range(G.order):
        perm = a.facet_permutation(g)
        for lab, img in sorted(perm.items(), key=lambda kv: _label_key(kv[0])):
            if img is None:
                out.append(Violation("facet-not-preserved", f"element {g} breaks facet {lab!r}", (g, lab)))
        moved = [s for s in all_s if depths[a.act_simplex(g, s)] != depths[s]]
        if moved:
            out.append(Violation("corner-not-preserved", f"element {g} changes the depth of {moved[0]}", (g, moved[0])))
        for t in a.space.tops():
            img, sgn = sort_with_sign([a.perms[g][v] for v in t])
            if sgn * a.space.orientation[t] != a.space.orientation[img]:
                out.append(
                    Violation("orientation-reversing", f"element {g} reverses the orientation at {c.labels(t)}", (g, t))
                )
                break
    return ValidationReport(tuple(out))


def is_weakly_regular(a: CornersAction) -> bool:
    """Every element that fixes a simplex setwise fixes it pointwise."""
    for s in a.space.complex.all_simplices():
        for g in a.stabilizer(s):
            if any(a.perms[g][v] != v for v in s):
                return False
    return True


def is_regular(a: CornersAction) -> bool:
    """Weak regularity, plus: simplices with the same vertex orbits form one orbit.

    Under these conditions the orbit space is a simplicial complex whose
    simplices correspond to orbits of simplices.
    """
    if not is_weakly_regular(a):
        return False
    rep = _orbit_reps(a)
    seen: dict[Simplex, Simplex] = {}
    for s in a.space.complex.all_simplices():
        img = tuple(sorted({rep[v] for v in s}))
        if len(img) != len(s):
            return False
        if img in seen:
            other = seen[img]
            if not any(a.act_simplex(g, other) == s for g in range(a.group.order)):
                return False
        else:
            seen[img] = s
    return True


def _orbit_reps(a: CornersAction) -> list[int]:
    return [min(a.orbit(v)) for v in range(len(a.space.complex.vertices))]


@dataclass(frozen=True)
class Regularized:
    action: CornersAction
    steps: int
    carrier: Mapping[int, Simplex]


def _subdivide_action(a: CornersAction) -> tuple[CornersAction, Mapping[int, Simplex]]:
    sub = subdivide(a.space)
    inverse = {s: i for i, s in sub.carrier.items()}
    perms = tuple(
        tuple(inverse[a.act_simplex(g, sub.carrier[v])] for v in range(len(sub.carrier)))
        for g in range(a.group.order)
    )
    return CornersAction(a.group, sub.manifold, perms), sub.carrier


def regularize(a: CornersAction) -> Regularized:
    """Subdivide (at most twice) until the action is regular.

    ``carrier`` sends each vertex of the result to the simplex of the original
    space whose interior contains it.
    """
    carrier = {v: (v,) for v in range(len(a.space.complex.vertices))}
    for step in range(MAX_SUBDIVISIONS + 1):
        if is_regular(a):
            return Regularized(a, step, carrier)
        if step == MAX_SUBDIVISIONS:
            break
        a, level = _subdivide_action(a)
        carrier = {v: carrier_top(carrier, s) for v, s in level.items()}
    raise RegularizationError(f"action not regular after {MAX_SUBDIVISIONS} subdivisions")


def carrier_top(previous: Mapping[int, Simplex], s: Simplex) -> Simplex:
    """Carrier of the barycentre of ``s``: the union of its vertices' carriers."""
    return tuple(sorted({v for x in s for v in previous[x]}))


@dataclass(frozen=True)
class OrbitSpace:
    action: CornersAction
    complex: SimplicialComplex
    quotient: SimplicialMap
    orientation: Mapping[Simplex, int]
    facets: Mapping[Hashable, frozenset]
    depth: Mapping[Simplex, int]

    def as_corners(self) -> CornersManifold:
        return CornersManifold(self.complex, self.orientation, self.facets)


def orbit_space(a: CornersAction) -> OrbitSpace:
    if not is_regular(a):
        raise NotRegularError("orbit space needs a regular action; call regularize first")
    c = a.space.complex
    rep = _orbit_reps(a)
    reps = sorted(set(rep))
    index = {r: i for i, r in enumerate(reps)}
    q = tuple(index[rep[v]] for v in range(len(c.vertices)))
    tops_src = a.space.tops()
    qtops = {}
    for t in tops_src:
        img, sgn = sort_with_sign([q[v] for v in t])
        qtops.setdefault(img, sgn * a.space.orientation[t])
    qc = SimplicialComplex.from_index_simplices([c.vertices[r] for r in reps], qtops)
    depths = a.space.depths()
    qdepth = {}
    for s in c.all_simplices():
        qdepth.setdefault(tuple(sorted(q[v] for v in s)), depths[s])
    facets: dict[Hashable, frozenset] = {}
    done = set()
    for lab in a.space.facet_labels():
        if lab in done:
            continue
        orbit = {a.facet_permutation(g)[lab] for g in range(a.group.order)}
        done |= orbit
        name = min(orbit, key=_label_key)
        facets[name] = frozenset(
            tuple(sorted(q[v] for v in s)) for l2 in orbit for s in a.space.facets[l2]
        )
    return OrbitSpace(a, qc, SimplicialMap(c, qc, q), qtops, facets, qdepth)


@dataclass(frozen=True)
class Stratum:
    depth: int
    isotropy: tuple[int, ...]
    simplices: frozenset
    dim: int


@dataclass(frozen=True)
class Stratification:
    complex: SimplicialComplex
    strata: tuple[Stratum, ...]

    def by_depth(self) -> dict[int, list[Stratum]]:
        out: dict[int, list[Stratum]] = {}
        for s in self.strata:
            out.setdefault(s.depth, []).append(s)
        return out

    def stratum_of(self) -> dict[Simplex, int]:
        return {s: i for i, st in enumerate(self.strata) for s in st.simplices}

    def validate(self) -> ValidationReport:
        out = []
        counts: dict[Simplex, int] = {}
        for st in self.strata:
            for s in st.simplices:
                counts[s] = counts.get(s, 0) + 1
            if len(open_components(st.simplices)) != 1:
                out.append(Violation("stratum-disconnected", f"stratum of dim {st.dim} is disconnected"))
        for s in self.complex.all_simplices():
            n = counts.get(s, 0)
            if n != 1:
                code = "stratum-gap" if n == 0 else "stratum-overlap"
                out.append(Violation(code, f"{self.complex.labels(s)} lies in {n} strata", (s,)))
        return ValidationReport(tuple(out))


def _stratify(
    c: SimplicialComplex, kind: Mapping[Simplex, tuple[int, tuple[int, ...]]]
) -> Stratification:
    groups: dict[tuple, list[Simplex]] = {}
    for s in c.all_simplices():
        groups.setdefault(kind[s], []).append(s)
    strata = []
    for (depth, iso) in sorted(groups):
        for comp in open_components(groups[(depth, iso)]):
            strata.append(Stratum(depth, iso, frozenset(comp), max(len(s) for s in comp) - 1))
    return Stratification(c, tuple(strata))


def orbit_type_strata(a: CornersAction) -> tuple[Stratification, Stratification, OrbitSpace]:
    """Orbit-type strata per corner depth on the space and on its orbit space.

    Simplices are grouped by (corner depth, conjugacy class of stabilizer) and
    split into connected components.  On the orbit space a simplex inherits the
    type of its preimages.
    """
    if not is_regular(a):
        raise NotRegularError("orbit-type strata need a regular action; call regularize first")
    c = a.space.complex
    depths = a.space.depths()
    kind = {
        s: (depths[s], a.group.conjugacy_label(a.stabilizer(s))) for s in c.all_simplices()
    }
    upstairs = _stratify(c, kind)
    orb = orbit_space(a)
    qkind = {}
    for s in c.all_simplices():
        qkind.setdefault(orb.quotient.image(s), kind[s])
    downstairs = _stratify(orb.complex, qkind)
    return upstairs, downstairs, orb


def check_frontier(s: Stratification) -> ValidationReport:
    """The closure of each stratum minus itself is a union of lower-dimensional strata."""
    where = s.stratum_of()
    out = []
    for i, st in enumerate(s.strata):
        closure: set[Simplex] = set()
        for x in st.simplices:
            _faces(x, closure)
        rest = closure - st.simplices
        touched = sorted({where[x] for x in rest if x in where})
        for j in touched:
            other = s.strata[j]
            if j == i:
                continue
            if not other.simplices <= rest:
                wit = min(other.simplices - rest)
                out.append(
                    Violation(
                        "frontier-partial",
                        f"closure of stratum {i} meets stratum {j} without containing it",
                        (i, j, wit),
                    )
                )
            elif other.dim >= st.dim:
                out.append(
                    Violation(
                        "frontier-dimension",
                        f"stratum {j} in the frontier of stratum {i} is not lower-dimensional",
                        (i, j),
                    )
                )
    return ValidationReport(tuple(out))


def _faces(s: Simplex, acc: set) -> None:
    if s in acc:
        return
    acc.add(s)
    if len(s) > 1:
        for _, f in faces_of(s):
            _faces(f, acc)


def check_strata_descend(
    up: Stratification, down: Stratification, quotient: SimplicialMap
) -> ValidationReport:
    """Every stratum upstairs maps onto exactly one stratum of the orbit space."""
    targets = {st.simplices: i for i, st in enumerate(down.strata)}
    out = []
    for i, st in enumerate(up.strata):
        img = frozenset(quotient.image(s) for s in st.simplices)
        if img not in targets:
            out.append(Violation("strata-not-descending", f"stratum {i} does not map onto a stratum", (i,)))
    return ValidationReport(tuple(out))


def facet_action(a: CornersAction, label: Hashable) -> tuple[CornersAction, SimplicialMap]:
    """The stabilizer of facet ``label`` acting on that facet, with the inclusion."""
    fm, incl, _ = _facet_manifold(a.space, label)
    pos = {v: i for i, v in enumerate(incl.images)}
    stab = [g for g in range(a.group.order) if a.facet_permutation(g)[label] == label]
    restricted = [tuple(pos[a.perms[g][v]] for v in incl.images) for g in stab]
    group, perms = FiniteGroup.from_permutations(restricted)
    return CornersAction(group, fm, tuple(perms)), incl
