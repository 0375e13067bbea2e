"""Small named spaces, manifolds, actions and chains used by tests and examples."""
from __future__ import annotations

from fractions import Fraction

from .corners import (
    CornersManifold,
    closed_manifold,
    double,
    manifold_from_complex,
    simplex_manifold,
)
from .geochain import GeometricChain, GeometricTerm, fundamental_chain
from .quotient import CornersAction, action_from_generator, orbit_space, regularize, trivial_action
from .simplicial import SimplicialComplex, SimplicialMap, shuffle_product


def point() -> SimplicialComplex:
    return SimplicialComplex.from_simplices([("p",)])


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_simplices(
        [(i, (i + 1) % n) for i in range(n)], vertices=list(range(n))
    )


def hollow_triangle() -> SimplicialComplex:
    return cycle(3)


def solid_triangle() -> SimplicialComplex:
    return SimplicialComplex.from_simplices([(0, 1, 2)], vertices=[0, 1, 2])


def octahedron() -> SimplicialComplex:
    tris = [
        (z, x, y)
        for z in ("N", "S")
        for x, y in (("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"))
    ]
    return SimplicialComplex.from_simplices(tris, vertices=["N", "S", "a", "b", "c", "d"])


def torus() -> SimplicialComplex:
    return shuffle_product(cycle(4), cycle(4)).complex


def klein_bottle(n: int = 3, m: int = 3) -> SimplicialComplex:
    """Grid triangulation of the square with one twisted side identification."""

    def canon(x: int, y: int) -> tuple[int, int]:
        y %= m
        if x == n:
            return (0, (m - y) % m)
        return (x, y)

    tris = []
    for x in range(n):
        for y in range(m):
            a, b = canon(x, y), canon(x + 1, y)
            c, d = canon(x + 1, y + 1), canon(x, y + 1)
            tris += [(a, b, c), (a, d, c)]
    verts = [(x, y) for x in range(n) for y in range(m)]
    return SimplicialComplex.from_simplices(tris, vertices=verts)


def rp2() -> SimplicialComplex:
    """Six-vertex real projective plane."""
    tris = [
        (1, 2, 4), (1, 2, 6), (1, 3, 5), (1, 3, 6), (1, 4, 5),
        (2, 3, 4), (2, 3, 5), (2, 5, 6), (3, 4, 6), (4, 5, 6),
    ]
    return SimplicialComplex.from_simplices(tris, vertices=[1, 2, 3, 4, 5, 6])


def mobius() -> SimplicialComplex:
    tris = [(i, (i + 1) % 5, (i + 2) % 5) for i in range(5)]
    return SimplicialComplex.from_simplices(tris, vertices=list(range(5)))


def suspended_polygon(m: int) -> SimplicialComplex:
    tris = [(z, i, (i + 1) % m) for z in ("N", "S") for i in range(m)]
    return SimplicialComplex.from_simplices(tris, vertices=["N", "S"] + list(range(m)))


def cone_disk(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_simplices(
        [("c", i, (i + 1) % n) for i in range(n)], vertices=["c"] + list(range(n))
    )


def disk(n: int = 4) -> CornersManifold:
    """Cone over an n-cycle with the whole rim as one facet."""
    c = cone_disk(n)
    return manifold_from_complex(c, {"rim": [(i, (i + 1) % n) for i in range(n)]})


def square(n: int = 4) -> CornersManifold:
    """Cone over an n-cycle, each rim edge its own facet (corners at rim vertices)."""
    c = cone_disk(n)
    return manifold_from_complex(c, {f"e{i}": [(i, (i + 1) % n)] for i in range(n)})


def circle(n: int) -> CornersManifold:
    return closed_manifold(cycle(n))


def interval() -> CornersManifold:
    return simplex_manifold(1)


def sphere() -> CornersManifold:
    return closed_manifold(octahedron())


def z3_on_hexagon() -> CornersAction:
    return action_from_generator(circle(6), {i: (i + 2) % 6 for i in range(6)})


def z3_on_nonagon() -> CornersAction:
    return action_from_generator(circle(9), {i: (i + 3) % 9 for i in range(9)})


def rotation_on_suspension(n: int) -> CornersAction:
    m = 2 * n
    gen = {"N": "N", "S": "S", **{i: (i + 2) % m for i in range(m)}}
    return action_from_generator(closed_manifold(suspended_polygon(m)), gen)


def half_turn_on_disk() -> CornersAction:
    return action_from_generator(disk(4), {"c": "c", **{i: (i + 2) % 4 for i in range(4)}})


def quarter_turn_on_square() -> CornersAction:
    return action_from_generator(square(4), {"c": "c", **{i: (i + 1) % 4 for i in range(4)}})


def half_turn_on_square() -> CornersAction:
    return action_from_generator(square(4), {"c": "c", **{i: (i + 2) % 4 for i in range(4)}})


def antipodal_on_square_rim() -> CornersAction:
    return action_from_generator(circle(4), {i: (i + 2) % 4 for i in range(4)})


def trivial_on_triangle() -> CornersAction:
    return trivial_action(simplex_manifold(2))


def reflection_of_interval() -> CornersAction:
    c = SimplicialComplex.from_simplices([("a", "m"), ("m", "b")], vertices=["a", "m", "b"])
    p = manifold_from_complex(c, {"A": [("a",)], "B": [("b",)]})
    return action_from_generator(p, {"a": "b", "m": "m", "b": "a"})


def corpus_actions() -> dict[str, CornersAction]:
    return {
        "z3_hexagon": z3_on_hexagon(),
        "z3_nonagon": z3_on_nonagon(),
        "z3_suspended_hexagon": rotation_on_suspension(3),
        "z2_suspended_square": rotation_on_suspension(2),
        "z2_disk": half_turn_on_disk(),
        "z4_square": quarter_turn_on_square(),
        "z2_square": half_turn_on_square(),
        "z2_antipodal_rim": antipodal_on_square_rim(),
        "trivial_triangle": trivial_on_triangle(),
    }


def quotient_term(a: CornersAction) -> GeometricTerm:
    """The regularized quotient source mapped onto its own orbit space."""
    reg = regularize(a).action
    orb = orbit_space(reg)
    return GeometricTerm.of(reg.space, orb.quotient, reg)


def spaces() -> dict[str, SimplicialComplex]:
    return {
        "point": point(),
        "hollow_triangle": hollow_triangle(),
        "solid_triangle": solid_triangle(),
        "octahedron": octahedron(),
        "torus": torus(),
        "klein_bottle": klein_bottle(),
        "rp2": rp2(),
        "mobius": mobius(),
    }


def chain_corpus() -> dict[str, GeometricChain]:
    """At least 25 geometric chains of dimension >= 1 across source types."""
    from .geochain import product, pullback, term_chain
    from .homology import lift_cycle, simplicial_homology

    out: dict[str, GeometricChain] = {}
    for k in (1, 2, 3):
        out[f"simplex{k}"] = fundamental_chain(simplex_manifold(k))
    I = fundamental_chain(interval())
    T = fundamental_chain(simplex_manifold(2))
    C4 = fundamental_chain(circle(4))
    out["square"] = product(I, I)
    out["cube"] = product(out["square"], I)
    out["prism"] = product(T, I)
    out["annulus"] = product(I, C4)
    out["torus_chain"] = product(C4, C4)
    out["interval_pullback"] = pullback(interval(), I)
    for name, (p, labels) in {
        "double_interval_both": (interval(), None),
        "double_interval_one": (interval(), [(1,)]),
        "double_triangle_all": (simplex_manifold(2), None),
        "double_triangle_one": (simplex_manifold(2), [(0, 1)]),
        "double_tetra_two": (simplex_manifold(3), [(0, 1, 2), (0, 1, 3)]),
    }.items():
        m, _ = double(p, labels if labels is not None else p.facets)
        out[name] = fundamental_chain(m)
    for name, a in corpus_actions().items():
        if a.space.dim >= 1:
            out[f"quotient_{name}"] = term_chain(quotient_term(a))
    tri = simplex_manifold(2)
    fold = SimplicialMap(tri.complex, cycle(3), (0, 1, 0))
    out["folded_triangle"] = term_chain(GeometricTerm.of(tri, fold))
    for name in ("hollow_triangle", "octahedron"):
        h = simplicial_homology(spaces()[name])
        z = h.cycles[-1][0]
        out[f"lift_{name}"] = lift_cycle(z)
    half = Fraction(1, 2)
    out["square_halves"] = half * out["square"] + half * out["square"]
    return out


def _action_doc(name: str, a: CornersAction):
    from . import docformat as fmt

    return fmt.Document(
        (
            fmt.manifold_record(f"{name}_space", a.space),
            fmt.group_record(f"{name}_group", a.group),
            fmt.action_record(name, a, f"{name}_group", f"{name}_space"),
        )
    )


def corpus_documents() -> dict[str, "object"]:
    """File name to document for the checked-in corpus directory."""
    from . import docformat as fmt
    from .geochain import term_chain
    from .homology import lift_cycle, simplicial_homology

    docs = {}
    docs["octahedron.geo"] = fmt.documents([("octahedron", octahedron())])
    docs["spaces.geo"] = fmt.documents(
        [(name, c) for name, c in spaces().items() if name != "octahedron"]
    )
    m = mobius()
    verts = tuple(fmt.token(v) for v in m.vertices)
    up = m.cofaces()
    rim = [s for s in m.simplices_of_dim(1) if len(up[s]) == 1]
    docs["mobius.geo"] = fmt.Document(
        (
            fmt.ComplexRecord(
                "mobius",
                2,
                verts,
                tuple((1, tuple(verts[i] for i in t)) for t in sorted(m.maximal_simplices())),
                tuple(("rim", tuple(verts[i] for i in s)) for s in sorted(rim)),
                True,
            ),
        )
    )
    docs["disk_rotation.geo"] = _action_doc("disk_rotation", half_turn_on_disk())
    actions = fmt.Document()
    for name, a in corpus_actions().items():
        actions = actions + _action_doc(name, a)
    docs["actions.geo"] = actions
    docs["reflection.geo"] = _action_doc("reflection", reflection_of_interval())

    chains = fmt.documents([("triangle", hollow_triangle()), ("solid", solid_triangle())])
    h = simplicial_homology(hollow_triangle())
    chains = chains + fmt.chain_document("loop", lift_cycle(h.cycles[1][0]), "triangle")
    tri = simplex_manifold(2)
    f = SimplicialMap.identity(tri.complex)
    solid = SimplicialMap(tri.complex, solid_triangle(), f.images)
    chains = chains + fmt.chain_document(
        "disk", term_chain(GeometricTerm.of(tri, solid)), "solid"
    )
    docs["chains.geo"] = chains

    qt = quotient_term(z3_on_nonagon())
    docs["quotient_chain.geo"] = fmt.documents([("circle3", qt.target)]) + fmt.chain_document(
        "orbit_loop", term_chain(qt), "circle3"
    )
    docs["manifolds.geo"] = fmt.documents(
        [
            ("interval", interval()),
            ("triangle", simplex_manifold(2)),
            ("circle", circle(4)),
            ("square", square(4)),
            ("disk", disk(4)),
        ]
    )
    docs["products.geo"] = fmt.documents(
        [("unit", interval().complex)]
    ) + fmt.chain_document("segment", fundamental_chain(interval()), "unit")
    return docs


def write_corpus(directory) -> list[str]:
    from pathlib import Path

    from . import docformat as fmt

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, doc in sorted(corpus_documents().items()):
        (out / fname).write_text(fmt.serialize(doc))
        written.append(fname)
    return written
