from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geohom import corpus as C
from geohom.corners import CornersManifold, product_corners, simplex_manifold, subdivide
from geohom.geochain import (
    GeometricChain,
    GeometricTerm,
    add,
    boundary,
    fundamental_chain,
    normalize,
    product,
    product_target,
    pullback,
    pushforward,
    subdivide_term,
    term_chain,
)
from geohom.homology import comparison, lift_cycle, simplicial_homology
from geohom.simplicial import SimplicialComplex, SimplicialMap, sort_with_sign
from oracles import brute_force_isomorphism_signs

TARGET = SimplicialComplex.from_simplices([(0, 1, 2, 3)], vertices=[0, 1, 2, 3])
CHAINS = C.chain_corpus()


def relabel(term: GeometricTerm, perm) -> GeometricTerm:
    """The same term with source vertex ``v`` renamed to position ``perm[v]``."""
    m = term.source.manifold
    c = m.complex
    n = len(c.vertices)
    verts = [None] * n
    for v in range(n):
        verts[perm[v]] = c.vertices[v]
    tops, orient = [], {}
    for t in m.tops():
        key, sgn = sort_with_sign([perm[v] for v in t])
        tops.append(key)
        orient[key] = sgn * m.orientation[t]
    cx = SimplicialComplex.from_index_simplices(verts, tops)
    facets = {
        lab: frozenset(tuple(sorted(perm[v] for v in s)) for s in grp) for lab, grp in m.facets.items()
    }
    images = [None] * n
    for v in range(n):
        images[perm[v]] = term.map.images[v]
    new = CornersManifold(cx, orient, facets)
    return GeometricTerm.of(new, SimplicialMap(cx, term.target, tuple(images)))


def reverse(term: GeometricTerm) -> GeometricTerm:
    return GeometricTerm.of(term.source.manifold.reversed(), term.map, term.source.action)


BASES = {
    "point": simplex_manifold(0),
    "interval": C.interval(),
    "sub_interval": subdivide(C.interval()).manifold,
    "triangle": simplex_manifold(2),
    "circle": C.circle(4),
    "square": C.square(4),
    "two_square": product_corners(C.interval(), C.interval()),
}


@st.composite
def terms(draw):
    name = draw(st.sampled_from(sorted(BASES)))
    m = BASES[name]
    n = len(m.complex.vertices)
    images = tuple(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    return GeometricTerm.of(m, SimplicialMap(m.complex, TARGET, images))


def decorated(term):
    m = term.source.manifold
    return (
        list(term.map.images),
        dict(m.orientation),
        [set(grp) for grp in m.facets.values()],
    )


def mapped_interval(order, sign, images):
    c = SimplicialComplex.from_simplices([order], vertices=list(order))
    m = CornersManifold(c, {(0, 1): sign}, {"p": frozenset([(0,)]), "q": frozenset([(1,)])})
    return GeometricTerm.of(m, SimplicialMap(c, TARGET, images))


def test_normalize_relabelled_interval():
    a = mapped_interval(("x", "y"), 1, (0, 1))
    b = mapped_interval(("y", "x"), -1, (1, 0))  # same oriented interval x -> y
    (na, sa), (nb, sb) = normalize(a), normalize(b)
    assert na.source.certificate == nb.source.certificate
    assert sa == sb == 1
    assert GeometricChain.from_terms(TARGET, 1, [(1, a), (-1, b)]).is_empty()


def test_normalize_reversed_interval():
    a = mapped_interval(("x", "y"), 1, (0, 1))
    (na, sa), (nr, sr) = normalize(a), normalize(reverse(a))
    assert na.source.certificate == nr.source.certificate
    assert sa == -sr


def test_interval_and_subdivided_interval_differ():
    a = GeometricTerm.of(BASES["interval"], SimplicialMap(BASES["interval"].complex, TARGET, (0, 1)))
    sub = BASES["sub_interval"]
    b = GeometricTerm.of(sub, SimplicialMap(sub.complex, TARGET, (0, 1, 0)))
    assert normalize(a)[0].source.certificate != normalize(b)[0].source.certificate
    assert not brute_force_isomorphism_signs(decorated(a), decorated(b))


@given(terms(), st.data())
def test_normalize_relabel_invariant(t, data):
    n = len(t.source.manifold.complex.vertices)
    perm = data.draw(st.permutations(range(n)))
    u = relabel(t, perm)
    (nt, s1), (nu, s2) = normalize(t), normalize(u)
    assert s1 == s2
    if s1:
        assert nt.source.certificate == nu.source.certificate
        assert normalize(nt) == (nt, 1)  # idempotent: canonical terms are fixed
        renorm = normalize(GeometricTerm.of(nt.source.manifold, nt.map))
        assert renorm[0].source.certificate == nt.source.certificate and renorm[1] == 1


@given(terms(), terms())
def test_canonical_agrees_with_brute_force(t, u):
    signs = brute_force_isomorphism_signs(decorated(t), decorated(u))
    (nt, st_), (nu, su) = normalize(t), normalize(u)
    self_signs = brute_force_isomorphism_signs(decorated(t), decorated(t))
    assert (st_ == 0) == (-1 in self_signs)
    if st_ == 0 or su == 0:
        return
    same = nt.source.certificate == nu.source.certificate
    assert same == bool(signs)
    if same:
        assert signs == {st_ * su}


def test_add_examples():
    c = CHAINS["square"]
    assert add(c, -1 * c).is_empty()
    t = mapped_interval(("x", "y"), 1, (0, 1))
    assert (term_chain(t) + term_chain(reverse(t))).is_empty()
    half = Fraction(1, 2)
    assert half * term_chain(t) + half * term_chain(t) == term_chain(t)


def test_add_rejects_mismatch():
    with pytest.raises(ValueError):
        add(CHAINS["square"], CHAINS["simplex1"])


def test_interval_boundary_is_endpoint_difference():
    t = mapped_interval(("x", "y"), 1, (2, 3))
    b = boundary(term_chain(t))
    assert b.dim == 0
    got = sorted((c, tm.map.images) for c, tm in b.items())
    assert got == [(-1, (2,)), (1, (3,))]
    assert comparison(b).coefficients == {(2,): -1, (3,): 1}


def test_triangle_boundary_squared():
    tri = fundamental_chain(simplex_manifold(2))
    assert len(boundary(tri)) == 3
    assert boundary(boundary(tri)).is_empty()


def test_hollow_triangle_lift_boundary_empty():
    z = simplicial_homology(C.hollow_triangle()).cycles[1][0]
    chain = lift_cycle(z)
    assert len(chain) == 3
    assert boundary(chain).is_empty()


def test_boundary_rejects_points():
    with pytest.raises(ValueError):
        boundary(fundamental_chain(simplex_manifold(0)))


@pytest.mark.parametrize("name", sorted(CHAINS))
def test_boundary_squared_on_corpus(name):
    c = CHAINS[name]
    b = boundary(c)
    assert b.dim == c.dim - 1
    if c.dim >= 2:
        assert boundary(b).is_empty()


def test_corpus_size_and_kinds():
    assert len(CHAINS) >= 25
    assert sum(1 for c in CHAINS.values() for _, t in c.items() if t.source.action is not None) >= 5
    assert {c.dim for c in CHAINS.values()} >= {1, 2, 3}


def test_point_times_chain():
    pt = fundamental_chain(simplex_manifold(0))
    c = CHAINS["simplex2"]
    pc = product(pt, c)
    proj = product_target(pt.target, c.target).right
    assert pushforward(pc, proj) == c


def test_interval_times_interval():
    i = CHAINS["simplex1"]
    sq = product(i, i)
    assert sq.dim == 2 and len(sq) == 1
    ((coef, term),) = sq.items()
    assert len(term.source.manifold.facets) == 4


LEIBNIZ = {
    "interval": fundamental_chain(C.interval()),
    "triangle": fundamental_chain(simplex_manifold(2)),
    "circle": fundamental_chain(C.circle(3)),
    "tetra": fundamental_chain(simplex_manifold(3)),
    "point": fundamental_chain(simplex_manifold(0)),
}


@pytest.mark.parametrize("a", ["interval", "triangle", "circle"])
@pytest.mark.parametrize("b", ["interval", "triangle", "circle", "point"])
def test_leibniz(a, b):
    x, y = LEIBNIZ[a], LEIBNIZ[b]
    lhs = boundary(product(x, y))
    rhs = product(boundary(x), y)
    if y.dim >= 1:
        rhs = rhs + (-1) ** x.dim * product(x, boundary(y))
    assert lhs == rhs


def test_product_bilinear():
    i = fundamental_chain(C.interval())
    t = mapped_interval(("x", "y"), 1, (0, 2))
    s = term_chain(GeometricTerm.of(C.interval(), SimplicialMap(C.interval().complex, i.target, (1, 0))))
    a = GeometricChain.from_terms(TARGET, 1, [(2, t)])
    b = GeometricChain.from_terms(TARGET, 1, [(Fraction(1, 3), t)])
    assert product(a + b, i) == product(a, i) + product(b, i)
    assert product(i, s + i) == product(i, s) + product(i, i)
    assert product(Fraction(5, 2) * a, i) == Fraction(5, 2) * product(a, i)


def test_product_rejects_quotient_sources():
    with pytest.raises(ValueError):
        product(CHAINS["quotient_z2_disk"], LEIBNIZ["interval"])


def test_pullback_examples():
    c = CHAINS["simplex2"]
    pt = simplex_manifold(0)
    back = pullback(pt, c)
    assert pushforward(back, product_target(c.target, pt.complex).left) == c
    point = fundamental_chain(pt)
    line = pullback(C.interval(), point)
    assert line.dim == 1 and len(line) == 1


def test_pullback_boundary_compatibility():
    c = fundamental_chain(C.interval())
    f = C.interval()
    lhs = boundary(pullback(f, c))
    rhs = pullback(f, boundary(c)) + (-1) ** c.dim * product(c, boundary(fundamental_chain(f)))
    assert lhs == rhs


def test_quotient_boundary_descends():
    disk = CHAINS["quotient_z2_disk"]
    b = boundary(disk)
    assert len(b) == 1
    ((_, term),) = b.items()
    assert term.source.action is not None and term.source.action.group.order == 2
    square = CHAINS["quotient_z4_square"]
    # four edges form one orbit of facets
    assert len(boundary(square)) == 1


def test_term_rejects_foreign_map():
    with pytest.raises(ValueError):
        GeometricTerm.of(C.interval(), SimplicialMap(TARGET, TARGET, (0, 1, 2, 3)))


def test_map_must_be_invariant_for_quotients():
    a = C.half_turn_on_disk()  # vertices c, 0, 1, 2, 3; the half turn swaps 0<->2, 1<->3
    good = SimplicialMap(a.space.complex, TARGET, (0, 1, 2, 1, 2))
    assert GeometricTerm.of(a.space, good, a).validate().ok
    bad = SimplicialMap(a.space.complex, TARGET, (0, 1, 2, 3, 2))
    assert "map-not-invariant" in GeometricTerm.of(a.space, bad, a).validate().codes()


@given(st.integers(1, 3), st.data())
def test_subdivided_term_has_same_comparison(k, data):
    # any vertex choice inside the carrier approximates the same map, and the
    # degenerate pieces cancel, so the pushed-forward chain is unchanged
    p = simplex_manifold(k)
    images = tuple(data.draw(st.lists(st.integers(0, 3), min_size=k + 1, max_size=k + 1)))
    target = SimplicialComplex.from_simplices([(0, 1, 2, 3)], vertices=[0, 1, 2, 3])
    t = GeometricTerm.of(p, SimplicialMap(p.complex, target, images))
    pick = data.draw(st.sampled_from([min, max, lambda xs: xs[-1], lambda xs: sorted(xs)[len(xs) // 2]]))
    assert comparison(term_chain(subdivide_term(t, pick))) == comparison(term_chain(t))


def test_subdivide_term_rejects_quotients():
    with pytest.raises(ValueError):
        subdivide_term(C.quotient_term(C.z3_on_nonagon()))
