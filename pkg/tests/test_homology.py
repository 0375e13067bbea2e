from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geohom import corpus as C
from geohom.corners import simplex_manifold
from geohom.geochain import GeometricChain, boundary, fundamental_chain, product, pullback, term_chain
from geohom.homology import (
    NotACycleError,
    chain_map_check,
    class_coordinates,
    comparison,
    convolve,
    kunneth_check,
    lift_cycle,
    simplicial_homology,
)
from geohom.simplicial import SimplexChain, SimplicialComplex, boundary_matrix
from oracles import dense_betti

SPACES = C.spaces()
CHAINS = C.chain_corpus()
SMALL = [n for n in sorted(SPACES) if n != "torus"]
TORUS_H = simplicial_homology(SPACES["torus"])


def test_betti_examples():
    for name, expected in (("hollow_triangle", (1, 1)), ("octahedron", (1, 0, 1)), ("point", (1,))):
        c = SPACES[name]
        assert simplicial_homology(c).betti == expected
        if name != "point":
            assert dense_betti(c.maximal_simplices()) == expected


@pytest.mark.parametrize("name", sorted(SPACES))
def test_homology_result_invariants(name):
    c = SPACES[name]
    h = simplicial_homology(c)
    assert h.euler_characteristic() == c.euler_characteristic()
    for k, reps in enumerate(h.cycles):
        assert len(reps) == h.betti[k]
        for z in reps:
            assert z.is_cycle()
            assert class_coordinates(z, h) is not None


def test_comparison_examples():
    tri = simplex_manifold(2)
    assert comparison(fundamental_chain(tri)) == SimplexChain(tri.complex, {(0, 1, 2): 1})
    z = simplicial_homology(C.hollow_triangle()).cycles[1][0]
    assert comparison(lift_cycle(z)) == z
    orbit = comparison(CHAINS["quotient_z3_nonagon"])
    assert orbit.is_cycle() and len(orbit.coefficients) == 3
    assert set(orbit.coefficients.values()) <= {1, -1}
    h = simplicial_homology(orbit.complex)
    assert class_coordinates(orbit, h) is not None


def test_chain_map_examples():
    i = fundamental_chain(C.interval())
    ok, diff = chain_map_check(i)
    assert ok and diff.is_zero()
    assert comparison(boundary(i)) == SimplexChain(i.target, {(0,): -1, (1,): 1})
    ok, _ = chain_map_check(fundamental_chain(simplex_manifold(2)))
    assert ok
    with pytest.raises(ValueError):
        chain_map_check(fundamental_chain(simplex_manifold(0)))


@pytest.mark.parametrize("name", sorted(CHAINS))
def test_chain_map_on_corpus(name):
    c = CHAINS[name]
    assert chain_map_check(c)[0]
    b = boundary(c)
    if b.dim >= 1:
        assert chain_map_check(b)[0]


def test_chain_map_on_products_and_pullbacks():
    i = fundamental_chain(C.interval())
    t = fundamental_chain(simplex_manifold(2))
    for c in (product(i, t), product(t, fundamental_chain(C.circle(3))), pullback(C.circle(3), i)):
        assert chain_map_check(c)[0]


def test_lift_examples():
    z = simplicial_homology(C.hollow_triangle()).cycles[1][0]
    lifted = lift_cycle(z)
    assert len(lifted) == 3 and boundary(lifted).is_empty()
    oct_ = C.octahedron()
    w = simplicial_homology(oct_).cycles[2][0]
    lifted = lift_cycle(w)
    assert len(lifted) == 8
    assert boundary(lifted).is_empty()
    assert comparison(lifted) == w
    zero = SimplexChain(oct_, {})
    assert lift_cycle(zero).is_empty()


def test_lift_rejects_non_cycles():
    c = C.solid_triangle()
    with pytest.raises(NotACycleError):
        lift_cycle(SimplexChain(c, {(0, 1): 1}))


@pytest.mark.parametrize("name", sorted(SPACES))
def test_comparison_inverts_lift(name):
    h = simplicial_homology(SPACES[name])
    for reps in h.cycles[1:]:
        for z in reps:
            g = lift_cycle(z)
            assert comparison(g) == z
            assert boundary(g).is_empty()


def test_class_coordinates_examples():
    c = C.octahedron()
    h = simplicial_homology(c)
    face = sorted(c.simplices_of_dim(1))[0]
    star = [t for t in c.simplices_of_dim(2) if set(face) <= set(t)]
    bnd = SimplexChain(c, {star[0]: 1}).boundary()
    assert class_coordinates(bnd, h) is None
    (w,) = h.cycles[2]
    assert class_coordinates(w, h) == (1,)
    t = simplicial_homology(C.hollow_triangle())
    (z,) = t.cycles[1]
    assert class_coordinates(z, t) == (1,)
    assert class_coordinates(2 * z, t) == (2,)
    solid = C.solid_triangle()
    with pytest.raises(NotACycleError):
        class_coordinates(SimplexChain(solid, {(0, 1): 1}), simplicial_homology(solid))


def test_twice_a_class_plus_a_boundary():
    t = C.torus()
    ht = TORUS_H
    tri = sorted(t.simplices_of_dim(2))[0]
    b = SimplexChain(t, {tri: 1}).boundary()
    a, bb = ht.cycles[1]
    assert class_coordinates(2 * a + b, ht) == (2, 0)
    assert class_coordinates(a - 3 * bb + b, ht) == (1, -3)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=2, max_size=2),
       st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_class_coordinates_recovers_combination(coefs, fill):
    t = SPACES["torus"]
    h = TORUS_H
    tris = sorted(t.simplices_of_dim(2))[:4]
    b = SimplexChain(t, {s: Fraction(x) for s, x in zip(tris, fill) if x}).boundary()
    z = coefs[0] * h.cycles[1][0] + coefs[1] * h.cycles[1][1] + b
    expected = None if not any(coefs) else tuple(coefs)
    assert class_coordinates(z, h) == expected


def test_geometric_boundaries_are_boundaries():
    for name, c in CHAINS.items():
        if c.dim < 2:
            continue
        b = boundary(c)
        if b.is_empty():
            continue
        z = comparison(b)
        if z.is_zero():
            continue
        assert class_coordinates(z, simplicial_homology(z.complex)) is None, name


def test_kunneth_examples():
    pt, hollow, oct_ = C.point(), C.hollow_triangle(), C.octahedron()
    assert kunneth_check(pt, hollow).product == (1, 1)
    assert kunneth_check(C.cycle(4), C.cycle(4)).product == (1, 2, 1)
    k = kunneth_check(hollow, oct_)
    assert k.ok and k.product == (1, 1, 1, 1) == convolve((1, 1), (1, 0, 1))


@pytest.mark.parametrize(
    "a,b",
    [("hollow_triangle", "hollow_triangle"), ("mobius", "hollow_triangle"), ("rp2", "hollow_triangle"),
     ("solid_triangle", "octahedron"), ("klein_bottle", "point")],
)
def test_kunneth_pairs(a, b):
    assert kunneth_check(SPACES[a], SPACES[b]).ok


def test_corpus_betti_against_oracle():
    for name in SMALL:
        c = SPACES[name]
        if name == "point":
            continue
        assert simplicial_homology(c).betti == dense_betti(c.maximal_simplices())
