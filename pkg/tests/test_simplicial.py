from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geohom import corpus as C
from geohom.homology import simplicial_homology
from geohom.simplicial import (
    SimplexChain,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    boundary_matrix,
    connected_components,
    permutation_sign,
    shuffle_product,
    sort_with_sign,
    validate_complex,
)
from oracles import closure, dense_betti, euler


def index_tops(c):
    return [s for s in c.maximal_simplices()]


@st.composite
def complexes(draw, max_vertices=7, max_dim=3):
    n = draw(st.integers(1, max_vertices))
    tops = draw(
        st.lists(
            st.sets(st.integers(0, n - 1), min_size=1, max_size=max_dim + 1),
            min_size=1,
            max_size=6,
        )
    )
    used = sorted({v for t in tops for v in t})
    return SimplicialComplex.from_simplices([sorted(t) for t in tops], vertices=used)


def test_validate_examples():
    assert validate_complex(C.solid_triangle()).ok
    broken = SimplicialComplex.raw(
        [0, 1, 2], {0: [(0,), (1,), (2,)], 1: [(0, 2), (1, 2)], 2: [(0, 1, 2)]}
    )
    report = validate_complex(broken)
    assert "missing-face" in report.codes()
    oct_ = C.octahedron()
    assert validate_complex(oct_).ok
    # the octahedron's faces agree with brute-force enumeration
    assert set(oct_.all_simplices()) == closure(index_tops(oct_))


def test_validate_other_violations():
    unsorted = SimplicialComplex.raw([0, 1], {0: [(0,), (1,)], 1: [(1, 0)]})
    assert "unsorted" in validate_complex(unsorted).codes()
    stray = SimplicialComplex.raw([0, 1, 2], {0: [(0,), (1,)], 1: [(0, 1)]})
    assert "isolated-label" in validate_complex(stray).codes()
    unknown = SimplicialComplex.raw([0], {0: [(0,), (3,)]})
    assert "unknown-vertex" in validate_complex(unknown).codes()


def test_edge_boundary_column():
    c = SimplicialComplex.from_simplices([("v0", "v1")])
    assert boundary_matrix(c, 1).to_dense() == [[-1], [1]]


def test_boundary_of_boundary_on_solid_triangle():
    c = C.solid_triangle()
    assert boundary_matrix(c, 1).matmul(boundary_matrix(c, 2)).is_zero()


def test_boundary_matrix_range():
    with pytest.raises(ValueError):
        boundary_matrix(C.hollow_triangle(), 2)
    with pytest.raises(ValueError):
        boundary_matrix(C.hollow_triangle(), 0)


def test_hollow_triangle_betti():
    assert simplicial_homology(C.hollow_triangle()).betti == (1, 1)
    assert dense_betti(index_tops(C.hollow_triangle())) == (1, 1)


@given(complexes())
def test_boundary_squared_zero(c):
    for k in range(2, c.dim + 1):
        assert boundary_matrix(c, k - 1).matmul(boundary_matrix(c, k)).is_zero()


@given(complexes())
def test_betti_matches_dense_oracle(c):
    assert simplicial_homology(c).betti == dense_betti(index_tops(c))


def test_subdivision_examples():
    edge = SimplicialComplex.from_simplices([(0, 1)])
    sd, carrier = barycentric_subdivision(edge)
    assert (len(sd.vertices), sd.count(1)) == (3, 2)
    sd, carrier = barycentric_subdivision(C.solid_triangle())
    assert sd.count(2) == 6
    assert set(sd.all_simplices()) == closure(index_tops(sd))
    sd, _ = barycentric_subdivision(C.octahedron())
    assert sd.euler_characteristic() == euler(index_tops(C.octahedron())) == 2


def test_subdivision_carrier():
    c = C.solid_triangle()
    sd, carrier = barycentric_subdivision(c)
    assert sorted(carrier.values(), key=lambda s: (len(s), s)) == sorted(
        c.all_simplices(), key=lambda s: (len(s), s)
    )
    # each new simplex is a flag: carriers strictly increase along it
    for t in sd.simplices_of_dim(2):
        chain = [carrier[v] for v in t]
        assert all(set(a) < set(b) or set(b) < set(a) for a, b in zip(chain, chain[1:]))


@pytest.mark.parametrize("name", sorted(C.spaces()))
def test_subdivision_preserves_invariants(name):
    c = C.spaces()[name]
    sd, _ = barycentric_subdivision(c)
    assert sd.euler_characteristic() == c.euler_characteristic()
    assert simplicial_homology(sd).betti == simplicial_homology(c).betti


@given(complexes(max_vertices=5, max_dim=2))
def test_subdivision_preserves_betti_random(c):
    sd, _ = barycentric_subdivision(c)
    assert simplicial_homology(sd).betti == simplicial_homology(c).betti


def test_shuffle_cell_counts():
    edge = SimplicialComplex.from_simplices([(0, 1)])
    tri = C.solid_triangle()
    sq = shuffle_product(edge, edge)
    assert sq.complex.count(2) == 2 == comb(2, 1)
    prism = shuffle_product(tri, edge)
    assert prism.complex.count(3) == 3 == comb(3, 1)


def test_torus_from_shuffle():
    t = shuffle_product(C.cycle(4), C.cycle(4)).complex
    assert t.euler_characteristic() == 0
    assert simplicial_homology(t).betti == (1, 2, 1) == dense_betti(index_tops(t))


@given(complexes(max_vertices=4, max_dim=2), complexes(max_vertices=4, max_dim=1))
def test_shuffle_invariants(a, b):
    p = shuffle_product(a, b)
    assert p.left.validate().ok and p.right.validate().ok
    assert p.complex.euler_characteristic() == a.euler_characteristic() * b.euler_characteristic()
    for (x, y), cell in p.signs.items():
        assert len(cell) == comb(len(x) + len(y) - 2, len(x) - 1)
        for s, sign in cell:
            assert sign in (1, -1)
            assert s in p.complex


def test_components_examples():
    two_edges = SimplicialComplex.from_simplices([(0, 1), (2, 3)])
    assert len(connected_components(two_edges)) == 2
    assert len(connected_components(C.hollow_triangle())) == 1
    points = SimplicialComplex.from_simplices([(0,), (1,)])
    assert len(connected_components(points)) == 2


@given(complexes())
def test_components_partition(c):
    comps = connected_components(c)
    seen = [v for comp in comps for v in comp.vertices]
    assert sorted(seen) == sorted(c.vertices)
    assert len(comps) == simplicial_homology(c).betti[0]


def test_sign_helpers():
    assert permutation_sign([1, 0, 2]) == -1
    assert sort_with_sign([2, 0, 1]) == ((0, 1, 2), 1)
    assert sort_with_sign([1, 1])[1] == 0


def test_chain_push_and_boundary():
    c = C.solid_triangle()
    z = SimplexChain(c, {(0, 1, 2): Fraction(1)})
    assert z.boundary() == SimplexChain(c, {(1, 2): 1, (0, 2): -1, (0, 1): 1})
    fold = SimplicialMap(c, C.cycle(3), (0, 1, 0))
    assert z.push(fold).is_zero()
    assert (2 * z - z) == z
