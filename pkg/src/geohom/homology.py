"""Simplicial homology over Q and the comparison map from geometric chains."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exactla as la
from .corners import CornersManifold
from .geochain import GeometricChain, GeometricTerm, boundary, product_target
from .quotient import orbit_space, regularize
from .simplicial import (
    SimplexChain,
    SimplicialComplex,
    SimplicialMap,
    ValidationReport,
    Violation,
    boundary_matrix,
)

__all__ = [
    "HomologyResult",
    "simplicial_homology",
    "comparison",
    "chain_map_check",
    "lift_cycle",
    "class_coordinates",
    "kunneth_check",
    "NotACycleError",
]


class NotACycleError(ValueError):
    pass


@dataclass(frozen=True)
class HomologyResult:
    complex: SimplicialComplex
    betti: tuple[int, ...]
    cycles: tuple[tuple[SimplexChain, ...], ...]
    boundary_rank: tuple[int, ...]  # boundary_rank[k] = rank of the boundary into degree k

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def simplicial_homology(c: SimplicialComplex) -> HomologyResult:
    top = c.dim
    mats = {k: boundary_matrix(c, k) for k in range(1, top + 1)}
    ranks = {k: la.rank(m) for k, m in mats.items()}
    betti = []
    cycles = []
    brank = []
    for k in range(top + 1):
        n = c.count(k)
        if k >= 1:
            kernel = la.kernel_basis(mats[k])
        else:
            kernel = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
        basis = la.EchelonBasis(n)
        for col in (_columns(mats[k + 1]) if k + 1 in mats else []):
            basis.add(col)
        reps = [SimplexChain.from_vector(c, k, v) for v in kernel if basis.add(v)]
        b = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
        assert b == len(reps), "rank-nullity mismatch"
        betti.append(b)
        cycles.append(tuple(reps))
        brank.append(ranks.get(k + 1, 0))
    return HomologyResult(c, tuple(betti), tuple(cycles), tuple(brank))


def _columns(m: la.RationalSparseMatrix) -> list[list[Fraction]]:
    cols = [[Fraction(0)] * m.nrows for _ in range(m.ncols)]
    for (r, col), v in m.entries.items():
        cols[col][r] = v
    return cols


def _term_image(term: GeometricTerm) -> SimplexChain:
    src = term.source
    f = term.map
    if src.action is None:
        return src.manifold.fundamental_chain().push(f)
    reg = regularize(src.action)
    images = tuple(min(f.images[v] for v in reg.carrier[i]) for i in range(len(reg.carrier)))
    orb = orbit_space(reg.action)
    down = [0] * len(orb.complex.vertices)
    for v, qv in enumerate(orb.quotient.images):
        down[qv] = images[v]
    fbar = SimplicialMap(orb.complex, f.target, tuple(down))
    return SimplexChain(orb.complex, dict(orb.orientation)).push(fbar)


def comparison(c: GeometricChain) -> SimplexChain:
    """Push the top simplices of each (triangulated) source into the target.

    Quotient sources contribute the top simplices of their triangulated orbit
    space with weight one.  Degenerate images contribute nothing.
    """
    total = SimplexChain(c.target, {})
    for coef, term in c.items():
        total = total + coef * _term_image(term)
    return total


def chain_map_check(c: GeometricChain) -> tuple[bool, SimplexChain]:
    """Whether comparison commutes with the boundaries, and the difference chain."""
    if c.dim < 1:
        raise ValueError("chain_map_check needs a chain of dimension at least 1")
    lhs = comparison(boundary(c))
    rhs = comparison(c).boundary()
    diff = lhs - rhs
    return diff.is_zero(), diff


def lift_cycle(z: SimplexChain) -> GeometricChain:
    """One simplex source per simplex of ``z``, mapped by inclusion."""
    if not z.is_cycle():
        raise NotACycleError("lift_cycle needs a cycle")
    c = z.complex
    dims = z.dims
    if len(dims) > 1:
        raise ValueError("chain is not homogeneous")
    k = dims.pop() if dims else 0
    terms = []
    for s, coef in sorted(z.coefficients.items()):
        terms.append((coef, simplex_term(c, s)))
    return GeometricChain.from_terms(c, k, terms)


def simplex_term(c: SimplicialComplex, s) -> GeometricTerm:
    from .corners import simplex_manifold

    p = simplex_manifold(len(s) - 1)
    return GeometricTerm.of(p, SimplicialMap(p.complex, c, tuple(s)))


def class_coordinates(z: SimplexChain, h: HomologyResult) -> Optional[tuple[Fraction, ...]]:
    """Coordinates of [z] in the cycle basis of ``h``; None when z is a boundary."""
    if not z.is_cycle():
        raise NotACycleError("class_coordinates needs a cycle")
    if z.complex != h.complex:
        raise ValueError("cycle and homology live on different complexes")
    dims = z.dims
    if not dims:
        return None
    if len(dims) > 1:
        raise ValueError("chain is not homogeneous")
    k = dims.pop()
    c = h.complex
    n = c.count(k)
    reps = [r.vector(k) for r in h.cycles[k]]
    bcols = _columns(boundary_matrix(c, k + 1)) if k + 1 <= c.dim else []
    m = la.RationalSparseMatrix.from_columns(n, reps + bcols)
    x = la.solve_in_image(m, z.vector(k))
    if x is None:
        raise AssertionError("cycle outside span of cycle basis and boundaries")
    coords = tuple(x[: len(reps)])
    if not any(coords):
        return None
    return coords


def convolve(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


@dataclass(frozen=True)
class KunnethReport:
    left: tuple[int, ...]
    right: tuple[int, ...]
    product: tuple[int, ...]
    expected: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return _trim(self.product) == _trim(self.expected)


def _trim(b: Sequence[int]) -> tuple[int, ...]:
    b = list(b)
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    return tuple(b)


def kunneth_check(x: SimplicialComplex, y: SimplicialComplex) -> KunnethReport:
    bx = simplicial_homology(x).betti
    by = simplicial_homology(y).betti
    bp = simplicial_homology(product_target(x, y).complex).betti
    return KunnethReport(bx, by, bp, convolve(bx, by))


def manifold_betti(p: CornersManifold) -> tuple[int, ...]:
    return simplicial_homology(p.complex).betti


def chain_map_report(c: GeometricChain) -> ValidationReport:
    ok, diff = chain_map_check(c)
    if ok:
        return ValidationReport()
    return ValidationReport((Violation("chain-map", f"comparison does not commute: {diff!r}"),))
