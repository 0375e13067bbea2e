"""Abstract simplicial complexes, simplicial maps and simplicial chains.

Vertices carry arbitrary hashable labels, but every simplex is stored as a
strictly increasing tuple of vertex *indices* into ``SimplicialComplex.vertices``.
That sorted order is the reference orientation of the simplex; all signs in
the package are relative to it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .exactla import RationalSparseMatrix

Simplex = tuple[int, ...]

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "SimplicialMap",
    "SimplexChain",
    "Violation",
    "ValidationReport",
    "validate_complex",
    "boundary_matrix",
    "barycentric_subdivision",
    "shuffle_product",
    "connected_components",
    "permutation_sign",
    "sort_with_sign",
    "faces_of",
]


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_with_sign(items: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort ``items`` and return the parity of the sorting permutation (0 if repeated)."""
    order = sorted(range(len(items)), key=lambda i: items[i])
    out = tuple(items[i] for i in order)
    if any(out[i] == out[i + 1] for i in range(len(out) - 1)):
        return out, 0
    return out, permutation_sign(order)


def faces_of(s: Simplex) -> Iterator[tuple[int, Simplex]]:
    """Codimension-one faces with their position, ``s`` minus ``s[i]``."""
    for i in range(len(s)):
        yield i, s[:i] + s[i + 1:]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    vertices: tuple[Hashable, ...]
    simplices: tuple[frozenset, ...]
    _index: Mapping[Hashable, int] = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        if len(self._index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")

    @classmethod
    def from_simplices(
        cls,
        maximal: Iterable[Iterable[Hashable]],
        vertices: Optional[Sequence[Hashable]] = None,
    ) -> "SimplicialComplex":
        """Close ``maximal`` under faces.  Vertex order defaults to first appearance."""
        maximal = [tuple(s) for s in maximal]
        if vertices is None:
            seen: dict[Hashable, None] = {}
            for s in maximal:
                for v in s:
                    seen.setdefault(v, None)
            vertices = list(seen)
        index = {v: i for i, v in enumerate(vertices)}
        simplices = set()
        for s in maximal:
            ids = [index[v] for v in s]
            key, sgn = sort_with_sign(ids)
            if sgn == 0:
                raise ValueError(f"degenerate simplex {s!r}")
            simplices.add(key)
        return cls.from_index_simplices(tuple(vertices), simplices)

    @classmethod
    def from_index_simplices(
        cls, vertices: Sequence[Hashable], maximal: Iterable[Simplex]
    ) -> "SimplicialComplex":
        by_dim: dict[int, set] = {}
        for s in maximal:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                for f in combinations(s, k):
                    by_dim.setdefault(k - 1, set()).add(f)
        top = max(by_dim) if by_dim else -1
        return cls(tuple(vertices), tuple(frozenset(by_dim.get(k, ())) for k in range(top + 1)))

    @classmethod
    def raw(cls, vertices: Sequence[Hashable], simplices: Mapping[int, Iterable[Simplex]]):
        """Build without closing under faces (for validation tests)."""
        top = max(simplices) if simplices else -1
        return cls(
            tuple(vertices),
            tuple(frozenset(tuple(s) for s in simplices.get(k, ())) for k in range(top + 1)),
        )

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def __contains__(self, s: Simplex) -> bool:
        k = len(s) - 1
        return 0 <= k <= self.dim and tuple(s) in self.simplices[k]

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        if k < 0 or k > self.dim:
            return []
        return sorted(self.simplices[k])

    def all_simplices(self) -> list[Simplex]:
        return [s for k in range(self.dim + 1) for s in self.simplices_of_dim(k)]

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k <= self.dim else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(s) for k, s in enumerate(self.simplices))

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for k in range(1, self.dim + 1):
            for s in self.simplices[k]:
                covered.update(f for _, f in faces_of(s))
        return sorted(
            (s for k in range(self.dim + 1) for s in self.simplices[k] if s not in covered),
            key=lambda s: (len(s), s),
        )

    def is_pure(self) -> bool:
        return all(len(s) == self.dim + 1 for s in self.maximal_simplices())

    def labels(self, s: Simplex) -> tuple:
        return tuple(self.vertices[i] for i in s)

    def simplex(self, labels: Iterable[Hashable]) -> Simplex:
        key, sgn = sort_with_sign([self._index[v] for v in labels])
        if sgn == 0:
            raise ValueError("degenerate simplex")
        return key

    def cofaces(self) -> dict[Simplex, list[Simplex]]:
        """Map each simplex to the simplices one dimension up that contain it."""
        out: dict[Simplex, list[Simplex]] = {s: [] for s in self.all_simplices()}
        for k in range(1, self.dim + 1):
            for s in self.simplices_of_dim(k):
                for _, f in faces_of(s):
                    out[f].append(s)
        return out

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        """Closure of ``simplices`` on the vertices they use, keeping labels and order."""
        simplices = list(simplices)
        used = sorted({v for s in simplices for v in s})
        renum = {v: i for i, v in enumerate(used)}
        return SimplicialComplex.from_index_simplices(
            [self.vertices[v] for v in used], [tuple(renum[v] for v in s) for s in simplices]
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(len(s) for s in self.simplices)))

    def __repr__(self) -> str:
        counts = ",".join(str(len(s)) for s in self.simplices)
        return f"SimplicialComplex(n={len(self.vertices)}, f=({counts}))"


def validate_complex(c: SimplicialComplex) -> ValidationReport:
    out = []
    n = len(c.vertices)
    for k, layer in enumerate(c.simplices):
        for s in sorted(layer):
            if len(s) != k + 1:
                out.append(Violation("wrong-dimension", f"{s} stored as a {k}-simplex", (s,)))
                continue
            if any(not 0 <= v < n for v in s):
                out.append(Violation("unknown-vertex", f"{s} uses an unknown vertex", (s,)))
                continue
            if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
                out.append(Violation("unsorted", f"{s} is not strictly sorted", (s,)))
                continue
            for _, f in faces_of(s):
                if f and f not in c:
                    out.append(Violation("missing-face", f"face {f} of {s} missing", (s, f)))
    used = {v for layer in c.simplices for s in layer for v in s}
    for v in range(n):
        if v not in used:
            out.append(Violation("isolated-label", f"vertex {c.vertices[v]!r} in no simplex", (v,)))
    return ValidationReport(tuple(out))


def boundary_matrix(c: SimplicialComplex, k: int) -> RationalSparseMatrix:
    """Matrix of the k-th boundary: rows are sorted (k-1)-simplices, columns sorted k-simplices."""
    if not 1 <= k <= c.dim:
        raise ValueError(f"boundary index {k} outside 1..{c.dim}")
    rows = {s: i for i, s in enumerate(c.simplices_of_dim(k - 1))}
    cols = c.simplices_of_dim(k)
    entries = {}
    for j, s in enumerate(cols):
        for i, f in faces_of(s):
            entries[(rows[f], j)] = Fraction((-1) ** i)
    return RationalSparseMatrix(len(rows), len(cols), entries)


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != len(self.source.vertices):
            raise ValueError("vertex assignment does not cover the source")

    @classmethod
    def from_labels(
        cls, source: SimplicialComplex, target: SimplicialComplex, assignment: Mapping
    ) -> "SimplicialMap":
        return cls(source, target, tuple(target.index(assignment[v]) for v in source.vertices))

    @classmethod
    def identity(cls, c: SimplicialComplex) -> "SimplicialMap":
        return cls(c, c, tuple(range(len(c.vertices))))

    def image_vertices(self, s: Simplex) -> tuple[int, ...]:
        return tuple(self.images[v] for v in s)

    def image(self, s: Simplex) -> Simplex:
        return tuple(sorted(set(self.image_vertices(s))))

    def push(self, s: Simplex) -> tuple[Simplex, int]:
        """Image simplex with orientation sign; sign 0 when the image is degenerate."""
        return sort_with_sign(self.image_vertices(s))

    def validate(self) -> ValidationReport:
        out = []
        for s in self.source.all_simplices():
            if self.image(s) not in self.target:
                out.append(Violation("not-simplicial", f"image of {s} is not a simplex", (s,)))
        return ValidationReport(tuple(out))

    def compose(self, after: "SimplicialMap") -> "SimplicialMap":
        """``after`` applied after ``self``."""
        return SimplicialMap(self.source, after.target, tuple(after.images[i] for i in self.images))

    def label_map(self) -> dict:
        return {
            self.source.vertices[i]: self.target.vertices[j] for i, j in enumerate(self.images)
        }


@dataclass(frozen=True, eq=False)
class SimplexChain:
    """Rational chain on a complex; keys are sorted simplices in reference orientation."""

    complex: SimplicialComplex
    coefficients: Mapping[Simplex, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for s, v in self.coefficients.items():
            v = Fraction(v)
            if v:
                if tuple(s) not in self.complex:
                    raise ValueError(f"{s} is not a simplex of the complex")
                clean[tuple(s)] = v
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def from_vector(cls, c: SimplicialComplex, k: int, vec: Sequence) -> "SimplexChain":
        return cls(c, dict(zip(c.simplices_of_dim(k), vec)))

    def vector(self, k: int) -> list[Fraction]:
        return [self.coefficients.get(s, Fraction(0)) for s in self.complex.simplices_of_dim(k)]

    @property
    def dims(self) -> set[int]:
        return {len(s) - 1 for s in self.coefficients}

    def is_zero(self) -> bool:
        return not self.coefficients

    def boundary(self) -> "SimplexChain":
        acc: dict[Simplex, Fraction] = {}
        for s, v in self.coefficients.items():
            if len(s) == 1:
                continue
            for i, f in faces_of(s):
                acc[f] = acc.get(f, Fraction(0)) + (-1) ** i * v
        return SimplexChain(self.complex, acc)

    def is_cycle(self) -> bool:
        return self.boundary().is_zero()

    def __add__(self, other: "SimplexChain") -> "SimplexChain":
        if other.complex != self.complex:
            raise ValueError("chains live on different complexes")
        acc = dict(self.coefficients)
        for s, v in other.coefficients.items():
            acc[s] = acc.get(s, Fraction(0)) + v
        return SimplexChain(self.complex, acc)

    def __neg__(self) -> "SimplexChain":
        return SimplexChain(self.complex, {s: -v for s, v in self.coefficients.items()})

    def __sub__(self, other: "SimplexChain") -> "SimplexChain":
        return self + (-other)

    def __rmul__(self, a) -> "SimplexChain":
        a = Fraction(a)
        return SimplexChain(self.complex, {s: a * v for s, v in self.coefficients.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplexChain):
            return NotImplemented
        return self.complex == other.complex and self.coefficients == other.coefficients

    def push(self, f: SimplicialMap) -> "SimplexChain":
        acc: dict[Simplex, Fraction] = {}
        for s, v in self.coefficients.items():
            img, sgn = f.push(s)
            if sgn:
                acc[img] = acc.get(img, Fraction(0)) + sgn * v
        return SimplexChain(f.target, acc)

    def __repr__(self) -> str:
        terms = " ".join(
            f"{v:+}*{list(self.complex.labels(s))}" for s, v in sorted(self.coefficients.items())
        )
        return f"SimplexChain({terms or '0'})"


def barycentric_subdivision(
    c: SimplicialComplex,
) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """First barycentric subdivision and the carrier of each new vertex.

    New vertices are the simplices of ``c``, ordered by (dimension, simplex), and
    labelled by the tuple of labels of the simplex they subdivide.  A top simplex
    of the subdivision is a flag, so its sorted vertex order runs from the
    smallest face to the largest.
    """
    old = c.all_simplices()
    order = {s: i for i, s in enumerate(old)}
    labels = [c.labels(s) for s in old]
    flags = []
    for top in c.maximal_simplices():
        for chain in _flags(top):
            flags.append(tuple(order[s] for s in chain))
    sd = SimplicialComplex.from_index_simplices(labels, flags)
    return sd, {i: s for i, s in enumerate(old)}


def _flags(s: Simplex) -> Iterator[tuple[Simplex, ...]]:
    if len(s) == 1:
        yield (s,)
        return
    for _, f in faces_of(s):
        for chain in _flags(f):
            yield chain + (s,)


def flag_sign(flag: Sequence[Simplex]) -> int:
    """Orientation of the subdivision simplex of ``flag`` relative to its top simplex.

    The flag adds one vertex of the top simplex at a time; the sign is the parity
    of that order of addition, read as a permutation of the top's sorted vertices.
    """
    top = flag[-1]
    pos = {v: i for i, v in enumerate(top)}
    added = [flag[0][0]]
    for a, b in zip(flag, flag[1:]):
        (v,) = set(b) - set(a)
        added.append(v)
    return permutation_sign([pos[v] for v in added])


@dataclass(frozen=True)
class ShuffleProduct:
    complex: SimplicialComplex
    left: SimplicialMap
    right: SimplicialMap
    signs: Mapping[tuple[Simplex, Simplex], tuple[tuple[Simplex, int], ...]]

    def cell(self, a: Simplex, b: Simplex) -> tuple[tuple[Simplex, int], ...]:
        return self.signs[(a, b)]


def _shuffles(p: int, q: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Monotone lattice paths from (0,0) to (p,q) with their step sequences."""

    def walk(a: int, b: int, path: list, steps: list):
        if a == p and b == q:
            yield tuple(path), tuple(steps)
            return
        if a < p:
            path.append((a + 1, b))
            steps.append(0)
            yield from walk(a + 1, b, path, steps)
            path.pop()
            steps.pop()
        if b < q:
            path.append((a, b + 1))
            steps.append(1)
            yield from walk(a, b + 1, path, steps)
            path.pop()
            steps.pop()

    yield from walk(0, 0, [(0, 0)], [])


def shuffle_sign(steps: Sequence[int]) -> int:
    """Parity of the (p,q)-shuffle: count right-steps that precede each left-step."""
    inversions = 0
    seen_right = 0
    for s in steps:
        if s == 1:
            seen_right += 1
        else:
            inversions += seen_right
    return -1 if inversions % 2 else 1


def shuffle_product(c1: SimplicialComplex, c2: SimplicialComplex) -> ShuffleProduct:
    """Triangulate |c1| x |c2| by staircase simplices in every cell pair.

    Product vertices are pairs ordered lexicographically, so a staircase simplex
    is already sorted.  ``signs[(a, b)]`` lists the C(p+q, p) top simplices of
    the cell a x b with the sign of their shuffle.
    """
    n2 = len(c2.vertices)
    verts = [(u, w) for u in c1.vertices for w in c2.vertices]
    signs: dict = {}
    tops = []
    for a in c1.all_simplices():
        for b in c2.all_simplices():
            cell = []
            for path, steps in _shuffles(len(a) - 1, len(b) - 1):
                s = tuple(a[i] * n2 + b[j] for i, j in path)
                cell.append((s, shuffle_sign(steps)))
            signs[(a, b)] = tuple(cell)
            tops.extend(s for s, _ in cell)
    prod = SimplicialComplex.from_index_simplices(verts, tops)
    left = SimplicialMap(prod, c1, tuple(i // n2 for i in range(len(verts))))
    right = SimplicialMap(prod, c2, tuple(i % n2 for i in range(len(verts))))
    return ShuffleProduct(prod, left, right, signs)


def connected_components(c: SimplicialComplex) -> list[SimplicialComplex]:
    """Maximal vertex-connected subcomplexes, in order of their first vertex."""
    parent = list(range(len(c.vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in c.simplices_of_dim(1):
        a, b = find(s[0]), find(s[1])
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[Simplex]] = {}
    for s in c.maximal_simplices():
        groups.setdefault(find(s[0]), []).append(s)
    return [c.subcomplex(groups[r]) for r in sorted(groups)]


def binomial_cell_count(p: int, q: int) -> int:
    return comb(p + q, p)
