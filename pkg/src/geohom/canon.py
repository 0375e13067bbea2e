"""Canonical labelling of small decorated pure complexes.

Individualization-refinement over ordered vertex partitions: colour
refinement with simplex, facet and orbit signatures, then branching on the
first non-singleton cell.  Every leaf yields a certificate; the least one over
all leaves and both orientations is the canonical form.  If the least
certificate is reached with both orientations, the object has an
orientation-reversing automorphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .simplicial import Simplex, sort_with_sign

__all__ = ["Decorated", "CanonicalForm", "canonical_form"]


@dataclass(frozen=True)
class Decorated:
    colors: tuple[int, ...]
    tops: tuple[Simplex, ...]
    orientation: Mapping[Simplex, int]
    facets: tuple[frozenset, ...] = ()
    perms: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class CanonicalForm:
    certificate: tuple
    order: tuple[int, ...]  # order[new] = old vertex
    sign: int  # +1 keep orientation, -1 flip, 0 both reachable


def _rank(keys: Sequence) -> list[int]:
    uniq = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [uniq[k] for k in keys]


class _Refiner:
    def __init__(self, obj: Decorated):
        n = len(obj.colors)
        self.n = n
        self.obj = obj
        self.tops_at: list[list[Simplex]] = [[] for _ in range(n)]
        for t in obj.tops:
            for v in t:
                self.tops_at[v].append(t)
        self.facet_verts = [sorted({v for s in grp for v in s}) for grp in obj.facets]
        self.facets_at: list[list[int]] = [[] for _ in range(n)]
        for i, vs in enumerate(self.facet_verts):
            for v in vs:
                self.facets_at[v].append(i)

    def refine(self, colors: list[int]) -> list[int]:
        count = len(set(colors))
        while True:
            sigs = []
            for v in range(self.n):
                tops = tuple(
                    sorted(tuple(sorted(colors[u] for u in t if u != v)) for t in self.tops_at[v])
                )
                facets = tuple(
                    sorted(tuple(sorted(colors[u] for u in self.facet_verts[i])) for i in self.facets_at[v])
                )
                orbit = tuple(sorted(colors[p[v]] for p in self.obj.perms))
                sigs.append((colors[v], tops, facets, orbit))
            new = _rank(sigs)
            new_count = len(set(new))
            if new_count == count:
                return new
            colors, count = new, new_count

    def leaves(self, colors: list[int]) -> Iterator[list[int]]:
        colors = self.refine(colors)
        if len(set(colors)) == self.n:
            yield colors
            return
        sizes: dict[int, int] = {}
        for c in colors:
            sizes[c] = sizes.get(c, 0) + 1
        cell = min(c for c, k in sizes.items() if k > 1)
        for v in [u for u in range(self.n) if colors[u] == cell]:
            split = [2 * c + (1 if c == cell and u != v else 0) for u, c in enumerate(colors)]
            yield from self.leaves(_rank(split))


def _certificate(obj: Decorated, rank: Sequence[int], flip: int) -> tuple:
    n = len(rank)
    order = sorted(range(n), key=lambda v: rank[v])
    colors = tuple(obj.colors[v] for v in order)
    tops = []
    for t in obj.tops:
        img, sgn = sort_with_sign([rank[v] for v in t])
        # negated so that the least certificate favours positive orientations
        tops.append((img, -flip * sgn * obj.orientation[t]))
    facets = tuple(
        sorted(tuple(sorted(tuple(sorted(rank[v] for v in s)) for s in grp)) for grp in obj.facets)
    )
    perms = tuple(
        sorted(tuple(rank[p[order[i]]] for i in range(n)) for p in obj.perms)
    )
    return (n, colors, tuple(sorted(tops)), facets, perms)


def canonical_form(obj: Decorated) -> CanonicalForm:
    ref = _Refiner(obj)
    best = None
    best_order = None
    signs: set[int] = set()
    for leaf in ref.leaves(_rank(obj.colors)):
        for flip in (1, -1):
            cert = _certificate(obj, leaf, flip)
            if best is None or cert < best:
                best, signs = cert, {flip}
                best_order = tuple(sorted(range(len(leaf)), key=lambda v: leaf[v]))
            elif cert == best:
                signs.add(flip)
    sign = signs.pop() if len(signs) == 1 else 0
    return CanonicalForm(best, best_order, sign)
