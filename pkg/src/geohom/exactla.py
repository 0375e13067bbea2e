"""Exact sparse linear algebra over the rationals.

Every homology computation in the package reduces to rank, kernel and
image-membership questions for boundary matrices.  Entries are
``fractions.Fraction`` values; nothing is ever rounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RationalSparseMatrix",
    "rank",
    "kernel_basis",
    "solve_in_image",
]


@dataclass(frozen=True)
class RationalSparseMatrix:
    nrows: int
    ncols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        clean: dict[tuple[int, int], Fraction] = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise IndexError(f"entry ({r}, {c}) outside {self.nrows}x{self.ncols}")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalSparseMatrix":
        return cls(nrows, ncols, {})

    @classmethod
    def identity(cls, n: int) -> "RationalSparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "RationalSparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(
            nrows,
            ncols,
            {(i, j): Fraction(v) for i, row in enumerate(rows) for j, v in enumerate(row) if v},
        )

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[object]]) -> "RationalSparseMatrix":
        return cls(
            nrows,
            len(columns),
            {(i, j): Fraction(v) for j, col in enumerate(columns) for i, v in enumerate(col) if v},
        )

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "RationalSparseMatrix":
        return RationalSparseMatrix(
            self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def matvec(self, x: Sequence[object]) -> list[Fraction]:
        if len(x) != self.ncols:
            raise ValueError(f"vector of length {len(x)} for {self.ncols} columns")
        out = [Fraction(0)] * self.nrows
        for (r, c), v in self.entries.items():
            if x[c]:
                out[r] += v * x[c]
        return out

    def matmul(self, other: "RationalSparseMatrix") -> "RationalSparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        by_row: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, {})[c] = v
        acc: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, {}).items():
                acc[(r, c)] = acc.get((r, c), Fraction(0)) + v * w
        return RationalSparseMatrix(self.nrows, other.ncols, acc)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "RationalSparseMatrix":
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return RationalSparseMatrix(
            self.nrows,
            self.ncols,
            {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()},
        )

    def is_zero(self) -> bool:
        return not self.entries


class _Elimination:
    """Reduced row echelon form with a Markowitz-style pivot choice.

    Columns are processed left to right.  Among the unused rows with a nonzero
    in the current column, the pivot is the row with the fewest nonzeros (least
    fill when it is subtracted from the others); ties go to the lowest row
    index.  Pivots are scaled to 1 and cleared from every other row.
    """

    def __init__(self, m: RationalSparseMatrix, rhs: Optional[Sequence[Fraction]] = None):
        self.ncols = m.ncols
        rows: list[dict[int, Fraction]] = [dict() for _ in range(m.nrows)]
        for (r, c), v in m.entries.items():
            rows[r][c] = v
        if rhs is not None:
            for r, v in enumerate(rhs):
                if v:
                    rows[r][m.ncols] = Fraction(v)
        col_rows: dict[int, set[int]] = {}
        for r, row in enumerate(rows):
            for c in row:
                col_rows.setdefault(c, set()).add(r)
        used = [False] * m.nrows
        pivots: list[tuple[int, int]] = []
        for c in range(m.ncols):
            cands = [r for r in col_rows.get(c, ()) if not used[r]]
            if not cands:
                continue
            p = min(cands, key=lambda r: (len(rows[r]), r))
            used[p] = True
            prow = rows[p]
            inv = 1 / prow[c]
            for k in prow:
                prow[k] *= inv
            for r in sorted(col_rows[c]):
                if r == p:
                    continue
                row = rows[r]
                f = row.get(c)
                if not f:
                    continue
                for k, v in prow.items():
                    nv = row.get(k, Fraction(0)) - f * v
                    if nv:
                        if k not in row:
                            col_rows.setdefault(k, set()).add(r)
                        row[k] = nv
                    else:
                        row.pop(k, None)
                        col_rows[k].discard(r)
            pivots.append((p, c))
        self.rows = rows
        self.pivots = pivots
        self.used = used


def rank(m: RationalSparseMatrix) -> int:
    return len(_Elimination(m).pivots)


def kernel_basis(m: RationalSparseMatrix) -> list[list[Fraction]]:
    """Basis of the null space, one vector per non-pivot column, in column order."""
    el = _Elimination(m)
    pivot_cols = {c: r for r, c in el.pivots}
    basis = []
    for free in range(m.ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * m.ncols
        v[free] = Fraction(1)
        for r, c in el.pivots:
            coef = el.rows[r].get(free)
            if coef:
                v[c] = -coef
        basis.append(v)
    return basis


def solve_in_image(m: RationalSparseMatrix, b: Sequence[object]) -> Optional[list[Fraction]]:
    """Some ``x`` with ``m @ x == b``, or ``None`` when ``b`` is not in the image."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side of length {len(b)} for {m.nrows} rows")
    el = _Elimination(m, [Fraction(v) for v in b])
    aug = m.ncols
    for r, row in enumerate(el.rows):
        if not el.used[r] and row.get(aug):
            return None
    x = [Fraction(0)] * m.ncols
    for r, c in el.pivots:
        x[c] = el.rows[r].get(aug, Fraction(0))
    return x


def span_rank(vectors: Iterable[Sequence[object]], length: int) -> int:
    vecs = list(vectors)
    return rank(RationalSparseMatrix.from_columns(length, vecs)) if vecs else 0


class EchelonBasis:
    """Incrementally grown basis in reduced form, for repeated span membership tests."""

    def __init__(self, length: int):
        self.length = length
        self._rows: dict[int, dict[int, Fraction]] = {}  # pivot column -> row with 1 at pivot

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[object]) -> dict[int, Fraction]:
        if len(v) != self.length:
            raise ValueError("vector length mismatch")
        r = {i: Fraction(x) for i, x in enumerate(v) if x}
        for p in sorted(self._rows):
            c = r.get(p)
            if c:
                for j, x in self._rows[p].items():
                    y = r.get(j, 0) - c * x
                    if y:
                        r[j] = y
                    else:
                        r.pop(j, None)
        return r

    def add(self, v: Sequence[object]) -> bool:
        """Insert ``v``; False when it already lies in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {j: x * inv for j, x in r.items()}
        for q, row in self._rows.items():
            c = row.get(p)
            if c:
                for j, x in r.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        row[j] = y
                    else:
                        row.pop(j, None)
        self._rows[p] = r
        return True
