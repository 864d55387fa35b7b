"""Exact linear algebra over the rationals.

Everything structural (ranks, null spaces, membership in the stoichiometric
subspace) goes through :class:`RationalMatrix` so that the answers are
certificates rather than floating-point estimates.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


class RationalMatrix:
    """Dense matrix of :class:`fractions.Fraction` entries.

    Immutable by convention: no method mutates ``self``.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self._rows = tuple(tuple(_frac(v) for v in row) for row in rows)
        self.nrows = len(self._rows)
        if self.nrows:
            widths = {len(r) for r in self._rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError(f"expected {ncols} columns, got {self.ncols}")
        else:
            self.ncols = 0 if ncols is None else ncols

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls(([c[i] for c in cols] for i in range(nrows)), ncols=len(cols))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls(([0] * ncols for _ in range(nrows)), ncols=ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in r) for r in self._rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: [{body}])"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.columns(), ncols=self.nrows)

    T = property(transpose)

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        vv = [_frac(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, vv)), Fraction(0)) for r in self._rows)

    def to_float(self):
        import numpy as np

        return np.array([[float(v) for v in r] for r in self._rows], dtype=float).reshape(
            self.nrows, self.ncols
        )

    def rref(self) -> tuple["RationalMatrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot columns.

        The RREF of a matrix is unique, so the result does not depend on the
        pivot choice made along the way.
        """
        m = [list(r) for r in self._rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r >= self.nrows:
                break
            p = next((i for i in range(r, self.nrows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [v * inv for v in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return RationalMatrix(m, ncols=self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of ``{v : M v = 0}``, one vector per free column."""
        R, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -R[i, f]
            basis.append(tuple(v))
        return basis

    def left_nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of ``{w : w^T M = 0}``."""
        return self.transpose().nullspace()

    def column_space_basis(self) -> list[tuple[Fraction, ...]]:
        """Independent columns of ``self`` spanning its column space."""
        _, pivots = self.rref()
        return [self.column(j) for j in pivots]

    def solve(self, b: Sequence) -> tuple[Fraction, ...] | None:
        """One solution of ``M y = b`` or ``None`` when inconsistent."""
        if len(b) != self.nrows:
            raise ValueError("dimension mismatch")
        aug = RationalMatrix([list(r) + [_frac(bi)] for r, bi in zip(self._rows, b)],
                             ncols=self.ncols + 1)
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        y = [Fraction(0)] * self.ncols
        for i, p in enumerate(pivots):
            y[p] = R[i, self.ncols]
        return tuple(y)


def integer_scale(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest integer multiple of ``v`` with coprime entries (sign kept)."""
    fr = [_frac(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
