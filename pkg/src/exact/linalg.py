"""Exact rational and integer linear algebra."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ

from ..errors import ValidationError

logger = logging.getLogger(__name__)

Rational = Fraction
IntMatrix = Tuple[Tuple[int, ...], ...]
QVector = Tuple[Fraction, ...]

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value: object) -> Fraction:
    """Coerce an int, a Fraction or a ``"p/q"`` string to an exact rational."""

    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"真偽値は有理数として扱えません: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_PATTERN.match(value)
        if match is None:
            raise ValidationError(f"有理数として解釈できません: {value!r}")
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise ValidationError(f"分母が 0 です: {value!r}")
        return Fraction(int(match.group(1)), denominator)
    raise ValidationError(f"有理数として解釈できません: {value!r}")


def format_rational(value: Fraction) -> str:
    """Render as ``"p"`` or ``"p/q"``."""

    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dot(left: Sequence[Fraction], right: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(left, right)), Fraction(0))


@dataclass(frozen=True)
class QMatrix:
    """Dense matrix over the rationals."""

    rows: Tuple[QVector, ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]], ncols: Optional[int] = None) -> "QMatrix":
        data = tuple(tuple(to_rational(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise ValidationError("行の長さが揃っていません。")
        return cls(data, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> QVector:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "QMatrix":
        return QMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def apply(self, vector: Sequence[Fraction]) -> QVector:
        if len(vector) != self.ncols:
            raise ValidationError("ベクトルの長さが列数と一致しません。")
        return tuple(dot(row, vector) for row in self.rows)

    def rref(self) -> Tuple["QMatrix", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns (Gauss-Jordan)."""

        work: List[List[Fraction]] = [list(row) for row in self.rows]
        pivots: List[int] = []
        pivot_row = 0
        for col in range(self.ncols):
            if pivot_row == len(work):
                break
            found = next(
                (r for r in range(pivot_row, len(work)) if work[r][col] != 0), None
            )
            if found is None:
                continue
            work[pivot_row], work[found] = work[found], work[pivot_row]
            lead = work[pivot_row][col]
            work[pivot_row] = [x / lead for x in work[pivot_row]]
            for r in range(len(work)):
                if r != pivot_row and work[r][col] != 0:
                    factor = work[r][col]
                    work[r] = [x - factor * y for x, y in zip(work[r], work[pivot_row])]
            pivots.append(col)
            pivot_row += 1
        return QMatrix(tuple(tuple(row) for row in work), self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[QVector]:
        """Basis of the right kernel, one vector per free column."""

        reduced, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis: List[QVector] = []
        for f in free:
            vector = [Fraction(0)] * self.ncols
            vector[f] = Fraction(1)
            for row_index, p in enumerate(pivots):
                vector[p] = -reduced.rows[row_index][f]
            basis.append(tuple(vector))
        return basis

    def solve(self, rhs: Sequence[object]) -> Optional[QVector]:
        """Some exact solution of ``self @ x = rhs``, or None when inconsistent."""

        if len(rhs) != self.nrows:
            raise ValidationError("右辺の長さが行数と一致しません。")
        augmented = QMatrix.from_rows(
            [list(row) + [b] for row, b in zip(self.rows, rhs)], self.ncols + 1
        )
        reduced, pivots = augmented.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        solution = [Fraction(0)] * self.ncols
        for row_index, p in enumerate(pivots):
            solution[p] = reduced.rows[row_index][self.ncols]
        return tuple(solution)

    def row_space_contains(self, other: "QMatrix") -> bool:
        """True when every row of ``other`` lies in the row space of ``self``."""

        if other.ncols != self.ncols:
            return False
        transposed = self.transpose()
        if self.nrows == 0:
            return all(all(x == 0 for x in row) for row in other.rows)
        return all(transposed.solve(row) is not None for row in other.rows)


class HermiteForm(NamedTuple):
    h: IntMatrix
    u: IntMatrix
    rank: int


def _int_rows(matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    rows = [list(row) for row in matrix]
    width = len(rows[0]) if rows else 0
    for row in rows:
        if len(row) != width:
            raise ValidationError("行の長さが揃っていません。")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValidationError(f"整数行列ではありません: {x!r}")
    return rows


def hnf(matrix: Sequence[Sequence[int]]) -> HermiteForm:
    """Row Hermite normal form ``H = U·M`` with ``U`` unimodular.

    Pivots are positive, strictly move right, entries above a pivot are
    reduced into ``[0, pivot)`` and zero rows sit at the bottom.
    """

    h = _int_rows(matrix)
    nrows = len(h)
    ncols = len(h[0]) if h else 0
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def combine(p: int, r: int, x: int, y: int, s: int, t: int) -> None:
        # (row_p, row_r) <- (x*row_p + y*row_r, s*row_p + t*row_r)
        for rows in (h, u):
            new_p = [x * a + y * b for a, b in zip(rows[p], rows[r])]
            new_r = [s * a + t * b for a, b in zip(rows[p], rows[r])]
            rows[p], rows[r] = new_p, new_r

    pivot_row = 0
    for col in range(ncols):
        if pivot_row == nrows:
            break
        for r in range(pivot_row + 1, nrows):
            b = h[r][col]
            if b == 0:
                continue
            a = h[pivot_row][col]
            x, y, g = ZZ.gcdex(ZZ(a), ZZ(b))
            combine(pivot_row, r, int(x), int(y), -b // int(g), a // int(g))
        if h[pivot_row][col] == 0:
            continue
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-v for v in h[pivot_row]]
            u[pivot_row] = [-v for v in u[pivot_row]]
        lead = h[pivot_row][col]
        for r in range(pivot_row):
            q = h[r][col] // lead
            if q:
                h[r] = [a - q * b for a, b in zip(h[r], h[pivot_row])]
                u[r] = [a - q * b for a, b in zip(u[r], u[pivot_row])]
        pivot_row += 1

    logger.debug("Hermite normal form computed", extra={"rank": pivot_row})
    return HermiteForm(
        tuple(tuple(row) for row in h), tuple(tuple(row) for row in u), pivot_row
    )
