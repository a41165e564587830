"""
Dense integer matrices and the Smith normal form.

Every value here is immutable; matrix operations return new matrices. The
Smith normal form is computed with explicit unimodular transforms so that
callers can certify U·P·V = D themselves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import Rational
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from heegaard.errors import DimensionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegerMatrix:
    """
    Row-major dense matrix of Python integers.

    Attributes:
        rows: number of rows
        cols: number of columns
        entries: the rows*cols entries, row after row
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative dimensions {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntegerMatrix:
        data = [[int(x) for x in row] for row in rows]
        width = len(data[0]) if data else (cols or 0)
        if any(len(row) != width for row in data):
            raise DimensionError("rows have different lengths")
        return cls(len(data), width, tuple(x for row in data for x in row))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> IntegerMatrix:
        cols = rows if cols is None else cols
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls.diagonal_matrix([1] * n)

    @classmethod
    def diagonal_matrix(cls, values: Sequence[int]) -> IntegerMatrix:
        n = len(values)
        entries = [0] * (n * n)
        for i, v in enumerate(values):
            entries[i * n + i] = int(v)
        return cls(n, n, tuple(entries))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[IntegerMatrix]]) -> IntegerMatrix:
        """Assemble a block matrix; blocks in a row share their row count."""
        rows: list[list[int]] = []
        width = None
        for block_row in blocks:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise DimensionError("blocks in one row must have equal heights")
            for i in range(height):
                rows.append([x for b in block_row for x in b.row(i)])
            row_width = sum(b.cols for b in block_row)
            if width is not None and row_width != width:
                raise DimensionError("block rows must have equal widths")
            width = row_width
        return cls.from_rows(rows, cols=width or 0)

    @classmethod
    def direct_sum(cls, *parts: IntegerMatrix) -> IntegerMatrix:
        rows = sum(p.rows for p in parts)
        cols = sum(p.cols for p in parts)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for p in parts:
            for i in range(p.rows):
                for j in range(p.cols):
                    out[r0 + i][c0 + j] = p[i, j]
            r0 += p.rows
            c0 += p.cols
        return cls.from_rows(out, cols=cols)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> IntegerMatrix:
        """The submatrix of rows r0..r1-1 and columns c0..c1-1."""
        return IntegerMatrix.from_rows(
            [self.row(i)[c0:c1] for i in range(r0, r1)], cols=max(c1 - c0, 0)
        )

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.T

    # -- arithmetic ---------------------------------------------------------

    @property
    def T(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], cols=self.rows
        )

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._check_same_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._check_same_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, scalar: int) -> IntegerMatrix:
        if not isinstance(scalar, int):
            return NotImplemented
        return IntegerMatrix(self.rows, self.cols, tuple(scalar * a for a in self.entries))

    __rmul__ = __mul__

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        columns = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            row = self.row(i)
            out.extend(sum(a * b for a, b in zip(row, col)) for col in columns)
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def mod(self, modulus: int) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(a % modulus for a in self.entries))

    def _check_same_shape(self, other: IntegerMatrix) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    # -- exact linear algebra via sympy ------------------------------------

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(x) for x in self.row(i)] for i in range(self.rows)], self.shape, ZZ)

    def det(self) -> int:
        if not self.is_square:
            raise DimensionError(f"determinant of a non-square {self.shape} matrix")
        if self.rows == 0:
            return 1
        return int(self.to_domain_matrix().det())

    def inverse_unimodular(self) -> IntegerMatrix:
        """Exact inverse of a matrix with determinant ±1."""
        d = self.det()
        if abs(d) != 1:
            raise ValueError(f"matrix with determinant {d} is not unimodular")
        if self.rows == 0:
            return self
        inverse = self.to_domain_matrix().convert_to(QQ).inv()
        return IntegerMatrix.from_rows(
            [[int(_to_fraction(x)) for x in row] for row in inverse.to_list()]
        )

    def __str__(self) -> str:
        if not self.entries:
            return f"[{self.rows}x{self.cols} empty]"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in self.row(i)) for i in range(self.rows))


def _to_fraction(x) -> Fraction:
    value = QQ.to_sympy(x) if not isinstance(x, Rational) else x
    return Fraction(int(value.p), int(value.q))


def rational_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square matrix of Fractions."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    matrix = DomainMatrix(
        [[QQ(x.numerator, x.denominator) for x in row] for row in rows], (n, n), QQ
    )
    return _to_fraction(matrix.det())


@dataclass(frozen=True)
class SmithForm:
    """
    Smith normal form U·P·V = D with unimodular U, V.

    U_inv and V_inv are carried along so that generators of the cokernel
    (the columns of U_inv) are available without a second inversion.
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    diag: tuple[int, ...]
    U_inv: IntegerMatrix
    V_inv: IntegerMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def is_valid_for(self, P: IntegerMatrix) -> bool:
        """Recompose and check every SmithForm invariant."""
        if self.U @ P @ self.V != self.D:
            return False
        if abs(self.U.det()) != 1 or abs(self.V.det()) != 1:
            return False
        return is_smith_diagonal(self.D)


def is_smith_diagonal(D: IntegerMatrix) -> bool:
    n = min(D.rows, D.cols)
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j] != 0:
                return False
    diag = D.diagonal()
    if any(d < 0 for d in diag):
        return False
    seen_zero = False
    for i in range(n):
        if diag[i] == 0:
            seen_zero = True
        elif seen_zero:
            return False
        if diag[i] and i + 1 < n and diag[i + 1] % diag[i]:
            return False
    return True


def smith_normal_form(P: IntegerMatrix) -> SmithForm:
    """
    Smith normal form with unimodular transforms.

    The pivot is always the nonzero entry of smallest absolute value in the
    remaining submatrix, ties broken by lowest (row, col), so the result is
    deterministic for a given input.

    Args:
        P: any integer matrix

    Returns:
        SmithForm with U·P·V = D, nonnegative diagonal, d_i | d_(i+1) and
        nonzero diagonal entries before zeros
    """
    m, n = P.shape
    A = P.tolist()
    U = IntegerMatrix.identity(m).tolist()
    U_inv = IntegerMatrix.identity(m).tolist()
    V = IntegerMatrix.identity(n).tolist()
    V_inv = IntegerMatrix.identity(n).tolist()

    # Row operation "row_i += c*row_k" is left multiplication by E; its inverse
    # "row_i -= c*row_k" applied as a column operation keeps U_inv in step.
    def add_row(i: int, k: int, c: int) -> None:
        A[i] = [a + c * b for a, b in zip(A[i], A[k])]
        U[i] = [a + c * b for a, b in zip(U[i], U[k])]
        for row in U_inv:
            row[k] -= c * row[i]

    def add_col(j: int, k: int, c: int) -> None:
        for row in A:
            row[j] += c * row[k]
        for row in V:
            row[j] += c * row[k]
        V_inv[k] = [a - c * b for a, b in zip(V_inv[k], V_inv[j])]

    def swap_rows(i: int, k: int) -> None:
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for row in U_inv:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j: int, k: int) -> None:
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        V_inv[j], V_inv[k] = V_inv[k], V_inv[j]

    pivots = 0
    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a and (pivot is None or abs(a) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            pivots += 1
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            offender = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for row in U_inv:
                row[t] = -row[t]

    logger.debug("Smith normal form of a %dx%d matrix after %d pivots", m, n, pivots)
    D = IntegerMatrix.from_rows(A, cols=n)
    return SmithForm(
        U=IntegerMatrix.from_rows(U, cols=m),
        D=D,
        V=IntegerMatrix.from_rows(V, cols=n),
        diag=tuple(D.diagonal()),
        U_inv=IntegerMatrix.from_rows(U_inv, cols=m),
        V_inv=IntegerMatrix.from_rows(V_inv, cols=n),
    )
