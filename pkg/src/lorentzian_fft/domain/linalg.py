"""Immutable exact matrices over the rationals."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from typing import Any

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .scalars import Rational, render_rational, to_rational

LOGGER = logging.getLogger(__name__)


class ShapeMismatch(ValueError):
    """Raised when matrix shapes do not fit an operation."""


class SingularMatrix(ValueError):
    """Raised when inverting a matrix without full rank."""


class RationalMatrix:
    """Exact ``QQ`` matrix; arithmetic is delegated to ``DomainMatrix``."""

    __slots__ = ("_rows", "_shape", "_domain_matrix")

    def __init__(
        self, rows: Iterable[Iterable[Any]], shape: tuple[int, int]
    ) -> None:
        entries = tuple(
            tuple(to_rational(value) for value in row) for row in rows
        )
        n_rows, n_cols = shape
        if len(entries) != n_rows or any(
            len(row) != n_cols for row in entries
        ):
            raise ShapeMismatch(
                f"Rows do not match declared shape {shape}"
            )
        self._rows = entries
        self._shape = shape
        self._domain_matrix: DomainMatrix | None = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> RationalMatrix:
        n_cols = len(rows[0]) if rows else 0
        return cls(rows, (len(rows), n_cols))

    @classmethod
    def from_columns(
        cls, columns: Sequence[Sequence[Any]], n_rows: int
    ) -> RationalMatrix:
        rows = [
            [column[i] for column in columns] for i in range(n_rows)
        ]
        return cls(rows, (n_rows, len(columns)))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> RationalMatrix:
        return cls(
            ([0] * n_cols for _ in range(n_rows)), (n_rows, n_cols)
        )

    @classmethod
    def identity(cls, size: int) -> RationalMatrix:
        return cls(
            (
                [1 if i == j else 0 for j in range(size)]
                for i in range(size)
            ),
            (size, size),
        )

    @classmethod
    def permutation(
        cls, mapping: Sequence[int], size: int | None = None
    ) -> RationalMatrix:
        """Matrix sending basis vector ``j`` to basis vector ``mapping[j]``."""

        n_rows = len(mapping) if size is None else size
        rows = [[0] * len(mapping) for _ in range(n_rows)]
        for j, i in enumerate(mapping):
            rows[i][j] = 1
        return cls(rows, (n_rows, len(mapping)))

    @classmethod
    def _from_domain(cls, matrix: DomainMatrix) -> RationalMatrix:
        n_rows, n_cols = matrix.shape
        dense = matrix.to_Matrix()
        result = cls(
            (
                [QQ.from_sympy(dense[i, j]) for j in range(n_cols)]
                for i in range(n_rows)
            ),
            (n_rows, n_cols),
        )
        result._domain_matrix = matrix
        return result

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> tuple[tuple[Rational, ...], ...]:
        return self._rows

    def entry(self, i: int, j: int) -> Rational:
        return self._rows[i][j]

    def column(self, j: int) -> tuple[Rational, ...]:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> tuple[tuple[Rational, ...], ...]:
        return tuple(self.column(j) for j in range(self._shape[1]))

    def domain_matrix(self) -> DomainMatrix:
        if self._domain_matrix is None:
            self._domain_matrix = DomainMatrix(
                [list(row) for row in self._rows], self._shape, QQ
            )
        return self._domain_matrix

    def transpose(self) -> RationalMatrix:
        n_rows, n_cols = self._shape
        return RationalMatrix(
            (self.column(j) for j in range(n_cols)), (n_cols, n_rows)
        )

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self._shape[1] != other._shape[0]:
            raise ShapeMismatch(
                f"Cannot multiply {self._shape} by {other._shape}"
            )
        if 0 in self._shape or 0 in other._shape:
            return RationalMatrix.zeros(self._shape[0], other._shape[1])
        product = self.domain_matrix().matmul(other.domain_matrix())
        return RationalMatrix._from_domain(product)

    def apply(self, vector: Sequence[Any]) -> tuple[Rational, ...]:
        column = RationalMatrix.from_columns([vector], len(vector))
        return (self @ column).column(0)

    def _elementwise(
        self, other: RationalMatrix, sign: int
    ) -> RationalMatrix:
        if self._shape != other._shape:
            raise ShapeMismatch(
                f"Shapes {self._shape} and {other._shape} differ"
            )
        return RationalMatrix(
            (
                [a + sign * b for a, b in zip(row, other_row)]
                for row, other_row in zip(self._rows, other._rows)
            ),
            self._shape,
        )

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, 1)

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, -1)

    def __neg__(self) -> RationalMatrix:
        return self.scaled(-1)

    def scaled(self, factor: Any) -> RationalMatrix:
        factor = to_rational(factor)
        return RationalMatrix(
            ([factor * value for value in row] for row in self._rows),
            self._shape,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._shape == other._shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._shape, self._rows))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.render()!r})"

    def is_zero(self) -> bool:
        return all(value == 0 for row in self._rows for value in row)

    def is_square(self) -> bool:
        return self._shape[0] == self._shape[1]

    def rank(self) -> int:
        if 0 in self._shape:
            return 0
        return int(self.domain_matrix().rank())

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self._shape[0]

    def inverse(self) -> RationalMatrix:
        if not self.is_invertible():
            raise SingularMatrix(
                f"Matrix of shape {self._shape} is not invertible"
            )
        if self._shape == (0, 0):
            return self
        return RationalMatrix._from_domain(self.domain_matrix().inv())

    def render(self) -> list[list[str]]:
        return [
            [render_rational(value) for value in row] for row in self._rows
        ]


__all__ = ["RationalMatrix", "ShapeMismatch", "SingularMatrix"]
