"""Dense matrices over the max-plus semiring, with exact entries.

``+`` is the entrywise maximum, ``@`` is the max-plus product
``(A @ B)[i, j] = max_t(A[i, t] + B[t, j])`` and ``<=`` compares entrywise.
Matrices are immutable; every operation returns a new value, so instances can
be shared freely across threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .semiring import NEG_INF, POS_INF, Scalar, as_scalar, format_scalar


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


class NotSquare(ValueError):
    """A square matrix was required."""


class NotStarMatrix(ValueError):
    """A star matrix (equal to its own Kleene star) was required."""


def _closure(rows: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """All-pairs greatest walk weights (walk length >= 1), Floyd-Warshall style.

    Entry (i, j) is read as "best walk from node j to node i".  The update
    rule is symmetric in that reading, so the usual triple loop applies.
    When positive-weight circuits exist some entries may exceed the best
    simple-path weight; those pairs are exactly the ones later saturated
    to +inf, so unsaturated entries remain exact.
    """
    n = len(rows)
    d = [list(r) for r in rows]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            di = d[i]
            dik = di[k]
            if dik == NEG_INF:
                continue
            for j in range(n):
                v = dk[j]
                if v == NEG_INF:
                    continue
                if dik + v > di[j]:
                    di[j] = dik + v
    return d


class TropicalMatrix:
    """An immutable ``rows x cols`` matrix of max-plus scalars."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable]):
        grid = tuple(tuple(as_scalar(v) for v in row) for row in data)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("rows have unequal lengths")
        self._data = grid
        self.rows = len(grid)
        self.cols = width

    @classmethod
    def _wrap(cls, grid: tuple) -> "TropicalMatrix":
        # fast path for internally produced, already-valid grids
        self = object.__new__(cls)
        self._data = grid
        self.rows = len(grid)
        self.cols = len(grid[0])
        return self

    # -- constructors -------------------------------------------------

    @classmethod
    def epsilon(cls, rows: int, cols: int | None = None) -> "TropicalMatrix":
        """The all ``-inf`` matrix (the additive zero)."""
        cols = rows if cols is None else cols
        return cls._wrap(tuple((NEG_INF,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "TropicalMatrix":
        """Zeros on the diagonal, ``-inf`` elsewhere (the multiplicative one)."""
        return cls._wrap(
            tuple(tuple(0 if i == j else NEG_INF for j in range(n)) for i in range(n))
        )

    @classmethod
    def column(cls, values: Iterable) -> "TropicalMatrix":
        return cls([[v] for v in values])

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["TropicalMatrix"]]) -> "TropicalMatrix":
        """Assemble a matrix from a rectangular grid of blocks."""
        for brow in blocks:
            heights = {b.rows for b in brow}
            if len(heights) != 1:
                raise DimensionMismatch("blocks in one band have unequal heights")
        for j in range(len(blocks[0])):
            widths = {brow[j].cols for brow in blocks}
            if len(widths) != 1:
                raise DimensionMismatch("stacked blocks have unequal widths")
        grid = []
        for brow in blocks:
            for i in range(brow[0].rows):
                out: list[Scalar] = []
                for block in brow:
                    out.extend(block._data[i])
                grid.append(tuple(out))
        return cls._wrap(tuple(grid))

    # -- basic protocol -----------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def rmax_valued(self) -> bool:
        """True when no entry is ``+inf``."""
        return all(POS_INF not in row for row in self._data)

    @property
    def finite(self) -> bool:
        """True when every entry is a real number (no infinity of either sign)."""
        return all(
            v != NEG_INF and v != POS_INF for row in self._data for v in row
        )

    def to_rows(self) -> tuple[tuple[Scalar, ...], ...]:
        return self._data

    def column_values(self, j: int = 0) -> tuple[Scalar, ...]:
        return tuple(row[j] for row in self._data)

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        i, j = key
        return self._data[i][j]

    def __iter__(self) -> Iterator[tuple[Scalar, ...]]:
        return iter(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __le__(self, other: "TropicalMatrix") -> bool:
        self._check_same_shape(other)
        return all(
            a <= b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb)
        )

    def __ge__(self, other: "TropicalMatrix") -> bool:
        return other.__le__(self)

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_scalar(v) for v in row) for row in self._data
        )
        return f"TropicalMatrix[{body}]"

    def __str__(self) -> str:
        cells = [[format_scalar(v) for v in row] for row in self._data]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    def _check_same_shape(self, other: "TropicalMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    # -- semiring operations ------------------------------------------

    def __add__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        """Entrywise maximum."""
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return TropicalMatrix._wrap(
            tuple(
                tuple(a if a >= b else b for a, b in zip(ra, rb))
                for ra, rb in zip(self._data, other._data)
            )
        )

    def __matmul__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        """Max-plus product."""
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        b = other._data
        width = other.cols
        inner = self.cols
        grid = []
        for arow in self._data:
            out = [NEG_INF] * width
            for t in range(inner):
                a = arow[t]
                if a == NEG_INF:
                    continue
                brow = b[t]
                for j in range(width):
                    v = brow[j]
                    if v == NEG_INF:
                        continue
                    s = a + v
                    if s > out[j]:
                        out[j] = s
            grid.append(tuple(out))
        return TropicalMatrix._wrap(tuple(grid))

    def top_left(self, rows: int, cols: int) -> "TropicalMatrix":
        return TropicalMatrix._wrap(tuple(row[:cols] for row in self._data[:rows]))

    # -- path algebra ---------------------------------------------------

    def star(self) -> "TropicalMatrix":
        """Kleene star: entry (i, j) is the supremal weight of paths j -> i.

        The supremum runs over all finite paths, including the empty path
        when i = j, so the diagonal is at least 0.  An entry is ``+inf``
        exactly when node j reaches a node that lies on a positive-weight
        circuit which in turn reaches node i: pumping that circuit makes
        the path weight unbounded.  Computed as a greatest-walk sweep
        followed by a saturation pass over positive-diagonal nodes.
        """
        if not self.is_square:
            raise NotSquare("star is defined for square matrices only")
        n = self.rows
        d = _closure(self._data)
        out = [row[:] for row in d]
        for i in range(n):
            if out[i][i] < 0:
                out[i][i] = 0
        for k in range(n):
            if d[k][k] > 0:
                dk = d[k]
                sources = [j for j in range(n) if j == k or dk[j] != NEG_INF]
                targets = [i for i in range(n) if i == k or d[i][k] != NEG_INF]
                for i in targets:
                    oi = out[i]
                    for j in sources:
                        oi[j] = POS_INF
        return TropicalMatrix._wrap(tuple(tuple(row) for row in out))

    def has_positive_circuit(self) -> bool:
        """True when some circuit in the precedence graph has weight > 0.

        Zero-weight circuits are harmless and do not count.
        """
        if not self.is_square:
            raise NotSquare("circuits are defined for square matrices only")
        d = _closure(self._data)
        return any(d[k][k] > 0 for k in range(self.rows))

    def is_star_matrix(self) -> bool:
        """True when the matrix equals its own Kleene star."""
        if not self.is_square:
            raise NotSquare("star matrices are square")
        return self.star() == self


def image_member(star_matrix: TropicalMatrix, vector: Sequence) -> bool:
    """Membership of ``vector`` in the image of a star matrix.

    For a star matrix S the image ``{S @ u}`` coincides with the fixed
    points of S, so membership reduces to ``S @ x == x``.
    """
    if not star_matrix.is_star_matrix():
        raise NotStarMatrix("membership test requires a star matrix")
    x = TropicalMatrix.column(vector)
    if x.rows != star_matrix.cols:
        raise DimensionMismatch(
            f"vector of length {x.rows} against matrix {star_matrix.shape}"
        )
    return (star_matrix @ x) == x


def image_equal(a: TropicalMatrix, b: TropicalMatrix) -> bool:
    """True when the stars of ``a`` and ``b`` generate the same image."""
    if not a.is_square or not b.is_square:
        raise NotSquare("image comparison requires square matrices")
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return a.star() == b.star()
