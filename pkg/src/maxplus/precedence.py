"""Precedence constraint systems and their unrolled block matrices.

A precedence system asks for a real vector x with ``x >= A @ x``; entry
(i, j) of A is the weight of an arc from node j to node i in the precedence
graph.  Stage-structured systems (one copy of the variables per occurrence
index) are described by three square blocks and unrolled into a block
tridiagonal matrix over any finite horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import NotSquare, TropicalMatrix
from .semiring import NEG_INF, Scalar, format_scalar


class BlockDimensionMismatch(ValueError):
    """Blocks of a stage-structured system do not share one square shape."""


@dataclass(frozen=True)
class PrecedenceSystem:
    """The constraint ``x >= matrix @ x`` over real vectors x."""

    matrix: TropicalMatrix

    def __post_init__(self):
        if not self.matrix.is_square:
            raise NotSquare("a precedence system needs a square matrix")
        if not self.matrix.rmax_valued:
            raise ValueError("+inf is not a legal constraint weight")

    @property
    def size(self) -> int:
        return self.matrix.rows


def solve_precedence(system: PrecedenceSystem) -> tuple[Scalar, ...] | None:
    """A real solution of ``x >= A @ x``, or None when none exists.

    A real solution exists exactly when the star of A stays free of +inf.
    In that case the row maxima of the star (the star applied to the zero
    vector) form the least solution dominating the zero vector; the diagonal
    of a star is at least 0, so every component is finite.
    """
    closure = system.matrix.star()
    if not closure.rmax_valued:
        return None
    return tuple(max(row) for row in closure.to_rows())


@dataclass(frozen=True)
class BlockMatrixSpec:
    """Per-stage blocks of a stage-structured precedence system.

    ``within`` weights arcs inside one stage, ``backward`` arcs from stage
    k+1 back to stage k, and ``forward`` arcs from stage k to stage k+1.
    """

    within: TropicalMatrix
    backward: TropicalMatrix
    forward: TropicalMatrix

    def __post_init__(self):
        shapes = {self.within.shape, self.backward.shape, self.forward.shape}
        if len(shapes) != 1 or not self.within.is_square:
            raise BlockDimensionMismatch(
                "within/backward/forward blocks must share one square shape"
            )
        for block in (self.within, self.backward, self.forward):
            if not block.rmax_valued:
                raise ValueError("+inf is not a legal constraint weight")

    @property
    def size(self) -> int:
        return self.within.rows


def build_block_matrix(spec: BlockMatrixSpec, horizon: int) -> TropicalMatrix:
    """Unroll ``horizon`` stages into one block tridiagonal matrix.

    The within block sits on the diagonal, the backward block on the
    superdiagonal and the forward block on the subdiagonal; everything
    else is -inf.  The leading (horizon-1) stages of the result coincide
    with the unrolling one stage shorter.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    eps = TropicalMatrix.epsilon(spec.size)
    grid = []
    for i in range(horizon):
        row = []
        for j in range(horizon):
            if i == j:
                row.append(spec.within)
            elif j == i + 1:
                row.append(spec.backward)
            elif j == i - 1:
                row.append(spec.forward)
            else:
                row.append(eps)
        grid.append(row)
    return TropicalMatrix.from_blocks(grid)


def finite_weak_feasibility(spec: BlockMatrixSpec, horizon: int) -> bool:
    """Exact feasibility certificate for one finite horizon.

    True iff the unrolled precedence graph over ``horizon`` stages has no
    positive-weight circuit, i.e. arbitrarily scheduled real solutions over
    these stages exist.  The answer is antitone in the horizon: once false,
    it stays false for every longer horizon.
    """
    return not build_block_matrix(spec, horizon).has_positive_circuit()


def export_dot(spec: BlockMatrixSpec, horizon: int) -> str:
    """Render the unrolled precedence graph as deterministic DOT text.

    Nodes are labelled ``x_i(k)`` and ordered stage-major, arcs are ordered
    by (source, target) node index; identical inputs give identical bytes.
    """
    matrix = build_block_matrix(spec, horizon)
    n = spec.size
    lines = ["digraph precedence {", "  rankdir=LR;"]
    for stage in range(1, horizon + 1):
        for i in range(1, n + 1):
            lines.append(f'  x{i}_{stage} [label="x_{i}({stage})"];')
    rows = matrix.to_rows()
    size = matrix.rows
    for source in range(size):
        j_stage, j_comp = divmod(source, n)
        for target in range(size):
            w = rows[target][source]
            if w == NEG_INF:
                continue
            i_stage, i_comp = divmod(target, n)
            lines.append(
                f'  x{j_comp + 1}_{j_stage + 1} -> x{i_comp + 1}_{i_stage + 1}'
                f' [label="{format_scalar(w)}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
