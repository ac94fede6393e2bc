"""Consistency analysis of time-window constrained, fully actuated systems.

The plant is ``x(k+1) = dynamics @ x(k) oplus u(k)`` with one free input per
component.  The schedule must additionally satisfy, for every occurrence
index k, the three inequality families of a P-time event graph::

    x(k)   >= backward @ x(k+1)
    x(k)   >= within   @ x(k)
    x(k+1) >= forward  @ x(k)        (forward = dynamics oplus extra_forward)

The system is *consistent* when one infinite real schedule satisfies all of
them, and *weakly consistent* when arbitrarily long finite schedules exist.
Consistency is decided exactly through the growing-horizon closure sequence;
weak consistency beyond a configurable probe bound is reported as open, never
guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .matrix import DimensionMismatch, TropicalMatrix
from .precedence import BlockMatrixSpec, build_block_matrix
from .semiring import NEG_INF, POS_INF, Scalar, as_scalar


class InfeasibleHorizon(Exception):
    """No finite schedule of the requested length could be produced.

    ``reason`` is ``"divergent"`` when the constraint closure blows up to
    +inf (no schedule of this length exists at all) and ``"unreachable"``
    when some component was never forced above -inf by the seed.
    """

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class PtegSystem:
    """Problem data: the four square blocks, all free of +inf.

    ``extra_forward`` holds user constraints from one occurrence to the next
    on top of the plant dynamics; None means no extra constraints.  The
    combined ``forward`` block is derived on every access, never stored.
    """

    dynamics: TropicalMatrix
    backward: TropicalMatrix
    within: TropicalMatrix
    extra_forward: TropicalMatrix | None = None

    def __post_init__(self):
        if self.extra_forward is None:
            object.__setattr__(
                self, "extra_forward", TropicalMatrix.epsilon(self.dynamics.rows)
            )
        blocks = (self.dynamics, self.backward, self.within, self.extra_forward)
        shapes = {b.shape for b in blocks}
        if len(shapes) != 1 or not self.dynamics.is_square:
            raise DimensionMismatch("all four blocks must share one square shape")
        for block in blocks:
            if not block.rmax_valued:
                raise ValueError("+inf is not a legal entry in problem matrices")

    @property
    def size(self) -> int:
        return self.dynamics.rows

    @property
    def forward(self) -> TropicalMatrix:
        return self.dynamics + self.extra_forward

    def block_spec(self) -> BlockMatrixSpec:
        return BlockMatrixSpec(
            within=self.within, backward=self.backward, forward=self.forward
        )


class ConsistencyKind(Enum):
    CONSISTENT = "Consistent"
    NOT_CONSISTENT_WEAK_OPEN = "NotConsistentWeakOpen"
    NOT_WEAKLY_CONSISTENT = "NotWeaklyConsistent"


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Outcome of :func:`check_consistency` with its certificate.

    Exactly one certificate field is set, matching ``kind``:

    - CONSISTENT: ``fixed_closure`` is the stabilized closure matrix, valid
      for every longer horizon.
    - NOT_WEAKLY_CONSISTENT: ``first_divergent`` is the least closure index
      containing +inf.
    - NOT_CONSISTENT_WEAK_OPEN: ``verified_up_to`` is the largest closure
      index computed; all closures up to it were finite but never stabilized,
      so weak consistency remains undecided beyond the probe bound.
    """

    kind: ConsistencyKind
    fixed_closure: TropicalMatrix | None = None
    first_divergent: int | None = None
    verified_up_to: int | None = None


def _next_closure(system: PtegSystem, current: TropicalMatrix) -> TropicalMatrix:
    nxt = (system.backward @ current @ system.forward + system.within).star()
    if not current <= nxt:
        raise RuntimeError("closure sequence lost monotonicity (internal error)")
    return nxt


def closure_sequence(system: PtegSystem, k_max: int) -> list[TropicalMatrix]:
    """The growing-horizon constraint closures, indices 0 to ``k_max``.

    Closure 0 is the star of the within block; closure k+1 is the star of
    ``backward @ closure_k @ forward oplus within``.  Closure k collects every
    constraint induced between the events of one occurrence by looking k
    further occurrences ahead.  The sequence grows monotonically; once an
    entry saturates to +inf it stays saturated.
    """
    if k_max < 0:
        raise ValueError("closure count must be non-negative")
    seq = [system.within.star()]
    for _ in range(k_max):
        seq.append(_next_closure(system, seq[-1]))
    return seq


def default_probe_bound(size: int) -> int:
    return 10 * size * size


def check_consistency(
    system: PtegSystem, probe_bound: int | None = None
) -> ConsistencyVerdict:
    """Decide consistency exactly; probe weak consistency up to a bound.

    With n the system size, the closure sequence is iterated to index
    n^2 + 1.  Stabilization with finite entries at that point proves
    consistency (and the fixed closure persists for all longer horizons);
    a +inf entry anywhere disproves weak consistency.  Otherwise the system
    is not consistent, and iteration continues up to ``probe_bound``
    (default ``10 * n^2``) looking for divergence.  If none appears the
    verdict reports how far finiteness was verified instead of guessing.
    """
    n = system.size
    stabilization_index = n * n
    if probe_bound is None:
        probe_bound = default_probe_bound(n)
    if probe_bound < 1:
        raise ValueError("probe bound must be positive")
    limit = max(probe_bound, stabilization_index + 1)

    current = system.within.star()
    if not current.rmax_valued:
        return ConsistencyVerdict(
            ConsistencyKind.NOT_WEAKLY_CONSISTENT, first_divergent=0
        )
    at_stabilization_index = None
    for k in range(1, limit + 1):
        current = _next_closure(system, current)
        if not current.rmax_valued:
            return ConsistencyVerdict(
                ConsistencyKind.NOT_WEAKLY_CONSISTENT, first_divergent=k
            )
        if k == stabilization_index:
            at_stabilization_index = current
        elif k == stabilization_index + 1 and current == at_stabilization_index:
            return ConsistencyVerdict(
                ConsistencyKind.CONSISTENT, fixed_closure=current
            )
    return ConsistencyVerdict(
        ConsistencyKind.NOT_CONSISTENT_WEAK_OPEN, verified_up_to=limit
    )


@dataclass(frozen=True)
class Trajectory:
    """A finite schedule: states x(1..K) and inputs u(1..K-1) = x(2..K)."""

    states: tuple[tuple[Scalar, ...], ...]
    inputs: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        states = tuple(tuple(as_scalar(v) for v in row) for row in self.states)
        inputs = tuple(tuple(as_scalar(v) for v in row) for row in self.inputs)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "inputs", inputs)
        if not states:
            raise ValueError("a trajectory needs at least one state")
        width = len(states[0])
        if any(len(row) != width for row in states + inputs):
            raise ValueError("state and input vectors have unequal lengths")
        if inputs != states[1:]:
            raise ValueError("inputs must replay the successor states")
        for row in states:
            for v in row:
                if v == NEG_INF or v == POS_INF:
                    raise ValueError("trajectory entries must be finite")

    @property
    def horizon(self) -> int:
        return len(self.states)


def synthesize_trajectory(
    system: PtegSystem, horizon: int, seed: Sequence | None = None
) -> Trajectory:
    """The least finite schedule over ``horizon`` occurrences dominating a seed.

    The unrolled constraint matrix is starred and applied to the stacked
    vector [seed, 0, ..., 0] (seed defaults to the zero vector), which yields
    a fixed point of the unrolled system, hence a valid schedule whenever all
    components stay finite.  A +inf component proves no schedule of this
    length exists and raises :class:`InfeasibleHorizon`.
    """
    if horizon < 2:
        raise ValueError("trajectory synthesis needs a horizon of at least 2")
    n = system.size
    if seed is None:
        seed_vec: tuple[Scalar, ...] = (0,) * n
    else:
        seed_vec = tuple(as_scalar(v) for v in seed)
        if len(seed_vec) != n:
            raise DimensionMismatch(f"seed must have {n} components")
        if any(v == NEG_INF or v == POS_INF for v in seed_vec):
            raise ValueError("seed components must be finite")

    stacked = seed_vec + (0,) * (n * (horizon - 1))
    unrolled = build_block_matrix(system.block_spec(), horizon)
    solution = (unrolled.star() @ TropicalMatrix.column(stacked)).column_values()
    if any(v == POS_INF for v in solution):
        raise InfeasibleHorizon(
            f"no schedule over {horizon} occurrences exists:"
            " the unrolled constraints force an event time to +inf",
            reason="divergent",
        )
    if any(v == NEG_INF for v in solution):
        raise InfeasibleHorizon(
            "the seed never reaches some component; its event time stayed -inf",
            reason="unreachable",
        )
    states = tuple(solution[k * n : (k + 1) * n] for k in range(horizon))
    return Trajectory(states=states, inputs=states[1:])


def validate_trajectory(system: PtegSystem, trajectory: Trajectory) -> bool:
    """Exact check of all three inequality families over the whole horizon."""
    n = system.size
    if any(len(row) != n for row in trajectory.states):
        raise DimensionMismatch("trajectory width does not match the system")
    cols = [TropicalMatrix.column(s) for s in trajectory.states]

    def dominates(vec: TropicalMatrix, bound: TropicalMatrix) -> bool:
        return bound <= vec

    for k in range(trajectory.horizon):
        if not dominates(cols[k], system.within @ cols[k]):
            return False
    for k in range(trajectory.horizon - 1):
        if not dominates(cols[k], system.backward @ cols[k + 1]):
            return False
        if not dominates(cols[k + 1], system.forward @ cols[k]):
            return False
    return True
