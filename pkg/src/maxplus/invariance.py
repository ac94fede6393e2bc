"""Maximal controlled-invariant subsemimodules of the paired-state lift.

Stacking two consecutive states into one vector turns the time-window
constraints into a single precedence semimodule: the set of stacked vectors
xbar with ``xbar >= constraint @ xbar``.  A subsemimodule is controlled
invariant when from every point inside it some input keeps the successor
inside as well.  The maximal controlled-invariant subsemimodule is obtained
by iterating a one-step shrinking operation; each iterate is the image of an
explicitly computable star matrix, and the iteration either stabilizes, or
empties out of real vectors, or keeps shrinking forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .matrix import TropicalMatrix, image_member
from .pteg import PtegSystem, _next_closure, default_probe_bound
from .precedence import build_block_matrix


@dataclass(frozen=True)
class LiftedSystem:
    """The paired-state form: dynamics, input map and constraint matrix.

    ``dynamics`` shifts the stacked vector (top block becomes the old bottom
    block), ``input_map`` injects the input into the bottom block, and
    ``constraint`` is the stacked system [[within, backward], [forward,
    within]].  The first two have a fixed zero/identity block pattern which
    is checked on construction.
    """

    dynamics: TropicalMatrix
    input_map: TropicalMatrix
    constraint: TropicalMatrix

    def __post_init__(self):
        size2 = self.constraint.rows
        if size2 % 2 or not self.constraint.is_square:
            raise ValueError("constraint must be square of even size")
        n = size2 // 2
        eps, eye = TropicalMatrix.epsilon(n), TropicalMatrix.identity(n)
        if self.dynamics != TropicalMatrix.from_blocks([[eps, eye], [eps, eps]]):
            raise ValueError("dynamics must shift the bottom block to the top")
        if self.input_map != TropicalMatrix.from_blocks([[eps], [eye]]):
            raise ValueError("input map must inject into the bottom block")

    @property
    def size(self) -> int:
        return self.constraint.rows // 2


def lift_system(system: PtegSystem) -> LiftedSystem:
    """Assemble the paired-state lift of a time-window constrained system."""
    n = system.size
    eps, eye = TropicalMatrix.epsilon(n), TropicalMatrix.identity(n)
    return LiftedSystem(
        dynamics=TropicalMatrix.from_blocks([[eps, eye], [eps, eps]]),
        input_map=TropicalMatrix.from_blocks([[eps], [eye]]),
        constraint=TropicalMatrix.from_blocks(
            [[system.within, system.backward], [system.forward, system.within]]
        ),
    )


def roundtrip_closure(system: PtegSystem) -> TropicalMatrix:
    """Closure of the constraints linking one occurrence to itself via the next.

    Star of ``forward @ within* @ backward oplus within``: the best weight of
    going forward one occurrence, moving there, and coming back, combined
    with the purely local constraints.
    """
    inner = system.forward @ system.within.star() @ system.backward
    return (inner + system.within).star()


def _assemble_generator(
    system: PtegSystem,
    closure_k: TropicalMatrix,
    closure_k1: TropicalMatrix,
    roundtrip: TropicalMatrix,
) -> TropicalMatrix:
    anchored = (closure_k + roundtrip).star()
    return TropicalMatrix.from_blocks(
        [
            [closure_k1, closure_k1 @ system.backward @ anchored],
            [anchored @ system.forward @ closure_k1, anchored],
        ]
    )


def shrink_generator(system: PtegSystem, k: int) -> TropicalMatrix:
    """Generator (star matrix) of the k-times-shrunk constraint semimodule.

    Assembled in closed form from closures k and k+1 and the roundtrip
    closure; entries may be +inf once the shrinking empties out of real
    vectors.  Equals the stage-(1, 2) corner of the star of the constraint
    system unrolled over k+2 occurrences (see
    :func:`shrink_generator_unrolled`).
    """
    if k < 0:
        raise ValueError("shrink step must be non-negative")
    seq = [system.within.star()]
    for _ in range(k + 1):
        seq.append(_next_closure(system, seq[-1]))
    return _assemble_generator(system, seq[k], seq[k + 1], roundtrip_closure(system))


def shrink_generator_unrolled(system: PtegSystem, k: int) -> TropicalMatrix:
    """Independent route to :func:`shrink_generator`, via the unrolled horizon.

    Materializes the block matrix over k+2 occurrences, stars it, and cuts
    out the leading block of twice the system size.  Much slower; kept as
    the reference oracle for the closed form.
    """
    if k < 0:
        raise ValueError("shrink step must be non-negative")
    unrolled = build_block_matrix(system.block_spec(), k + 2)
    size2 = 2 * system.size
    return unrolled.star().top_left(size2, size2)


class InvarianceKind(Enum):
    CONVERGED_NON_EMPTY = "ConvergedNonEmpty"
    REAL_EMPTY_AT_STEP = "RealEmptyAtStep"
    NON_CONVERGENT_WEAK_OPEN = "NonConvergentWeakOpen"


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of :func:`iterate_shrink`.

    ``generators`` holds the generator matrices in step order, starting at
    step 0, up to and including the matrix that settled the classification.
    ``step`` is the classifying step:

    - CONVERGED_NON_EMPTY: the least k at which the closure sequence repeats
      (closure k+2 equals closure k+1); the iteration is stationary from the
      next generator on, and ``invariant_generator`` is that stabilized
      matrix, whose image is the maximal controlled-invariant subsemimodule
      and contains real vectors.
    - REAL_EMPTY_AT_STEP: the least k whose generator contains +inf, so from
      that step on the iterates contain no real vector at all.
    - NON_CONVERGENT_WEAK_OPEN: the probe bound; every generator computed was
      finite and still strictly shrinking, so no classification within the
      bound.  (The true limit contains no real vector in this case as well;
      only the shrinking never terminates.)
    """

    generators: tuple[TropicalMatrix, ...]
    kind: InvarianceKind
    step: int
    invariant_generator: TropicalMatrix | None = None


def iterate_shrink(
    system: PtegSystem, probe_bound: int | None = None
) -> InvarianceReport:
    """Run the shrinking iteration until it settles or the probe bound hits.

    When the system is consistent the closure sequence stabilizes after at
    most n^2 iterations (n the system size), so convergence is always caught
    within the default probe bound of ``10 * n^2``.  Divergence beyond the
    bound (slowly growing positive circuits) is reported as open rather than
    guessed; raise the bound to settle such cases exactly.
    """
    probe = default_probe_bound(system.size) if probe_bound is None else probe_bound
    if probe < 1:
        raise ValueError("probe bound must be positive")
    roundtrip = roundtrip_closure(system)
    closure_k = system.within.star()
    closure_k1 = _next_closure(system, closure_k)
    generators: list[TropicalMatrix] = []
    for k in range(probe + 1):
        generator = _assemble_generator(system, closure_k, closure_k1, roundtrip)
        generators.append(generator)
        if not generator.rmax_valued:
            return InvarianceReport(
                tuple(generators), InvarianceKind.REAL_EMPTY_AT_STEP, step=k
            )
        closure_k2 = _next_closure(system, closure_k1)
        if closure_k2 == closure_k1:
            stable = _assemble_generator(system, closure_k1, closure_k2, roundtrip)
            generators.append(stable)
            return InvarianceReport(
                tuple(generators),
                InvarianceKind.CONVERGED_NON_EMPTY,
                step=k,
                invariant_generator=stable,
            )
        closure_k, closure_k1 = closure_k1, closure_k2
    return InvarianceReport(
        tuple(generators), InvarianceKind.NON_CONVERGENT_WEAK_OPEN, step=probe
    )


def maximal_invariant(
    system: PtegSystem, probe_bound: int | None = None
) -> TropicalMatrix | None:
    """Generator of the maximal controlled-invariant subsemimodule, or None.

    Present exactly when the shrinking iteration converges with finite
    entries; in every other classification the maximal invariant contains
    no real vector and None is returned.
    """
    return iterate_shrink(system, probe_bound).invariant_generator


def invariant_member(generator: TropicalMatrix, vector: Sequence) -> bool:
    """Membership of a stacked vector in the invariant set generated."""
    return image_member(generator, vector)
