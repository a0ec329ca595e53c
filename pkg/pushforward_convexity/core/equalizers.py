"""
This file is part of pushforward_convexity.

pushforward_convexity is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

pushforward_convexity is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with pushforward_convexity. If not, see <https://www.gnu.org/licenses/>.
"""

"""
Convexity analysis of the set of equalizing maps E(P,Q) = {f : f♯P = f♯Q}.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

from pushforward_convexity.core.errors import DimensionMismatch, InternalInconsistency, MeasureError
from pushforward_convexity.core.measures import (
    DiscreteMeasure,
    FiniteMap,
    Point,
    convex_combination,
    measures_equal,
    push_forward,
    reduce_pair,
    union_support,
)
from pushforward_convexity.core.subset_algebra import (
    DEFAULT_MAX_ATOMS,
    CommonSumAssignment,
    ConditionViolation,
    ConvexDecision,
    LabelMismatch,
    NonUniqueCouple,
    NotSigmaAlgebra,
    Subset,
    atom_blocks,
    check_condition_i,
    decide_disjoint,
    enumerate_sums,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
Z1, Z2 = (Fraction(0),), (Fraction(1),)

ALL_FUNCTIONS = "all_functions"
CONVEX_TRIVIAL = "convex_trivial"
CONVEX_STRUCTURED = "convex_structured"
NONCONVEX = "nonconvex"


@dataclass(frozen=True)
class WitnessPair:
    """
    Two members f, g of a push-forward constraint set and the evidence that
    their combination at `t` leaves it.

    For `kind == "equalizer"` the *_q measures are the push-forwards of Q;
    for `kind == "transport"` they are Q itself. In both cases membership
    reads f_p == f_q and violation reads mid_p != mid_q.
    """
    f: FiniteMap
    g: FiniteMap
    t: Fraction
    f_p: DiscreteMeasure
    f_q: DiscreteMeasure
    g_p: DiscreteMeasure
    g_q: DiscreteMeasure
    mid_p: DiscreteMeasure
    mid_q: DiscreteMeasure
    kind: str = "equalizer"

    @classmethod
    def from_maps(cls, f: FiniteMap, g: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure,
                  t: Fraction = HALF, kind: str = "equalizer") -> 'WitnessPair':
        mid = convex_combination(f, g, t)
        if kind == "transport":
            f_q = g_q = mid_q = q
        else:
            f_q, g_q, mid_q = push_forward(f, q), push_forward(g, q), push_forward(mid, q)
        return cls(f=f, g=g, t=Fraction(t),
                   f_p=push_forward(f, p), f_q=f_q,
                   g_p=push_forward(g, p), g_q=g_q,
                   mid_p=push_forward(mid, p), mid_q=mid_q, kind=kind)

    @property
    def holds(self) -> bool:
        return (measures_equal(self.f_p, self.f_q) and measures_equal(self.g_p, self.g_q)
                and not measures_equal(self.mid_p, self.mid_q))

    def verify(self, p: DiscreteMeasure, q: DiscreteMeasure) -> bool:
        """Recompute every push-forward from scratch and check the invariants."""
        fresh = WitnessPair.from_maps(self.f, self.g, p, q, self.t, self.kind)
        return fresh == self and fresh.holds


@dataclass(frozen=True)
class StructureBlock:
    """A minimal block of the σ-algebra: P-atoms and Q-atoms every equalizer treats alike."""
    gamma: Fraction
    alpha_indices: Subset
    beta_indices: Subset
    p_points: Tuple[Point, ...] = ()
    q_points: Tuple[Point, ...] = ()


@dataclass(frozen=True)
class EqualizerReport:
    """Verdict on E(P,Q) with the data that decided it."""
    verdict: str
    decided_by: str
    reduction: Tuple[DiscreteMeasure, DiscreteMeasure, Fraction]
    assignment: Optional[CommonSumAssignment] = None
    structure: Tuple[StructureBlock, ...] = ()
    violation: Optional[ConditionViolation] = None
    witness: Optional[WitnessPair] = None

    @property
    def is_convex(self) -> bool:
        return self.verdict != NONCONVEX


def is_equalizer(f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure) -> bool:
    return measures_equal(push_forward(f, p), push_forward(f, q))


def _endpoints_assignment(n: int, m: int, mass: Fraction) -> CommonSumAssignment:
    return CommonSumAssignment(((Fraction(0), (), ()), (mass, tuple(range(n)), tuple(range(m)))), n, m)


def _assignment_of(p_res: DiscreteMeasure, q_res: DiscreteMeasure, max_atoms: int) -> CommonSumAssignment:
    result = check_condition_i(enumerate_sums(p_res.weights, max_atoms),
                               enumerate_sums(q_res.weights, max_atoms))
    if not isinstance(result, CommonSumAssignment):
        raise InternalInconsistency(f"residuals already fail condition (i): {result}")
    return result


def _two_valued_map(p_res: DiscreteMeasure, i_set: Subset, q_res: DiscreteMeasure, j_set: Subset,
                    domain: Sequence[Point]) -> FiniteMap:
    """z1 on the selected residual atoms, z2 on the other residual atoms, z1 elsewhere."""
    table = {x: Z1 for x in domain}
    for index, x in enumerate(p_res.points):
        table[x] = Z1 if index in i_set else Z2
    for index, y in enumerate(q_res.points):
        table[y] = Z1 if index in j_set else Z2
    return FiniteMap.from_dict(table, 1)


def build_witness(p_res: DiscreteMeasure, q_res: DiscreteMeasure, violation: ConditionViolation,
                  p: Optional[DiscreteMeasure] = None, q: Optional[DiscreteMeasure] = None,
                  max_atoms: int = DEFAULT_MAX_ATOMS,
                  assignment: Optional[CommonSumAssignment] = None) -> WitnessPair:
    """
    Turn a condition violation on the residuals into a verified witness pair.

    The two maps take the values 0 and 1. When the original measures `p`
    and `q` are given, the maps are extended to their whole supports, with
    atoms removed by the reduction sent to 0 by both maps. Violations of
    conditions (ii) and (iii) read their couples from `assignment`, which is
    rebuilt from the residual weights when not given.

    Raises:
        InternalInconsistency: if the pair does not re-verify
    """
    p, q = (p_res, q_res) if p is None or q is None else (p, q)
    if isinstance(violation, NonUniqueCouple):
        if violation.side == "beta":
            couples = ((violation.other, violation.first), (violation.other, violation.second))
        else:
            couples = ((violation.first, violation.other), (violation.second, violation.other))
    elif (isinstance(violation, LabelMismatch)
          or isinstance(violation, NotSigmaAlgebra) and violation.kind == "intersection"):
        if assignment is None:
            assignment = _assignment_of(p_res, q_res, max_atoms)
        couples = (assignment.couple(violation.gamma1), assignment.couple(violation.gamma2))
    else:
        raise InternalInconsistency(f"no witness construction for {violation}")

    domain = union_support(p, q)
    f, g = (_two_valued_map(p_res, i_set, q_res, j_set, domain) for i_set, j_set in couples)
    witness = WitnessPair.from_maps(f, g, p, q)
    if not witness.holds:
        raise InternalInconsistency(f"witness built from {violation} does not verify")
    return witness


def describe_structure(assignment: CommonSumAssignment,
                       p_points: Sequence[Point] = (),
                       q_points: Sequence[Point] = ()) -> Tuple[StructureBlock, ...]:
    """
    Minimal nonempty members of the σ-algebra, paired across sides by label.

    Every equalizing map is constant on the union of the P-points and
    Q-points of one block. The assignment must come from a convex decision,
    so that every atom of the α-side σ-algebra is itself indexed.
    """
    labels = assignment.family("alpha")
    partner = {gamma: j_set for gamma, _, j_set in assignment.entries}
    blocks = []
    for i_set in sorted(atom_blocks(labels, assignment.n), key=labels.__getitem__):
        gamma = labels[i_set]
        j_set = partner[gamma]
        blocks.append(StructureBlock(
            gamma=gamma, alpha_indices=i_set, beta_indices=j_set,
            p_points=tuple(p_points[i] for i in i_set) if p_points else (),
            q_points=tuple(q_points[j] for j in j_set) if q_points else (),
        ))
    return tuple(blocks)


def analyze_equalizers(p: DiscreteMeasure, q: DiscreteMeasure,
                       max_atoms: int = DEFAULT_MAX_ATOMS,
                       crosscheck: bool = False) -> EqualizerReport:
    """
    Decide convexity of E(P,Q) for two finitely supported measures.

    Args:
        p, q: Measures of equal dimension and mass
        max_atoms: Cap on residual support sizes for subset enumeration
        crosscheck: Re-run the general decision behind the coprime fast path

    Returns:
        EqualizerReport; a nonconvex verdict always carries a verified witness
    """
    if p.dimension != q.dimension:
        raise DimensionMismatch(f"dimensions {p.dimension} and {q.dimension} differ")
    if p.mass != q.mass:
        raise MeasureError(f"masses {p.mass} and {q.mass} differ")

    reduction = reduce_pair(p, q)
    p_res, q_res, gamma = reduction
    logger.info("reduced to %d + %d atoms with common mass removed, residual mass %s",
                len(p_res), len(q_res), gamma)

    if gamma == 0:
        return EqualizerReport(ALL_FUNCTIONS, "p_equals_q", reduction)

    n, m = len(p_res), len(q_res)
    if p_res.is_uniform and q_res.is_uniform and gcd(n, m) == 1:
        logger.info("uniform residuals with coprime sizes %d and %d", n, m)
        assignment = _endpoints_assignment(n, m, gamma)
        if crosscheck:
            general = decide_disjoint(p_res.weights, q_res.weights, max_atoms)
            if not (isinstance(general, ConvexDecision) and general.assignment == assignment):
                raise InternalInconsistency("coprime fast path disagrees with the general decision")
        return EqualizerReport(CONVEX_TRIVIAL, "coprime_uniform", reduction, assignment,
                               describe_structure(assignment, p_res.points, q_res.points))

    decision = decide_disjoint(p_res.weights, q_res.weights, max_atoms)
    if isinstance(decision, ConvexDecision):
        assignment = decision.assignment
        verdict = CONVEX_TRIVIAL if assignment.is_trivial else CONVEX_STRUCTURED
        logger.info("all three conditions hold: %s", verdict)
        return EqualizerReport(verdict, "thm_A", reduction, assignment,
                               describe_structure(assignment, p_res.points, q_res.points))

    violation = decision.violation
    logger.info("condition (%s) fails, building witness", violation.condition)
    witness = build_witness(p_res, q_res, violation, p, q, max_atoms, decision.assignment)
    return EqualizerReport(NONCONVEX, f"thm_A_condition_{violation.condition}", reduction,
                           violation=violation, witness=witness)
