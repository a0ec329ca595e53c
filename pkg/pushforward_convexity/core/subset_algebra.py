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
Subset-sum tables and the three-condition convexity test for equalizing
maps between disjointly supported discrete measures.

Index subsets are sorted tuples of 0-based atom indices.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pushforward_convexity.core.errors import MeasureError, TooManyAtoms

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]

DEFAULT_MAX_ATOMS = 20


@dataclass(frozen=True)
class SumTable:
    """All 2^n index subsets grouped by their exact weight sum."""
    sums: Mapping[Fraction, Tuple[Subset, ...]]
    size: int
    mass: Fraction

    def subsets(self, gamma: Fraction) -> Tuple[Subset, ...]:
        return self.sums.get(gamma, ())

    def __contains__(self, gamma: Fraction) -> bool:
        return gamma in self.sums

    @property
    def universe(self) -> Subset:
        return tuple(range(self.size))


def enumerate_sums(weights: Sequence[Fraction], max_atoms: int = DEFAULT_MAX_ATOMS) -> SumTable:
    """
    Enumerate every index subset and group it by its weight sum.

    Raises:
        TooManyAtoms: if len(weights) exceeds max_atoms
        MeasureError: if a weight is not strictly positive
    """
    n = len(weights)
    if n > max_atoms:
        raise TooManyAtoms(n, max_atoms)
    weights = [Fraction(w) for w in weights]
    for i, w in enumerate(weights):
        if w <= 0:
            raise MeasureError(f"weight {w} is not strictly positive", f"weights[{i}]")

    # sums[mask] from the mask with its lowest bit cleared
    sums: List[Fraction] = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        sums[mask] = sums[mask & (mask - 1)] + weights[low]

    grouped: Dict[Fraction, List[Subset]] = defaultdict(list)
    for mask, total in enumerate(sums):
        grouped[total].append(tuple(i for i in range(n) if mask >> i & 1))

    table = {gamma: tuple(sorted(grouped[gamma])) for gamma in sorted(grouped)}
    logger.debug("enumerated %d subsets of %d weights into %d sums", 1 << n, n, len(table))
    return SumTable(sums=table, size=n, mass=sums[-1])


def common_sums(table_alpha: SumTable, table_beta: SumTable) -> List[Fraction]:
    return sorted(set(table_alpha.sums) & set(table_beta.sums))


@dataclass(frozen=True)
class CommonSumAssignment:
    """
    For each common sum γ, the unique couple (I_γ, J_γ) achieving it.

    `n` and `m` are the number of atoms on the α and β sides.
    """
    entries: Tuple[Tuple[Fraction, Subset, Subset], ...]
    n: int
    m: int

    @property
    def gammas(self) -> Tuple[Fraction, ...]:
        return tuple(g for g, _, _ in self.entries)

    def family(self, side: str) -> Dict[Subset, Fraction]:
        """Map each index subset on one side to its label γ."""
        column = 1 if side == "alpha" else 2
        return {entry[column]: entry[0] for entry in self.entries}

    def universe(self, side: str) -> Subset:
        return tuple(range(self.n if side == "alpha" else self.m))

    def couple(self, gamma: Fraction) -> Tuple[Subset, Subset]:
        for g, i_set, j_set in self.entries:
            if g == gamma:
                return i_set, j_set
        raise KeyError(gamma)

    @property
    def is_trivial(self) -> bool:
        """Only the empty set and the full set are indexed."""
        return len(self.entries) <= 2


@dataclass(frozen=True)
class NonUniqueCouple:
    """Condition (i) fails: `side` has two subsets `first` != `second` summing to γ."""
    gamma: Fraction
    side: str
    first: Subset
    second: Subset
    other: Subset
    condition: str = "i"


@dataclass(frozen=True)
class NotSigmaAlgebra:
    """
    Condition (ii) fails on `side`.

    `kind` is "intersection" (first ∩ second is not indexed), "complement"
    (the complement of `first` is not indexed) or "endpoint" (∅ or the full
    set is missing).
    """
    side: str
    kind: str
    first: Subset
    second: Subset
    gamma1: Optional[Fraction] = None
    gamma2: Optional[Fraction] = None
    condition: str = "ii"


@dataclass(frozen=True)
class LabelMismatch:
    """Condition (iii) fails: I_γ ∩ I_γ' and J_γ ∩ J_γ' carry different labels."""
    gamma1: Fraction
    gamma2: Fraction
    eta_alpha: Fraction
    eta_beta: Fraction
    condition: str = "iii"


ConditionViolation = Union[NonUniqueCouple, NotSigmaAlgebra, LabelMismatch]


def check_condition_i(table_alpha: SumTable,
                      table_beta: SumTable) -> Union[CommonSumAssignment, ConditionViolation]:
    """
    Check that each common sum is reached by exactly one subset per side.

    The first violation is reported: smallest γ, and the β side when both
    sides are ambiguous.
    """
    entries = []
    for gamma in common_sums(table_alpha, table_beta):
        i_sets, j_sets = table_alpha.subsets(gamma), table_beta.subsets(gamma)
        if len(j_sets) > 1:
            return NonUniqueCouple(gamma, "beta", j_sets[0], j_sets[1], i_sets[0])
        if len(i_sets) > 1:
            return NonUniqueCouple(gamma, "alpha", i_sets[0], i_sets[1], j_sets[0])
        entries.append((gamma, i_sets[0], j_sets[0]))
    return CommonSumAssignment(tuple(entries), table_alpha.size, table_beta.size)


def _intersection(a: Subset, b: Subset) -> Subset:
    return tuple(sorted(set(a) & set(b)))


def _mask(subset: Subset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << i
    return mask


def _indices(mask: int, size: int) -> Subset:
    return tuple(i for i in range(size) if mask >> i & 1)


def atom_blocks(family: Iterable[Subset], size: int) -> List[Subset]:
    """
    Atoms of the σ-algebra generated by `family` on range(size): indices
    grouped by which members contain them, ordered by smallest index.
    """
    classes = [(1 << size) - 1] if size else []
    for subset in family:
        member = _mask(subset)
        refined = []
        for block in classes:
            refined.extend(part for part in (block & member, block & ~member) if part)
        classes = refined
    return sorted(_indices(block, size) for block in classes)


def is_sigma_algebra(family: Iterable[Subset], size: int) -> bool:
    """A family is a σ-algebra iff it has as many members as the one it generates."""
    members = set(family)
    return len(members) == 2 ** len(atom_blocks(members, size))


def _is_lattice_isomorphism(assignment: CommonSumAssignment) -> bool:
    """
    Whether I_γ -> J_γ maps α-atoms onto β-atoms and every member onto the
    union of the images of its atoms. Both families must be σ-algebras.
    """
    pairing = {_mask(i_set): _mask(j_set) for _, i_set, j_set in assignment.entries}
    size = len(assignment.entries)
    if not len(pairing) == len(set(pairing.values())) == len(set(assignment.gammas)) == size:
        return False
    alpha_atoms = [_mask(a) for a in atom_blocks(assignment.family("alpha"), assignment.n)]
    beta_atoms = {_mask(b) for b in atom_blocks(assignment.family("beta"), assignment.m)}
    images = {}
    for atom in alpha_atoms:
        image = pairing.get(atom)
        if image not in beta_atoms:
            return False
        images[atom] = image
    for i_mask, j_mask in pairing.items():
        union = 0
        for atom, image in images.items():
            if atom & i_mask == atom:
                union |= image
        if union != j_mask:
            return False
    return True


def check_condition_ii(assignment: CommonSumAssignment) -> Union[bool, ConditionViolation]:
    """
    Check that both indexed families are σ-algebras of their index sets.

    Passing families are recognized by counting atoms; the pairwise scan
    only runs to locate the first violation.
    """
    sides = ("alpha", "beta")
    families = {side: assignment.family(side) for side in sides}
    if all(is_sigma_algebra(families[side], len(assignment.universe(side))) for side in sides):
        return True

    for side in sides:
        full = assignment.universe(side)
        for required in ((), full):
            if required not in families[side]:
                return NotSigmaAlgebra(side, "endpoint", required, required)

    for (g1, *sets1), (g2, *sets2) in combinations(assignment.entries, 2):
        for k, side in enumerate(sides):
            if _intersection(sets1[k], sets2[k]) not in families[side]:
                return NotSigmaAlgebra(side, "intersection", sets1[k], sets2[k], g1, g2)

    for side in sides:
        full = set(assignment.universe(side))
        for subset, gamma in families[side].items():
            complement = tuple(sorted(full - set(subset)))
            if complement not in families[side]:
                return NotSigmaAlgebra(side, "complement", subset, complement, gamma, None)
    return True


def check_condition_iii(assignment: CommonSumAssignment) -> Union[bool, ConditionViolation]:
    """
    Check that intersecting couples gives the same label on both sides.

    When both families are σ-algebras this holds exactly when the pairing
    of couples is a lattice isomorphism, which is checked on atoms first.
    """
    alpha_family, beta_family = assignment.family("alpha"), assignment.family("beta")
    if (is_sigma_algebra(alpha_family, assignment.n) and is_sigma_algebra(beta_family, assignment.m)
            and _is_lattice_isomorphism(assignment)):
        return True
    for (g1, i1, j1), (g2, i2, j2) in combinations(assignment.entries, 2):
        i_cap, j_cap = _intersection(i1, i2), _intersection(j1, j2)
        if i_cap not in alpha_family:
            return NotSigmaAlgebra("alpha", "intersection", i1, i2, g1, g2)
        if j_cap not in beta_family:
            return NotSigmaAlgebra("beta", "intersection", j1, j2, g1, g2)
        eta_alpha, eta_beta = alpha_family[i_cap], beta_family[j_cap]
        if eta_alpha != eta_beta:
            return LabelMismatch(g1, g2, eta_alpha, eta_beta)
    return True


@dataclass(frozen=True)
class ConvexDecision:
    assignment: CommonSumAssignment
    convex: bool = True


@dataclass(frozen=True)
class NonconvexDecision:
    """`assignment` is set when condition (i) held; witnesses read their couples from it."""
    violation: ConditionViolation
    convex: bool = False
    assignment: Optional[CommonSumAssignment] = None


DisjointDecision = Union[ConvexDecision, NonconvexDecision]


def decide_disjoint(alpha: Sequence[Fraction], beta: Sequence[Fraction],
                    max_atoms: int = DEFAULT_MAX_ATOMS) -> DisjointDecision:
    """
    Decide convexity of the equalizing maps between two disjointly
    supported measures with weights `alpha` and `beta`.

    Conditions are checked in order (i), (ii), (iii); the first failure
    is returned.
    """
    table_alpha = enumerate_sums(alpha, max_atoms)
    table_beta = enumerate_sums(beta, max_atoms)
    if table_alpha.mass != table_beta.mass:
        raise MeasureError(f"total masses {table_alpha.mass} and {table_beta.mass} differ")

    result = check_condition_i(table_alpha, table_beta)
    if not isinstance(result, CommonSumAssignment):
        logger.debug("condition (i) fails: %s", result)
        return NonconvexDecision(result)
    assignment = result

    for check in (check_condition_ii, check_condition_iii):
        outcome = check(assignment)
        if outcome is not True:
            logger.debug("condition (%s) fails: %s", outcome.condition, outcome)
            return NonconvexDecision(outcome, assignment=assignment)
    return ConvexDecision(assignment)
