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
Transport maps T(P,Q) = {f : f♯P = Q} between finitely supported measures:
enumeration, counting, convexity classification and couplings.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import List, Optional, Tuple

import numpy as np

from pushforward_convexity.core.equalizers import WitnessPair
from pushforward_convexity.core.errors import InternalInconsistency, LimitExceeded, ShapeMismatch
from pushforward_convexity.core.measures import (
    DiscreteMeasure,
    FiniteMap,
    Point,
    measures_equal,
    push_forward,
    second_moment,
    to_rational,
)

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10_000

EMPTY = "empty"
SINGLETON = "singleton"
NONCONVEX = "nonconvex"


@dataclass(frozen=True)
class TransportVerdict:
    """
    Trichotomy verdict on T(P,Q).

    `count` is exact unless `count_is_lower_bound` is set (enumeration was
    truncated at its limit).
    """
    verdict: str
    count: int
    count_is_lower_bound: bool = False
    representative: Optional[FiniteMap] = None
    witness: Optional[WitnessPair] = None
    decided_by: str = "enumeration"


def is_transport_map(f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure) -> bool:
    return measures_equal(push_forward(f, p), q)


def _map_from_choice(p: DiscreteMeasure, q: DiscreteMeasure, choice: List[int]) -> FiniteMap:
    targets = q.points
    return FiniteMap.from_dict({x: targets[j].coords for x, j in zip(p.points, choice)},
                               q.dimension)


def enumerate_transport_maps(p: DiscreteMeasure, q: DiscreteMeasure,
                             limit: int = DEFAULT_LIMIT) -> List[FiniteMap]:
    """
    All maps supp(P) -> supp(Q) pushing P onto Q, in lexicographic order of
    their target indices.

    Raises:
        LimitExceeded: when more than `limit` maps exist; `partial` holds the first `limit`
        ValueError: for a limit below 1
    """
    if limit < 1:
        raise ValueError(f"enumeration limit must be at least 1, got {limit}")
    if p.mass != q.mass:
        return []
    alpha, capacity = list(p.weights), list(q.weights)
    n = len(alpha)
    # smallest weight still to be placed from atom i onwards
    suffix_min = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = alpha[i] if i == n - 1 else min(alpha[i], suffix_min[i + 1])

    found: List[FiniteMap] = []
    choice: List[int] = []

    def feasible(i: int) -> bool:
        # every partly filled fiber must still be completable by some remaining atom
        smallest = suffix_min[i]
        return all(c == 0 or (i < n and c >= smallest) for c in capacity)

    def search(i: int) -> None:
        if i == n:
            if all(c == 0 for c in capacity):
                if len(found) == limit:
                    raise LimitExceeded(limit, found)
                found.append(_map_from_choice(p, q, choice))
            return
        for j, c in enumerate(capacity):
            if c < alpha[i]:
                continue
            capacity[j] -= alpha[i]
            choice.append(j)
            if feasible(i + 1):
                search(i + 1)
            choice.pop()
            capacity[j] += alpha[i]

    search(0)
    logger.debug("enumerated %d transport maps", len(found))
    return found


def uniform_transport_count(n: int, m: int) -> int:
    """Number of transport maps between uniform measures on n and m atoms."""
    if n < m or n % m:
        return 0
    return factorial(n) // factorial(n // m) ** m


def uniform_transport_pair(p: DiscreteMeasure, q: DiscreteMeasure) -> Tuple[FiniteMap, FiniteMap]:
    """
    Two transport maps between uniform measures with m | n and n >= 2:
    consecutive blocks of n/m source atoms go to successive targets, and
    the second map swaps the targets of the first two blocks.
    """
    n, m = len(p), len(q)
    if m < 2 or uniform_transport_count(n, m) == 0:
        raise ValueError(f"no pair of distinct transport maps for n={n}, m={m}")
    block = n // m
    f_choice = [i // block for i in range(n)]
    swap = {0: 1, 1: 0}
    g_choice = [swap.get(j, j) for j in f_choice]
    return _map_from_choice(p, q, f_choice), _map_from_choice(p, q, g_choice)


def _first_violating_pair(maps: List[FiniteMap], p: DiscreteMeasure,
                          q: DiscreteMeasure) -> WitnessPair:
    for f, g in combinations(maps, 2):
        witness = WitnessPair.from_maps(f, g, p, q, kind="transport")
        if witness.holds:
            return witness
    raise InternalInconsistency("distinct transport maps with a transport-map midpoint")


def classify_transport(p: DiscreteMeasure, q: DiscreteMeasure, limit: int = DEFAULT_LIMIT,
                       crosscheck_max: int = 5) -> TransportVerdict:
    """
    Classify T(P,Q) as empty, a single map, or nonconvex with a verified witness.

    Uniform probability measures use the closed-form count; for n up to
    `crosscheck_max` the count is also checked against enumeration.

    Raises:
        LimitExceeded: when the limit is hit before two distinct maps are found
    """
    if limit < 1:
        raise ValueError(f"enumeration limit must be at least 1, got {limit}")
    if p.is_probability and q.is_probability and p.is_uniform and q.is_uniform:
        return _classify_uniform(p, q, limit, crosscheck_max)

    truncated = False
    try:
        maps = enumerate_transport_maps(p, q, limit)
    except LimitExceeded as exc:
        # a verdict needs two distinct maps
        if len(exc.partial) < 2:
            raise
        logger.warning("transport enumeration truncated at %d maps", exc.limit)
        maps, truncated = exc.partial, True

    if not maps:
        return TransportVerdict(EMPTY, 0)
    if len(maps) == 1 and not truncated:
        return TransportVerdict(SINGLETON, 1, representative=maps[0])
    witness = _first_violating_pair(maps, p, q)
    return TransportVerdict(NONCONVEX, len(maps), truncated, maps[0], witness)


def _classify_uniform(p: DiscreteMeasure, q: DiscreteMeasure, limit: int,
                      crosscheck_max: int) -> TransportVerdict:
    n, m = len(p), len(q)
    count = uniform_transport_count(n, m)
    logger.info("uniform measures on %d and %d atoms: %d transport maps", n, m, count)
    if n <= crosscheck_max:
        enumerated = len(enumerate_transport_maps(p, q, max(limit, count + 1)))
        if enumerated != count:
            raise InternalInconsistency(f"closed form gives {count} maps, enumeration {enumerated}")

    if count == 0:
        return TransportVerdict(EMPTY, 0, decided_by="uniform_closed_form")
    if count == 1:
        only = FiniteMap.constant(p.points, q.points[0].coords)
        return TransportVerdict(SINGLETON, 1, representative=only, decided_by="uniform_closed_form")
    f, g = uniform_transport_pair(p, q)
    witness = WitnessPair.from_maps(f, g, p, q, kind="transport")
    if not witness.holds:
        raise InternalInconsistency("uniform transport pair does not violate convexity")
    return TransportVerdict(NONCONVEX, count, representative=f, witness=witness,
                            decided_by="uniform_closed_form")


def m2_membership(f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure) -> bool:
    """Whether f matches the second moment of Q: ∫‖f‖² dP = ∫‖·‖² dQ."""
    return second_moment(push_forward(f, p)) == second_moment(q)


@dataclass(frozen=True, eq=False)
class Coupling:
    """Rational matrix indexed by supp(P) x supp(Q), stored as a numpy object array."""
    rows: Tuple[Point, ...]
    cols: Tuple[Point, ...]
    matrix: np.ndarray

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Coupling) and self.rows == other.rows
                and self.cols == other.cols and self.matrix.shape == other.matrix.shape
                and bool(np.all(self.matrix == other.matrix)))


def _as_object_array(values) -> np.ndarray:
    return np.array(list(values), dtype=object)


def independent_coupling(p: DiscreteMeasure, q: DiscreteMeasure) -> Coupling:
    return Coupling(p.points, q.points,
                    np.outer(_as_object_array(p.weights), _as_object_array(q.weights)))


def deterministic_coupling(f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure) -> Coupling:
    """π_ij = α_i when f(x_i) = y_j, else 0."""
    matrix = np.full((len(p), len(q)), Fraction(0), dtype=object)
    column = {y: j for j, y in enumerate(q.points)}
    for i, (x, weight) in enumerate(p.atoms):
        image = Point(f(x))
        if image not in column:
            raise ShapeMismatch(f"f({x}) = {image} is outside supp(Q)")
        matrix[i, column[image]] = weight
    return Coupling(p.points, q.points, matrix)


def is_coupling(pi: Coupling, p: DiscreteMeasure, q: DiscreteMeasure) -> bool:
    """Exact check of nonnegativity and both marginals."""
    if pi.rows != p.points or pi.cols != q.points or pi.matrix.shape != (len(p), len(q)):
        raise ShapeMismatch("coupling is not indexed by the supports of P and Q")
    if any(entry < 0 for entry in pi.matrix.flat):
        return False
    rows = [sum(row, Fraction(0)) for row in pi.matrix]
    cols = [sum(col, Fraction(0)) for col in pi.matrix.T]
    return tuple(rows) == p.weights and tuple(cols) == q.weights


def coupling_mix(pi1: Coupling, pi2: Coupling, t) -> Coupling:
    """(1 - t) π1 + t π2."""
    t = to_rational(t)
    if pi1.rows != pi2.rows or pi1.cols != pi2.cols or pi1.matrix.shape != pi2.matrix.shape:
        raise ShapeMismatch("couplings are indexed by different supports")
    return Coupling(pi1.rows, pi1.cols, (1 - t) * pi1.matrix + t * pi2.matrix)
