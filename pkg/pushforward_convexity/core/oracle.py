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
Brute-force midpoint-convexity oracles, independent of the decision
procedures in subset_algebra and transport.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from pushforward_convexity.core.equalizers import WitnessPair, is_equalizer
from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap, union_support
from pushforward_convexity.core.errors import BudgetExceeded
from pushforward_convexity.core.transport import DEFAULT_LIMIT, enumerate_transport_maps

logger = logging.getLogger(__name__)

DEFAULT_VALUE_COUNT = 3
DEFAULT_BUDGET = 3 ** 6


@dataclass(frozen=True)
class OracleVerdict:
    """
    Either a verified counterexample, or the statement that the searched
    family holds none. The latter never claims convexity.
    """
    counterexample: Optional[WitnessPair]
    family: str
    pairs_checked: int

    @property
    def found(self) -> bool:
        return self.counterexample is not None


def oracle_equalizer(p: DiscreteMeasure, q: DiscreteMeasure,
                     value_count: int = DEFAULT_VALUE_COUNT,
                     budget: int = DEFAULT_BUDGET) -> OracleVerdict:
    """
    Search all maps from supp(P) ∪ supp(Q) into {1, 4, ..., 4^(k-1)} for two
    equalizers whose midpoint is not one.

    Powers of 4 make every pairwise midpoint distinct, so push-forwards of
    a midpoint cannot collide by accident.

    Raises:
        BudgetExceeded: if k^N exceeds `budget`
    """
    domain = union_support(p, q)
    needed = value_count ** len(domain)
    if needed > budget:
        raise BudgetExceeded(needed, budget)

    values = [(Fraction(4) ** a,) for a in range(value_count)]
    equalizers = []
    for images in product(values, repeat=len(domain)):
        f = FiniteMap(entries=tuple(zip(domain, images)), codomain_dimension=1)
        if is_equalizer(f, p, q):
            equalizers.append(f)
    logger.debug("%d of %d maps are equalizers", len(equalizers), needed)

    family = f"maps into {value_count} powers of 4 on {len(domain)} points"
    checked = 0
    for f, g in combinations(equalizers, 2):
        checked += 1
        witness = WitnessPair.from_maps(f, g, p, q)
        if witness.holds:
            return OracleVerdict(witness, family, checked)
    return OracleVerdict(None, family, checked)


def oracle_transport(p: DiscreteMeasure, q: DiscreteMeasure,
                     limit: int = DEFAULT_LIMIT) -> OracleVerdict:
    """Check every pair of transport maps for a midpoint leaving T(P,Q)."""
    maps = enumerate_transport_maps(p, q, limit)
    family = f"all {len(maps)} transport maps"
    checked = 0
    for f, g in combinations(maps, 2):
        checked += 1
        witness = WitnessPair.from_maps(f, g, p, q, kind="transport")
        if witness.holds:
            return OracleVerdict(witness, family, checked)
    return OracleVerdict(None, family, checked)
