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
Constraint losses built from discrepancies between push-forwards, their
nonconvexity certificates, segment scans and the covariance surrogate.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import pandas as pd

from pushforward_convexity.core.equalizers import WitnessPair
from pushforward_convexity.core.errors import DimensionMismatch, NotInConstraintSet
from pushforward_convexity.core.measures import (
    DiscreteMeasure,
    FiniteMap,
    Point,
    convex_combination,
    push_forward,
    to_rational,
    union_support,
)
from pushforward_convexity.core.serialization import render_rational

logger = logging.getLogger(__name__)

TV = "tv"
W1_LINE = "w1_line"
EQUALIZER = "equalizer"
TRANSPORT = "transport"


def tv_distance(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    """Total variation: half the l1 distance between the weight vectors."""
    if mu.dimension != nu.dimension:
        raise DimensionMismatch(f"dimensions {mu.dimension} and {nu.dimension} differ")
    return sum((abs(mu.weight_of(x) - nu.weight_of(x)) for x in union_support(mu, nu)),
               Fraction(0)) / 2


def w1_line(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    """Wasserstein-1 distance on the line: ∫ |F_μ - F_ν| over the sorted breakpoints."""
    if mu.dimension != 1 or nu.dimension != 1:
        raise DimensionMismatch("w1_line is only defined for measures on the line")
    breakpoints = union_support(mu, nu)
    total, cdf_mu, cdf_nu = Fraction(0), Fraction(0), Fraction(0)
    for left, right in zip(breakpoints, breakpoints[1:]):
        cdf_mu += mu.weight_of(left)
        cdf_nu += nu.weight_of(left)
        total += abs(cdf_mu - cdf_nu) * (right.coords[0] - left.coords[0])
    return total


DISTANCES = {TV: tv_distance, W1_LINE: w1_line}


@dataclass(frozen=True)
class LossCandidate:
    """
    A candidate C-loss on maps f.

    kind "equalizer": L(f) = D(f♯P, f♯Q); kind "transport": L(f) = D(f♯P, Q).
    """
    name: str
    kind: str
    p: DiscreteMeasure
    q: DiscreteMeasure

    def __post_init__(self):
        if self.name not in DISTANCES:
            raise ValueError(f"unknown discrepancy {self.name!r}")
        if self.kind not in (EQUALIZER, TRANSPORT):
            raise ValueError(f"unknown constraint kind {self.kind!r}")

    def __call__(self, f: FiniteMap) -> Fraction:
        distance = DISTANCES[self.name]
        target = push_forward(f, self.q) if self.kind == EQUALIZER else self.q
        return distance(push_forward(f, self.p), target)


@dataclass(frozen=True)
class NonconvexityCertificate:
    """L(f) = L(g) = 0 while L at the combination is positive: L is not convex."""
    loss: str
    f: FiniteMap
    g: FiniteMap
    t: Fraction
    loss_f: Fraction
    loss_g: Fraction
    loss_mid: Fraction
    witness: Optional[WitnessPair] = None

    @property
    def holds(self) -> bool:
        return self.loss_f == 0 and self.loss_g == 0 and self.loss_mid > 0


def certify_nonconvexity(loss: LossCandidate, witness: WitnessPair) -> NonconvexityCertificate:
    """
    Evaluate `loss` on a witness pair, from the raw measures.

    Raises:
        NotInConstraintSet: if the witness is of another kind or L(f), L(g) != 0
    """
    if witness.kind != loss.kind:
        raise NotInConstraintSet(f"{witness.kind} witness cannot certify a {loss.kind} loss")
    loss_f, loss_g = loss(witness.f), loss(witness.g)
    if loss_f != 0 or loss_g != 0:
        raise NotInConstraintSet(f"L(f) = {loss_f}, L(g) = {loss_g}; both must vanish")
    loss_mid = loss(convex_combination(witness.f, witness.g, witness.t))
    certificate = NonconvexityCertificate(f"{loss.name}_{loss.kind}", witness.f, witness.g,
                                          witness.t, loss_f, loss_g, loss_mid, witness)
    logger.info("%s: L(f) = L(g) = 0, L(mid) = %s", certificate.loss, loss_mid)
    return certificate


def segment_scan(loss: LossCandidate, f: FiniteMap, g: FiniteMap,
                 grid_size: int) -> List[Tuple[Fraction, Fraction]]:
    """Exact values of L((1 - t) f + t g) at t = k / grid_size."""
    if grid_size < 1:
        raise ValueError("grid_size must be positive")
    grid = [Fraction(k, grid_size) for k in range(grid_size + 1)]
    return [(t, loss(convex_combination(f, g, t))) for t in grid]


def scan_to_frame(scan: List[Tuple[Fraction, Fraction]], rational: bool = False) -> pd.DataFrame:
    """
    Tabulate a scan; `chord_violation` marks points above the chord between
    the endpoint values, where a convex loss could not be.
    """
    (t0, first), (t1, last) = scan[0], scan[-1]
    rows = []
    for t, value in scan:
        s = (t - t0) / (t1 - t0) if t1 != t0 else Fraction(0)
        chord = (1 - s) * first + s * last
        rows.append({"t": render_rational(t, rational), "loss": render_rational(value, rational),
                     "chord_violation": value > chord})
    return pd.DataFrame(rows, columns=["t", "loss", "chord_violation"])


def covariance_penalty(f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure,
                       group_prior=Fraction(1, 2)) -> Fraction:
    """
    Cov(f(X, S), S) when X | S=0 ~ P, X | S=1 ~ Q and P(S = 1) = group_prior.
    """
    if f.codomain_dimension != 1:
        raise DimensionMismatch("covariance penalty needs a scalar map")
    prior = to_rational(group_prior)
    if not 0 < prior < 1:
        raise ValueError(f"group prior must lie in (0, 1), got {prior}")

    joint = [(f(x)[0], Fraction(0), (1 - prior) * w / p.mass) for x, w in p.atoms]
    joint += [(f(y)[0], Fraction(1), prior * w / q.mass) for y, w in q.atoms]
    mean_f = sum(v * w for v, _, w in joint)
    mean_s = sum(s * w for _, s, w in joint)
    return sum(v * s * w for v, s, w in joint) - mean_f * mean_s


def linear_equalizer_demo() -> NonconvexityCertificate:
    """
    Two linear maps that equalize the law of two independent fair coins and
    the law of one coin repeated, but whose average does not.

    f(x) = x1 and g(x) = -x2; the midpoint sends P to ¼δ(-½) + ½δ(0) + ¼δ(½)
    and Q to δ(0).
    """
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    corners = [Point((a, b)) for a in (0, 1) for b in (0, 1)]
    p = DiscreteMeasure.from_atoms([(c, quarter) for c in corners])
    q = DiscreteMeasure.from_atoms([((0, 0), half), ((1, 1), half)])
    domain = union_support(p, q)
    f = FiniteMap.from_function(domain, lambda x: (x[0],))
    g = FiniteMap.from_function(domain, lambda x: (-x[1],))
    witness = WitnessPair.from_maps(f, g, p, q)
    return certify_nonconvexity(LossCandidate(TV, EQUALIZER, p, q), witness)
