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
Floating-point Monte Carlo demonstrations for measures on the line:
the mod-1 shift family, generalized inverse CDFs, the monotone transport
map and a two-valued equalizer witness for absolutely continuous measures.

This is the only module that works in floating point.
"""
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from pushforward_convexity.core.errors import DimensionMismatch, OutOfDomain, SupportsOverlap
from pushforward_convexity.core.measures import DiscreteMeasure

logger = logging.getLogger(__name__)

KS_COEFFICIENT = 1.63
SIGMA_BOUND = 3.0

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class UnivariateDistribution:
    """
    A distribution on the line: a discrete measure, or one of the
    parametric families uniform(a, b), exponential(rate) and
    triangular(left, mode, right).
    """
    name: str
    params: Tuple[float, ...] = ()
    measure: Union[DiscreteMeasure, None] = None

    @classmethod
    def discrete(cls, measure: DiscreteMeasure) -> 'UnivariateDistribution':
        if measure.dimension != 1:
            raise DimensionMismatch("only measures on the line have a distribution function")
        return cls("discrete", (), measure)

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> 'UnivariateDistribution':
        if not a < b:
            raise OutOfDomain(f"uniform({a}, {b}) needs a < b")
        return cls("uniform", (a, b))

    @classmethod
    def exponential(cls, rate: float = 1.0) -> 'UnivariateDistribution':
        if rate <= 0:
            raise OutOfDomain(f"exponential rate must be positive, got {rate}")
        return cls("exponential", (rate,))

    @classmethod
    def triangular(cls, left: float = 0.0, mode: float = 0.5,
                   right: float = 1.0) -> 'UnivariateDistribution':
        if not left <= mode <= right or left == right:
            raise OutOfDomain(f"triangular({left}, {mode}, {right}) is degenerate")
        return cls("triangular", (left, mode, right))

    @property
    def is_discrete(self) -> bool:
        return self.measure is not None

    @cached_property
    def _frozen(self):
        """scipy.stats frozen distribution for the parametric families."""
        if self.name == "uniform":
            a, b = self.params
            return stats.uniform(loc=a, scale=b - a)
        if self.name == "exponential":
            return stats.expon(scale=1.0 / self.params[0])
        if self.name == "triangular":
            left, mode, right = self.params
            return stats.triang((mode - left) / (right - left), loc=left, scale=right - left)
        raise OutOfDomain(f"{self.name} has no parametric form")

    @cached_property
    def _atoms(self) -> Tuple[np.ndarray, np.ndarray]:
        values = np.array([float(p.coords[0]) for p in self.measure.points])
        cumulative = np.cumsum([float(w / self.measure.mass) for w in self.measure.weights])
        cumulative[-1] = 1.0
        return values, cumulative

    @property
    def atom_values(self) -> np.ndarray:
        return self._atoms[0]

    @property
    def atom_probabilities(self) -> np.ndarray:
        return np.diff(self._atoms[1], prepend=0.0)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        if not self.is_discrete:
            return self._frozen.cdf(x)
        values, cumulative = self._atoms
        index = np.searchsorted(values, x, side="right") - 1
        return np.where(index >= 0, cumulative[np.clip(index, 0, None)], 0.0)

    def ppf(self, u: ArrayLike) -> ArrayLike:
        """inf{t : F(t) >= u}, without domain checks."""
        if not self.is_discrete:
            return self._frozen.ppf(u)
        values, cumulative = self._atoms
        index = np.searchsorted(cumulative, u, side="left")
        return values[np.clip(index, 0, len(values) - 1)]

    def support(self) -> Tuple[float, float]:
        if self.is_discrete:
            values = self.atom_values
            return float(values[0]), float(values[-1])
        low, high = self._frozen.support()
        return float(low), float(high)


@dataclass(frozen=True)
class MonteCarloReport:
    """
    Outcome of one seeded Monte Carlo check: passed iff statistic <= threshold
    and, where the construction adds one, its structural check holds.
    """
    construction: str
    sample_size: int
    seed: int
    chunks: int
    statistic_name: str
    statistic: float
    threshold: float
    passed: bool
    details: Dict = field(default_factory=dict)

    @classmethod
    def make(cls, construction: str, sample_size: int, seed: int, chunks: int,
             statistic_name: str, statistic: float, threshold: float,
             **details) -> 'MonteCarloReport':
        report = cls(construction, sample_size, seed, chunks, statistic_name, float(statistic),
                     float(threshold), bool(statistic <= threshold), details)
        log = logger.info if report.passed else logger.warning
        log("%s: %s = %.5f (threshold %.5f)", construction, statistic_name, statistic, threshold)
        return report


def uniform_samples(n: int, seed: int = 0, chunks: int = 1) -> np.ndarray:
    """
    n uniform draws on [0, 1) from PCG64 streams spawned per chunk, so the
    result depends only on (seed, chunks).
    """
    if n < 1 or chunks < 1:
        raise OutOfDomain("sample size and chunk count must be positive")
    streams = np.random.SeedSequence(seed).spawn(chunks)
    sizes = [len(part) for part in np.array_split(np.arange(n), chunks)]
    return np.concatenate([np.random.default_rng(s).random(k) for s, k in zip(streams, sizes)])


def ks_statistic(samples: np.ndarray, dist: UnivariateDistribution) -> float:
    return float(stats.kstest(samples, dist.cdf).statistic)


def ks_threshold(n: int, coefficient: float = KS_COEFFICIENT) -> float:
    return coefficient / np.sqrt(n)


def atom_frequency_deviation(values: np.ndarray, dist: UnivariateDistribution,
                             sigma_bound: float = SIGMA_BOUND) -> Tuple[float, float, Dict[float, float]]:
    """
    Largest gap between empirical and target atom frequencies, with the
    matching binomial bound sigma_bound * max sqrt(p (1 - p) / n).
    """
    n = len(values)
    targets = dist.atom_probabilities
    frequencies = {float(v): float(np.mean(values == v)) for v in dist.atom_values}
    deviation = max(abs(frequencies[float(v)] - p) for v, p in zip(dist.atom_values, targets))
    bound = sigma_bound * float(np.max(np.sqrt(targets * (1 - targets) / n)))
    return float(deviation), bound, frequencies


def _check_shift(a: float) -> None:
    if not 0 <= a < 1:
        raise OutOfDomain(f"shift parameter must lie in [0, 1), got {a}")


def xi_shift(a: float, u: ArrayLike) -> ArrayLike:
    """Mod-1 translation of [0, 1]: u + a below 1 - a, u - 1 + a from there on."""
    _check_shift(a)
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0) | (u_arr > 1)):
        raise OutOfDomain("ξ_a is defined on [0, 1]")
    shifted = np.where(u_arr < 1 - a, u_arr + a, u_arr - 1 + a)
    return float(shifted) if shifted.ndim == 0 else shifted


def generalized_inverse_cdf(dist: UnivariateDistribution, u: ArrayLike) -> ArrayLike:
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0) | (u_arr >= 1)):
        raise OutOfDomain("the generalized inverse is evaluated on (0, 1)")
    result = dist.ppf(u_arr)
    return float(result) if np.ndim(result) == 0 else result


def _sample(dist: UnivariateDistribution, n: int, seed: int, chunks: int) -> np.ndarray:
    """Inverse-CDF sampling."""
    return dist.ppf(uniform_samples(n, seed, chunks))


def _goodness_of_fit(construction: str, values: np.ndarray, dist: UnivariateDistribution,
                     n: int, seed: int, chunks: int, **details) -> MonteCarloReport:
    if dist.is_discrete:
        deviation, bound, frequencies = atom_frequency_deviation(values, dist)
        return MonteCarloReport.make(construction, n, seed, chunks, "atom_frequency_deviation",
                                     deviation, bound, frequencies=frequencies, **details)
    return MonteCarloReport.make(construction, n, seed, chunks, "ks_distance",
                                 ks_statistic(values, dist), ks_threshold(n), **details)


def xi_uniformity_demo(a: float, n: int = 100_000, seed: int = 0,
                       chunks: int = 1) -> MonteCarloReport:
    """ξ_a pushes the uniform law on [0, 1] to itself."""
    shifted = xi_shift(a, uniform_samples(n, seed, chunks))
    return _goodness_of_fit("xi", shifted, UnivariateDistribution.uniform(), n, seed, chunks, a=a)


def inverse_cdf_demo(dist: UnivariateDistribution, n: int = 100_000, seed: int = 0,
                     chunks: int = 1) -> MonteCarloReport:
    """The generalized inverse CDF pushes the uniform law to `dist`."""
    return _goodness_of_fit("inverse-cdf", _sample(dist, n, seed, chunks), dist, n, seed, chunks)


@dataclass(frozen=True)
class FamilyReport:
    """Per-shift goodness of fit plus pairwise disagreement rates of the maps."""
    reports: Dict[float, MonteCarloReport]
    disagreement: Dict[Tuple[float, float], float]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports.values()) and all(
            rate > 0 for rate in self.disagreement.values())


def uncountable_family_demo(q: UnivariateDistribution, a_values: Sequence[float],
                            n: int = 100_000, seed: int = 0, chunks: int = 1,
                            p: UnivariateDistribution = UnivariateDistribution.uniform()) -> FamilyReport:
    """
    The maps f_a = F_Q^† ∘ ξ_a ∘ F_P all push P to Q, yet differ pairwise on
    a set of positive P-mass.
    """
    if p.is_discrete:
        raise OutOfDomain("the source distribution must be absolutely continuous")
    if len(set(a_values)) != len(a_values):
        raise OutOfDomain("shift parameters must be distinct")
    for a in a_values:
        _check_shift(a)

    x = _sample(p, n, seed, chunks)
    ranks = np.clip(p.cdf(x), 0.0, 1.0)
    images = {a: q.ppf(xi_shift(a, ranks)) for a in a_values}
    reports = {a: _goodness_of_fit("family", images[a], q, n, seed, chunks, a=a) for a in a_values}
    disagreement = {}
    ordered = sorted(a_values)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            disagreement[(a, b)] = float(np.mean(images[a] != images[b]))
    return FamilyReport(reports, disagreement)


def monotone_transport_1d(p: UnivariateDistribution, q: UnivariateDistribution,
                          x: ArrayLike) -> ArrayLike:
    """The nondecreasing transport map F_Q^† ∘ F_P."""
    if p.is_discrete:
        raise OutOfDomain("the source distribution must be absolutely continuous")
    result = q.ppf(np.clip(p.cdf(x), 0.0, 1.0))
    return float(result) if np.ndim(result) == 0 else result


def monotone_transport_demo(p: UnivariateDistribution, q: UnivariateDistribution,
                            n: int = 100_000, seed: int = 0, chunks: int = 1,
                            grid_points: int = 1000) -> MonteCarloReport:
    """
    Goodness of fit of the pushed samples, plus a monotonicity check on a
    quantile grid. The report only passes when the map is nondecreasing.
    """
    pushed = monotone_transport_1d(p, q, _sample(p, n, seed, chunks))
    grid = p.ppf(np.linspace(0.5 / grid_points, 1 - 0.5 / grid_points, grid_points))
    steps = np.diff(monotone_transport_1d(p, q, grid))
    nondecreasing = bool(np.all(steps >= 0))
    report = _goodness_of_fit("monotone", pushed, q, n, seed, chunks,
                              nondecreasing=nondecreasing,
                              strictly_increasing=bool(np.all(steps > 0)))
    if not nondecreasing:
        logger.warning("monotone: transport map decreases on the quantile grid")
    return replace(report, passed=report.passed and nondecreasing)


def ac_equalizer_witness_demo(p: UnivariateDistribution, q: UnivariateDistribution,
                              n: int = 100_000, seed: int = 0, chunks: int = 1,
                              z: float = 0.0, z_prime: float = 1.0) -> MonteCarloReport:
    """
    Two equalizing maps for disjointly supported P and Q whose midpoint is not one.

    With ψ1 = z below ½ and z' above, and ψ2 the swap, f = ψ1 ∘ F_P on
    supp(P) and ψ1 ∘ F_Q on supp(Q), g = ψ1 ∘ F_P and ψ2 ∘ F_Q. Both push P
    and Q to ½δ_z + ½δ_z', while the midpoint sends all of Q to (z + z')/2.
    """
    if p.is_discrete or q.is_discrete:
        raise OutOfDomain("both distributions must be absolutely continuous")
    (p_low, p_high), (q_low, q_high) = p.support(), q.support()
    if not (p_high <= q_low or q_high <= p_low):
        raise SupportsOverlap(f"supports [{p_low}, {p_high}] and [{q_low}, {q_high}] overlap")

    def psi1(u):
        return np.where(u < 0.5, z, z_prime)

    def psi2(u):
        return np.where(u < 0.5, z_prime, z)

    streams = np.random.SeedSequence(seed).spawn(2)
    ranks_p = p.cdf(_sample(p, n, int(streams[0].generate_state(1)[0]), chunks))
    ranks_q = q.cdf(_sample(q, n, int(streams[1].generate_state(1)[0]), chunks))
    f_p, f_q = psi1(ranks_p), psi1(ranks_q)
    g_p, g_q = psi1(ranks_p), psi2(ranks_q)
    mid_p, mid_q = (f_p + g_p) / 2, (f_q + g_q) / 2

    frequencies = {name: float(np.mean(values == z))
                   for name, values in (("f_p", f_p), ("f_q", f_q), ("g_p", g_p),
                                        ("g_q", g_q), ("mid_p", mid_p))}
    deviation = max(abs(freq - 0.5) for freq in frequencies.values())
    mid_q_values = np.unique(mid_q)
    return MonteCarloReport.make(
        "ac-witness", n, seed, chunks, "frequency_deviation", deviation,
        SIGMA_BOUND * 0.5 / np.sqrt(n),
        frequencies_of_z=frequencies,
        mid_q_values=[float(v) for v in mid_q_values],
        mid_q_degenerate=bool(len(mid_q_values) == 1 and mid_q_values[0] == (z + z_prime) / 2),
    )
