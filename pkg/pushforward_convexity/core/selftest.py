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
Release gate: reference fixtures, the oracle agreement grid and the
coprimality law, collected into a pass/fail table.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd

from pushforward_convexity.config import AnalysisConfig
from pushforward_convexity.core.equalizers import CONVEX_STRUCTURED, CONVEX_TRIVIAL, NONCONVEX, analyze_equalizers
from pushforward_convexity.core.losses import (
    EQUALIZER,
    TRANSPORT,
    TV,
    W1_LINE,
    LossCandidate,
    certify_nonconvexity,
    linear_equalizer_demo,
)
from pushforward_convexity.core.measures import DiscreteMeasure, Point
from pushforward_convexity.core.oracle import oracle_equalizer
from pushforward_convexity.core.subset_algebra import ConvexDecision, decide_disjoint
from pushforward_convexity.core.transport import classify_transport

logger = logging.getLogger(__name__)

# Source atoms sit at 0, 1, 2, ...; target atoms at 10, 11, 12, ...
TARGET_OFFSET = 10


def line_measure(weights: Sequence, offset: int = 0, prefix: str = "x") -> DiscreteMeasure:
    """Measure on the line with atoms offset, offset + 1, ... named prefix1, prefix2, ..."""
    return DiscreteMeasure.from_atoms(
        [(Point((offset + i,), f"{prefix}{i + 1}"), Fraction(w)) for i, w in enumerate(weights)])


def source(*weights) -> DiscreteMeasure:
    return line_measure(weights, 0, "x")


def target(*weights) -> DiscreteMeasure:
    return line_measure(weights, TARGET_OFFSET, "y")


def uniform_pair(n: int, m: int) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    return source(*[Fraction(1, n)] * n), target(*[Fraction(1, m)] * m)


def partitions(total: int, parts: int, smallest: int = 1) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing tuples of positive integers with the given sum and length."""
    if parts == 1:
        if total >= smallest:
            yield (total,)
        return
    for first in range(smallest, total // parts + 1):
        for rest in partitions(total - first, parts - 1, first):
            yield (first,) + rest


def disjoint_grid(denominator: int = 6,
                  max_atoms: int = 6) -> Iterator[Tuple[DiscreteMeasure, DiscreteMeasure]]:
    """
    Disjointly supported pairs with weights k/denominator summing to 1 and
    at most max_atoms atoms in total. Weight order does not affect either
    decision, so only sorted weight vectors are produced.
    """
    for n in range(1, max_atoms):
        for m in range(1, max_atoms - n + 1):
            for alpha in partitions(denominator, n):
                for beta in partitions(denominator, m):
                    yield (source(*[Fraction(a, denominator) for a in alpha]),
                           target(*[Fraction(b, denominator) for b in beta]))


@dataclass
class SelftestReport:
    table: pd.DataFrame

    @property
    def passed(self) -> bool:
        return bool(self.table["passed"].all())


Check = Tuple[str, str, Callable[[], str]]


def _equalizer_verdict(p: DiscreteMeasure, q: DiscreteMeasure) -> str:
    report = analyze_equalizers(p, q, crosscheck=True)
    if report.witness is not None and not report.witness.verify(p, q):
        return "witness_failed"
    return report.verdict


def _transport_verdict(p: DiscreteMeasure, q: DiscreteMeasure) -> str:
    verdict = classify_transport(p, q)
    if verdict.witness is not None and not verdict.witness.verify(p, q):
        return "witness_failed"
    return f"{verdict.verdict}:{verdict.count}"


def _certificate_value(kind: str, name: str) -> str:
    if kind == EQUALIZER:
        p, q = source("1/2", "1/2"), target("1/2", "1/2")
        witness = analyze_equalizers(p, q).witness
    else:
        p, q = uniform_pair(2, 2)
        witness = classify_transport(p, q).witness
    certificate = certify_nonconvexity(LossCandidate(name, kind, p, q), witness)
    return str(certificate.loss_mid) if certificate.holds else "not_certified"


def _linear_demo() -> str:
    certificate = linear_equalizer_demo()
    w = certificate.witness
    mid = {str(p.coords[0]): str(weight) for p, weight in w.mid_p.atoms}
    return "ok" if certificate.holds and mid == {"-1/2": "1/4", "0": "1/2", "1/2": "1/4"} else str(mid)


def fixture_checks() -> List[Check]:
    """(name, expected, thunk) for every reference example."""
    return [
        ("transport: Dirac to two atoms", "empty:0", lambda: _transport_verdict(source(1), target("1/2", "1/2"))),
        ("transport: Dirac to Dirac", "singleton:1", lambda: _transport_verdict(source(1), target(1))),
        ("transport: uniform 2 to 2", "nonconvex:2", lambda: _transport_verdict(*uniform_pair(2, 2))),
        ("transport: uniform 3 to 2", "empty:0", lambda: _transport_verdict(*uniform_pair(3, 2))),
        ("transport: uniform 3 to 3", "nonconvex:6", lambda: _transport_verdict(*uniform_pair(3, 3))),
        ("transport: uniform 4 to 2", "nonconvex:6", lambda: _transport_verdict(*uniform_pair(4, 2))),
        ("equalizer: halves vs halves", NONCONVEX,
         lambda: _equalizer_verdict(source("1/2", "1/2"), target("1/2", "1/2"))),
        ("equalizer: halves vs thirds", CONVEX_TRIVIAL,
         lambda: _equalizer_verdict(source("1/2", "1/2"), target("1/3", "2/3"))),
        ("equalizer: thirds vs thirds", CONVEX_STRUCTURED,
         lambda: _equalizer_verdict(source("1/3", "2/3"), target("1/3", "2/3"))),
        ("equalizer: shared atom", CONVEX_TRIVIAL,
         lambda: _equalizer_verdict(
             DiscreteMeasure.from_atoms([((0,), "1/2"), ((1,), "1/2")]),
             DiscreteMeasure.from_atoms([((0,), "1/2"), ((2,), "1/2")]))),
        ("loss: tv equalizer midpoint", "1", lambda: _certificate_value(EQUALIZER, TV)),
        ("loss: w1 equalizer midpoint", "1/2", lambda: _certificate_value(EQUALIZER, W1_LINE)),
        ("loss: tv transport midpoint", "1", lambda: _certificate_value(TRANSPORT, TV)),
        ("loss: linear equalizer demo", "ok", _linear_demo),
    ]


def coprimality_checks(max_size: int = 8) -> List[Check]:
    checks = []
    for n in range(1, max_size + 1):
        for m in range(1, max_size + 1):
            expected = "convex_trivial" if gcd(n, m) == 1 else "nonconvex"

            def decide(n=n, m=m) -> str:
                decision = decide_disjoint([Fraction(1, n)] * n, [Fraction(1, m)] * m)
                if isinstance(decision, ConvexDecision):
                    return "convex_trivial" if decision.assignment.is_trivial else "convex_structured"
                return "nonconvex"

            checks.append((f"coprimality: n={n} m={m}", expected, decide))
    return checks


def oracle_grid_checks(max_atoms: int = 6, config: Optional[AnalysisConfig] = None) -> List[Check]:
    config = config or AnalysisConfig()
    checks = []
    for p, q in disjoint_grid(6, max_atoms):
        name = f"oracle grid: {list(p.weights)} vs {list(q.weights)}"

        def compare(p=p, q=q) -> str:
            decision = decide_disjoint(p.weights, q.weights, config.subset_algebra.max_atoms)
            found = oracle_equalizer(p, q, config.oracle.value_count, config.oracle.budget).found
            return "agree" if found == (not decision.convex) else "disagree"

        checks.append((name, "agree", compare))
    return checks


def perturbation_check() -> Check:
    """Changing a weight of a convex fixture must surface as a changed verdict."""
    def perturbed() -> str:
        original = _equalizer_verdict(source("1/3", "2/3"), target("1/3", "2/3"))
        changed = _equalizer_verdict(source("1/4", "3/4"), target("1/3", "2/3"))
        logger.info("perturbed fixture: %s -> %s", original, changed)
        return "changed" if changed != original else "unchanged"

    return ("perturbation: thirds -> quarter", "changed", perturbed)


def run_selftest(config: Optional[AnalysisConfig] = None, max_atoms: int = 6) -> SelftestReport:
    """Run every check; failures and exceptions become failed rows, never aborts."""
    checks = (fixture_checks() + [perturbation_check()] + coprimality_checks()
              + oracle_grid_checks(max_atoms, config))
    rows = []
    for name, expected, thunk in checks:
        try:
            actual = thunk()
        except Exception as exc:
            logger.error("%s raised %s", name, exc)
            actual = f"error: {exc}"
        rows.append({"check": name, "expected": expected, "actual": actual,
                     "passed": actual == expected})
    table = pd.DataFrame(rows, columns=["check", "expected", "actual", "passed"])
    logger.info("%d of %d checks passed", int(table["passed"].sum()), len(table))
    return SelftestReport(table)
