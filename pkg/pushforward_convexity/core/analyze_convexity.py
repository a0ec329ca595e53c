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
Main script for push-forward convexity analysis.

Exit codes: 0 analysis completed (whatever the verdict), 1 self-test
failure or internal error, 2 invalid input, 3 budget exceeded.
"""
import argparse
import logging
import sys
from dataclasses import asdict, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional

import pandas as pd

from pushforward_convexity.config import AnalysisConfig
from pushforward_convexity.core import continuum
from pushforward_convexity.core.continuum import UnivariateDistribution
from pushforward_convexity.core.equalizers import NONCONVEX, EqualizerReport, analyze_equalizers
from pushforward_convexity.core.errors import BUDGET_ERRORS, INPUT_ERRORS, ConvexityError
from pushforward_convexity.core.losses import (
    DISTANCES,
    EQUALIZER,
    TRANSPORT,
    TV,
    LossCandidate,
    certify_nonconvexity,
    covariance_penalty,
    scan_to_frame,
    segment_scan,
)
from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap, convex_combination
from pushforward_convexity.core.oracle import OracleVerdict, oracle_equalizer, oracle_transport
from pushforward_convexity.core.selftest import SelftestReport, run_selftest, source
from pushforward_convexity.core.serialization import (
    SCHEMA_VERSION,
    certificate_to_dict,
    dumps,
    equalizer_report_to_dict,
    load_measure,
    oracle_verdict_to_dict,
    transport_verdict_to_dict,
    witness_to_dict,
)
from pushforward_convexity.core.transport import TransportVerdict, classify_transport

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

CONSTRUCTIONS = ("xi", "inverse-cdf", "family", "monotone", "ac-witness")


class ConvexityAnalyzer:
    """Runs every analysis with one configuration."""

    def __init__(self, config: Optional[AnalysisConfig] = None):
        """
        Initialize convexity analyzer.

        Args:
            config: Analysis configuration parameters
        """
        self.config = config or AnalysisConfig()

    def equalizers(self, p: DiscreteMeasure, q: DiscreteMeasure) -> EqualizerReport:
        return analyze_equalizers(p, q, self.config.subset_algebra.max_atoms)

    def transport(self, p: DiscreteMeasure, q: DiscreteMeasure) -> TransportVerdict:
        return classify_transport(p, q, self.config.transport.limit,
                                  self.config.transport.uniform_crosscheck_max)

    def oracle(self, p: DiscreteMeasure, q: DiscreteMeasure, kind: str = EQUALIZER) -> OracleVerdict:
        if kind == TRANSPORT:
            return oracle_transport(p, q, self.config.transport.limit)
        return oracle_equalizer(p, q, self.config.oracle.value_count, self.config.oracle.budget)

    def witness(self, p: DiscreteMeasure, q: DiscreteMeasure, kind: str = EQUALIZER):
        """The decision procedure's witness pair, or None when the set is convex."""
        result = self.transport(p, q) if kind == TRANSPORT else self.equalizers(p, q)
        return result.witness

    def certificates(self, p: DiscreteMeasure, q: DiscreteMeasure, kind: str = EQUALIZER) -> List:
        """Certify every applicable discrepancy on the witness pair."""
        witness = self.witness(p, q, kind)
        if witness is None:
            return []
        names = [name for name in DISTANCES if name == TV or witness.f.codomain_dimension == 1]
        return [certify_nonconvexity(LossCandidate(name, kind, p, q), witness) for name in names]

    def scan(self, p: DiscreteMeasure, q: DiscreteMeasure, kind: str = EQUALIZER,
             loss: str = TV, grid_size: Optional[int] = None, rational: bool = False) -> pd.DataFrame:
        """Loss values along the segment between the two witness maps."""
        witness = self.witness(p, q, kind)
        if witness is None:
            raise ConvexityError(f"the {kind} constraint set is convex here; nothing to scan")
        grid = self.config.losses.grid_size if grid_size is None else grid_size
        values = segment_scan(LossCandidate(loss, kind, p, q), witness.f, witness.g, grid)
        return scan_to_frame(values, rational)

    def covariance(self, f: FiniteMap, p: DiscreteMeasure, q: DiscreteMeasure) -> Fraction:
        """Cov(f(X, S), S) with the configured group prior P(S = 1)."""
        return covariance_penalty(f, p, q, self.config.losses.group_prior)

    def demo(self, construction: str, n: Optional[int] = None, seed: Optional[int] = None,
             a_values: Optional[List[float]] = None, q: Optional[DiscreteMeasure] = None) -> Dict[str, Any]:
        settings = self.config.continuum
        n = settings.samples if n is None else n
        seed = settings.seed if seed is None else seed
        chunks = settings.chunks
        target = UnivariateDistribution.discrete(q if q is not None else source("1/2", "1/2"))
        uniform = UnivariateDistribution.uniform()

        if construction == "xi":
            reports = [continuum.xi_uniformity_demo(a, n, seed, chunks) for a in (a_values or [0.5])]
        elif construction == "inverse-cdf":
            reports = [continuum.inverse_cdf_demo(target, n, seed, chunks)]
        elif construction == "family":
            family = continuum.uncountable_family_demo(target, a_values or [0.0, 0.5], n, seed, chunks)
            return {"schema": SCHEMA_VERSION, "construction": construction, "passed": family.passed,
                    "reports": [asdict(r) for r in family.reports.values()],
                    "disagreement": [{"a": a, "b": b, "rate": rate}
                                     for (a, b), rate in family.disagreement.items()]}
        elif construction == "monotone":
            reports = [continuum.monotone_transport_demo(uniform, UnivariateDistribution.exponential(),
                                                         n, seed, chunks)]
        elif construction == "ac-witness":
            reports = [continuum.ac_equalizer_witness_demo(uniform, UnivariateDistribution.uniform(2, 3),
                                                           n, seed, chunks)]
        else:
            raise ValueError(f"unknown construction {construction!r}")
        return {"schema": SCHEMA_VERSION, "construction": construction,
                "passed": all(r.passed for r in reports), "reports": [asdict(r) for r in reports]}

    def selftest(self, max_atoms: int = 6) -> SelftestReport:
        return run_selftest(self.config, max_atoms)


def _human(payload: Dict[str, Any]) -> str:
    """One `key: value` line per scalar field; nested sections are summarized."""
    lines = []
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            lines.append(f"{key}: <{len(value)} entries>")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _emit(payload: Dict[str, Any], output_format: str) -> None:
    print(_human(payload) if output_format == "human" else dumps(payload))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Path to configuration file')
    common.add_argument('--format', choices=('json', 'human', 'csv'), default=None,
                        help='Output format (csv only for scan)')
    common.add_argument('--rational', action='store_true',
                        help='Write rationals as p/q instead of decimals in CSV output')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    common.add_argument('-q', '--quiet', action='store_true', help='Only warnings and errors')

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument('p', help='Measure P (JSON)')
    pair.add_argument('q', help='Measure Q (JSON)')

    kind = argparse.ArgumentParser(add_help=False)
    kind.add_argument('--kind', choices=(EQUALIZER, TRANSPORT), default=EQUALIZER,
                      help='Constraint set: equalizing maps or transport maps')

    parser = argparse.ArgumentParser(
        description='Analyze convexity of push-forward constraint sets'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    transport = sub.add_parser('transport', parents=[common, pair], help='Classify T(P,Q)')
    transport.add_argument('--limit', type=int, help='Enumeration limit')

    sub.add_parser('equalizer', parents=[common, pair], help='Classify E(P,Q)')

    oracle = sub.add_parser('oracle', parents=[common, pair, kind], help='Brute-force counterexample search')
    oracle.add_argument('--budget', type=int, help='Maximum number of maps in the family')
    oracle.add_argument('--values', type=int, help='Number of values (powers of 4)')
    oracle.add_argument('--limit', type=int, help='Transport enumeration limit')

    sub.add_parser('witness', parents=[common, pair, kind], help='Witness pair and loss certificates')

    scan = sub.add_parser('scan', parents=[common, pair, kind], help='Loss along the witness segment')
    scan.add_argument('--loss', choices=tuple(DISTANCES), default=TV)
    scan.add_argument('--grid', type=int, help='Number of grid intervals')

    demo = sub.add_parser('demo', parents=[common], help='Monte Carlo demonstrations')
    demo.add_argument('--construction', choices=CONSTRUCTIONS, required=True)
    demo.add_argument('--n', type=int, help='Sample size')
    demo.add_argument('--seed', type=int, help='Random seed (default from config, 0)')
    demo.add_argument('--a', type=float, nargs='+', help='Shift parameters in [0, 1)')
    demo.add_argument('--target', help='Discrete target measure on the line (JSON)')

    selftest = sub.add_parser('selftest', parents=[common], help='Run the fixture suite and oracle grid')
    selftest.add_argument('--max-atoms', type=int, default=6, help='Largest oracle grid instance')
    return parser


def _configure(args: argparse.Namespace) -> AnalysisConfig:
    config = AnalysisConfig.from_file(args.config) if args.config else AnalysisConfig()
    for flag in ('limit', 'budget', 'values', 'n', 'grid'):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            raise ValueError(f"--{flag} must be at least 1, got {value}")
    if getattr(args, 'limit', None) is not None:
        config.transport = replace(config.transport, limit=args.limit)
    if getattr(args, 'budget', None) is not None:
        config.oracle = replace(config.oracle, budget=args.budget)
    if getattr(args, 'values', None) is not None:
        config.oracle = replace(config.oracle, value_count=args.values)
    return config


def _dispatch(args: argparse.Namespace, analyzer: ConvexityAnalyzer) -> int:
    output_format = args.format or ('csv' if args.command == 'scan' else 'json')
    if output_format == 'csv' and args.command != 'scan':
        raise ValueError('csv output is only available for scan')

    if args.command == 'selftest':
        report = analyzer.selftest(args.max_atoms)
        if output_format == 'json':
            print(dumps({"schema": SCHEMA_VERSION, "passed": report.passed,
                         "checks": report.table.to_dict(orient='records')}))
        else:
            print(report.table.to_string(index=False))
        return EXIT_OK if report.passed else EXIT_FAILURE

    if args.command == 'demo':
        target = load_measure(args.target) if args.target else None
        _emit(analyzer.demo(args.construction, args.n, args.seed, args.a, target), output_format)
        return EXIT_OK

    p, q = load_measure(args.p), load_measure(args.q)
    if args.command == 'equalizer':
        _emit(equalizer_report_to_dict(analyzer.equalizers(p, q)), output_format)
    elif args.command == 'transport':
        _emit(transport_verdict_to_dict(analyzer.transport(p, q), q), output_format)
    elif args.command == 'oracle':
        _emit(oracle_verdict_to_dict(analyzer.oracle(p, q, args.kind)), output_format)
    elif args.command == 'witness':
        witness = analyzer.witness(p, q, args.kind)
        payload: Dict[str, Any] = {"schema": SCHEMA_VERSION, "analysis": "witness", "kind": args.kind,
                                   "verdict": NONCONVEX if witness is not None else "convex_or_empty"}
        if witness is not None:
            payload["witness"] = witness_to_dict(witness)
            payload["certificates"] = [certificate_to_dict(c) for c in analyzer.certificates(p, q, args.kind)]
            if args.kind == EQUALIZER:
                mid = convex_combination(witness.f, witness.g, witness.t)
                payload["covariance"] = {
                    "group_prior": analyzer.config.losses.group_prior,
                    "f": analyzer.covariance(witness.f, p, q),
                    "g": analyzer.covariance(witness.g, p, q),
                    "mid": analyzer.covariance(mid, p, q),
                }
        _emit(payload, output_format)
    elif args.command == 'scan':
        frame = analyzer.scan(p, q, args.kind, args.loss, args.grid, args.rational)
        if output_format == 'csv':
            print(frame[["t", "loss"]].to_csv(index=False), end='')
        else:
            _emit({"schema": SCHEMA_VERSION, "analysis": "scan", "loss": args.loss,
                   "values": frame.to_dict(orient='records')}, output_format)
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        return _dispatch(args, ConvexityAnalyzer(_configure(args)))
    except INPUT_ERRORS as e:
        logger.error(f"invalid input: {e}")
        return EXIT_INPUT
    except BUDGET_ERRORS as e:
        logger.error(f"budget exceeded: {e}")
        return EXIT_BUDGET
    except (OSError, ValueError, TypeError) as e:
        logger.error(f"invalid input: {e}")
        return EXIT_INPUT
    except ConvexityError as e:
        logger.error(f"analysis failed: {e}")
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == '__main__':
    main()
