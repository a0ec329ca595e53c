"""
Core functionality for push-forward convexity analysis
"""

from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap, Point, push_forward
from pushforward_convexity.core.subset_algebra import decide_disjoint, enumerate_sums
from pushforward_convexity.core.equalizers import analyze_equalizers, build_witness
from pushforward_convexity.core.transport import classify_transport, enumerate_transport_maps
from pushforward_convexity.core.oracle import oracle_equalizer, oracle_transport
from pushforward_convexity.core.losses import LossCandidate, certify_nonconvexity

__all__ = [
    'DiscreteMeasure',
    'FiniteMap',
    'Point',
    'push_forward',
    'decide_disjoint',
    'enumerate_sums',
    'analyze_equalizers',
    'build_witness',
    'classify_transport',
    'enumerate_transport_maps',
    'oracle_equalizer',
    'oracle_transport',
    'LossCandidate',
    'certify_nonconvexity',
]
