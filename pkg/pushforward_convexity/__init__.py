# pushforward_convexity/__init__.py
"""
Push-forward Convexity Package.

This package decides existence, cardinality and convexity of the sets of
transport maps and equalizing maps between finitely supported measures,
with exact rational arithmetic, verified witnesses and brute-force oracles.
"""

__version__ = '0.1.0'

# Import main classes
from .core.measures import DiscreteMeasure, FiniteMap, Point
from .core.equalizers import EqualizerReport, WitnessPair, analyze_equalizers
from .core.transport import TransportVerdict, classify_transport
from .core.analyze_convexity import ConvexityAnalyzer

# Define package exports
__all__ = [
    'DiscreteMeasure',
    'FiniteMap',
    'Point',
    'EqualizerReport',
    'WitnessPair',
    'analyze_equalizers',
    'TransportVerdict',
    'classify_transport',
    'ConvexityAnalyzer',
]

# Package-level configuration
default_config = {
    'max_atoms': 20,
    'transport_limit': 10_000,
    'oracle_budget': 729,
}
