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

"""Configuration settings for convexity analysis."""
from dataclasses import dataclass, field
from fractions import Fraction

import yaml


@dataclass
class SubsetAlgebraConfig:
    """Configuration for subset-sum enumeration."""
    max_atoms: int = 20


@dataclass
class TransportConfig:
    """Configuration for transport map enumeration."""
    limit: int = 10_000
    uniform_crosscheck_max: int = 5


@dataclass
class OracleConfig:
    """Configuration for the brute-force oracles."""
    value_count: int = 3
    budget: int = 729


@dataclass
class LossConfig:
    """Configuration for loss certification and scans."""
    group_prior: Fraction = Fraction(1, 2)
    grid_size: int = 4


@dataclass
class ContinuumConfig:
    """Configuration for the Monte Carlo demonstrations."""
    seed: int = 0
    samples: int = 100_000
    chunks: int = 1


@dataclass
class AnalysisConfig:
    """Main configuration class."""
    subset_algebra: SubsetAlgebraConfig = field(default_factory=SubsetAlgebraConfig)
    transport: TransportConfig = field(default_factory=TransportConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    losses: LossConfig = field(default_factory=LossConfig)
    continuum: ContinuumConfig = field(default_factory=ContinuumConfig)

    @classmethod
    def from_file(cls, config_path: str) -> 'AnalysisConfig':
        """Load configuration from YAML file."""
        with open(config_path) as f:
            config_dict = yaml.safe_load(f) or {}

        losses = dict(config_dict.get('losses', {}))
        if 'group_prior' in losses:
            losses['group_prior'] = Fraction(str(losses['group_prior']))

        return cls(
            subset_algebra=SubsetAlgebraConfig(**config_dict.get('subset_algebra', {})),
            transport=TransportConfig(**config_dict.get('transport', {})),
            oracle=OracleConfig(**config_dict.get('oracle', {})),
            losses=LossConfig(**losses),
            continuum=ContinuumConfig(**config_dict.get('continuum', {})),
        )
