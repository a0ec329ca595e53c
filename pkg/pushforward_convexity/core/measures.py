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
Exact finitely supported measures, finite maps and push-forward calculus.

Every weight and coordinate is a `fractions.Fraction`; nothing in this
module rounds.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from pushforward_convexity.core.errors import (
    DimensionMismatch,
    DomainMismatch,
    MeasureError,
    MissingMapping,
)

Rational = Fraction
Coords = Tuple[Fraction, ...]
RationalLike = Union[int, str, Fraction]
CoordsLike = Union[RationalLike, Sequence[RationalLike]]


def to_rational(value: RationalLike, field_name: Optional[str] = None) -> Fraction:
    """Parse an integer, a "p/q" string or a Fraction into a Fraction."""
    if isinstance(value, bool) or isinstance(value, float):
        raise MeasureError(f"expected an exact rational, got {value!r}", field_name)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MeasureError(f"invalid rational {value!r} ({exc})", field_name) from exc


def to_coords(value: CoordsLike) -> Coords:
    """Normalize a scalar or a sequence of rationals into a coordinate tuple."""
    if isinstance(value, (int, str, Fraction)) and not isinstance(value, bool):
        return (to_rational(value),)
    return tuple(to_rational(v) for v in value)


def format_coords(coords: Coords) -> str:
    return ",".join(str(c) for c in coords)


@dataclass(frozen=True, order=True)
class Point:
    """A point of R^d; equality, hashing and ordering use coordinates only."""
    coords: Coords
    id: str = field(default="", compare=False)

    def __post_init__(self):
        coords = to_coords(self.coords)
        if not coords:
            raise MeasureError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)
        if not self.id:
            object.__setattr__(self, "id", format_coords(coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        return self.id


PointLike = Union[Point, CoordsLike]


def to_point(value: PointLike) -> Point:
    return value if isinstance(value, Point) else Point(to_coords(value))


@dataclass(frozen=True)
class DiscreteMeasure:
    """
    Finitely supported nonnegative measure.

    Atoms are kept sorted lexicographically by coordinates, weights are
    strictly positive and `mass` is their exact sum.
    """
    atoms: Tuple[Tuple[Point, Fraction], ...]
    dimension: int
    mass: Fraction

    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[PointLike, RationalLike]],
                   dimension: Optional[int] = None,
                   mass: Optional[RationalLike] = None) -> 'DiscreteMeasure':
        """
        Build a measure, validating every atom.

        Args:
            atoms: (point, weight) pairs
            dimension: Ambient dimension; inferred from the atoms when omitted
            mass: Declared total mass; checked against the weight sum when given

        Raises:
            MeasureError: on negative weights, duplicate points or a mass mismatch
            DimensionMismatch: when atoms disagree on the dimension
        """
        kept: Dict[Point, Fraction] = {}
        seen = set()
        for index, (raw_point, raw_weight) in enumerate(atoms):
            point = to_point(raw_point)
            weight = to_rational(raw_weight, f"atoms[{index}].weight")
            if dimension is None:
                dimension = point.dimension
            elif point.dimension != dimension:
                raise DimensionMismatch(
                    f"atom {point} has dimension {point.dimension}, expected {dimension}")
            if weight < 0:
                raise MeasureError(f"negative weight {weight}", f"atoms[{index}].weight")
            if point in seen:
                raise MeasureError(f"duplicate coordinates {point.coords}", f"atoms[{index}].coords")
            seen.add(point)
            if weight == 0:
                continue
            kept[point] = weight
        if dimension is None:
            raise MeasureError("an empty measure needs an explicit dimension")
        total = sum(kept.values(), Fraction(0))
        if mass is not None:
            declared = to_rational(mass, "mass")
            if declared != total:
                raise MeasureError(f"weights sum to {total}, declared mass is {declared}", "mass")
        return cls._canonical(kept, dimension)

    @classmethod
    def _canonical(cls, weights: Mapping[Point, Fraction], dimension: int) -> 'DiscreteMeasure':
        atoms = tuple(sorted((p, w) for p, w in weights.items() if w != 0))
        return cls(atoms=atoms, dimension=dimension,
                   mass=sum((w for _, w in atoms), Fraction(0)))

    @classmethod
    def zero(cls, dimension: int) -> 'DiscreteMeasure':
        return cls(atoms=(), dimension=dimension, mass=Fraction(0))

    @classmethod
    def dirac(cls, point: PointLike, weight: RationalLike = 1) -> 'DiscreteMeasure':
        return cls.from_atoms([(point, weight)])

    @classmethod
    def uniform(cls, points: Sequence[PointLike]) -> 'DiscreteMeasure':
        weight = Fraction(1, len(points))
        return cls.from_atoms([(p, weight) for p in points])

    @cached_property
    def _weights(self) -> Dict[Point, Fraction]:
        return dict(self.atoms)

    @property
    def points(self) -> Tuple[Point, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return tuple(w for _, w in self.atoms)

    def weight_of(self, point: PointLike) -> Fraction:
        return self._weights.get(to_point(point), Fraction(0))

    def __contains__(self, point: PointLike) -> bool:
        return to_point(point) in self._weights

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Tuple[Point, Fraction]]:
        return iter(self.atoms)

    @property
    def is_probability(self) -> bool:
        return self.mass == 1

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) <= 1

    def __add__(self, other: 'DiscreteMeasure') -> 'DiscreteMeasure':
        _check_dimensions(self, other)
        merged: Dict[Point, Fraction] = defaultdict(Fraction)
        for p, w in self.atoms + other.atoms:
            merged[p] += w
        return DiscreteMeasure._canonical(merged, self.dimension)

    def scaled(self, factor: RationalLike) -> 'DiscreteMeasure':
        factor = to_rational(factor)
        if factor < 0:
            raise MeasureError(f"cannot scale a measure by {factor}")
        return DiscreteMeasure._canonical({p: w * factor for p, w in self.atoms}, self.dimension)

    def minus(self, other: 'DiscreteMeasure') -> 'DiscreteMeasure':
        """Subtract a measure dominated by this one (the only signed step reduce_pair needs)."""
        _check_dimensions(self, other)
        diff = dict(self._weights)
        for p, w in other.atoms:
            remaining = diff.get(p, Fraction(0)) - w
            if remaining < 0:
                raise MeasureError(f"subtraction leaves negative mass at {p}")
            diff[p] = remaining
        return DiscreteMeasure._canonical(diff, self.dimension)

    def __str__(self) -> str:
        body = " + ".join(f"{w}*δ({p.id})" for p, w in self.atoms)
        return body or "0"


@dataclass(frozen=True)
class FiniteMap:
    """A function tabulated on a finite set of points, with values in Q^p."""
    entries: Tuple[Tuple[Point, Coords], ...]
    codomain_dimension: int

    @classmethod
    def from_dict(cls, mapping: Mapping[PointLike, CoordsLike],
                  codomain_dimension: Optional[int] = None) -> 'FiniteMap':
        entries: Dict[Point, Coords] = {}
        for raw_point, raw_value in mapping.items():
            point = to_point(raw_point)
            value = to_coords(raw_value)
            if codomain_dimension is None:
                codomain_dimension = len(value)
            elif len(value) != codomain_dimension:
                raise DimensionMismatch(
                    f"value {value} at {point} is not of dimension {codomain_dimension}")
            if point in entries:
                raise DomainMismatch(f"point {point} mapped twice")
            entries[point] = value
        if codomain_dimension is None:
            raise DomainMismatch("an empty map needs an explicit codomain dimension")
        return cls(entries=tuple(sorted(entries.items())), codomain_dimension=codomain_dimension)

    @classmethod
    def constant(cls, domain: Iterable[PointLike], value: CoordsLike) -> 'FiniteMap':
        value = to_coords(value)
        return cls.from_dict({to_point(p): value for p in domain}, len(value))

    @classmethod
    def from_function(cls, domain: Iterable[PointLike],
                      fn: Callable[[Coords], CoordsLike]) -> 'FiniteMap':
        """Tabulate `fn` (called on exact coordinates) over `domain`."""
        points = [to_point(p) for p in domain]
        return cls.from_dict({p: fn(p.coords) for p in points})

    @cached_property
    def _table(self) -> Dict[Point, Coords]:
        return dict(self.entries)

    @property
    def domain(self) -> Tuple[Point, ...]:
        return tuple(p for p, _ in self.entries)

    def __call__(self, point: PointLike) -> Coords:
        point = to_point(point)
        try:
            return self._table[point]
        except KeyError:
            raise MissingMapping(point) from None

    def __contains__(self, point: PointLike) -> bool:
        return to_point(point) in self._table

    def compose(self, psi: 'FiniteMap') -> 'FiniteMap':
        """Return psi ∘ self; psi must be tabulated on every value of self."""
        return FiniteMap.from_dict({x: psi(Point(v)) for x, v in self.entries},
                                   psi.codomain_dimension)

    def restrict(self, points: Iterable[PointLike]) -> 'FiniteMap':
        return FiniteMap.from_dict({to_point(p): self(p) for p in points}, self.codomain_dimension)

    def merged(self, other: 'FiniteMap') -> 'FiniteMap':
        """Union of two tables; they must agree wherever both are defined."""
        if other.codomain_dimension != self.codomain_dimension:
            raise DomainMismatch("cannot merge maps with different codomain dimensions")
        table = dict(self._table)
        for p, v in other.entries:
            if table.setdefault(p, v) != v:
                raise DomainMismatch(f"maps disagree at {p}")
        return FiniteMap.from_dict(table, self.codomain_dimension)

    def agrees_on(self, other: 'FiniteMap', points: Iterable[PointLike]) -> bool:
        return all(self(p) == other(p) for p in points)


def _check_dimensions(mu: DiscreteMeasure, nu: DiscreteMeasure) -> None:
    if mu.dimension != nu.dimension:
        raise DimensionMismatch(f"dimensions {mu.dimension} and {nu.dimension} differ")


def push_forward(f: FiniteMap, mu: DiscreteMeasure) -> DiscreteMeasure:
    """
    Image measure f♯μ: weights of atoms sharing an image are summed.

    Raises:
        MissingMapping: if an atom of μ is not in the domain of f
    """
    image: Dict[Point, Fraction] = defaultdict(Fraction)
    for point, weight in mu.atoms:
        image[Point(f(point))] += weight
    return DiscreteMeasure._canonical(image, f.codomain_dimension)


def min_measure(p: DiscreteMeasure, q: DiscreteMeasure) -> DiscreteMeasure:
    """Common mass: min of the two weights at every shared point."""
    _check_dimensions(p, q)
    common = {x: min(w, q.weight_of(x)) for x, w in p.atoms if x in q}
    return DiscreteMeasure._canonical(common, p.dimension)


def reduce_pair(p: DiscreteMeasure,
                q: DiscreteMeasure) -> Tuple[DiscreteMeasure, DiscreteMeasure, Fraction]:
    """
    Remove the common mass of P and Q.

    Returns:
        (P - min(P,Q), Q - min(P,Q), γ) where both residuals have disjoint
        supports and mass γ; γ is 0 exactly when P = Q
    """
    _check_dimensions(p, q)
    if p.mass != q.mass:
        raise MeasureError(f"masses {p.mass} and {q.mass} differ")
    common = min_measure(p, q)
    p_res, q_res = p.minus(common), q.minus(common)
    return p_res, q_res, p_res.mass


def _dot(u: Coords, v: Coords) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def second_moment(mu: DiscreteMeasure) -> Fraction:
    return sum((w * _dot(p.coords, p.coords) for p, w in mu.atoms), Fraction(0))


def inner_product_integral(f: FiniteMap, g: FiniteMap, p: DiscreteMeasure) -> Fraction:
    """Exact ∫ <f, g> dP."""
    if f.codomain_dimension != g.codomain_dimension:
        raise DimensionMismatch(
            f"codomain dimensions {f.codomain_dimension} and {g.codomain_dimension} differ")
    return sum((w * _dot(f(x), g(x)) for x, w in p.atoms), Fraction(0))


def integrate(h: Union[FiniteMap, Callable[[Coords], RationalLike]], mu: DiscreteMeasure) -> Fraction:
    """Exact Σ h dμ for a scalar function h, tabulated or callable."""
    if isinstance(h, FiniteMap):
        if h.codomain_dimension != 1:
            raise DimensionMismatch("integrand must be scalar")
        return sum((w * h(x)[0] for x, w in mu.atoms), Fraction(0))
    return sum((w * to_rational(h(x.coords)) for x, w in mu.atoms), Fraction(0))


def convex_combination(f: FiniteMap, g: FiniteMap, t: RationalLike) -> FiniteMap:
    """Pointwise (1 - t) f + t g."""
    t = to_rational(t)
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if f.domain != g.domain or f.codomain_dimension != g.codomain_dimension:
        raise DomainMismatch("convex combination needs identical domains and codomains")
    return FiniteMap(
        entries=tuple((x, tuple((1 - t) * a + t * b for a, b in zip(u, g(x))))
                      for x, u in f.entries),
        codomain_dimension=f.codomain_dimension,
    )


def measures_equal(mu: DiscreteMeasure, nu: DiscreteMeasure) -> bool:
    return mu.dimension == nu.dimension and mu.atoms == nu.atoms


def union_support(p: DiscreteMeasure, q: DiscreteMeasure) -> Tuple[Point, ...]:
    """Sorted union of both supports (points compared by coordinates)."""
    return tuple(sorted(set(p.points) | set(q.points)))
