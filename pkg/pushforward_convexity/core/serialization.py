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
JSON formats for measures, maps, verdicts and witnesses.

Measures read and write as
    {"dimension": d, "mass": "1",
     "atoms": [{"id": "x1", "coords": ["0", "1/2"], "weight": "1/3"}, ...]}
with every rational written as an integer or "p/q" string.
"""
import json
from dataclasses import asdict, is_dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from pushforward_convexity.core.errors import MeasureError
from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap, Point, format_coords, to_rational

SCHEMA_VERSION = "1"


def render_rational(value: Fraction, rational: bool = True) -> str:
    """Render exactly as "p/q", or as a decimal string (28 significant digits)."""
    value = Fraction(value)
    if rational or value.denominator == 1:
        return str(value)
    with localcontext() as ctx:
        ctx.prec = 28
        text = str(Decimal(value.numerator) / Decimal(value.denominator))
    return text


def parse_measure(data: Dict[str, Any]) -> DiscreteMeasure:
    """
    Validate and build a measure from its JSON form.

    Raises:
        MeasureError: with `field` pointing at the offending entry
    """
    if not isinstance(data, dict):
        raise MeasureError("measure must be a JSON object")
    if "atoms" not in data or not isinstance(data["atoms"], list):
        raise MeasureError("missing atom list", "atoms")
    dimension = data.get("dimension")
    if dimension is not None and (not isinstance(dimension, int) or dimension < 1):
        raise MeasureError(f"invalid dimension {dimension!r}", "dimension")

    atoms, ids = [], set()
    for index, atom in enumerate(data["atoms"]):
        where = f"atoms[{index}]"
        if not isinstance(atom, dict) or "coords" not in atom or "weight" not in atom:
            raise MeasureError("atom needs 'coords' and 'weight'", where)
        coords = atom["coords"]
        if not isinstance(coords, list) or not coords:
            raise MeasureError("coords must be a nonempty list", f"{where}.coords")
        coords = tuple(to_rational(c, f"{where}.coords[{k}]") for k, c in enumerate(coords))
        weight = to_rational(atom["weight"], f"{where}.weight")
        if weight <= 0:
            raise MeasureError(f"weight {weight} is not positive", f"{where}.weight")
        atom_id = str(atom.get("id") or format_coords(coords))
        if atom_id in ids:
            raise MeasureError(f"duplicate id {atom_id!r}", f"{where}.id")
        ids.add(atom_id)
        atoms.append((Point(coords, atom_id), weight))
    return DiscreteMeasure.from_atoms(atoms, dimension, data.get("mass", "1"))


def load_measure(path: Union[str, Path]) -> DiscreteMeasure:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"{path} is not valid JSON ({exc})") from exc
    return parse_measure(data)


def measure_to_dict(mu: DiscreteMeasure, rational: bool = True) -> Dict[str, Any]:
    return {
        "dimension": mu.dimension,
        "mass": render_rational(mu.mass, rational),
        "atoms": [
            {"id": p.id, "coords": [render_rational(c, rational) for c in p.coords],
             "weight": render_rational(w, rational)}
            for p, w in mu.atoms
        ],
    }


def map_to_dict(f: FiniteMap, targets: Optional[DiscreteMeasure] = None) -> Dict[str, Any]:
    """{"map": {source id: target}}; targets are named by id when `targets` contains them."""
    names = {p: p.id for p in targets.points} if targets is not None else {}
    table = {}
    for x, value in f.entries:
        image = Point(value)
        table[x.id] = names.get(image, format_coords(value))
    return {"map": table}


def witness_to_dict(witness, rational: bool = True) -> Dict[str, Any]:
    return {
        "kind": witness.kind,
        "t": render_rational(witness.t),
        "f": map_to_dict(witness.f)["map"],
        "g": map_to_dict(witness.g)["map"],
        **{name: measure_to_dict(getattr(witness, name), rational)
           for name in ("f_p", "f_q", "g_p", "g_q", "mid_p", "mid_q")},
    }


def _plain(value: Any) -> Any:
    """Recursively turn dataclasses, fractions and tuples into JSON-ready values."""
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, Point):
        return value.id
    if isinstance(value, np.generic):
        return value.item()
    if is_dataclass(value):
        return _plain(asdict(value))
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def equalizer_report_to_dict(report, rational: bool = True) -> Dict[str, Any]:
    p_res, q_res, gamma = report.reduction
    out: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "analysis": "equalizer",
        "verdict": report.verdict,
        "decided_by": report.decided_by,
        "reduction": {"p": measure_to_dict(p_res, rational), "q": measure_to_dict(q_res, rational),
                      "gamma": render_rational(gamma, rational)},
    }
    if report.assignment is not None:
        out["assignment"] = [{"gamma": render_rational(g, rational), "I": list(i), "J": list(j)}
                             for g, i, j in report.assignment.entries]
    if report.structure:
        out["structure"] = [{"gamma": render_rational(b.gamma, rational),
                             "p_points": [p.id for p in b.p_points],
                             "q_points": [q.id for q in b.q_points]} for b in report.structure]
    if report.violation is not None:
        out["violation"] = {"type": type(report.violation).__name__, **_plain(report.violation)}
    if report.witness is not None:
        out["witness"] = witness_to_dict(report.witness, rational)
    return out


def transport_verdict_to_dict(verdict, q: Optional[DiscreteMeasure] = None,
                              rational: bool = True) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "analysis": "transport",
        "verdict": verdict.verdict,
        "decided_by": verdict.decided_by,
        "count": verdict.count,
        "count_is_lower_bound": verdict.count_is_lower_bound,
    }
    if verdict.representative is not None:
        out["representative"] = map_to_dict(verdict.representative, q)
    if verdict.witness is not None:
        out["witness"] = witness_to_dict(verdict.witness, rational)
    return out


def oracle_verdict_to_dict(verdict, rational: bool = True) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "analysis": "oracle",
        "verdict": "counterexample_found" if verdict.found else "no_counterexample_in_family",
        "family": verdict.family,
        "pairs_checked": verdict.pairs_checked,
    }
    if verdict.found:
        out["witness"] = witness_to_dict(verdict.counterexample, rational)
    return out


def certificate_to_dict(certificate, rational: bool = True) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "analysis": "certificate",
        "loss": certificate.loss,
        "f": map_to_dict(certificate.f)["map"],
        "g": map_to_dict(certificate.g)["map"],
        "t": render_rational(certificate.t, rational),
        "loss_f": render_rational(certificate.loss_f, rational),
        "loss_g": render_rational(certificate.loss_g, rational),
        "loss_mid": render_rational(certificate.loss_mid, rational),
    }


def dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(_plain(payload), indent=2, sort_keys=False)
