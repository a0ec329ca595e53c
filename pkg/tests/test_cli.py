"""
Tests for the JSON formats and the command-line entry point.
"""
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pushforward_convexity.config import AnalysisConfig, LossConfig
from pushforward_convexity.core.analyze_convexity import ConvexityAnalyzer, run
from pushforward_convexity.core.errors import MeasureError
from pushforward_convexity.core.measures import DiscreteMeasure, FiniteMap
from pushforward_convexity.core.selftest import source, target, uniform_pair
from pushforward_convexity.core.serialization import (
    measure_to_dict,
    parse_measure,
    render_rational,
)


def write_measure(path, measure):
    path.write_text(json.dumps(measure_to_dict(measure)))
    return str(path)


@pytest.fixture
def halves(tmp_path):
    return (write_measure(tmp_path / "p.json", source("1/2", "1/2")),
            write_measure(tmp_path / "q.json", target("1/2", "1/2")))


def run_json(argv, capsys):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


class TestMeasureFormat:
    @given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                           st.fractions(min_value=Fraction(1, 9), max_value=2, max_denominator=9),
                           min_size=1, max_size=5))
    def test_round_trip(self, atoms):
        mu = DiscreteMeasure.from_atoms(list(atoms.items()))
        assert parse_measure(measure_to_dict(mu)) == mu

    def test_field_pointer(self):
        with pytest.raises(MeasureError) as info:
            parse_measure({"atoms": [{"coords": ["0"], "weight": "1/0"}]})
        assert info.value.field == "atoms[0].weight"

    def test_missing_atoms(self):
        with pytest.raises(MeasureError) as info:
            parse_measure({"dimension": 1})
        assert info.value.field == "atoms"

    def test_default_mass_is_one(self):
        with pytest.raises(MeasureError):
            parse_measure({"atoms": [{"coords": ["0"], "weight": "1/2"}]})
        mu = parse_measure({"mass": "1/2", "atoms": [{"id": "a", "coords": ["0"], "weight": "1/2"}]})
        assert mu.points[0].id == "a"

    def test_render(self):
        assert render_rational(Fraction(2, 3)) == "2/3"
        assert render_rational(Fraction(1, 3), rational=False).startswith("0.3333")
        assert render_rational(Fraction(4), rational=False) == "4"


class TestRun:
    def test_equalizer_nonconvex(self, halves, capsys):
        code, out = run_json(["equalizer", *halves], capsys)
        assert code == 0
        assert out["schema"] == "1"
        assert out["verdict"] == "nonconvex"
        assert out["witness"]["f"] == {"x1": "0", "x2": "1", "y1": "0", "y2": "1"}

    def test_transport_empty(self, tmp_path, capsys):
        p, q = uniform_pair(3, 2)
        code, out = run_json(["transport", write_measure(tmp_path / "p.json", p),
                              write_measure(tmp_path / "q.json", q)], capsys)
        assert (code, out["verdict"], out["count"]) == (0, "empty", 0)

    def test_malformed_weight(self, tmp_path, halves, caplog):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"atoms": [{"coords": ["0"], "weight": "1/0"}]}))
        assert run(["equalizer", str(bad), halves[1]]) == 2
        assert "atoms[0].weight" in caplog.text

    def test_missing_file(self, halves):
        assert run(["transport", "no-such-file.json", halves[1]]) == 2

    def test_unknown_flag(self, halves):
        assert run(["equalizer", "--bogus", *halves]) == 2

    def test_budget_exceeded(self, tmp_path, capsys):
        p = write_measure(tmp_path / "p.json", source(*["1/4"] * 4))
        q = write_measure(tmp_path / "q.json", target("1/3", "1/3", "1/3"))
        assert run(["oracle", p, q]) == 3
        code, out = run_json(["oracle", p, q, "--budget", str(3 ** 7)], capsys)
        assert code == 0
        assert out["verdict"] == "no_counterexample_in_family"

    def test_human_and_json_agree(self, halves, capsys):
        _, out = run_json(["witness", *halves], capsys)
        assert run(["witness", "--format", "human", *halves]) == 0
        human = dict(line.split(": ", 1) for line in capsys.readouterr().out.splitlines())
        assert human["verdict"] == out["verdict"] == "nonconvex"
        assert [c["loss_mid"] for c in out["certificates"]] == ["1", "1/2"]

    def test_scan_csv(self, halves, capsys):
        assert run(["scan", *halves, "--grid", "2", "--rational"]) == 0
        assert capsys.readouterr().out.splitlines() == ["t,loss", "0,0", "1/2,1", "1,0"]

    def test_scan_of_convex_set_fails(self, tmp_path):
        p = write_measure(tmp_path / "p.json", source("1/3", "2/3"))
        q = write_measure(tmp_path / "q.json", target("1/3", "2/3"))
        assert run(["scan", p, q]) == 1

    def test_csv_only_for_scan(self, halves):
        assert run(["equalizer", "--format", "csv", *halves]) == 2

    def test_demo(self, capsys):
        code, out = run_json(["demo", "--construction", "xi", "--n", "2000", "--seed", "3"], capsys)
        assert code == 0
        assert out["reports"][0]["seed"] == 3
        assert out["reports"][0]["sample_size"] == 2000

    def test_transport_limit_too_small_for_a_verdict(self, tmp_path):
        p = write_measure(tmp_path / "p.json", source("1/4", "1/4", "1/2"))
        q = write_measure(tmp_path / "q.json", target("1/2", "1/2"))
        assert run(["transport", p, q, "--limit", "1"]) == 3
        assert run(["transport", p, q, "--limit", "2"]) == 0

    @pytest.mark.parametrize("flags", [
        ["transport", "--limit", "0"],
        ["oracle", "--budget", "0"],
        ["oracle", "--values", "0"],
        ["scan", "--grid", "0"],
    ])
    def test_zero_caps_are_invalid_input(self, halves, flags, caplog):
        assert run([*flags, *halves]) == 2
        assert "must be at least 1" in caplog.text

    def test_zero_samples_are_invalid_input(self):
        assert run(["demo", "--construction", "xi", "--n", "0"]) == 2

    def test_witness_reports_covariance_with_configured_prior(self, tmp_path, halves, capsys):
        config = tmp_path / "config.yaml"
        config.write_text("losses:\n  group_prior: 1/3\n")
        code, out = run_json(["witness", "--config", str(config), *halves], capsys)
        assert code == 0
        assert out["covariance"] == {"group_prior": "1/3", "f": "0", "g": "0", "mid": "0"}

    def test_config_file_overrides(self, tmp_path, halves, capsys):
        config = tmp_path / "config.yaml"
        config.write_text("oracle:\n  budget: 10\n")
        assert run(["oracle", "--config", str(config), *halves]) == 3


class TestAnalyzer:
    def test_certificates_for_convex_pair(self):
        analyzer = ConvexityAnalyzer()
        assert analyzer.certificates(source("1/3", "2/3"), target("1/3", "2/3")) == []

    def test_transport_witness(self):
        p, q = uniform_pair(2, 2)
        assert ConvexityAnalyzer().witness(p, q, "transport").kind == "transport"

    def test_covariance_uses_group_prior(self):
        p, q = source(1), DiscreteMeasure.dirac((1,))
        f = FiniteMap.from_function([(0,), (1,)], lambda x: x)
        assert ConvexityAnalyzer().covariance(f, p, q) == Fraction(1, 4)
        config = AnalysisConfig(losses=LossConfig(group_prior=Fraction(1, 3)))
        assert ConvexityAnalyzer(config).covariance(f, p, q) == Fraction(2, 9)
