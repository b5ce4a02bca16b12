import math

import numpy as np
import pytest

from riemsvp import catalog
from riemsvp.geometry import riemann, supports_complex_step
from riemsvp.metricfile import (ParseError, evaluate, load_metric,
                                parse_expression, parse_metric_file)

SPHERE_FILE = """\
# round unit sphere
dimension = 2
coordinates = theta, phi
signature = +, +
g[0,0] = 1
g[1,1] = sin(theta)^2
"""


@pytest.fixture
def sphere_path(tmp_path):
    path = tmp_path / "sphere.metric"
    path.write_text(SPHERE_FILE)
    return path


class TestExpressionGrammar:
    def evaluate_text(self, text, **env):
        node = parse_expression(text, tuple(env.keys()))
        return evaluate(node, env)

    def test_precedence(self):
        assert self.evaluate_text("1 + 2 * 3", x=0.0) == 7.0
        assert self.evaluate_text("(1 + 2) * 3", x=0.0) == 9.0
        assert self.evaluate_text("8 / 2 / 2", x=0.0) == 2.0
        assert self.evaluate_text("2 - 3 - 4", x=0.0) == -5.0

    def test_power_right_associative(self):
        assert self.evaluate_text("2 ^ 3 ^ 2", x=0.0) == 512.0
        assert self.evaluate_text("2 ^ -1", x=0.0) == 0.5

    def test_unary_minus(self):
        assert self.evaluate_text("-x ^ 2", x=3.0) == -9.0
        assert self.evaluate_text("(-x) ^ 2", x=3.0) == 9.0
        assert self.evaluate_text("--x", x=5.0) == 5.0

    def test_functions_and_constants(self):
        assert self.evaluate_text("sin(pi / 2)", x=0.0) == pytest.approx(1.0)
        assert self.evaluate_text("log(e)", x=0.0) == pytest.approx(1.0)
        assert self.evaluate_text("sqrt(x)", x=16.0) == 4.0
        assert self.evaluate_text("exp(0)", x=0.0) == 1.0
        assert self.evaluate_text("tan(0.5)", x=0.0) == pytest.approx(
            math.tan(0.5))
        assert self.evaluate_text("cos(x)^2 + sin(x)^2",
                                  x=0.77) == pytest.approx(1.0)

    def test_scientific_numbers(self):
        assert self.evaluate_text("1.5e-3 + 2E2", x=0.0) == pytest.approx(
            200.0015)

    def test_complex_inputs_supported(self):
        node = parse_expression("sin(t)^2 + 1/t", ("t",))
        z = 2.0 + 1e-30j
        val = evaluate(node, {"t": z})
        assert isinstance(val, complex)
        assert val.real == pytest.approx(math.sin(2.0) ** 2 + 0.5)

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_expression("1 +", ("x",))
        with pytest.raises(ParseError):
            parse_expression("(1 + 2", ("x",))
        with pytest.raises(ParseError):
            parse_expression("foo(1)", ("x",))
        with pytest.raises(ParseError):
            parse_expression("1 @ 2", ("x",))
        with pytest.raises(ParseError):
            parse_expression("y + 1", ("x",))


class TestMetricFile:
    def test_matches_catalog_sphere(self, sphere_path):
        spec = load_metric(sphere_path)
        assert spec.dimension == 2
        assert spec.signature == (1, 1)
        ref = catalog.sphere2().spec
        for th in (0.4, 1.2, 2.5):
            p = np.array([th, 0.7])
            assert np.abs(spec.g(p) - ref.g(p)).max() < 1e-15

    def test_numeric_curvature_from_file(self, sphere_path):
        spec = load_metric(sphere_path)
        assert supports_complex_step(spec, np.array([1.0, 0.0]))
        cd = riemann(spec, [math.pi / 3, 0.0])
        assert cd.path == "numeric"
        assert cd.riemann_lowered[0, 1, 0, 1] == pytest.approx(0.75, abs=1e-9)

    def test_mirrored_components(self, tmp_path):
        path = tmp_path / "offdiag.metric"
        path.write_text("""\
dimension = 2
coordinates = u, v
g[0,0] = 2
g[0,1] = u
g[1,1] = 1 + v^2
""")
        spec = load_metric(path)
        g = spec.g(np.array([3.0, 1.0]))
        assert g[0, 1] == 3.0
        assert g[1, 0] == 3.0  # mirrored automatically

    def test_deliberate_asymmetry_kept(self, tmp_path):
        path = tmp_path / "broken.metric"
        path.write_text("""\
dimension = 2
coordinates = u, v
g[0,0] = 1
g[1,1] = 1
g[0,1] = u
g[1,0] = 0 - u
""")
        spec = load_metric(path)
        g = spec.g(np.array([2.0, 0.0]))
        assert g[0, 1] == 2.0
        assert g[1, 0] == -2.0

    def test_defaults(self, tmp_path):
        path = tmp_path / "plain.metric"
        path.write_text("dimension = 3\ng[0,0]=1\ng[1,1]=1\ng[2,2]=1\n")
        definition = parse_metric_file(path)
        assert definition.coordinates == ("x0", "x1", "x2")
        assert definition.signature == (1, 1, 1)

    def test_lorentz_signature(self, tmp_path):
        path = tmp_path / "mink.metric"
        path.write_text("""\
dimension = 4
coordinates = t, x, y, z
signature = -, +, +, +
g[0,0] = -1
g[1,1] = 1
g[2,2] = 1
g[3,3] = 1
""")
        spec = load_metric(path)
        assert spec.is_lorentz
        cd = riemann(spec, np.zeros(4))
        assert np.abs(cd.riemann_lowered).max() < 1e-12

    def test_parse_errors(self, tmp_path):
        cases = {
            "nodim.metric": "g[0,0] = 1\n",
            "badline.metric": "dimension = 2\nwhat is this\n",
            "badsig.metric": "dimension = 2\nsignature = 0, 1\ng[0,0]=1\n",
            "outofrange.metric": "dimension = 2\ng[0,5] = 1\n",
            "nocomp.metric": "dimension = 2\n",
            "badcoords.metric": "dimension = 3\ncoordinates = a, b\ng[0,0]=1\n",
        }
        for name, text in cases.items():
            path = tmp_path / name
            path.write_text(text)
            with pytest.raises(ParseError):
                parse_metric_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_metric_file(tmp_path / "absent.metric")

    def test_id_is_file_stem(self, sphere_path):
        assert load_metric(sphere_path).id == "sphere"
