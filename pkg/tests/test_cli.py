import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from tropint.cli import EXIT_FALSIFIED, EXIT_INPUT, EXIT_OK, main, run_stress
from tropint.divisor_calculus import configuration_space, find_certificate
from tropint.divisors import Divisor, RayEnd
from tropint.fixtures import FIXTURE_PAIRS, conic_conic, double_line_at_infinity
from tropint.lifting import verify_main_theorem
from tropint.polyparse import ParseError, format_poly, parse_poly
from tropint.puiseux import BivariatePoly, PuiseuxScalar
from tropint.serialize import SchemaError, dumps, loads
from tropint.stable_intersection import intersect_complex, stable_divisor
from tropint.svg import render_svg
from tropint.tropical_curve import curve_of, tropicalize_poly

DATA = Path(__file__).resolve().parent.parent / "data"


# --- parser ---

def test_parse_examples():
    f = parse_poly("x + y + x*y")
    assert sorted(f.support) == [(0, 1), (1, 0), (1, 1)]
    assert all(c == PuiseuxScalar.monomial(1, 0) for c in f.coeffs.values())
    g = parse_poly("(1 + t^(1/2))*x + (1 + t^(1/3))*y + x*y + t*(x^2 + y^2 + 1)")
    assert g == conic_conic()[1]
    assert parse_poly("-x^2 + 3/2 x*y - t^(-1/2)") == BivariatePoly({
        (2, 0): PuiseuxScalar.monomial(-1, 0), (1, 1): PuiseuxScalar.monomial(F(3, 2), 0),
        (0, 0): PuiseuxScalar.monomial(-1, F(-1, 2))})
    assert parse_poly("(x + 1)^2") == parse_poly("x^2 + 2x + 1")


@pytest.mark.parametrize("text, col", [("t^(1/2", 7), ("x $ y", 3), ("1/0", 3), ("x y", 3), ("x +", 4)])
def test_parse_errors(text, col):
    with pytest.raises(ParseError) as info:
        parse_poly(text)
    assert info.value.line == 1
    assert info.value.col == col


def test_parse_error_expected_set():
    with pytest.raises(ParseError) as info:
        parse_poly("t^(1/2")
    assert ")" in info.value.expected


def test_parse_error_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_poly("x +\n  y +\n  )")
    assert (info.value.line, info.value.col) == (3, 3)


def test_data_files_round_trip():
    for path in sorted(DATA.glob("*.poly")):
        text = path.read_text().strip()
        assert format_poly(parse_poly(text)) == text


exps = st.sampled_from([F(0), F(1, 2), F(1, 3), F(2), F(-1, 2), F(5, 4)])
coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool)
scalars = st.lists(st.tuples(exps, coeffs), min_size=1, max_size=3).map(PuiseuxScalar)
polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), scalars, min_size=1, max_size=5).map(
    lambda d: BivariatePoly({m: c for m, c in d.items() if not c.is_zero()}))


@settings(max_examples=200, deadline=None)
@given(polys)
def test_format_parse_round_trip(f):
    text = format_poly(f)
    assert parse_poly(text) == f
    assert format_poly(parse_poly(text)) == text


# --- JSON persistence ---

def _artifacts():
    out = []
    for name in sorted(FIXTURE_PAIRS):
        f, g = FIXTURE_PAIRS[name]()
        R = verify_main_theorem(f, g)
        out += [R.C1, R.I, R.E, R.graph, R, f]
        if R.certificate is not None:
            out.append(R.certificate)
    R = verify_main_theorem(*double_line_at_infinity())
    out += [R.D, R]
    for name in ("line_conic", "conic_conic"):
        R = verify_main_theorem(*FIXTURE_PAIRS[name]())
        out.append(configuration_space(R.graph, R.E))
    return out


def test_json_round_trip():
    for obj in _artifacts():
        text = dumps(obj)
        back = loads(text)
        assert back == obj
        assert dumps(back) == text
        doc = json.loads(text)
        assert doc["schema_version"] == 1 and "type" in doc


def test_json_rationals_are_strings():
    doc = json.loads(dumps(Divisor.from_points([(F(1, 3), F(-2))])))
    assert "1/3" in json.dumps(doc) and "0.333" not in json.dumps(doc)


@pytest.mark.parametrize("text", [
    '{"type": "divisor"}',
    '{"type": "nonsense", "schema_version": 1}',
    '{"type": "divisor", "schema_version": 99, "points": []}',
    "not json",
])
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        loads(text)


# --- SVG ---

def test_svg_deterministic():
    for obj in _artifacts():
        if isinstance(obj, BivariatePoly):
            continue
        a, b = render_svg(obj), render_svg(loads(dumps(obj)))
        assert a == b
        assert a.startswith("<svg") and a.rstrip().endswith("</svg>")


def test_svg_markers():
    R = verify_main_theorem(*conic_conic())
    svg = render_svg(R)
    assert svg.count('class="zero"') == 4
    assert svg.count('class="pole"') == 4
    assert 'class="other"' in svg
    assert render_svg(R.C1, ray_len=1) != render_svg(R.C1, ray_len=3)


# --- main() ---

def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_stable_command(capsys):
    code, out, _ = run(capsys, "stable", "-f", DATA / "ex12_f.poly", "-g", DATA / "ex12_g.poly")
    assert code == EXIT_OK
    assert loads(out) == Divisor.from_points([(0, 0), (1, 0)])


def test_lift_command(capsys, tmp_path):
    out = tmp_path / "lift.json"
    code, _, _ = run(capsys, "lift", "-f", DATA / "ex52_f.poly", "-g", DATA / "ex52_g.poly", "--out", out)
    assert code == EXIT_OK
    R = loads(out.read_text())
    assert R.D == Divisor.from_points([(F(2, 3), F(2, 3)), (0, F(-2, 3)), (F(-1, 2), 0), (F(-1, 6), 0)])
    assert R.certificate is not None


def test_lift_both_formats(capsys, tmp_path):
    out = tmp_path / "lift.json"
    code, _, _ = run(capsys, "lift", "--inline", "-f", "2 + 3x + 5y", "-g", "7x + 11x*y + 13t*y",
                     "--json", "--svg", "--out", out)
    assert code == EXIT_OK
    assert (tmp_path / "lift.svg").read_text().startswith("<svg")
    assert loads((tmp_path / "lift.json").read_text()).D == Divisor.from_points([(0, 0), (1, 0)])


def test_tropicalize_and_plot(capsys, tmp_path):
    curve = tmp_path / "c.json"
    assert run(capsys, "tropicalize", "--inline", "-f", "1 + x + y", "--out", curve)[0] == EXIT_OK
    assert loads(curve.read_text()) == curve_of(tropicalize_poly(parse_poly("1 + x + y")))
    code, out, _ = run(capsys, "plot", "--in", curve)
    assert code == EXIT_OK and out == render_svg(loads(curve.read_text()))


def test_intersect_command(capsys):
    code, out, _ = run(capsys, "intersect", "--inline", "-f", "x + y + x*y",
                       "-g", format_poly(conic_conic()[1]))
    assert code == EXIT_OK
    assert sorted(loads(out).points) == [(-1, 0), (0, -1), (0, 0), (1, 1)]


def _write(path, obj):
    path.write_text(dumps(obj))
    return path


def test_certify_command(capsys, tmp_path):
    f, g = FIXTURE_PAIRS["line_conic"]()
    C1, C2 = curve_of(tropicalize_poly(f)), curve_of(tropicalize_poly(g))
    E = stable_divisor(C1, C2)
    curve, other = _write(tmp_path / "c1.json", C1), _write(tmp_path / "c2.json", C2)
    cx = _write(tmp_path / "i.json", intersect_complex(C1, C2))
    poles = _write(tmp_path / "e.json", E)

    code, out, _ = run(capsys, "certify", "--curve", curve, "--with", other, "-D", poles)
    assert code == EXIT_OK and loads(out).is_zero()

    good = _write(tmp_path / "d.json", Divisor.from_points([(F(1, 4), 0), (F(3, 4), 0)]))
    code, out, _ = run(capsys, "certify", "--curve", curve, "--complex", cx, "-E", poles, "-D", good)
    assert code == EXIT_OK and loads(out).pieces[0][1] == (1, 0, -1)

    bad = _write(tmp_path / "bad.json", Divisor.from_points([(F(1, 4), 0), (F(1, 2), 0)]))
    code, out, _ = run(capsys, "certify", "--curve", curve, "--complex", cx, "-E", poles, "-D", bad)
    assert code == EXIT_FALSIFIED and out.strip() == "none"


def test_certify_ray_end(capsys, tmp_path):
    R = verify_main_theorem(*double_line_at_infinity())
    curve, other = _write(tmp_path / "c1.json", R.C1), _write(tmp_path / "c2.json", R.C2)
    D = _write(tmp_path / "d.json", Divisor({RayEnd.of_ray((0, 0), (0, 1)): 1}))
    code, out, _ = run(capsys, "certify", "--curve", curve, "--with", other, "-D", D)
    assert code == EXIT_OK
    assert loads(out) == find_certificate(R.graph, R.D, R.E)


def test_configspace_command(capsys):
    code, out, _ = run(capsys, "configspace", "-f", DATA / "ex52_f.poly", "-g", DATA / "ex52_g.poly")
    assert code == EXIT_OK
    cells = loads(out)
    assert len(cells) == 3 and all(c.dimension == 2 for c in cells)


def test_stress_command(capsys, tmp_path):
    out = tmp_path / "stress.json"
    code, _, _ = run(capsys, "stress", "--seed", 3, "--count", 2, "--out", out)
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["type"] == "stress_summary" and doc["seed"] == 3
    assert all(r["runs"] == 2 and r["falsified"] == 0 for r in doc["families"])
    assert run_stress(3, 2) == doc


@pytest.mark.parametrize("argv", [
    ["stable", "--inline", "-f", "t^(1/2", "-g", "x"],
    ["stable", "-f", "/nonexistent/file.poly", "-g", "/nonexistent/other.poly"],
    ["lift", "--inline", "-f", "x + y"],
    ["certify", "--inline", "-f", "1 + x + y", "-g", "x + x*y + t*y"],
    ["plot"],
    ["no-such-command"],
    ["tropicalize", "--inline", "-f", "t"],
    ["lift", "--inline", "-f", "1 + x + y", "-g", "2 + 2x + 2y"],
])
def test_input_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err


def test_wrong_json_type(capsys, tmp_path):
    wrong = _write(tmp_path / "d.json", Divisor())
    code, _, err = run(capsys, "certify", "--curve", wrong, "--complex", wrong, "-D", wrong)
    assert code == EXIT_INPUT and "expected" in err


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == EXIT_OK
