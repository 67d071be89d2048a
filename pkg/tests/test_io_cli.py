import json
import textwrap

import pytest

from qmetric import io
from qmetric.cli import main
from qmetric.galois import ToyClass
from qmetric.lattice import FiniteLattice
from qmetric.omega import OmegaEqualitySet, PartialVSpace


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return p


# loaders -------------------------------------------------------------------------

def test_load_lattice(data):
    cube = io.load_lattice(data / "cube.yaml")
    assert isinstance(cube, FiniteLattice) and len(cube) == 8 and cube.is_frame()


def test_cycle_is_antisymmetry_error_with_line(data):
    with pytest.raises(io.LoadError, match=r"cycle\.yaml:\d+: .*antisymmetric"):
        io.load_lattice(data / "cycle.yaml")


def test_space_mirroring_and_diagonal(data):
    sp = io.load_space(data / "triangle.yaml")
    assert sp.d("b", "a") == 1.0 and sp.d("c", "c") == 0.0 and sp.separated


def test_ddf_space_literals(data):
    sp = io.load_space(data / "ddf_space.yaml")
    assert sp.quantale.name == "ddf"
    assert sp.d("q", "r").steps() == [(0.5, 1.0)]


def test_bad_value_reports_line(tmp_path):
    p = write(tmp_path, "s.yaml", """\
        quantale: unit
        points: [a, b]
        distances:
          - [a, b, 0.5]
          - [b, a, 7]
        """)
    with pytest.raises(io.LoadError, match=r"s\.yaml:5:"):
        io.load_space(p)


def test_unknown_point_and_missing_field(tmp_path):
    p = write(tmp_path, "s.yaml", """\
        quantale: extreal
        points: [a]
        distances:
          - [a, z, 1]
        """)
    with pytest.raises(io.LoadError, match="z"):
        io.load_space(p)
    q = write(tmp_path, "t.yaml", "points: [a]\n")
    with pytest.raises(io.LoadError, match="quantale"):
        io.load_space(q)


def test_structure_missing_function_row(tmp_path):
    p = write(tmp_path, "m.yaml", """\
        quantale: extreal
        points: [a, b]
        distances: [[a, b, 1]]
        functions:
          f:
            arity: 1
            rows:
              - [a, b]
        """)
    with pytest.raises(io.LoadError, match="no row"):
        io.load_structure(p)


def test_load_structure(data):
    m = io.load_structure(data / "shift.yaml")
    assert m.functions["s"][("x2",)] == "x2" and m.relations["R"][("x1",)] == 1.0


def test_load_classes(data):
    disc = io.load_class(data / "discrete.yaml")
    assert isinstance(disc, ToyClass) and len(disc.hom("D2", "D3")) == 6
    line = io.load_class(data / "line.yaml")
    assert len(line.hom("L", "L012")) == 1


def test_load_omega_variants(data):
    assert isinstance(io.load_omega(data / "frame_partial.yaml"), PartialVSpace)
    o = io.load_omega(data / "omega_asym.yaml")
    assert isinstance(o, OmegaEqualitySet) and o.e("u", "v") != o.e("v", "u")


def test_malformed_yaml(tmp_path):
    p = write(tmp_path, "bad.yaml", "quantale: [unclosed\n")
    with pytest.raises(io.LoadError, match="malformed YAML"):
        io.load_space(p)


# command line ----------------------------------------------------------------------

def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_laws_pass(capsys):
    code, out, _ = run(capsys, "laws", "--quantale", "truth")
    assert code == 0 and out.rstrip().endswith("verdict: PASS (0 failed checks)")


def test_cli_bad_triangle(capsys, data):
    code, out, _ = run(capsys, "space", "check", data / "bad_triangle.yaml")
    assert code == 1 and 'witness: ["a", "b", "c"]' in out


def test_cli_load_error_exit(capsys, data):
    code, out, err = run(capsys, "laws", "--quantale", f"lattice:{data / 'cycle.yaml'}")
    assert code == 2 and out == "" and "antisymmetric" in err


def test_cli_tame(capsys, data):
    code, out, _ = run(capsys, "class", "tame", data / "discrete.yaml", "--kappa", "1", "--eps", "inf",
                       "--delta", "inf")
    assert code == 0 and "PASS strongly 1-tame" in out


def test_cli_types_and_dist(capsys, data):
    code, out, _ = run(capsys, "class", "types", data / "discrete.yaml", "--base", "D2")
    assert code == 0 and out.count("type ") == 3
    code, out, _ = run(capsys, "class", "dist", data / "line.yaml", "--base", "L")
    assert code == 0 and "d(tp0, tp1): 1.0" in out


def test_cli_types_need_ap(capsys, data):
    code, _, err = run(capsys, "class", "types", data / "line_broken.yaml", "--base", "L1")
    assert code == 2 and "amalgamation" in err


def test_cli_cauchy(capsys, data):
    code, out, _ = run(capsys, "space", "cauchy", data / "triangle.yaml", "--seq", "a,b", "--cycle", "--depth", "10")
    assert code == 1 and "not within depth" in out
    code, out, _ = run(capsys, "space", "cauchy", data / "triangle.yaml", "--seq", "a,b,c", "--limit", "c")
    assert code == 0 and "eps=1.0: N=2" in out


def test_cli_ball(capsys, data):
    code, out, _ = run(capsys, "space", "ball", data / "triangle.yaml", "--center", "a", "--eps", "1.5")
    assert code == 0 and "    - a\n    - b\n" in out
    code, _, err = run(capsys, "space", "ball", data / "triangle.yaml", "--center", "a", "--eps", "0")
    assert code == 2 and "way above zero" in err


def test_cli_json_and_out(capsys, data, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "struct", "embed", data / "far.yaml", data / "near.yaml", "--format", "json",
                       "--out", target)
    assert code == 1 and out == ""
    doc = json.loads(target.read_text())
    assert doc["passed"] is False
    iso = next(c for c in doc["reports"][0]["checks"] if c["name"] == "isometry")
    assert iso["witnesses"]


def test_cli_timing_goes_to_stderr(capsys):
    code, out, err = run(capsys, "laws", "--quantale", "truth", "--timing")
    assert code == 0 and "elapsed" in err and "elapsed" not in out


def test_cli_seed_header(capsys, monkeypatch):
    monkeypatch.setenv("QMETRIC_SEED", "17")
    _, out, _ = run(capsys, "laws", "--quantale", "unit", "--budget", "50")
    assert "seed: 17" in out
    _, out, _ = run(capsys, "laws", "--quantale", "unit", "--budget", "50", "--seed", "3")
    assert "seed: 3" in out


def test_cli_omega(capsys, data):
    code, out, _ = run(capsys, "omega", "check", data / "frame_partial.yaml")
    assert code == 0 and "separated: no" in out
    code, _, _ = run(capsys, "omega", "check", data / "frame_partial.yaml", "--separated")
    assert code == 1


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["space"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "laws", "--quantale", "extreal", "--budget", "0")
    assert code == 2 and "budget" in err
