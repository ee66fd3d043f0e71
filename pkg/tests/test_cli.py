import json
import math
import os

import pytest

from rigidori.cli import build_parser, run, write_obj
from rigidori.embedding import FoldedMesh

PI = math.pi


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify_fig6_vertex(capsys):
    code, data = run_json(capsys, ["classify", "--alphas", "45,90,45,90", "--degrees"])
    assert code == 0
    assert data["curvature"] == "elliptic" and data["flat_foldable"] is False
    assert data["meta"]["tool"] == "rigidori" and "config" in data["meta"]


def test_dual_in_input_units(capsys):
    code, data = run_json(capsys, ["dual", "--alphas", "45,90,45,90", "--degrees"])
    assert code == 0
    assert data["alphas"] == pytest.approx([135.0, 90.0, 135.0, 90.0], abs=1e-12)
    assert data["units"] == "degrees"


def test_modes_constants(capsys):
    code, data = run_json(
        capsys, ["modes", "--alphas", "45,90,135,90", "--degrees", "--samples", "5"]
    )
    assert code == 0
    assert data["k1"] == pytest.approx(math.tan(PI / 8), abs=1e-12)
    assert data["k2"] == pytest.approx(-math.tan(PI / 8), abs=1e-12)
    assert len(data["curves"]["mode1"]) == 5


def test_solve_and_oracle(capsys):
    code, data = run_json(
        capsys,
        ["solve", "--alphas", "45,90,45,90", "--degrees",
         "--driver-index", "3", "--driver", "90", "--branch", "pp"],
    )
    assert code == 0
    assert abs(abs(data["rhos"][0]) - PI / 2) < 1e-9
    assert data["residual"] < 1e-9

    code, data = run_json(
        capsys,
        ["oracle", "--alphas", "45,90,135,90", "--degrees",
         "--driver-index", "1", "--driver", "60",
         "--guess", "60,-20,60,20"],
    )
    assert code == 0 and data["converged"]


def test_range_and_trace_csv(capsys, tmp_path):
    code, data = run_json(
        capsys,
        ["range", "--alphas", "45,90,135,90", "--degrees",
         "--driver-index", "1", "--branch", "pm", "--step-max", "0.05"],
    )
    assert code == 0
    assert data["intervals"][0] == pytest.approx([-PI, PI], abs=1e-8)

    out = tmp_path / "curve.csv"
    code = run(
        ["trace", "--alphas", "45,90,135,90", "--degrees",
         "--driver-index", "1", "--branch", "pm",
         "--samples", "9", "--step-max", "0.05", "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# rigidori")
    assert lines[1] == "driver_index,branch,rho1,rho2,rho3,rho4,residual"
    assert len(lines) >= 11
    row = lines[2].split(",")
    assert row[0] == "1" and row[1] == "pm"
    assert float(row[6]) < 1e-9


def test_verify_duality_cli(capsys):
    code, data = run_json(
        capsys,
        ["verify-duality", "--alphas", "45,90,45,90", "--degrees",
         "--driver-index", "3", "--samples", "9", "--step-max", "0.05"],
    )
    assert code == 0
    assert data["max_abs_rho_mismatch"] < 1e-6
    assert data["sign_pattern_ok"] is True


def test_combine_and_split(tmp_path, capsys):
    out = tmp_path / "combined.obj"
    code = run(
        ["combine", "--alphas", "45,90,45,90", "--degrees",
         "--theta", "90", "--variant", "parallel", "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("f ")) == 8

    code, data = run_json(
        capsys,
        ["split", "--alphas", "45,90,45,90", "--degrees", "--theta", "90"],
    )
    assert code == 0
    assert data["v1"]["alphas"] == pytest.approx(
        [PI / 4, PI / 2, 3 * PI / 4, PI / 2], abs=1e-12
    )


def test_sheet_stack_auxetic(tmp_path):
    obj = tmp_path / "sheet.obj"
    code = run(
        ["sheet", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "1", "--rho", "1.0", "--output", str(obj)]
    )
    assert code == 0 and obj.exists()

    code = run(
        ["stack", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "2", "--layers", "2", "--rho", "1.0",
         "--output", str(tmp_path / "stack.obj")]
    )
    assert code == 0

    csv = tmp_path / "aux.csv"
    code = run(
        ["auxetic", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "1", "--layers", "2",
         "--samples", "4", "--output", str(csv)]
    )
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[1] == "rho,bbox_x,bbox_y,bbox_z,regime"
    assert len(lines) == 6


def test_degrees_flag_leaves_radian_defaults_alone(tmp_path):
    csv = tmp_path / "a.csv"
    code = run(
        ["auxetic", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "1", "--layers", "2",
         "--samples", "3", "--output", str(csv)]
    )
    assert code == 0
    first = float(csv.read_text().splitlines()[2].split(",")[0])
    assert first == pytest.approx(0.05 * PI, abs=1e-12)
    # explicitly supplied sweep bounds are converted
    code = run(
        ["auxetic", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "1", "--layers", "2",
         "--rho-min", "10", "--rho-max", "80",
         "--samples", "3", "--output", str(csv)]
    )
    assert code == 0
    first = float(csv.read_text().splitlines()[2].split(",")[0])
    assert first == pytest.approx(math.radians(10), abs=1e-12)


def test_frame_sequence_export(tmp_path):
    code = run(
        ["sheet", "--alphas", "45,90,135,90", "--degrees",
         "--rows", "1", "--cols", "1", "--frames", "3",
         "--output", str(tmp_path / "anim.obj")]
    )
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    assert names == ["anim_000.obj", "anim_001.obj", "anim_002.obj"]


def test_obj_single_plate_and_determinism(tmp_path):
    mesh = FoldedMesh(
        ((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 0.0)),
        ((0, 1, 2, 3),),
    )
    p1, p2 = tmp_path / "a.obj", tmp_path / "b.obj"
    write_obj(mesh, str(p1))
    write_obj(mesh, str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 4
    assert sum(1 for l in lines if l.startswith("f ")) == 1
    assert lines[-1] == "f 1 2 3 4"


def test_obj_merged_crease_shared_indices(tmp_path):
    out = tmp_path / "cv.obj"
    code = run(
        ["combine", "--alphas", "45,90,45,90", "--degrees",
         "--theta", "90", "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    faces = [l.split()[1:] for l in lines if l.startswith("f ")]
    counts = {}
    for f in faces:
        for a, b in zip(f, f[1:] + f[:1]):
            key = tuple(sorted((a, b)))
            counts[key] = counts.get(key, 0) + 1
    assert sorted(c for c in counts.values() if c > 2) == [4, 4]


def test_vertex_json_input_round_trip(tmp_path, capsys):
    path = tmp_path / "v.json"
    path.write_text(json.dumps({"alphas": [0.3, 1.2, 2.0, 0.9], "units": "radians"}))
    code, data = run_json(capsys, ["dual", "--vertex-json", str(path)])
    assert code == 0
    assert data["alphas"] == pytest.approx(
        [PI - 0.3, PI - 1.2, PI - 2.0, PI - 0.9], abs=1e-15
    )


def test_domain_error_exit_code(capsys):
    # flat-foldable modes on a non-flat-foldable vertex is a domain error
    code = run(["modes", "--alphas", "45,90,45,90", "--degrees"])
    err = capsys.readouterr().err
    assert code == 1 and "error" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["solve", "--alphas", "45,90,45,90"])  # missing --driver
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["classify"])  # no vertex given
    assert exc.value.code == 2


def test_conflicting_vertex_sources_rejected():
    with pytest.raises(SystemExit) as exc:
        run(["classify", "--alphas", "1,1,1,1", "--vertex-json", "x.json"])
    assert exc.value.code == 2
