import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fixtures import cover, triangle_of_boxes_3d, two_squares
from pathclass import cli, io
from pathclass.errors import InputError, SceneValidationError, SpecError

SQUARES = {
    "dimension": 2,
    "bounds": {"lo": [-1, -1], "hi": [5, 5]},
    "obstacles": [
        {"id": 1, "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
        {"id": 2, "vertices": [[3, 0], [4, 0], [4, 1], [3, 1]]},
    ],
}


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=1))
    return str(p)


@pytest.fixture
def scene_file(tmp_path):
    return _write(tmp_path, "scene.json", SQUARES)


def test_loads_reports_line_and_column():
    with pytest.raises(InputError, match=r"x.json:3:"):
        io.loads('{\n "a": 1,\n "b": ]\n}', "x.json")


def test_scene_errors_carry_line(tmp_path):
    text = '{\n "dimension": 2,\n "bounds": {"lo": [0, 0], "hi": [5, 5]},\n "obstacles": [\n  {"vertices": [[1, 1], [2, "x"], [2, 2]]}\n ]\n}'
    with pytest.raises(InputError, match=r"s.json:5"):
        io.scene_from_json(io.loads(text, "s.json"), "s.json")


def test_coordinates_accept_fractions():
    doc = dict(SQUARES, obstacles=[{"vertices": [["1/3", 0], [1, 0], [1, 1]]}])
    scene = io.scene_from_json(io.loads(json.dumps(doc)))
    assert scene.obstacles[0].pieces[0].vertices[0][0] == Fraction(1, 3)
    assert io.dump_coord(Fraction(1, 3)) == "1/3"
    assert io.dump_coord(Fraction(2)) == 2


def test_scene_round_trip():
    scene = io.scene_from_json(io.loads(json.dumps(SQUARES)))
    again = io.scene_from_json(io.loads(io.dumps(io.scene_to_json(scene))))
    assert io.scene_to_json(again) == io.scene_to_json(scene)


def test_cover_round_trip_identical():
    scene = io.scene_from_json(io.loads(json.dumps(SQUARES)))
    jc, g, s_w = io.decompose(scene)
    text = io.dumps(io.cover_to_json(jc, g, s_w))
    jc2, g2, s_w2 = io.cover_from_json(io.loads(text))
    assert io.dumps(io.cover_to_json(jc2, g2, s_w2)) == text
    doc = json.loads(text)
    assert doc["schema_version"] == io.SCHEMA_VERSION and doc["fingerprint"] == jc.fingerprint()
    assert [c["label"] for c in doc["components"]].count(5) == 1
    doc["fingerprint"] = "0"
    with pytest.raises(InputError):
        io.cover_from_json(io.loads(json.dumps(doc)))
    doc["schema_version"] = 99
    with pytest.raises(InputError):
        io.cover_from_json(io.loads(json.dumps(doc)))


def test_robot_from_json():
    spec = io.robot_from_json({"key_points": ["a", "b"], "links": [["a", "b", 1.5]], "link_width": 0.1})
    assert spec.k == 2 and spec.links == ((0, 1, 1.5),)
    assert io.robot_from_json({}).k == 1
    with pytest.raises(SpecError):
        io.robot_from_json({"key_points": ["a", "b"], "links": [["a", "b", -1]]})
    with pytest.raises(InputError):
        io.robot_from_json([1, 2])


def test_overlap_is_validation_error():
    doc = dict(SQUARES, obstacles=[{"vertices": [[0, 0], [2, 0], [2, 2], [0, 2]]},
                                   {"vertices": [[1, 1], [3, 1], [3, 3], [1, 3]]}])
    with pytest.raises(SceneValidationError):
        io.scene_from_json(io.loads(json.dumps(doc)))


def test_svg_and_obj():
    _, jc, _, _ = cover(two_squares())
    svg = io.to_svg(jc, [[(-0.5, 0.5), (4.5, 0.5)]])
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>") and "<polyline" in svg
    assert io.label_color(5) == io.label_color(5)
    with pytest.raises(Exception):
        io.to_obj(jc)
    _, jc3, _, _ = cover(triangle_of_boxes_3d())
    obj = io.to_obj(jc3)
    assert obj.count("\nv ") > 0 and "\nf " in obj and "\ng " in obj
    with pytest.raises(Exception):
        io.to_svg(jc3)


# ---------------------------------------------------------------------------
# CLI


def test_cli_decompose(scene_file, tmp_path, capsys):
    out = str(tmp_path / "cover.json")
    svg = str(tmp_path / "c.svg")
    assert cli.main(["decompose", scene_file, "-o", out, "--svg", svg]) == cli.EXIT_OK
    doc = json.loads(open(out).read())
    assert doc["dimension"] == 2 and doc["adjacency_graph"]["hyperedges"] == [[1, 2]]
    assert open(svg).read().startswith("<svg")
    # reusing the decomposition reproduces it bit for bit
    out2 = str(tmp_path / "cover2.json")
    assert cli.main(["remove-obstacle", scene_file, "2", "--cover", out, "-o", out2]) == cli.EXIT_OK
    doc2 = json.loads(open(out2).read())
    assert doc2["removed"] == [2] and doc2["adjacency_graph"]["hyperedges"] == []


def test_cli_classify(scene_file, tmp_path, capsys):
    a = _write(tmp_path, "a.json", {"points": [[-0.5, 0.5], [-0.5, 2], [4.5, 2], [4.5, 0.5]]})
    b = _write(tmp_path, "b.json", {"points": [[-0.5, 0.5], [-0.5, -0.5], [2, -0.5], [2, 1.5], [4.5, 1.5], [4.5, 0.5]]})
    c = _write(tmp_path, "c.json", {"points": [[-0.5, 0.5], [-0.5, 2.5], [4.5, 2.5], [4.5, 0.5]]})
    assert cli.main(["classify", scene_file, "point", a, b, "--densify"]) == cli.EXIT_DIFFERENT
    out = capsys.readouterr().out
    assert "DIFFERENT" in out and "h-signature agreement: yes" in out
    assert cli.main(["classify", scene_file, a, c, "--densify"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "SAME" in out and "h-signature agreement: yes" in out
    assert cli.main(["classify", scene_file, "point", a, b]) == cli.EXIT_RESOLUTION


def test_cli_plan(scene_file, tmp_path, capsys):
    out = str(tmp_path / "plan.json")
    code = cli.main(["plan", scene_file, "point", "[[-0.5, 0.5]]", "[[4.5, 0.5]]", "--alternatives", "2", "-o", out])
    assert code == cli.EXIT_OK
    doc = json.loads(open(out).read())
    assert len(doc["plans"]) == 2 and doc["certificate"] is None
    assert all(p["valid"] and p["class_sequence"] for p in doc["plans"])


def test_cli_plan_nonexistent(tmp_path, capsys):
    walled = dict(SQUARES, bounds={"lo": [0, 0], "hi": [10, 10]}, obstacles=[{"convex_pieces": [
        [[6, 6], [9, 6], [9, 6.5], [6, 6.5]], [[6, 8.5], [9, 8.5], [9, 9], [6, 9]],
        [[6, 6.5], [6.5, 6.5], [6.5, 8.5], [6, 8.5]], [[8.5, 6.5], [9, 6.5], [9, 8.5], [8.5, 8.5]]]}])
    scene = _write(tmp_path, "walled.json", walled)
    out = str(tmp_path / "plan.json")
    assert cli.main(["plan", scene, "point", "[[1, 1]]", "[[7.5, 7.5]]", "-o", out]) == cli.EXIT_NONEXISTENT
    assert json.loads(open(out).read())["certificate"]["kind"] == "connectivity"


def test_cli_exit_codes(scene_file, tmp_path, capsys, monkeypatch):
    bad = _write(tmp_path, "bad.json", '{\n "dimension": 2,\n "bounds": {"lo": [0, 0], "hi": [5, 5]},\n "obstacles": [\n  {"vertices": [[1, 1], [2, "x"], [2, 2]]}\n ]\n}')
    assert cli.main(["decompose", bad]) == cli.EXIT_MALFORMED
    assert "bad.json:5" in capsys.readouterr().err
    overlap = _write(tmp_path, "ov.json", dict(SQUARES, obstacles=[
        {"vertices": [[0, 0], [2, 0], [2, 2], [0, 2]]}, {"vertices": [[1, 1], [3, 1], [3, 3], [1, 3]]}]))
    assert cli.main(["decompose", overlap]) == cli.EXIT_INVALID
    assert cli.main(["remove-obstacle", scene_file, "9"]) == cli.EXIT_MALFORMED
    assert cli.main(["export", scene_file]) == cli.EXIT_MALFORMED
    assert cli.main(["plan", scene_file, "point", "[[0.5, 0.5]]", "[[4.5, 0.5]]"]) == cli.EXIT_MALFORMED
    monkeypatch.setenv("PATHCLASS_SEED", "abc")
    assert cli.main(["decompose", scene_file]) == cli.EXIT_MALFORMED


def test_cli_empty_scene(tmp_path, capsys):
    scene = _write(tmp_path, "empty.json", dict(SQUARES, obstacles=[]))
    assert cli.main(["decompose", scene]) == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert [r["label"] for r in doc["regions"]] == [0]


def test_cli_export_obj(tmp_path):
    doc = {"dimension": 3, "bounds": {"lo": [0, 0, 0], "hi": [4, 4, 4]},
           "obstacles": [{"vertices": [[x, y, z] for x in (1, 2) for y in (1, 2) for z in (1, 2)]}]}
    scene = _write(tmp_path, "s3.json", doc)
    obj = str(tmp_path / "out.obj")
    assert cli.main(["export", scene, "--obj", obj]) == cli.EXIT_OK
    assert "\nf " in open(obj).read()


def test_console_script(scene_file):
    res = subprocess.run([sys.executable, "-m", "pathclass.cli", "decompose", scene_file],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["dimension"] == 2


def test_cli_identical_paths_same(scene_file, tmp_path, capsys):
    a = _write(tmp_path, "a.json", {"points": [[-0.5, 0.5], [-0.5, 2], [4.5, 2], [4.5, 0.5]]})
    assert cli.main(["classify", scene_file, "point", a, a, "--densify"]) == cli.EXIT_OK
    assert "SAME" in capsys.readouterr().out


def test_cli_plan_with_cover_matches_in_process(scene_file, tmp_path, capsys):
    cov = str(tmp_path / "cover.json")
    assert cli.main(["decompose", scene_file, "-o", cov]) == cli.EXIT_OK
    outs = []
    for extra in ([], ["--cover", cov]):
        out = str(tmp_path / f"plan{len(extra)}.json")
        args = ["plan", scene_file, "point", "[[-0.5, 0.5]]", "[[4.5, 0.5]]", "--alternatives", "3", "-o", out]
        assert cli.main(args + extra) == cli.EXIT_OK
        outs.append(open(out).read())
    assert outs[0] == outs[1]


def test_cli_four_link_arm(tmp_path, capsys):
    slit = {"dimension": 2, "bounds": {"lo": [0, 0], "hi": [10, 6]}, "obstacles": [
        {"vertices": [[4.8, 0], [5.2, 0], [5.2, 2.85], [4.8, 2.85]]},
        {"vertices": [[4.8, 3.15], [5.2, 3.15], [5.2, 6], [4.8, 6]]}]}
    names = [f"q{i}" for i in range(5)]
    robot = {"key_points": names, "links": [[names[i], names[i + 1], 0.4] for i in range(4)], "link_width": 0.1}
    scene = _write(tmp_path, "slit.json", slit)
    rob = _write(tmp_path, "arm.json", robot)
    start = json.dumps([[2 - 0.4 * i, 3] for i in range(5)])
    goal = json.dumps([[8 + 0.4 * i, 3] for i in range(5)])
    out = str(tmp_path / "plan.json")
    assert cli.main(["plan", scene, rob, start, goal, "-o", out]) == cli.EXIT_OK
    doc = json.loads(open(out).read())
    assert doc["plans"][0]["valid"] and all(doc["plans"][0]["valid"])
