import json

import pytest

from dehnfill.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_group(capsys, data_dir):
    code, out = run(capsys, "group", str(data_dir / "presentations" / "prop41.txt"))
    assert (code, out) == (0, "Z/35\n")


def test_group_json(capsys, data_dir):
    code, out = run(capsys, "group", "--format", "json", str(data_dir / "presentations" / "case3331.txt"))
    assert code == 0
    assert json.loads(out)["torsion"] == [2, 30]


def test_snf_matrix(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text("[[2, 4], [6, 8]]")
    code, out = run(capsys, "snf", str(p))
    assert code == 0 and out.startswith("diagonal: 2 4")


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "--t", "2", "--rules", "epsilon")
    assert code == 0
    assert len(out.splitlines()) == 7


def test_search_4420(capsys, data_dir):
    g = data_dir / "graphs"
    code, out = run(capsys, "search", str(g / "gs_4420.json"), str(g / "gt_03322.json"), "--d", "1", "--d", "2")
    assert code == 0 and out.splitlines()[0] == "0 correspondences"


def test_search_budget_exit(capsys, data_dir):
    g = data_dir / "graphs"
    code, _ = run(capsys, "search", str(g / "gs_4420.json"), str(g / "gt_03322.json"), "--node-cap", "10")
    assert code == 3


def test_faces(capsys, data_dir):
    code, out = run(capsys, "faces", str(data_dir / "graphs" / "fig05_gt.json"))
    assert code == 0 and out.startswith("V=1 E=5 F=4 chi=0")


def test_check_exit_codes(capsys, data_dir):
    g = data_dir / "graphs"
    assert run(capsys, "check", str(g / "fig08_gt.json"), "--context", "GT_allSameSign")[0] == 0
    code, out = run(capsys, "check", str(g / "klein_H_3_4_3.json"), "--context", "GP", "--labels")
    assert code == 1 and "labels.positive_equal_ends" in out


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "group", str(tmp_path / "none.txt"))[0] == 2
    assert run(capsys, "bogus")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("gens: x\n2q\n")
    assert run(capsys, "group", str(bad))[0] == 2
    assert run(capsys, "replay", "--catalog", str(tmp_path), "--node-cap", "0")[0] == 2


def test_replay_is_deterministic(capsys, data_dir, tmp_path):
    cat = tmp_path / "cases.json"
    cases = json.loads((data_dir / "cases" / "t1.json").read_text())["cases"]
    for c in cases:
        for key in ("gs", "gt"):
            if isinstance(c.get(key), str):
                c[key] = str((data_dir / "cases" / c[key]).resolve())
        if "presentation" in c:
            c["presentation"] = str((data_dir / "cases" / c["presentation"]).resolve())
    cat.write_text(json.dumps({"cases": cases}))
    golden = tmp_path / "golden"
    code, _ = run(capsys, "replay", "--catalog", str(cat), "--golden", str(golden), "--update-golden")
    assert code == 0
    first = run(capsys, "replay", "--catalog", str(cat), "--golden", str(golden), "--format", "json", "--workers", "2")
    second = run(capsys, "replay", "--catalog", str(cat), "--golden", str(golden), "--format", "json")
    assert first == second and first[0] == 0
    report = next(golden.glob("t1.jump2.json"))
    data = json.loads(report.read_text())
    data["group"] = "Z/7"
    report.write_text(json.dumps(data))
    code, out = run(capsys, "replay", "--catalog", str(cat), "--golden", str(golden))
    assert code == 1 and "golden has 'Z/7'" in out
