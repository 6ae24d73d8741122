from __future__ import annotations

import json

import pytest

from trailkit import cli


def write_config(tmp_path, obj, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


A2_JOB = {"cartan": [[2, -1], [-1, 2]], "word": [1, 2, 1]}
G2_JOB = {"cartan": [[2, -1], [-3, 2]], "word": [1, 2, 1, 2, 1, 2]}


# --- enumerate ---------------------------------------------------------------


def test_enumerate_a2(tmp_path, capsys):
    cfg = write_config(tmp_path, A2_JOB)
    assert cli.main(["enumerate", "--config", cfg, "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "2 module(s), 3 trail(s)" in out
    report = json.loads((tmp_path / "trails.json").read_text())
    assert report["cartan"] == A2_JOB["cartan"]
    assert report["word"] == [1, 2, 1]
    assert [m["t"] for m in report["modules"]] == [1, 2]
    first = report["modules"][0]
    assert first["dim"] == 3
    assert first["trail_count"] == 1
    assert first["by_phi"] == {"1": 1}
    assert first["trails"] == [{"exps": [0, 1, 0],
                               "gamma": [[1, -1], [1, -1], [0, 1], [0, 1]],
                               "phi": 1, "z": {"1": 1}}]


def test_enumerate_single_t(tmp_path):
    cfg = write_config(tmp_path, dict(A2_JOB, t=2))
    assert cli.main(["enumerate", "--config", cfg, "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "trails.json").read_text())
    assert [m["t"] for m in report["modules"]] == [2]
    assert report["modules"][0]["trail_count"] == 2


def test_enumerate_creates_out_dir(tmp_path):
    cfg = write_config(tmp_path, A2_JOB)
    out = tmp_path / "deep" / "er"
    assert cli.main(["enumerate", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "trails.json").is_file()


# --- sgraph ------------------------------------------------------------------


def test_sgraph_explicit_c(tmp_path):
    cfg = write_config(tmp_path, dict(A2_JOB, c=[3, 2]))
    assert cli.main(["sgraph", "--config", cfg, "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "sgraph.json").read_text())
    assert payload["c"] == [3, 2]
    assert payload["points"] == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1],
                                 [1, 2], [2, 1], [2, 2], [3, 2]]
    assert payload["extremal_points"] == [[0, 0], [0, 2], [1, 0], [3, 2]]
    assert payload["line_counts"] == {
        "1": [2, 3, 4, 2, 3, 4, 3, 4, 4],
        "2": [3, 3, 3, 3, 3, 3, 2, 2, 1],
        "3": [1, 1, 1, 1, 1, 1, 1, 1, 1],
    }
    assert len(payload["vertices"]) == 4
    dot = (tmp_path / "sgraph.dot").read_text()
    assert dot.startswith("graph") and dot.endswith("}\n")


def test_sgraph_byte_determinism(tmp_path):
    blobs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        cfg = write_config(tmp_path, dict(A2_JOB, c=[3, 2]), f"{sub}.json")
        assert cli.main(["sgraph", "--config", cfg, "--out", str(out)]) == 0
        blobs.append(((out / "sgraph.json").read_bytes(),
                      (out / "sgraph.dot").read_bytes()))
    assert blobs[0] == blobs[1]


def test_sgraph_class_selector(tmp_path):
    cfg = write_config(tmp_path,
                       dict(G2_JOB, **{"class": {"t": 2, "s": 1, "j": 5}}))
    assert cli.main(["sgraph", "--config", cfg, "--out", str(tmp_path)]) == 0
    stems = sorted(p.stem for p in tmp_path.glob("sgraph_class*.json"))
    assert stems == ["sgraph_class0", "sgraph_class1", "sgraph_class2"]
    metas = []
    for stem in stems:
        payload = json.loads((tmp_path / f"{stem}.json").read_text())
        metas.append((tuple(payload["c"]), tuple(payload["class"]["a"]),
                      payload["class"]["size"]))
        assert payload["class"]["t"] == 2
        assert payload["class"]["s"] == 1
        assert payload["class"]["j"] == 5
        assert (tmp_path / f"{stem}.dot").is_file()
    assert metas == [((0, 0, 0), (1, 1, 1), 1),
                     ((0, 1, 0), (1, 2, 0), 2),
                     ((1, 0, 0), (1, 0, 2), 2)]


def test_sgraph_needs_c_or_selector(tmp_path, capsys):
    cfg = write_config(tmp_path, A2_JOB)
    assert cli.main(["sgraph", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


# --- verify ------------------------------------------------------------------


def test_verify_sl2_suite(tmp_path, capsys):
    cfg = write_config(tmp_path, A2_JOB)
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                     "--suite", "sl2"]) == 0
    assert "verify: ok" in capsys.readouterr().out
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["suite"] == "sl2"
    assert report["sl2"] == {
        "closed_form_vs_recurrence": {"checked": 756, "failed": 0},
        "vanishing_sum": {"checked": 80, "failed": 0},
        "ok": True,
    }
    assert "sgraph" not in report and "envelope" not in report


def test_verify_trails_suite(tmp_path):
    cfg = write_config(tmp_path, G2_JOB)
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                     "--suite", "trails"]) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["trails"] == {"face_identity": {"checked": 4, "failed": 0},
                                "ok": True}


def test_verify_all_g2(tmp_path):
    cfg = write_config(tmp_path, dict(G2_JOB, depth=2))
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert set(report) == {"suite", "sl2", "sgraph", "trails", "envelope"}
    env = report["envelope"]
    assert env["ok"] is True
    assert [m["t"] for m in env["modules"]] == [1, 2]
    for m in env["modules"]:
        assert m["constructible"] and m["constructible_strong"]
        assert m["epsilon_star_s_independent"] is True
        for layer in m["layers"]:
            assert layer["checks"] == {"54": True, "56": True, "57": True}
    assert env["modules"][1]["functions"] == 6
    assert env["modules"][1]["extremality"]["extremal"] == 5


def test_verify_byte_determinism(tmp_path):
    blobs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        cfg = write_config(tmp_path, dict(G2_JOB, depth=2), f"{sub}.json")
        assert cli.main(["verify", "--config", cfg, "--out", str(out),
                         "--suite", "envelope"]) == 0
        blobs.append((out / "verify.json").read_bytes())
    assert blobs[0] == blobs[1]


def test_verify_inject_spurious(tmp_path, capsys):
    cfg = write_config(tmp_path, G2_JOB)
    rc = cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                   "--suite", "envelope", "--inject-spurious"])
    assert rc == 5
    err = capsys.readouterr().err
    assert "FALSE TRAIL" in err
    assert "false trail at step 1" in err
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["false_trail"] == {
        "t": 1,
        "step": 1,
        "class": "()",
        "function": [[1, 2]],
        "nearest": [[1, 1]],
        "detail": "driving layer is not the single driving function",
    }


def test_verify_inject_spurious_config_key(tmp_path):
    cfg = write_config(tmp_path, dict(G2_JOB, inject_spurious=True))
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                     "--suite", "envelope"]) == 5


def test_verify_reports_failed_suite(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli, "_suite_sl2",
                        lambda: {"ok": False, "reason": "forced"})
    cfg = write_config(tmp_path, A2_JOB)
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                     "--suite", "sl2"]) == 4
    assert "FAILED (sl2)" in capsys.readouterr().err
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["sl2"]["reason"] == "forced"


# --- config validation -------------------------------------------------------


@pytest.mark.parametrize("mangle", [
    lambda d: {"word": d["word"]},                        # no cartan
    lambda d: {"cartan": d["cartan"]},                    # no word
    lambda d: dict(d, cartan=[[2, -1], [-1, 2, 0]]),      # not square
    lambda d: dict(d, word=[1, 5, 1]),                    # unknown letter
    lambda d: dict(d, word=[1, 1, 2]),                    # not reduced
    lambda d: dict(d, t=2, word=[1]),                     # t absent
    lambda d: dict(d, c=[1, -2]),                         # negative c
    lambda d: dict(d, **{"class": {"t": 1, "s": 2}}),     # selector missing j
    lambda d: dict(d, depth=-3),                          # bad depth
    lambda d: dict(d, convention="spiral"),               # bad convention
])
def test_config_errors(tmp_path, capsys, mangle, request):
    cfg = write_config(tmp_path, mangle(dict(A2_JOB)))
    assert cli.main(["enumerate", "--config", cfg,
                     "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_config_missing_file(tmp_path, capsys):
    assert cli.main(["enumerate", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_config_invalid_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert cli.main(["enumerate", "--config", str(path),
                     "--out", str(tmp_path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_affine_matrix_exits_3(tmp_path, capsys):
    cfg = write_config(tmp_path, {"cartan": [[2, -2], [-2, 2]],
                                  "word": [1, 2]})
    assert cli.main(["enumerate", "--config", cfg,
                     "--out", str(tmp_path)]) == 3
    assert "not finite type" in capsys.readouterr().err


def test_flags_override_config(tmp_path):
    # depth from the flag (1) beats depth from the config (2): at depth 1
    # only the empty element and the two first-occurrence bumps appear
    cfg = write_config(tmp_path, dict(A2_JOB, depth=2))
    assert cli.main(["verify", "--config", cfg, "--out", str(tmp_path),
                     "--suite", "envelope", "--depth", "1"]) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    for m in report["envelope"]["modules"]:
        assert len(m["epsilon_star_elements"]) == 3
