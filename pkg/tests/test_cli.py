from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from roadnet.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, dispatch
from roadnet.gmns import parse_gmns

from synthetic import render


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("ROADNET_CONFIG", str(tmp_path / "absent.ini"))
    for var in ("ROADNET_SCALE", "ROADNET_ANCHOR_LAT", "ROADNET_ANCHOR_LON", "ROADNET_OSM_ENDPOINT",
                "ROADNET_GEOCODER", "ROADNET_GEOCODER_ENDPOINT", "ROADNET_MODEL_BASE_URL"):
        monkeypatch.delenv(var, raising=False)


def _run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def test_usage_errors(capsys):
    assert _run(capsys)[0] == EXIT_USAGE
    assert _run(capsys, "grid", "--rows", "2")[0] == EXIT_USAGE
    assert _run(capsys, "bogus")[0] == EXIT_USAGE
    code, out, err = _run(capsys, "grid", "--rows", "0", "--cols", "2", "--out", "o")
    assert code == EXIT_USAGE and out == [] and "rows" in err


def test_grid(capsys, tmp_path):
    code, out, _ = _run(capsys, "grid", "--rows", "2", "--cols", "3", "--out", "g")
    assert code == EXIT_OK
    assert [Path(p).name for p in out] == ["Node.csv", "Link.csv", "network.svg"]
    assert all(Path(p).is_absolute() and Path(p).is_file() for p in out)
    g = parse_gmns(out[0], out[1])
    assert (len(g.nodes), len(g.links)) == (6, 14)


def test_grid_anchor_flags_and_env(capsys, monkeypatch):
    code, out, _ = _run(capsys, "grid", "--rows", "1", "--cols", "1", "--out", "a", "--lat", "10", "--lon", "20")
    assert code == EXIT_OK
    assert Path(out[0]).read_text().splitlines()[1] == "0,20.000000,10.000000"
    monkeypatch.setenv("ROADNET_ANCHOR_LAT", "-5")
    code, out, _ = _run(capsys, "grid", "--rows", "1", "--cols", "1", "--out", "b", "--anchor-lat", "10")
    assert Path(out[0]).read_text().splitlines()[1] == "0,161.567000,-5.000000"


def test_render_and_export_sumo(capsys):
    _run(capsys, "grid", "--rows", "3", "--cols", "3", "--out", "g")
    code, out, _ = _run(capsys, "render", "--gmns", "g", "--out", "view.svg")
    assert code == EXIT_OK and out[0].endswith("view.svg")
    assert Path("view.svg").read_text().count("<circle") == 9
    code, out, _ = _run(capsys, "export-sumo", "--gmns", "g", "--out", "sumo")
    assert code == EXIT_OK
    assert [Path(p).name for p in out] == ["network.nod.xml", "network.edg.xml"]
    assert _run(capsys, "render", "--gmns", "missing", "--out", "x.svg")[0] == EXIT_RUNTIME


def test_from_image_and_sketch(capsys):
    mask = render([(100, 50), (100, 150), (50, 100), (150, 100)], [(0, 1), (2, 3)], size=200)
    Image.fromarray(mask * 255).save("mask.png")
    code, out, _ = _run(capsys, "from-image", "--mask", "mask.png", "--out", "img", "--dump-stages", "dump")
    assert code == EXIT_OK
    assert (len(parse_gmns(out[0], out[1]).nodes)) == 5
    assert Path("dump/corners.png").is_file()

    page = np.full((200, 200), 240, dtype=np.uint8)
    page[mask.astype(bool)] = 30
    Image.fromarray(page).save("sketch.png")
    code, out, _ = _run(capsys, "from-sketch", "--image", "sketch.png", "--out", "sk")
    assert code == EXIT_OK and len(out) == 3
    g = parse_gmns(out[0], out[1])
    assert len(g.nodes) >= 5

    assert _run(capsys, "from-image", "--mask", "nope.png", "--out", "x")[0] == EXIT_RUNTIME
    Image.fromarray(np.zeros((50, 50), dtype=np.uint8)).save("blank.png")
    assert _run(capsys, "from-image", "--mask", "blank.png", "--out", "x")[0] == EXIT_RUNTIME


def _trials_and_mock(tmp_path):
    trials = [
        {"prompt": "3x3 grid", "expected_tool": "grid", "language": "en", "form": "Detailed"},
        {"prompt": "roads near Tiananmen", "expected_tool": "place", "language": "zh", "form": "Keywords"},
    ]
    mock = [
        [json.dumps({"action": "grid", "args": {"rows": 3, "cols": 3}}), json.dumps({"action": "final", "answer": "ok"})],
        [json.dumps({"action": "grid", "args": {"rows": 1, "cols": 1}}),
         json.dumps({"action": "place", "args": {"name": "Tiananmen"}}), json.dumps({"action": "final", "answer": "ok"})],
    ]
    t = tmp_path / "trials.jsonl"
    m = tmp_path / "mock.jsonl"
    t.write_text("\n".join(json.dumps(x) for x in trials) + "\n")
    m.write_text("\n".join(json.dumps(x) for x in mock) + "\n")
    return t, m


def test_eval_router(capsys, tmp_path):
    t, m = _trials_and_mock(tmp_path)
    code, out, _ = _run(capsys, "eval-router", "--trials", str(t), "--mock", str(m), "--out", "res/table.csv")
    assert code == EXIT_OK and out[0].endswith("table.csv")
    rows = Path("res/table.csv").read_text().splitlines()
    assert rows[0].startswith("row,tool_selection_accuracy:en,tool_selection_accuracy:zh")
    assert rows[1] == "Detailed,1.0000,,1.0000,,0.0000,"
    assert rows[3] == "Keywords,,0.0000,,2.0000,,0.0000"
    assert len(rows) == 6


def test_eval_router_rejects_bad_inputs(capsys, tmp_path):
    t, m = _trials_and_mock(tmp_path)
    m.write_text(m.read_text().splitlines()[0] + "\n")
    assert _run(capsys, "eval-router", "--trials", str(t), "--mock", str(m), "--out", "x.csv")[0] == EXIT_USAGE
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"prompt": "p", "expected_tool": "teleport", "language": "en", "form": "Concise"}))
    assert _run(capsys, "eval-router", "--trials", str(bad), "--out", "x.csv")[0] == EXIT_USAGE
    # no mock and no model configured
    assert _run(capsys, "eval-router", "--trials", str(t), "--out", "x.csv")[0] == EXIT_USAGE


def test_chat_with_mock(capsys, monkeypatch, tmp_path):
    script = tmp_path / "script.json"
    script.write_text(json.dumps([json.dumps({"action": "grid", "args": {"rows": 2, "cols": 2}}),
                                  json.dumps({"action": "final", "answer": "built"})]))
    monkeypatch.setattr(sys, "stdin", io.StringIO("a 2 by 2 grid\n\n"))
    code, out, err = _run(capsys, "chat", "--mock", str(script), "--out", "chat")
    assert code == EXIT_OK
    assert [Path(p).name for p in out] == ["Node.csv", "Link.csv", "network.svg"]
    assert "built" in err


def test_place_via_env_endpoints(capsys, monkeypatch, http_server):
    from test_osm import crossing

    http_server.routes["/search"] = lambda req: (200, {}, json.dumps([{"lon": "116.392", "lat": "39.9"}]).encode())
    http_server.routes["/api/0.6/map"] = lambda req: (200, {}, crossing())
    monkeypatch.setenv("ROADNET_GEOCODER_ENDPOINT", http_server.url("/search"))
    monkeypatch.setenv("ROADNET_OSM_ENDPOINT", http_server.url("/api/0.6/map"))
    code, out, _ = _run(capsys, "place", "--name", "Crossing", "--radius", "300", "--out", "p")
    assert code == EXIT_OK
    assert [Path(p).name for p in out] == ["Node.csv", "Link.csv", "network.svg", "raw.osm"]
    http_server.routes["/search"] = lambda req: (200, {}, b"[]")
    assert _run(capsys, "place", "--name", "Nowhere", "--out", "q")[0] == EXIT_RUNTIME


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "roadnet", "grid", "--rows", "1", "--cols", "2", "--out", "m"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 3
