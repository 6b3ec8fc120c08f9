from __future__ import annotations

import shutil
import xml.etree.ElementTree as ET

import pytest

from roadnet.errors import ToolFailed, ToolMissing
from roadnet.grid import GridSpec, generate_grid
from roadnet.network import NetworkGraph
from roadnet.sumo import SumoPlainFiles, export_sumo_plain, run_netconvert


def test_empty_graph():
    files = export_sumo_plain(NetworkGraph())
    assert ET.fromstring(files.nod_xml).tag == "nodes"
    assert len(ET.fromstring(files.nod_xml)) == 0
    assert len(ET.fromstring(files.edg_xml)) == 0


def test_two_nodes_one_link():
    g = generate_grid(GridSpec(1, 2))
    one = NetworkGraph(g.nodes, g.links[:1], g.projection)
    files = export_sumo_plain(one)
    nodes = ET.fromstring(files.nod_xml)
    edges = ET.fromstring(files.edg_xml)
    assert [n.get("id") for n in nodes] == ["0", "1"]
    assert [(e.get("from"), e.get("to"), e.get("numLanes")) for e in edges] == [("0", "1", "2")]
    assert nodes[0].get("x") == "-0.500000" and nodes[0].get("y") == "0.000000"


def test_three_by_three_counts():
    files = export_sumo_plain(generate_grid(GridSpec(3, 3)))
    assert len(ET.fromstring(files.nod_xml).findall("node")) == 9
    assert len(ET.fromstring(files.edg_xml).findall("edge")) == 24


def test_edges_reference_nodes_and_geo_mode():
    files = export_sumo_plain(generate_grid(GridSpec(2, 3)), geo=True)
    nodes = ET.fromstring(files.nod_xml)
    ids = {n.get("id") for n in nodes}
    for e in ET.fromstring(files.edg_xml):
        assert e.get("from") in ids and e.get("to") in ids
    assert float(nodes[0].get("x")) == pytest.approx(161.563, abs=1e-6)


def test_write(tmp_path):
    nod, edg = export_sumo_plain(generate_grid(GridSpec(2, 2))).write(tmp_path)
    assert nod.name == "network.nod.xml" and edg.name == "network.edg.xml"
    ET.parse(nod)
    ET.parse(edg)


def test_netconvert_missing(tmp_path):
    files = export_sumo_plain(generate_grid(GridSpec(1, 2)))
    with pytest.raises(ToolMissing):
        run_netconvert(files, tmp_path / "x.net.xml", executable="definitely-not-netconvert-xyz")


def test_netconvert_smoke(tmp_path):
    files = export_sumo_plain(generate_grid(GridSpec(1, 2)))
    try:
        net = run_netconvert(files, tmp_path / "grid.net.xml")
    except ToolMissing as exc:
        pytest.skip(str(exc))
    ET.parse(net)


def test_netconvert_failure_is_reported(tmp_path):
    if shutil.which("netconvert") is None:
        pytest.skip("netconvert not installed")
    bad = SumoPlainFiles(
        '<?xml version="1.0"?>\n<nodes><node id="0" x="0" y="0"/></nodes>\n',
        '<?xml version="1.0"?>\n<edges><edge id="e" from="0" to="9"/></edges>\n',
    )
    with pytest.raises(ToolFailed):
        run_netconvert(bad, tmp_path / "bad.net.xml")
