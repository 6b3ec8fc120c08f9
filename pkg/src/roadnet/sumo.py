"""SUMO plain-XML export (nodes/edges) and the optional netconvert wrapper."""

from __future__ import annotations

import shutil
import subprocess
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidGraph, IoFailure, ToolFailed, ToolMissing
from .network import NetworkGraph, validate_graph


@dataclass(frozen=True)
class SumoPlainFiles:
    nod_xml: str
    edg_xml: str

    def write(self, out_dir, stem: str = "network") -> tuple[Path, Path]:
        out = Path(out_dir).resolve()
        nod = out / f"{stem}.nod.xml"
        edg = out / f"{stem}.edg.xml"
        try:
            out.mkdir(parents=True, exist_ok=True)
            nod.write_text(self.nod_xml, encoding="utf-8")
            edg.write_text(self.edg_xml, encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write SUMO files to {out}: {exc}") from exc
        return nod, edg


def _serialize(root: ET.Element) -> str:
    ET.indent(root, space="    ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export_sumo_plain(g: NetworkGraph, geo: bool = False) -> SumoPlainFiles:
    """Node and edge documents ordered by id.

    Planar coordinates are written by default; ``geo=True`` writes lon/lat in
    x/y instead, for netconvert runs with projection options.
    """
    report = validate_graph(g)
    if report:
        raise InvalidGraph(f"refusing to export invalid graph: {report.kinds()}", report)

    nodes = ET.Element("nodes")
    for n in sorted(g.nodes, key=lambda n: n.node_id):
        x, y = (n.geo.lon, n.geo.lat) if geo else (n.planar.x, n.planar.y)
        ET.SubElement(nodes, "node", id=str(n.node_id), x=f"{x:.6f}", y=f"{y:.6f}")

    edges = ET.Element("edges")
    for l in sorted(g.links, key=lambda l: l.link_id):
        ET.SubElement(
            edges,
            "edge",
            id=str(l.link_id),
            attrib={"from": str(l.from_node_id), "to": str(l.to_node_id), "numLanes": str(l.lanes)},
        )
    return SumoPlainFiles(_serialize(nodes), _serialize(edges))


def run_netconvert(files: SumoPlainFiles, out, executable: str = "netconvert", timeout: float = 120.0) -> Path:
    """Combine the plain files into a ``.net.xml`` with SUMO's netconvert.

    ``out`` is the target net file path; the plain files are written beside it.
    """
    exe = shutil.which(executable)
    if exe is None:
        raise ToolMissing(f"{executable} not found on PATH")
    net_path = Path(out).resolve()
    nod, edg = files.write(net_path.parent, stem=net_path.name.split(".")[0])
    cmd = [exe, "--node-files", str(nod), "--edge-files", str(edg), "--output-file", str(net_path)]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        raise ToolFailed(f"netconvert timed out after {timeout}s", str(exc.stderr or "")) from exc
    if proc.returncode != 0 or not net_path.exists():
        raise ToolFailed(f"netconvert exited with {proc.returncode}", proc.stderr)
    return net_path
