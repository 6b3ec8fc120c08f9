"""Command-line entry point.

On success every subcommand prints the files it wrote, one path per line, on
stdout; diagnostics go to stderr. Exit status: 0 success, 1 usage or input
error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import Config, load_config
from .errors import IoFailure, RoadnetError

log = logging.getLogger("roadnet")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="roadnet", description="Build traffic-simulation road networks.")
    p.add_argument("--config", help="INI settings file (default: roadnet.ini or ~/.config/roadnet/config.ini)")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("grid", help="rectangular grid network")
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--anchor-lat", "--lat", dest="anchor_lat", type=float)
    g.add_argument("--anchor-lon", "--lon", dest="anchor_lon", type=float)
    g.add_argument("--scale", type=float, help="degrees per planar unit")

    pl = sub.add_parser("place", help="OpenStreetMap network around a named place")
    pl.add_argument("--name", required=True)
    pl.add_argument("--radius", type=float, default=1000.0, help="meters (default 1000)")
    pl.add_argument("--out", required=True)
    pl.add_argument("--geocoder", choices=("nominatim", "amap"))
    pl.add_argument("--osm-endpoint")

    for name, src, helptext in (
        ("from-image", "--mask", "binary road mask image (road pixels >= 128)"),
        ("from-sketch", "--image", "photo or scan of a hand-drawn sketch"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument(src, dest="source", required=True)
        sp.add_argument("--m-per-px", type=float, default=1.0)
        sp.add_argument("--out", required=True)
        sp.add_argument("--dump-stages", metavar="DIR", help="write intermediate rasters here")

    r = sub.add_parser("render", help="SVG preview of a GMNS network")
    r.add_argument("--gmns", required=True, help="directory holding Node.csv and Link.csv")
    r.add_argument("--out", required=True, help="SVG file")

    s = sub.add_parser("export-sumo", help="SUMO plain XML (and optionally NET.XML)")
    s.add_argument("--gmns", required=True)
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--geo", action="store_true", help="write lon/lat instead of planar x/y")
    s.add_argument("--netconvert", action="store_true", help="also run netconvert")

    e = sub.add_parser("eval-router", help="score tool routing over a trials file")
    e.add_argument("--trials", required=True, help="JSON lines: prompt, expected_tool, language, form")
    e.add_argument("--out", required=True, help="CSV file")
    e.add_argument("--mock", help="JSON lines, line i = list of scripted replies for trial i")
    e.add_argument("--max-steps", type=_positive_int, default=5)
    e.add_argument("--per-invocation", action="store_true",
                   help="repeat probability per call instead of per trial")

    c = sub.add_parser("chat", help="interactive requests on stdin")
    c.add_argument("--mock", help="scripted replies (JSON list or one per line) instead of a live model")
    c.add_argument("--out", help="root directory for tool outputs")
    c.add_argument("--max-steps", type=_positive_int, default=5)
    return p


def _emit(paths) -> None:
    for path in paths:
        print(path)


def _graph_from_dir(directory, cfg: Config):
    from .gmns import LINK_FILE, NODE_FILE, parse_gmns

    d = Path(directory)
    return parse_gmns(d / NODE_FILE, d / LINK_FILE, cfg.projection)


def _geocoder(cfg: Config):
    from .osm.geocode import AmapGeocoder, NominatimGeocoder

    if cfg.geocoder == "amap":
        if not cfg.geocoder_key:
            raise ValueError("the amap geocoder needs a key (ROADNET_GEOCODER_KEY or geocoder_key)")
        return AmapGeocoder(cfg.geocoder_key, endpoint=cfg.geocoder_url())
    return NominatimGeocoder(endpoint=cfg.geocoder_url())


def _cmd_grid(a, cfg: Config) -> None:
    from .pipelines import build_grid

    _emit(build_grid(a.rows, a.cols, a.out, cfg.projection))


def _cmd_place(a, cfg: Config) -> None:
    from .pipelines import build_place

    _emit(build_place(a.name, a.out, _geocoder(cfg), radius_m=a.radius,
                      endpoint=cfg.osm_endpoint, max_bytes=cfg.max_download_bytes))


def _cmd_from_image(a, cfg: Config) -> None:
    from .pipelines import build_from_image

    if not Path(a.source).is_file():
        raise IoFailure(f"mask image not found: {a.source}")
    _emit(build_from_image(a.source, a.out, m_per_px=a.m_per_px, dump_dir=a.dump_stages))


def _cmd_from_sketch(a, cfg: Config) -> None:
    from .pipelines import build_from_sketch

    if not Path(a.source).is_file():
        raise IoFailure(f"sketch image not found: {a.source}")
    _emit(build_from_sketch(a.source, a.out, m_per_px=a.m_per_px, dump_dir=a.dump_stages))


def _cmd_render(a, cfg: Config) -> None:
    from .render import write_svg

    _emit([write_svg(_graph_from_dir(a.gmns, cfg), a.out)])


def _cmd_export_sumo(a, cfg: Config) -> None:
    from .sumo import export_sumo_plain, run_netconvert

    files = export_sumo_plain(_graph_from_dir(a.gmns, cfg), geo=a.geo)
    paths = list(files.write(a.out))
    if a.netconvert:
        paths.append(run_netconvert(files, Path(a.out) / "network.net.xml"))
    _emit(paths)


def _load_mock_lines(path) -> list[list[str]]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read mock file {path}: {exc}") from exc
    out = []
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        replies = json.loads(line)
        if not isinstance(replies, list) or not replies or not all(isinstance(r, str) for r in replies):
            raise ValueError(f"{path}:{no}: expected a non-empty JSON list of strings")
        out.append(replies)
    return out


def _cmd_eval_router(a, cfg: Config) -> None:
    from .agent.metrics import compute_metrics, load_trials
    from .agent.model import HttpChatModel, ScriptedModel
    from .agent.registry import stub_registry
    from .agent.session import run_session

    trials = load_trials(a.trials)
    registry = stub_registry()
    unknown = sorted({t.expected_tool for t in trials} - set(registry.names()))
    if unknown:
        raise ValueError(f"trials expect unknown tools: {', '.join(unknown)}")
    if a.mock:
        scripts = _load_mock_lines(a.mock)
        if len(scripts) != len(trials):
            raise ValueError(f"mock file has {len(scripts)} scripts for {len(trials)} trials")
        models = [ScriptedModel(s) for s in scripts]
    else:
        live = HttpChatModel(cfg.model_base_url, cfg.model_name, cfg.model_api_key or None)
        models = [live] * len(trials)

    logs = []
    for trial, model in zip(trials, models):
        logs.append(run_session(trial.prompt, registry, model, a.max_steps))
    table = compute_metrics(logs, trials, per_invocation=a.per_invocation)
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(table.to_csv(), encoding="utf-8")
    _emit([out])


def _cmd_chat(a, cfg: Config) -> None:
    from .agent.model import HttpChatModel, ScriptedModel
    from .agent.registry import PlaceSettings, default_registry
    from .agent.session import run_session

    if a.mock:
        model = ScriptedModel.from_file(a.mock)
    else:
        model = HttpChatModel(cfg.model_base_url, cfg.model_name, cfg.model_api_key or None)
    geocoder = None
    try:
        geocoder = _geocoder(cfg)
    except ValueError as exc:
        log.warning("place tool disabled: %s", exc)
    registry = default_registry(a.out or cfg.out_dir, PlaceSettings(geocoder, cfg.osm_endpoint))

    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            print("request> ", end="", file=sys.stderr, flush=True)
        line = sys.stdin.readline()
        if not line:
            break
        request = line.strip()
        if not request:
            continue
        result = run_session(request, registry, model, a.max_steps)
        for step in result.steps:
            if step.observation.startswith("error:"):
                print(f"[{step.call.name}] {step.observation}", file=sys.stderr)
                continue
            _emit(l for l in step.observation.splitlines() if l.strip())
        if result.final is not None:
            print(result.final, file=sys.stderr)
        else:
            print(f"session aborted: {result.abort}", file=sys.stderr)


COMMANDS = {
    "grid": _cmd_grid,
    "place": _cmd_place,
    "from-image": _cmd_from_image,
    "from-sketch": _cmd_from_sketch,
    "render": _cmd_render,
    "export-sumo": _cmd_export_sumo,
    "eval-router": _cmd_eval_router,
    "chat": _cmd_chat,
}


def dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        overrides = {}
        if args.command == "grid":
            overrides = {"anchor_lat": args.anchor_lat, "anchor_lon": args.anchor_lon, "scale": args.scale}
        elif args.command == "place":
            overrides = {"geocoder": args.geocoder, "osm_endpoint": args.osm_endpoint}
        cfg = load_config(args.config, overrides)
        COMMANDS[args.command](args, cfg)
    except ValueError as exc:  # includes input-validation RoadnetErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RoadnetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())
