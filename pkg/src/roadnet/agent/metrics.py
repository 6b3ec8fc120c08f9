"""Routing quality over a batch of scripted or live trials."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean

from ..errors import IoFailure, Misaligned
from .session import SessionLog

FORMS = ("Detailed", "Concise", "Keywords")
LANGUAGE_ORDER = ("en", "zh")
INDICATORS = ("tool_selection_accuracy", "average_invocation_count", "repeated_call_probability")

# Cells observed with a proprietary chat model; kept for side-by-side reading,
# not expected to be reproduced by a different model.
REFERENCE_CELLS = {
    ("en", "Detailed"): (1.0000, 1.0500, 0.0050),
    ("zh", "Detailed"): (1.0000, 1.0000, 0.0000),
    ("en", "Concise"): (0.9250, 1.0818, 0.0541),
    ("zh", "Concise"): (0.9750, 1.0000, 0.0000),
    ("en", "Keywords"): (0.8000, 1.6563, 0.3750),
    ("zh", "Keywords"): (1.0000, 1.3750, 0.3500),
}
REFERENCE_COMPOSITES = {
    "en": (0.9083, 1.2385, 0.1468),
    "zh": (0.9917, 1.1261, 0.1176),
}
REFERENCE_OVERALL = (0.9500, 1.1795, 0.1316)


@dataclass(frozen=True)
class TrialSpec:
    prompt: str
    expected_tool: str
    language: str
    form: str

    def __post_init__(self) -> None:
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")
        if not self.language:
            raise ValueError("language tag must be non-empty")


@dataclass(frozen=True)
class Cell:
    tool_selection_accuracy: float
    average_invocation_count: float
    repeated_call_probability: float
    trials: int

    def values(self) -> tuple[float, float, float]:
        return (self.tool_selection_accuracy, self.average_invocation_count, self.repeated_call_probability)


@dataclass(frozen=True)
class MetricsTable:
    cells: dict[tuple[str, str], Cell]
    composites: dict[str, tuple[float, float, float]]
    overall: tuple[float, float, float]

    def languages(self) -> list[str]:
        present = {lang for lang, _ in self.cells}
        ordered = [l for l in LANGUAGE_ORDER if l in present]
        return ordered + sorted(present - set(ordered))

    def to_csv(self) -> str:
        """Wide layout: one row per form, then composites and overall;
        columns are indicator x language."""
        langs = self.languages()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row"] + [f"{ind}:{lang}" for ind in INDICATORS for lang in langs])
        for form in FORMS:
            row = [form]
            for k in range(3):
                for lang in langs:
                    cell = self.cells.get((lang, form))
                    row.append("" if cell is None else f"{cell.values()[k]:.4f}")
            w.writerow(row)
        row = ["composite"]
        for k in range(3):
            for lang in langs:
                row.append(f"{self.composites[lang][k]:.4f}")
        w.writerow(row)
        row = ["overall"]
        for k in range(3):
            for i, _ in enumerate(langs):
                row.append(f"{self.overall[k]:.4f}" if i == 0 else "")
        w.writerow(row)
        return buf.getvalue()


def _repeats(log: SessionLog) -> tuple[bool, int]:
    seen = set()
    count = 0
    for call in log.calls:
        if call.name in seen:
            count += 1
        seen.add(call.name)
    return count > 0, count


def _cell(pairs: list[tuple[SessionLog, TrialSpec]], per_invocation: bool) -> Cell:
    correct = 0
    calls = 0
    repeated_trials = 0
    repeated_calls = 0
    for log, spec in pairs:
        first = log.calls[0].name if log.calls else None
        correct += first == spec.expected_tool
        calls += log.step_count
        any_rep, n_rep = _repeats(log)
        repeated_trials += any_rep
        repeated_calls += n_rep
    n = len(pairs)
    if per_invocation:
        rep = repeated_calls / calls if calls else 0.0
    else:
        rep = repeated_trials / n
    return Cell(correct / n, calls / n, rep, n)


def compute_metrics(logs: list[SessionLog], specs: list[TrialSpec], per_invocation: bool = False) -> MetricsTable:
    """Per (language, form) cell: share of trials whose first call is the
    expected tool, mean number of calls, and share of trials that call some
    tool a second time (or, with ``per_invocation``, share of calls that are
    repeats). Composites are plain means over the form cells of a language,
    and the overall value is the plain mean over languages."""
    if len(logs) != len(specs):
        raise Misaligned(f"{len(logs)} logs for {len(specs)} trial specs")
    for log, spec in zip(logs, specs):
        if log.request != spec.prompt:
            raise Misaligned(f"log request {log.request!r} does not match trial prompt {spec.prompt!r}")
    if not specs:
        raise Misaligned("no trials to score")

    groups: dict[tuple[str, str], list] = {}
    for log, spec in zip(logs, specs):
        groups.setdefault((spec.language, spec.form), []).append((log, spec))
    cells = {key: _cell(pairs, per_invocation) for key, pairs in sorted(groups.items())}

    composites = {}
    for lang in sorted({lang for lang, _ in cells}):
        mine = [c.values() for (l, _), c in cells.items() if l == lang]
        composites[lang] = tuple(fmean(v[k] for v in mine) for k in range(3))
    overall = tuple(fmean(v[k] for v in composites.values()) for k in range(3))
    return MetricsTable(cells, composites, overall)


def load_trials(path) -> list[TrialSpec]:
    """Line-delimited JSON records with prompt, expected_tool, language, form."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read trials file {path}: {exc}") from exc
    out = []
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            out.append(TrialSpec(rec["prompt"], rec["expected_tool"], rec["language"], rec["form"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}:{no}: bad trial record ({exc})") from exc
    return out
