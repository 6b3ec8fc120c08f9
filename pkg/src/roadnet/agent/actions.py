"""System prompt assembly and structured action parsing."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from ..errors import EmptyRegistry, Unparseable
from .tools import ToolDescriptor

FINAL = "final"


@dataclass(frozen=True)
class ToolCall:
    name: str
    args: dict = field(default_factory=dict, compare=True)


@dataclass(frozen=True)
class Final:
    answer: str


Action = Union[ToolCall, Final]


def build_system_prompt(descriptors: Iterable[ToolDescriptor]) -> str:
    tools = sorted(descriptors, key=lambda d: d.name)
    if not tools:
        raise EmptyRegistry("cannot build a prompt without tools")
    lines = [
        "You build road networks for traffic simulation by calling tools.",
        "",
        "Available tools:",
    ]
    for d in tools:
        lines.append(f"- {d.name}: {d.description}")
        for a in d.args:
            req = "required" if a.required else "optional"
            extra = f" ({a.help})" if a.help else ""
            lines.append(f"    {a.name}: {a.type}, {req}{extra}")
    lines += [
        "",
        "Reply with exactly one JSON object and nothing else that looks like JSON:",
        '  {"action": "<tool name>", "args": {...}} to call a tool, or',
        '  {"action": "final", "answer": "<text>"} when the request is fulfilled.',
        "",
        "Rules:",
        "- Use only values the user gave you. Never invent place names, file paths,",
        "  sizes or coordinates; if something required is missing, ask in a final answer.",
        "- After each tool call you receive its output. If it lists the produced files,",
        "  the request is fulfilled: reply with a final answer that repeats those paths.",
        "- If a tool reports an error, either fix the arguments or explain the problem",
        "  in a final answer.",
    ]
    return "\n".join(lines) + "\n"


def _objects(text: str):
    """Yield every balanced {...} span in ``text``, outermost first, left to right."""
    i = 0
    n = len(text)
    while i < n:
        if text[i] != "{":
            i += 1
            continue
        depth = 0
        quote = None
        j = i
        while j < n:
            c = text[j]
            if quote:
                if c == "\\":
                    j += 1
                elif c == quote:
                    quote = None
            elif c in "\"'":
                quote = c
            elif c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    yield text[i:j + 1]
                    break
            j += 1
        i += 1


_BARE_KEY = re.compile(r'([{,]\s*)([A-Za-z_][\w\-]*)\s*:')


def _loads(blob: str):
    try:
        return json.loads(blob)
    except json.JSONDecodeError:
        pass
    # lenient pass: bare keys and single-quoted strings
    fixed = _BARE_KEY.sub(r'\1"\2":', blob)
    fixed = re.sub(r"'([^'\\]*)'", r'"\1"', fixed)
    try:
        return json.loads(fixed)
    except json.JSONDecodeError:
        return None


def parse_action(reply: str) -> Action:
    """First well-formed ``{"action": ...}`` object in ``reply``, prose around it ignored."""
    for blob in _objects(reply or ""):
        obj = _loads(blob)
        if not isinstance(obj, dict) or not isinstance(obj.get("action"), str):
            continue
        name = obj["action"].strip()
        if name.lower() == FINAL:
            answer = obj.get("answer", "")
            return Final(answer if isinstance(answer, str) else json.dumps(answer))
        args = obj.get("args", {})
        if args is None:
            args = {}
        if not isinstance(args, dict):
            continue
        return ToolCall(name, dict(args))
    raise Unparseable("no structured action object found in the model reply")
