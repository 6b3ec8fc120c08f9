"""The select, invoke, assess loop."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..errors import Unparseable
from .actions import Final, ToolCall, build_system_prompt, parse_action
from .model import ModelClient
from .tools import Registry

DEFAULT_MAX_STEPS = 5

ABORT_MAX_STEPS = "max_steps reached"
ABORT_UNPARSEABLE = "model reply unparseable twice"

UNPARSEABLE_HINT = (
    'Your reply did not contain an action object. Reply with {"action": "<tool>", "args": {...}} '
    'or {"action": "final", "answer": "..."}.'
)


@dataclass(frozen=True)
class Step:
    call: ToolCall
    observation: str
    seconds: float


@dataclass(frozen=True)
class SessionLog:
    request: str
    steps: tuple[Step, ...]
    final: str | None = None
    abort: str | None = None

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def calls(self) -> list[ToolCall]:
        return [s.call for s in self.steps]


def unknown_tool_message(name: str, registry: Registry) -> str:
    return f"error: unknown tool {name!r}; available tools: {', '.join(registry.names())}"


def invoke(call: ToolCall, registry: Registry) -> str:
    """Run one call; any failure is turned into observation text."""
    if call.name not in registry:
        return unknown_tool_message(call.name, registry)
    tool = registry[call.name]
    missing = tool.descriptor.missing_args(call.args)
    if missing:
        return f"error: {call.name} is missing required argument(s): {', '.join(missing)}"
    try:
        return tool.run(dict(call.args))
    except Exception as exc:  # tool errors are observations, never crashes
        return f"error: {type(exc).__name__}: {exc}"


def run_session(
    request: str,
    registry: Registry,
    model: ModelClient,
    max_steps: int = DEFAULT_MAX_STEPS,
    clock: Callable[[], float] = time.perf_counter,
) -> SessionLog:
    """Let ``model`` pick tools until it answers, stalls or runs out of steps.

    At most ``max_steps`` tools are invoked. After the last permitted
    invocation the model is asked once more; anything but a final answer then
    aborts the session. A reply without an action object is pointed out once
    and aborts the session the second time.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    messages = [
        {"role": "system", "content": build_system_prompt(registry.descriptors())},
        {"role": "user", "content": request},
    ]
    steps: list[Step] = []
    bad_replies = 0
    while True:
        reply = model.complete(messages)
        messages.append({"role": "assistant", "content": reply})
        try:
            action = parse_action(reply)
        except Unparseable:
            bad_replies += 1
            if bad_replies >= 2:
                return SessionLog(request, tuple(steps), abort=ABORT_UNPARSEABLE)
            messages.append({"role": "user", "content": UNPARSEABLE_HINT})
            continue

        if isinstance(action, Final):
            return SessionLog(request, tuple(steps), final=action.answer)
        if len(steps) >= max_steps:
            return SessionLog(request, tuple(steps), abort=ABORT_MAX_STEPS)

        t0 = clock()
        observation = invoke(action, registry)
        steps.append(Step(action, observation, clock() - t0))
        messages.append({"role": "user", "content": f"Output of {action.name}:\n{observation}"})
