"""Routing natural-language requests to the network-building tools."""

from .actions import Final, ToolCall, build_system_prompt, parse_action
from .metrics import MetricsTable, TrialSpec, compute_metrics, load_trials
from .model import HttpChatModel, ScriptedModel
from .registry import default_registry, stub_registry
from .session import SessionLog, Step, run_session
from .tools import ArgSpec, Registry, Tool, ToolDescriptor

__all__ = [
    "ArgSpec", "Final", "HttpChatModel", "MetricsTable", "Registry", "ScriptedModel",
    "SessionLog", "Step", "Tool", "ToolCall", "ToolDescriptor", "TrialSpec",
    "build_system_prompt", "compute_metrics", "default_registry", "load_trials",
    "parse_action", "run_session", "stub_registry",
]
