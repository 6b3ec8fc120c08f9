"""Tool descriptors and the immutable registry the router dispatches over."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from ..errors import EmptyRegistry


@dataclass(frozen=True)
class ArgSpec:
    name: str
    type: str
    required: bool = True
    help: str = ""


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    description: str
    args: tuple[ArgSpec, ...] = ()

    def __post_init__(self) -> None:
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError(f"tool name must be a non-empty token, got {self.name!r}")
        if not self.description.strip():
            raise ValueError(f"tool {self.name!r} needs a description")
        object.__setattr__(self, "args", tuple(self.args))
        names = [a.name for a in self.args]
        if len(set(names)) != len(names):
            raise ValueError(f"tool {self.name!r} has duplicate argument names")

    def missing_args(self, given: Mapping[str, object]) -> list[str]:
        return [a.name for a in self.args if a.required and a.name not in given]


@dataclass(frozen=True)
class Tool:
    """A descriptor plus the callable that runs it.

    ``run`` receives the argument map and returns the observation text that
    is handed back to the model unchanged.
    """

    descriptor: ToolDescriptor
    run: Callable[[dict], str] = field(compare=False)

    @property
    def name(self) -> str:
        return self.descriptor.name


class Registry:
    """Name-unique, read-only collection of tools."""

    def __init__(self, tools: Iterable[Tool]):
        by_name: dict[str, Tool] = {}
        for t in tools:
            if t.name in by_name:
                raise ValueError(f"duplicate tool name {t.name!r}")
            by_name[t.name] = t
        if not by_name:
            raise EmptyRegistry("registry needs at least one tool")
        self._tools = MappingProxyType(dict(sorted(by_name.items())))

    def __contains__(self, name: object) -> bool:
        return name in self._tools

    def __getitem__(self, name: str) -> Tool:
        return self._tools[name]

    def __len__(self) -> int:
        return len(self._tools)

    def names(self) -> list[str]:
        return list(self._tools)

    def descriptors(self) -> list[ToolDescriptor]:
        return [t.descriptor for t in self._tools.values()]
