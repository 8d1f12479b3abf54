"""Command groups for the CLI.

Each module exposes ``router``, a :class:`CommandRouter` whose handlers take
the parsed argparse namespace and return the stdout payload as a string.
Handlers signal failure by raising :class:`CommandError`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from pydantic import BaseModel

import config

OK = 0
INVALID_INPUT = 2
VERIFICATION_FAILED = 3
IO_FAILURE = 4

FORMATS = ("text", "json", "latex")


class CommandError(Exception):
    def __init__(self, exit_code: int, detail: str, payload: Optional[str] = None):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail
        self.payload = payload


@dataclass(frozen=True)
class Arg:
    flags: tuple[str, ...]
    kwargs: dict = field(default_factory=dict)


def arg(*flags: str, **kwargs) -> Arg:
    return Arg(flags, kwargs)


@dataclass(frozen=True)
class Route:
    name: str
    help: str
    arguments: tuple[Arg, ...]
    handler: Callable


class CommandRouter:
    def __init__(self, common: Sequence[Arg] = ()):
        self.common = tuple(common)
        self.routes: list[Route] = []

    def command(self, name: str, *arguments: Arg, help: str = ""):
        def decorator(fn):
            self.routes.append(Route(name, help, self.common + arguments, fn))
            return fn
        return decorator

    def mount(self, subparsers) -> None:
        for route in self.routes:
            parser = subparsers.add_parser(route.name, help=route.help, description=route.help)
            for a in route.arguments:
                parser.add_argument(*a.flags, **a.kwargs)
            parser.set_defaults(handler=route.handler)


# shared flags
WEIGHT = arg("-k", "--weight", type=int, required=True, help="weight k")
EPSILON = arg("-e", "--epsilon", default=None, help="generator choice as a bit string, length floor((k-2)/6)")
DIGITS = arg("-d", "--digits", type=int, default=None,
             help=f"working digits (default {config.DEFAULT_DIGITS}, env DZV_DEFAULT_DIGITS)")
FORMAT = arg("--format", choices=FORMATS, default="text", help="output format")


def check_weight(k: int, even: bool = True, minimum: int = 4) -> int:
    if even and k % 2:
        raise CommandError(INVALID_INPUT, f"weight must be even, got {k}")
    if k < minimum:
        raise CommandError(INVALID_INPUT, f"weight must be >= {minimum}, got {k}")
    if k > config.MAX_WEIGHT:
        raise CommandError(INVALID_INPUT, f"weight {k} exceeds the configured maximum {config.MAX_WEIGHT}")
    return k


def check_digits(digits: Optional[int]) -> int:
    d = config.DEFAULT_DIGITS if digits is None else digits
    if d < config.MIN_DIGITS:
        raise CommandError(INVALID_INPUT, f"digits below minimum ({config.MIN_DIGITS})")
    return d


def dump_json(payload) -> str:
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(by_alias=True, indent=2)
    return json.dumps([m.model_dump(mode="json", by_alias=True) for m in payload], indent=2)


def render(fmt: str, model, text: Iterable[str], latex: Optional[Iterable[str]] = None) -> str:
    if fmt == "json":
        return dump_json(model)
    if fmt == "latex":
        return "\n".join(latex if latex is not None else text)
    return "\n".join(text)
