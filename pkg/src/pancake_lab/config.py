"""JSON configuration files with exact numbers.

Numbers are written as strings ("3", "-7/4", "0.125") and always parsed exactly;
bare JSON numbers are accepted too, but decimals among them are read from their
text rather than through binary floats.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .shapes import KINDS_WITH_K, ShapeKind, ValidationError, instantiate

VERSION = 1
_NUMBER = re.compile(r"^\s*[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(\s*/\s*[-+]?\d+)?\s*$")


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class ShapeEntry:
    kind: ShapeKind
    params: dict
    k: Optional[int] = None


@dataclass
class Config:
    shapes: list = field(default_factory=list)
    expected: Optional[dict] = None
    version: int = VERSION

    def instances(self) -> list:
        return [instantiate(s.kind, s.params, k=s.k, id=i) for i, s in enumerate(self.shapes)]


def parse_number(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str) and _NUMBER.match(value):
        return Fraction(value.replace(" ", ""))
    raise ValueError(f"not an exact number: {value!r}")


def format_number(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _line_of(text: str, needle: str) -> Optional[int]:
    at = text.find(needle)
    return text.count("\n", 0, at) + 1 if at >= 0 else None


def loads(text: str) -> Config:
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object", 1)
    version = doc.get("version", VERSION)
    if version != VERSION:
        raise ConfigError(f"unsupported version {version!r}", _line_of(text, '"version"'))
    raw_shapes = doc.get("shapes", [])
    if not isinstance(raw_shapes, list):
        raise ConfigError("shapes must be a list", _line_of(text, '"shapes"'))
    shapes = []
    for idx, raw in enumerate(raw_shapes):
        if not isinstance(raw, dict) or "kind" not in raw:
            raise ConfigError(f"shape {idx} needs a kind", _line_of(text, '"shapes"'))
        try:
            kind = ShapeKind.parse(raw["kind"])
        except (KeyError, ValueError):
            raise ConfigError(f"unknown kind {raw['kind']!r}", _line_of(text, f'"{raw["kind"]}"')) from None
        k = raw.get("k")
        if kind in KINDS_WITH_K and not isinstance(k, int):
            raise ConfigError(f"shape {idx} ({kind.value}) needs an integer k", _line_of(text, f'"{raw["kind"]}"'))
        params = {}
        for name, value in (raw.get("params") or {}).items():
            try:
                params[name] = parse_number(value)
            except ValueError as exc:
                raise ConfigError(f"shape {idx}, {name}: {exc}", _line_of(text, f'"{name}"')) from None
        shapes.append(ShapeEntry(kind, params, k if kind in KINDS_WITH_K else None))
    expected = doc.get("expected")
    if expected is not None:
        if not isinstance(expected, dict) or not set(expected) <= {"V_C", "R"}:
            raise ConfigError("expected block takes V_C and R only", _line_of(text, '"expected"'))
        expected = {key: int(v) for key, v in expected.items()}
    config = Config(shapes, expected, version)
    try:
        config.instances()
    except (ValidationError, KeyError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid shape: {exc}") from None
    return config


def load(path) -> Config:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    return loads(text)


def dumps(config: Config) -> str:
    doc = {"version": config.version, "shapes": []}
    for s in config.shapes:
        entry = {"kind": s.kind.value}
        if s.k is not None:
            entry["k"] = s.k
        entry["params"] = {name: format_number(v) for name, v in s.params.items()}
        doc["shapes"].append(entry)
    if config.expected is not None:
        doc["expected"] = dict(config.expected)
    return json.dumps(doc, indent=2) + "\n"


def dump(config: Config, path) -> None:
    Path(path).write_text(dumps(config))


def from_instances(instances, expected: Optional[dict] = None) -> Config:
    shapes = [ShapeEntry(inst.kind, dict(inst.pose), inst.k if inst.kind in KINDS_WITH_K else None)
              for inst in instances]
    return Config(shapes, expected)
