"""Flat key=value scenario config files.

One key per line, '#' starts a comment, keys match the scenario field
names exactly. Values round-trip losslessly (floats via repr).
"""

from __future__ import annotations

import dataclasses

from ..simnet.config import ScenarioConfig

__all__ = ["load_config", "save_config", "parse_value"]

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def parse_value(name: str, text: str):
    kind = _FIELD_TYPES.get(name)
    if kind is None:
        raise ValueError(f"unknown scenario key: {name}")
    if kind == "bool":
        lowered = text.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"bad boolean for {name}: {text!r}")
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text.strip()


def load_config(path, overrides: dict | None = None) -> ScenarioConfig:
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            name, _, text = line.partition("=")
            name = name.strip()
            values[name] = parse_value(name, text.strip())
    if overrides:
        values.update(overrides)
    return ScenarioConfig.from_dict(values)


def save_config(config: ScenarioConfig, path) -> None:
    with open(path, "w") as fh:
        fh.write("# scenario configuration\n")
        fh.write(config.canonical_text())
