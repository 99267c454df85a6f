"""Flat key-value scenario files and the reproducibility manifest.

A scenario file is a version header line followed by `key = value` pairs;
'#' starts a comment. Values stay strings until a typed getter converts them,
so parse errors can point at the exact line.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

HEADER = "expansionlab-scenario v1"


class ScenarioError(ValueError):
    """Malformed scenario input; carries origin and line number."""

    def __init__(self, origin: str, line: int | None, message: str):
        where = origin if line is None else f"{origin}:{line}"
        super().__init__(f"{where}: {message}")
        self.origin = origin
        self.line = line


_REQUIRED = object()


@dataclass
class Scenario:
    """Parsed scenario: kind, name, and typed access to the raw keys."""

    origin: str
    kind: str
    name: str
    raw: dict = field(default_factory=dict)   # key -> (value string, line)
    text: str = ""

    def has(self, key: str) -> bool:
        return key in self.raw

    def get_str(self, key: str, default=_REQUIRED, choices=None) -> str:
        value = self._typed(key, default, str, "a string")
        if choices is not None and value not in choices:
            line = self.raw[key][1] if key in self.raw else None
            raise ScenarioError(self.origin, line,
                                f"key '{key}' must be one of {sorted(choices)}, "
                                f"got {value!r}")
        return value

    def get_float(self, key: str, default=_REQUIRED) -> float:
        return self._typed(key, default, float, "a real number")

    def get_int(self, key: str, default=_REQUIRED) -> int:
        return self._typed(key, default, _strict_int, "an integer")

    def get_int_list(self, key: str, default=_REQUIRED) -> list:
        def conv(s):
            return [_strict_int(p.strip()) for p in s.split(",") if p.strip()]

        return self._typed(key, default, conv, "a comma-separated integer list")

    def _typed(self, key, default, convert, description):
        if key not in self.raw:
            if default is not _REQUIRED:
                return default
            raise ScenarioError(self.origin, None,
                                f"missing required key '{key}'")
        value, line = self.raw[key]
        try:
            return convert(value)
        except (TypeError, ValueError):
            raise ScenarioError(self.origin, line,
                                f"key '{key}' must be {description}, "
                                f"got {value!r}") from None

    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


def _strict_int(s: str) -> int:
    if isinstance(s, str) and ("." in s or "e" in s.lower()):
        raise ValueError(s)
    return int(s)


def parse_scenario_text(text: str, origin: str = "<scenario>") -> Scenario:
    lines = text.splitlines()
    header_seen = False
    raw = {}
    for lineno, rawline in enumerate(lines, start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != HEADER:
                raise ScenarioError(origin, lineno,
                                    f"first line must be '{HEADER}', got {line!r}")
            header_seen = True
            continue
        if "=" not in line:
            raise ScenarioError(origin, lineno,
                                f"expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ScenarioError(origin, lineno, "empty key")
        if key in raw:
            raise ScenarioError(origin, lineno, f"duplicate key '{key}'")
        raw[key] = (value, lineno)
    if not header_seen:
        raise ScenarioError(origin, None, f"missing '{HEADER}' header")
    scn = Scenario(origin, "", "", raw, text)
    scn.kind = scn.get_str("kind", choices={"expand", "propagate", "gauge"})
    scn.name = scn.get_str("name")
    return scn


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario_text(text, origin=str(path))


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Checksums and tolerances for one command run; JSON on disk."""

    scenario_sha256: str
    tool_version: str
    command: str
    tolerance_scale: float = 1.0
    seed: int | None = None
    outputs: list = field(default_factory=list)

    def add_output(self, path):
        self.outputs.append({"path": str(path.name if hasattr(path, "name")
                                         else path),
                             "sha256": file_sha256(path)})

    def write(self, path):
        payload = {
            "scenario_sha256": self.scenario_sha256,
            "tool_version": self.tool_version,
            "command": self.command,
            "tolerance_scale": self.tolerance_scale,
            "seed": self.seed,
            "outputs": self.outputs,
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
