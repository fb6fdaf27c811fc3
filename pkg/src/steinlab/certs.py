"""Certificate records and the versioned golden-value store.

Every expected value a suite compares against comes from golden.json and
carries a source tag; the driver never hard-codes an untagged constant.
Certificates serialize deterministically (sorted keys), so identical requests
produce byte-identical files apart from the wall-clock field.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources

_golden_cache = None


def golden() -> dict:
    global _golden_cache
    if _golden_cache is None:
        with resources.files("steinlab").joinpath("golden.json").open() as fh:
            _golden_cache = json.load(fh)
    return _golden_cache


def expected(section: str, key: str) -> dict:
    """One tagged expected value, as {'value': ..., 'source': ...}."""
    table = golden()[section]
    if key not in table:
        raise KeyError(f"no golden value for {section}[{key}]")
    return table[key]


def tau_order_expected(p: int) -> dict:
    return expected("tau_order", "p=2" if p == 2 else "p>2")


@dataclass
class Certificate:
    suite: str
    parameters: dict
    computed: dict
    expected: dict
    ok: bool
    wall_ms: int = 0
    version: str = ""
    kernel: str = ""
    signs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "suite": self.suite,
            "parameters": self.parameters,
            "computed": self.computed,
            "expected": self.expected,
            "pass": self.ok,
            "wall_ms": self.wall_ms,
            "version": self.version,
            "kernel": self.kernel,
        }
        if self.signs:
            payload["signs"] = self.signs
        return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".cert-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
