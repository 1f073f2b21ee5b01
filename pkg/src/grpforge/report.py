"""Report objects shared by the command-line tools."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from grpforge import __version__
from grpforge.fp import factorize

SCHEMA = 1


def factored(n: int | dict) -> dict:
    """``{"value": "2^6*5^11", "factors": {"2": 6, "5": 11}}``; exact for any size."""
    fac = factorize(n) if isinstance(n, int) else {int(k): int(v) for k, v in n.items() if v}
    text = "*".join(f"{r}^{e}" if e > 1 else str(r) for r, e in sorted(fac.items())) or "1"
    return {"value": text, "factors": {str(r): e for r, e in sorted(fac.items())}}


def _plain(x):
    """Make numpy scalars, tuples and sets JSON friendly."""
    import numpy as np

    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return x


@dataclass
class Report:
    command: list[str]
    spec: str | None = None
    seed: int | None = None
    primes: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    fingerprint: str | None = None
    timings: dict = field(default_factory=dict)
    _t0: float = field(default_factory=time.monotonic, repr=False)

    def order(self, name: str, n) -> None:
        self.orders[name] = factored(n)

    def check(self, name: str, passed: bool, witness: Any = None, **extra) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        if witness is not None:
            entry["witness"] = _plain(witness)
        entry.update(_plain(extra))
        self.checks.append(entry)
        return bool(passed)

    def timed(self, name: str, start: float) -> None:
        self.timings[name] = round(time.monotonic() - start, 3)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        self.timings.setdefault("total", round(time.monotonic() - self._t0, 3))
        return {
            "schema": SCHEMA,
            "tool": "grpforge",
            "version": __version__,
            "command": self.command,
            "spec": self.spec,
            "seed": self.seed,
            "primes": self.primes,
            "orders": self.orders,
            "checks": self.checks,
            "data": _plain(self.data),
            "fingerprint": self.fingerprint,
            "timings": self.timings,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def render(self) -> str:
        lines = [" ".join(["grpforge"] + self.command)]
        if self.spec:
            lines.append(f"  group: {self.spec}")
        if self.primes:
            lines.append("  primes: " + ", ".join(f"{k}={v}" for k, v in self.primes.items()))
        for name, o in self.orders.items():
            lines.append(f"  |{name}| = {o['value']}")
        for key, val in self.data.items():
            lines.append(f"  {key}: {_plain(val)}")
        for c in self.checks:
            mark = "PASS" if c["passed"] else "FAIL"
            extra = f"  witness={c['witness']}" if "witness" in c else ""
            lines.append(f"  [{mark}] {c['name']}{extra}")
        lines.append("  result: " + ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)
