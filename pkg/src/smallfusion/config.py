"""Caps that bound every exhaustive computation.

Defaults can be overridden through the ``SMALLFUSION_CAPS`` environment
variable using the same ``key=value,key=value`` syntax accepted by the CLI's
``--caps`` flag, e.g. ``SMALLFUSION_CAPS="order=512,fusion=128"``.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace

ENV_VAR = "SMALLFUSION_CAPS"


@dataclass(frozen=True)
class Caps:
    order: int = 2**12       # largest group table that may be built
    subgroups: int = 2**6    # all_subgroups enumeration
    aut: int = 2**7          # full automorphism-group computation
    fusion: int = 2**6       # fusion-system generation / enumeration
    budget: int = 2_000_000  # node budget for odd-automorphism lift searches

    def with_overrides(self, text: str | None) -> "Caps":
        if not text:
            return self
        known = {f.name for f in fields(self)}
        updates = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"unknown cap setting {item!r}; known: {sorted(known)}")
            updates[key] = _parse_int(value.strip())
        return replace(self, **updates)

    def describe(self) -> str:
        return ",".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self))


def _parse_int(text: str) -> int:
    if "^" in text:
        base, exp = text.split("^")
        return int(base) ** int(exp)
    return int(text)


_current = Caps().with_overrides(os.environ.get(ENV_VAR))


def get_caps() -> Caps:
    return _current


def set_caps(caps: Caps) -> Caps:
    """Install ``caps`` as the process-wide default and return the previous value."""
    global _current
    previous = _current
    _current = caps
    return previous


@contextmanager
def using_caps(**overrides: int):
    """Temporarily raise or lower individual caps."""
    previous = set_caps(replace(_current, **overrides))
    try:
        yield _current
    finally:
        set_caps(previous)
