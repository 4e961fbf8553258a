"""Process-wide numerical defaults: pole-proximity guard and product cutoff."""
from __future__ import annotations

from contextlib import contextmanager

_STATE = {"pole_guard": 1e-8, "factor_cutoff": 1e-15}


def get(name):
    return _STATE[name]


def resolve_guard(guard=None):
    """``guard`` itself, or the current default when it is None."""
    return _STATE["pole_guard"] if guard is None else float(guard)


def configure(**values):
    for k, v in values.items():
        if k not in _STATE:
            raise KeyError(f"unknown numerical setting {k!r}")
        _STATE[k] = float(v)


@contextmanager
def numerics(**values):
    """Temporarily override the defaults."""
    saved = dict(_STATE)
    try:
        configure(**values)
        yield
    finally:
        _STATE.clear()
        _STATE.update(saved)
