"""Immutable formula-tree nodes with a structural hash computed once."""

from __future__ import annotations

from dataclasses import dataclass


def hashed_node(cls=None, *, check=None):
    """Turn ``cls`` into a frozen dataclass whose hash is cached in ``_h``.

    Subclasses declare ``_h: int = field(default=0, init=False, compare=False)``.
    ``check(self)`` runs first and may raise on invalid arguments.
    """
    if cls is None:
        return lambda c: hashed_node(c, check=check)
    keys = [k for k in cls.__dict__.get("__annotations__", {}) if k != "_h"]
    name = cls.__name__

    def __post_init__(self):
        if check is not None:
            check(self)
        object.__setattr__(self, "_h", hash((name, *(getattr(self, k) for k in keys))))

    def __repr__(self):
        return f"{name}({', '.join(repr(getattr(self, k)) for k in keys)})"

    cls.__post_init__ = __post_init__
    cls.__repr__ = __repr__
    cls.__hash__ = lambda self: self._h
    return dataclass(frozen=True, repr=False)(cls)
