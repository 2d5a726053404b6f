"""Process-wide limits.

Values are read at call time, so ``configure`` affects subsequent operations
only.  Defaults keep prolongation and ansatz sizes at desk scale.
"""

from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Settings:
    max_jet_order: int = 12
    seed: int = 0
    max_ansatz_weight: int = 40
    max_ansatz_size: int = 5000


_current = Settings()


def settings() -> Settings:
    return _current


def configure(**changes) -> Settings:
    global _current
    _current = replace(_current, **changes)
    return _current


@contextmanager
def overridden(**changes):
    """Temporarily change settings (used by the CLI and by tests)."""
    global _current
    saved = _current
    _current = replace(_current, **changes)
    try:
        yield _current
    finally:
        _current = saved
