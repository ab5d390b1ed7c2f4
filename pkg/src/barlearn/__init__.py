"""Active learning of bar languages over finite bar alphabets."""

from __future__ import annotations

__version__ = "0.1.0"
