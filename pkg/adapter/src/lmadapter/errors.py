"""Adapter error type."""

from __future__ import annotations


class AdapterError(Exception):
    """Bad configuration, malformed input files, or a failed run."""
