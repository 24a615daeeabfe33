"""Exact effective cones of divisors on blowups of products of projective spaces."""
from __future__ import annotations

__version__ = "0.1.0"
