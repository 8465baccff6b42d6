"""Finite checks for cloaks, fusion morphisms and the Hopf property in magmal categories."""
from __future__ import annotations

__version__ = "0.1.0"
