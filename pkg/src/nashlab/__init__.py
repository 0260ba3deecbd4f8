"""Numerical laboratory for improved Nash inequalities and enstrophy dissipation in 2D."""
from __future__ import annotations

__version__ = "0.1.0"
