"""Finite-difference derivatives with one Richardson extrapolation step.

The five-point rule below combines central differences at steps h and h/2,
cancelling the O(h^2) error term, so the truncation error is O(h^4).
Works for real- and complex-valued functions alike.
"""

from __future__ import annotations

from typing import Callable


def richardson_derivative(f: Callable[[float], complex], x: float, h: float) -> complex:
    """d/dx f at x: central differences at h and h/2, Richardson-combined."""
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    d_h = (f(x + h) - f(x - h)) / (2.0 * h)
    d_half = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h
    return (4.0 * d_half - d_h) / 3.0
