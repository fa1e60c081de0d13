"""Closed-form endofunction tests for affine and linear-fractional maps, and a sampled positivity probe."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .inversion import BoundarySupportEstimate


def linear_fractional_check(a: complex, b: complex, c: complex) -> bool:
    """Is ``z -> a/(z + c) + b`` an endofunction of C+?

    For ``gamma = Im c > 0`` the map ``w -> a/w`` sends ``{Im w > gamma}``
    onto a disk whose lowest imaginary part is ``-(|a| + Re a)/(2 gamma)``,
    whence ``|a| + Re a <= 2 Im b Im c``.  The same inequality covers
    ``Im b Im c = 0``, where it forces ``a < 0``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if a == 0:
        raise ValueError("a must be nonzero")
    return bool(b.imag >= 0 and c.imag >= 0 and abs(a) + a.real <= 2.0 * b.imag * c.imag)


def quadratic_form_check(a: complex, b: complex, c: complex) -> bool:
    """``beta x^2 + x Im a - gamma Re a + beta gamma^2 >= 0`` on R, for ``beta = Im b > 0``, ``gamma = Im c > 0``."""
    a, b, c = complex(a), complex(b), complex(c)
    beta, gamma = b.imag, c.imag
    if beta <= 0 or gamma <= 0:
        raise ValueError("needs Im b > 0 and Im c > 0")
    const = beta * gamma * gamma - gamma * a.real
    return bool(a.imag * a.imag <= 4.0 * beta * const)


def affine_check(a: complex, b: complex) -> bool:
    """Is ``z -> a z + b`` an endofunction (real constants excluded)?"""
    a, b = complex(a), complex(b)
    return bool(a.imag == 0 and a.real > 0 and b.imag >= 0)


def equality_gap(a, b, c) -> float:
    """Signed distance-like gap ``2 Im b Im c - |a| - Re a`` to the boundary of the linear-fractional criterion."""
    a, b, c = complex(a), complex(b), complex(c)
    return 2.0 * b.imag * c.imag - abs(a) - a.real


@dataclass
class PositivityReport:
    passed: bool
    minimum: float
    witness: Optional[complex]
    samples: int
    note: str = "sampling evidence for Im f >= 0 near the support, not a proof"

    def to_json(self):
        w = self.witness
        return {
            "passed": self.passed,
            "minimum": self.minimum,
            "witness": None if w is None else [w.real, w.imag],
            "samples": self.samples,
            "note": self.note,
        }


def localized_positivity_check(evaluator: Callable, support: BoundarySupportEstimate, margin=0.1, grid=200,
                               floor=-1e-12) -> PositivityReport:
    """Sample ``Im f`` on ``{x + iy : dist(x, support) <= margin, 0 < y <= margin}``.

    A neighbourhood of infinity, when infinity belongs to the support, is
    sampled in the chart ``w = -1/z`` on the same box around ``w = 0``.
    Passes when every sample is at least ``floor``.
    """
    if margin <= 0 or grid < 2:
        raise ValueError("margin must be positive and grid at least 2")
    y = margin * np.geomspace(1e-6, 1.0, grid)
    pts = []
    for lo, hi in support.finite:
        lo = max(lo, -1.0 / margin) if math.isinf(lo) else lo
        hi = min(hi, 1.0 / margin) if math.isinf(hi) else hi
        n = max(grid, int(grid * (hi - lo + 2 * margin) / (2 * margin)))
        x = np.linspace(lo - margin, hi + margin, min(n, 10 * grid))
        pts.append((x[None, :] + 1j * y[:, None]).ravel())
    if support.has_infinity:
        u = np.linspace(-margin, margin, grid)
        w = (u[None, :] + 1j * y[:, None]).ravel()
        pts.append(-1.0 / w)
    if not pts:
        return PositivityReport(True, math.inf, None, 0, "empty support: nothing to sample")
    z = np.concatenate(pts)
    with np.errstate(all="ignore"):
        v = np.asarray(evaluator(z), dtype=complex).imag
    v = np.where(np.isnan(v), np.inf, v)
    k = int(np.argmin(v))
    ok = bool(v[k] >= floor)
    return PositivityReport(ok, float(v[k]), None if ok else complex(z[k]), len(z))


__all__ = [
    "linear_fractional_check",
    "quadratic_form_check",
    "affine_check",
    "equality_gap",
    "PositivityReport",
    "localized_positivity_check",
]
