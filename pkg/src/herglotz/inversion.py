"""Recovering a representing measure from values of the function in C+.

All boundary limits are taken along geometric sequences and accelerated by
Richardson extrapolation in the step variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NoConvergence, ViolationDetected
from .representation import INF, BoundaryMeasure, ExtendedReal

LEVELS = 12
Y_START = 0.1


def y_sequence(start=Y_START, levels=LEVELS, ratio=0.5) -> np.ndarray:
    return start * ratio ** np.arange(levels)


@dataclass(frozen=True)
class StoltzSector:
    """``apex + {x + iy : |x| < y tan(aperture)}``; the apex may be ``INF``."""

    apex: ExtendedReal
    aperture: float

    def __post_init__(self):
        if not 0.0 < self.aperture < math.pi / 2:
            raise ValueError("aperture must lie in (0, pi/2)")


@dataclass(frozen=True)
class BoundarySupportEstimate:
    """Sorted disjoint closed intervals; ``(INF, INF)`` stands for the point at infinity."""

    intervals: Tuple[Tuple[ExtendedReal, ExtendedReal], ...]
    threshold: float

    @property
    def finite(self):
        return [iv for iv in self.intervals if iv[0] is not INF]

    @property
    def has_infinity(self) -> bool:
        return any(iv[0] is INF for iv in self.intervals)

    def contains(self, x, margin=0.0) -> bool:
        if x is INF:
            return self.has_infinity
        return any(a - margin <= x <= b + margin for a, b in self.finite)

    def to_json(self):
        return {
            "intervals": [["inf", "inf"] if a is INF else [a, b] for a, b in self.intervals],
            "threshold": self.threshold,
            "heuristic": True,
        }


@dataclass
class Extrapolation:
    value: complex
    error: float
    table: List[List[complex]] = field(repr=False, default_factory=list)


def richardson(values: Sequence[complex], ratio=0.5, scale_floor=1e-300) -> Extrapolation:
    """Extrapolate ``values[k] = F(h_k)``, ``h_k = h_0 ratio^k``, to ``h = 0``.

    The Neville table eliminates ``h, h^2, ...`` in turn.  The returned value
    is the table entry whose difference to its predecessor in the same
    column is smallest, and that difference is the error estimate.

    NoConvergence is raised when the first-order extrapolants run away: a
    jump by more than 1e3 times the previous difference on two consecutive
    levels, or steady growth by more than 1.5 times on three consecutive
    levels (the signature of a ``1/h`` singularity such as an atom).
    """
    v = [complex(x) for x in values]
    if len(v) < 3:
        raise ValueError("need at least three levels")
    q = 1.0 / ratio
    table = [[v[0]]]
    for k in range(1, len(v)):
        row = [v[k]]
        for j in range(1, k + 1):
            f = q ** j
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (f - 1.0))
        table.append(row)

    scale = max(max(abs(x) for x in v), scale_floor)
    diffs = [abs(table[k][1] - table[k - 1][1]) for k in range(2, len(v))]
    noise = 1e-9 * scale
    jumps = growth = 0
    for a, b in zip(diffs, diffs[1:]):
        big = b > noise
        jumps = jumps + 1 if big and b > 1e3 * max(a, scale_floor) else 0
        growth = growth + 1 if big and b > 1.5 * a else 0
        if jumps >= 2 or growth >= 3:
            raise NoConvergence(f"extrapolants diverge (last difference {b:.3g})")

    best, err = table[-1][0], abs(table[-1][0] - table[-2][0])
    for k in range(2, len(v)):
        for j in range(1, k):
            e = abs(table[k][j] - table[k - 1][j])
            if e < err:
                best, err = table[k][j], e
    return Extrapolation(best, err, table)


def _vals(evaluator, z):
    z = np.asarray(z, dtype=complex)
    try:
        out = np.asarray(evaluator(z), dtype=complex)
        if out.shape == z.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(evaluator(complex(w))) for w in z])


def density_at(evaluator: Callable, x: float, y_seq=None, with_error=False):
    """Stieltjes inversion: ``lim Im f(x+iy) / (pi (1 + x^2))`` as ``y -> 0``.

    Returns the extrapolated density, or ``(value, error)`` when
    ``with_error`` is set.
    """
    y = y_sequence() if y_seq is None else np.asarray(y_seq, dtype=float)
    _check_seq(y)
    vals = _vals(evaluator, x + 1j * y).imag / (math.pi * (1.0 + x * x))
    ex = richardson(vals, ratio=_ratio(y))
    val = float(ex.value.real)
    return (val, ex.error) if with_error else val


def mass_at_infinity(evaluator: Callable, y_seq=None, with_error=False):
    """``lim Im f(iy) / y`` as ``y -> inf``, extrapolated in ``1/y``."""
    h = y_sequence() if y_seq is None else 1.0 / np.asarray(y_seq, dtype=float)
    y = 1.0 / h
    vals = _vals(evaluator, 1j * y).imag / y
    ex = richardson(vals, ratio=_ratio(h))
    val = float(ex.value.real)
    return (val, ex.error) if with_error else val


def atom_mass_at(evaluator: Callable, c: float, y_seq=None, with_error=False):
    """``lim y f(c+iy) / (i (1 + c^2))`` as ``y -> 0``: the mass of an atom at ``c``."""
    y = y_sequence() if y_seq is None else np.asarray(y_seq, dtype=float)
    _check_seq(y)
    vals = y * _vals(evaluator, c + 1j * y) / (1j * (1.0 + c * c))
    ex = richardson(vals, ratio=_ratio(y))
    val = float(ex.value.real)
    return (val, ex.error) if with_error else val


def deflated(evaluator: Callable, atoms: Sequence[Tuple[float, float]]) -> Callable:
    """``f`` minus the atomic terms ``m (1 + s z)/(s - z)`` of the given ``(s, m)`` pairs."""
    atoms = [(float(s), float(m)) for s, m in atoms]

    def g(z):
        z = np.asarray(z, dtype=complex)
        out = _vals(evaluator, z)
        for s, m in atoms:
            out = out - m * (1.0 + s * z) / (s - z)
        return out

    return g


def _check_seq(y):
    if len(y) < 3 or np.any(y <= 0) or np.any(np.diff(y) >= 0):
        raise ValueError("y sequence must be positive, strictly decreasing, length >= 3")


def _ratio(h):
    r = h[1:] / h[:-1]
    if np.ptp(r) > 1e-9 * r[0]:
        raise ValueError("Richardson extrapolation needs a geometric sequence")
    return float(r[0])


# --------------------------------------------------------------------------
# Stoltz sectors


@dataclass
class StoltzReport:
    sector: StoltzSector
    decades: List[float]
    decade_max: List[float]
    final_max: float
    supremum: float
    threshold: float
    witness: complex
    passed: bool

    def to_json(self):
        return {
            "apex": "inf" if self.sector.apex is INF else self.sector.apex,
            "aperture": self.sector.aperture,
            "decade_max": self.decade_max,
            "final_max": self.final_max,
            "bounded_supremum": self.supremum,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _atom_mass(lam: BoundaryMeasure, loc) -> float:
    for s, m in lam.atoms:
        if (s is INF and loc is INF) or (s is not INF and loc is not INF and s == loc):
            return m
    return 0.0


def stoltz_verify(evaluator: Callable, lam: BoundaryMeasure, sector: StoltzSector, samples=8,
                  b=1.0, decades=6, rays=5, threshold=1e-3, raise_on_failure=True) -> StoltzReport:
    """Probe the non-tangential boundary limits inside a Stoltz sector.

    At the apex ``INF`` the residual is ``(f(z) - lam({inf}) z) / y`` for
    ``y`` from ``b`` up to ``b 10^decades``; at a real apex ``c`` it is
    ``y (f(z) + lam({c}) (1 + c^2)/(z - c))`` for ``y`` from ``b`` down to
    ``b 10^-decades``.  The same points give the supremum of ``|f|/y``
    (respectively ``y |f|``), whose boundedness is also asserted.
    """
    ang = np.linspace(-0.95, 0.95, rays) * sector.aperture
    k = np.arange(decades * samples + 1) / samples
    c = sector.apex
    if c is INF:
        y = b * 10.0 ** k
    else:
        y = b * 10.0 ** (-k)
    Y = np.repeat(y[:, None], rays, axis=1)
    X = Y * np.tan(ang)[None, :]
    if c is INF:
        z = X + 1j * Y
        f = _vals(evaluator, z.ravel()).reshape(z.shape)
        resid = np.abs((f - _atom_mass(lam, INF) * z) / Y)
        bounded = np.abs(f / Y)
    else:
        z = c + X + 1j * Y
        f = _vals(evaluator, z.ravel()).reshape(z.shape)
        m = _atom_mass(lam, float(c))
        resid = np.abs(Y * (f + m * (1.0 + c * c) / (z - c)))
        bounded = np.abs(Y * f)
    per_level = resid.max(axis=1)
    decade_max = [float(per_level[i * samples:(i + 1) * samples + 1].max()) for i in range(decades)]
    last = slice((decades - 1) * samples, decades * samples + 1)
    final = float(per_level[last].max())
    idx = np.unravel_index(np.argmax(np.where(np.arange(len(y))[:, None] >= last.start, resid, -1.0)), resid.shape)
    witness = complex(z[idx])
    slack = 1e-12 + 1e-9 * max(decade_max)
    monotone = all(b2 <= a2 * (1 + 1e-6) + slack for a2, b2 in zip(decade_max, decade_max[1:]))
    sup = float(np.max(bounded))
    passed = bool(final <= threshold and monotone and np.isfinite(sup))
    report = StoltzReport(sector, [float(v) for v in 10.0 ** np.arange(decades)], decade_max, final,
                          sup, threshold, witness, passed)
    if not passed and raise_on_failure:
        why = "residual above threshold" if final > threshold else "residual does not decay monotonically"
        raise ViolationDetected(f"Stoltz limit check failed: {why}", point=witness, value=final)
    return report


# --------------------------------------------------------------------------
# support


def support_estimate(evaluator: Callable, grid: Sequence[float], y_probe=1e-4, threshold=1e-2) -> BoundarySupportEstimate:
    """Heuristic boundary support on the cells of ``grid``.

    A cell is marked when ``|Im f|`` at height ``y_probe`` over its end
    points or midpoint exceeds ``threshold``, or when the coarse atom
    estimate ``eta Im f(p + i eta) / (1 + p^2)``, ``eta = h/8``, at the
    quarter points ``p`` of a cell of width ``h`` does.  The latter
    catches atoms between grid points.
    Marked neighbouring cells are merged; infinity is added when the mass
    at infinity exceeds ``threshold``.
    """
    g = np.asarray(grid, dtype=float)
    if len(g) < 2 or np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing with at least two points")
    mid = 0.5 * (g[1:] + g[:-1])
    h = np.diff(g)
    at_nodes = np.abs(_vals(evaluator, g + 1j * y_probe).imag) > threshold
    at_mid = np.abs(_vals(evaluator, mid + 1j * y_probe).imag) > threshold
    coarse = np.zeros(len(h), dtype=bool)
    eta = h / 8
    for frac in (0.25, 0.5, 0.75):
        p = g[:-1] + frac * h
        coarse |= eta * _vals(evaluator, p + 1j * eta).imag / (1.0 + p * p) > threshold
    marked = at_nodes[:-1] | at_nodes[1:] | at_mid | coarse
    intervals: List[Tuple[ExtendedReal, ExtendedReal]] = []
    i = 0
    while i < len(marked):
        if marked[i]:
            j = i
            while j + 1 < len(marked) and marked[j + 1]:
                j += 1
            intervals.append((float(g[i]), float(g[j + 1])))
            i = j + 1
        else:
            i += 1
    try:
        inf_mass = mass_at_infinity(evaluator)
    except NoConvergence:
        inf_mass = math.inf
    if inf_mass > threshold:
        intervals.append((INF, INF))
    return BoundarySupportEstimate(tuple(intervals), float(threshold))


def invert(evaluator: Callable, grid: Sequence[float], atoms: Optional[Sequence[float]] = None,
           threshold=1e-2, y_probe=1e-4) -> dict:
    """Measure estimate on ``grid``: densities, atom masses and the mass at infinity.

    ``atoms`` lists candidate atom locations.  Their masses are estimated
    first and the atomic terms are removed before the density is
    inverted, so grid points close to an atom stay accurate.  Points where
    the density limit does not settle are reported as ``null``.
    """
    found = []
    for c in atoms or ():
        try:
            found.append({"loc": float(c), "mass": atom_mass_at(evaluator, float(c))})
        except NoConvergence:
            found.append({"loc": float(c), "mass": None})
    smooth = deflated(evaluator, [(a["loc"], a["mass"]) for a in found if a["mass"] is not None])
    dens = []
    for x in grid:
        try:
            v, e = density_at(smooth, float(x), with_error=True)
            dens.append({"x": float(x), "density": v, "error": e})
        except NoConvergence:
            dens.append({"x": float(x), "density": None, "error": None})
    try:
        minf = mass_at_infinity(evaluator)
    except NoConvergence:
        minf = None
    support = support_estimate(evaluator, grid, y_probe=y_probe, threshold=threshold)
    return {"density": dens, "atoms": found, "mass_at_infinity": minf, "support": support.to_json()}


__all__ = [
    "StoltzSector",
    "BoundarySupportEstimate",
    "StoltzReport",
    "Extrapolation",
    "richardson",
    "deflated",
    "y_sequence",
    "density_at",
    "mass_at_infinity",
    "atom_mass_at",
    "stoltz_verify",
    "support_estimate",
    "invert",
]
