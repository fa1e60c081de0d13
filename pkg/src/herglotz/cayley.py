"""Passing between the unit disk and the upper half-plane.

``w = i (1 - z)/(1 + z)`` maps the disk onto C+ and the boundary point
``e^{it}`` to ``tan(t/2)``.  A disk function ``f`` with Herglotz data
``(mu, Im f(0))`` corresponds to the half-plane function ``phi(w) = i f(z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .evaluation import evaluate
from ._quad import gauss_kronrod
from .representation import INF, BoundaryMeasure, HerglotzFunction, RationalDensity


def disk_to_halfplane(z):
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    if np.any(np.abs(z) >= 1):
        raise ValueError("point outside the open unit disk")
    return 1j * (1 - z) / (1 + z)


def halfplane_to_disk(w):
    w = np.asarray(w, dtype=complex) if np.ndim(w) else complex(w)
    if np.any(np.imag(w) <= 0):
        raise ValueError("point outside the upper half-plane")
    return (1j - w) / (1j + w)


def boundary_param(t: float):
    """``tan(t/2)`` for ``t`` in ``(-pi, pi]``; ``t = pi`` gives ``INF``."""
    t = float(t)
    if not -math.pi < t <= math.pi:
        raise ValueError("angle must lie in (-pi, pi]")
    if t == math.pi:
        return INF
    return math.tan(0.5 * t)


@dataclass(frozen=True)
class DiskMeasure:
    """Finite positive measure on the circle, in the angle ``t``.

    ``density`` is either ``None``, a constant (a multiple of ``dt``) or a
    callable ``g(t)`` for ``g(t) dt``.
    """

    atoms: Tuple[Tuple[float, float], ...] = ()
    density: object = None

    def density_fn(self) -> Optional[Callable]:
        g = self.density
        if g is None:
            return None
        if callable(g):
            return g
        level = float(g)
        return lambda t: np.full(np.shape(t), level)

    @property
    def total_mass(self) -> float:
        total = sum(m for _, m in self.atoms)
        g = self.density_fn()
        if g is not None:
            total += gauss_kronrod(lambda t: np.asarray(g(t), dtype=float), [-math.pi, math.pi], 1e-12)[0]
        return float(total)


def disk_evaluate(mu: DiskMeasure, imag_at_zero: float, z, tol=1e-12):
    """``i Im f(0) + (1/2pi) int (e^{it} + z)/(e^{it} - z) mu(dt)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.full(z.shape, 1j * imag_at_zero)
    for t, m in mu.atoms:
        zeta = np.exp(1j * t)
        out += m / (2 * math.pi) * (zeta + z) / (zeta - z)
    g = mu.density_fn()
    if g is not None:
        for k, zk in enumerate(z):
            def h(t, zk=zk):
                zeta = np.exp(1j * t)
                return np.asarray(g(t), dtype=float) * (zeta + zk) / (zeta - zk)
            cut = [-math.pi, math.pi]
            if zk != 0:
                a = float(np.angle(zk))
                if -math.pi < a < math.pi:
                    cut = [-math.pi, a, math.pi]
            re = gauss_kronrod(lambda t: h(t).real, cut, tol)[0]
            im = gauss_kronrod(lambda t: h(t).imag, cut, tol)[0]
            out[k] += (re + 1j * im) / (2 * math.pi)
    return out


def transfer_disk_measure(mu: DiskMeasure, imag_at_zero: float, check_points=10, tol=1e-8,
                          rng=None) -> HerglotzFunction:
    """Half-plane representation of ``phi(w) = i f(z)``.

    Atoms move to ``tan(t/2)`` with mass divided by ``2 pi``.  A density
    ``g(t) dt`` becomes ``g(2 atan s) / (pi (1 + s^2)) ds``: exact for a
    constant ``g``, sampled onto a grid otherwise.  ``phi(i) = i f(0)``
    fixes the constant as ``-Im f(0)``.  The identity ``phi(w) = i f(z)``
    is asserted at ``check_points`` random points.
    """
    atoms = []
    for t, m in mu.atoms:
        if m < 0:
            raise ValueError("negative atom mass")
        atoms.append((boundary_param(t), m / (2 * math.pi)))
    dens = None
    g = mu.density
    if g is not None:
        if not callable(g):
            if float(g) < 0:
                raise ValueError("negative density")
            if float(g) > 0:
                dens = RationalDensity.cauchy(float(g))
        else:
            from .transform import sample_density

            def rho(s):
                s = np.asarray(s, dtype=float)
                return np.asarray(g(2.0 * np.arctan(s)), dtype=float) / (math.pi * (1.0 + s * s))

            dens = sample_density(rho, tol=1e-10)
    phi = HerglotzFunction(-float(imag_at_zero), BoundaryMeasure(tuple(atoms), dens))
    if check_points:
        rng = np.random.default_rng(0) if rng is None else rng
        r = np.sqrt(rng.uniform(0, 0.8, check_points))
        z = r * np.exp(1j * rng.uniform(-math.pi, math.pi, check_points))
        lhs = 1j * disk_evaluate(mu, imag_at_zero, z)
        rhs = evaluate(phi, disk_to_halfplane(z))
        dev = float(np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs))))
        if dev > tol:
            raise AssertionError(f"disk and half-plane evaluations disagree by {dev:.3g}")
    return phi


__all__ = [
    "disk_to_halfplane",
    "halfplane_to_disk",
    "boundary_param",
    "DiskMeasure",
    "disk_evaluate",
    "transfer_disk_measure",
]
