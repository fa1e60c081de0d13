"""Evaluation of atomic endofunctions and Herglotz functions off the real axis."""

from __future__ import annotations


import numpy as np

from .representation import DEFAULT_TOL, INF, HerglotzFunction, herglotz_quadrature


def eval_atomic(s, z):
    """``(1 + s z)/(s - z)``, and ``z`` itself for ``s = INF``."""
    if s is INF:
        return z
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    return (1.0 + s * z) / (s - z)


def evaluate(phi: HerglotzFunction, z, tol=DEFAULT_TOL, method="closed"):
    """Value of ``phi`` at ``z`` (scalar or array, no point on the real axis).

    ``method="closed"`` integrates the density part exactly (residues for
    rational densities, logarithms for grids); ``"quadrature"`` uses
    adaptive Gauss-Kronrod with the range split at ``Re z``.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zz.imag == 0):
        raise ValueError("evaluation point must not be real")
    out = np.full(zz.shape, complex(phi.alpha))
    for s, m in phi.measure.atoms:
        out += m * eval_atomic(s, zz)
    dens = phi.measure.density
    if dens is not None:
        if method == "closed":
            out += dens.herglotz(zz)
        elif method == "quadrature":
            up = zz.imag > 0
            w = np.where(up, zz, np.conj(zz))
            val = herglotz_quadrature(dens, w, tol)
            out += np.where(up, val, np.conj(val))
        else:
            raise ValueError(f"unknown method {method!r}")
    return complex(out[0]) if scalar else out


def eval_composed(phi: HerglotzFunction, M, z, tol=DEFAULT_TOL):
    """``phi(M.z)`` evaluated directly; the reference value for transformed representations."""
    from .moebius import apply_array

    w = apply_array(M, np.asarray(z, dtype=complex))
    return evaluate(phi, w if np.ndim(z) else complex(w), tol)


def normalisation_defect(phi: HerglotzFunction, tol=DEFAULT_TOL) -> float:
    """Distance of ``phi(i)`` from ``alpha + i * total mass``."""
    v = evaluate(phi, 1j, tol)
    return abs(v - complex(phi.alpha, phi.measure.total_mass))


__all__ = ["eval_atomic", "evaluate", "eval_composed", "normalisation_defect"]
