"""Random instances used by the test-suite, the acceptance run and ``selftest``."""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from .moebius import Matrix2C
from .representation import INF, BoundaryMeasure, HerglotzFunction, RationalDensity


def real_automatrix(rng: np.random.Generator, max_cond=30.0) -> np.ndarray:
    """Random real 2x2 matrix with positive determinant and moderate condition number."""
    while True:
        R = rng.normal(size=(2, 2))
        if np.linalg.det(R) < 0:
            R[0] *= -1
        if np.linalg.cond(R) <= max_cond:
            return R


def _disk_matrix(rho, gamma):
    """Maps C+ onto the disk of radius ``rho`` about ``i gamma``."""
    return np.array([[rho + 1j * gamma, -gamma - 1j * rho], [1, 1j]])


def noncontact(rng, kappa=None) -> Matrix2C:
    kappa = rng.uniform(0.1, 0.9) if kappa is None else kappa
    gamma = rng.uniform(0.5, 2.0)
    M0 = _disk_matrix(kappa * gamma, gamma)
    return Matrix2C.of(real_automatrix(rng) @ M0 @ real_automatrix(rng))


def contact_circle(rng) -> Matrix2C:
    gamma = rng.uniform(0.5, 2.0)
    M0 = _disk_matrix(gamma, gamma)
    return Matrix2C.of(real_automatrix(rng) @ M0 @ real_automatrix(rng))


def contact_line(rng) -> Matrix2C:
    r = rng.uniform(0.1, 2.0)
    return Matrix2C.of(np.array([[1, 1j * r], [0, 1]]) @ real_automatrix(rng))


def real_orbit(rng) -> Matrix2C:
    return Matrix2C.of(real_automatrix(rng))


def endomatrix(rng, kind: str) -> Matrix2C:
    return {
        "real-orbit": real_orbit,
        "non-contact": noncontact,
        "contact-circle": contact_circle,
        "contact-line": contact_line,
    }[kind](rng)


def rational_density(rng, mass=None) -> RationalDensity:
    """Random positive rational density with one or two conjugate pole pairs."""
    k = int(rng.integers(1, 3))
    den = np.ones(1)
    for _ in range(k):
        a, b = rng.normal(0, 1.5), rng.uniform(0.3, 2.0)
        den = P.polymul(den, [a * a + b * b, -2 * a, 1.0])
    num = np.ones(1)
    for _ in range(k - 1):
        e, f = rng.normal(0, 1.5), rng.uniform(0.1, 2.0)
        num = P.polymul(num, [e * e + f * f, -2 * e, 1.0])
    r = RationalDensity(tuple(num), tuple(den))
    target = rng.uniform(0.2, 2.0) if mass is None else mass
    return RationalDensity(tuple(np.array(r.num) * target / r.mass), r.den)


def herglotz_function(rng, max_atoms=5, with_density=True, allow_inf=True) -> HerglotzFunction:
    n = int(rng.integers(0, max_atoms + 1))
    locs = list(rng.normal(0, 2.0, size=n))
    if allow_inf and n and rng.random() < 0.3:
        locs[0] = INF
    atoms = tuple((s, rng.uniform(0.1, 2.0)) for s in locs)
    dens = rational_density(rng) if with_density or not atoms else None
    return HerglotzFunction(float(rng.normal()), BoundaryMeasure(atoms, dens))


def upper_points(rng, n, scale=2.0):
    x = rng.normal(0, scale, size=n)
    y = np.exp(rng.uniform(np.log(0.05), np.log(5.0), size=n))
    return x + 1j * y


def rational_instance(rng, delta=0.0, n_real=None, n_lower=None):
    """``a z + b + i c + sum c_j/(s_j - z) + psi`` with ``c = -min Im psi + delta``.

    Returns the function together with ``c`` and ``min Im psi``.
    """
    from . import _poly
    from .rational import RationalFunction, min_im_psi

    n_real = int(rng.integers(0, 4)) if n_real is None else n_real
    n_lower = int(rng.integers(1, 3)) if n_lower is None else n_lower
    a = float(rng.uniform(0, 2)) if rng.random() < 0.7 else 0.0
    b = float(rng.normal())
    parts = [(complex(s), np.array([-rng.uniform(0.1, 2.0)])) for s in rng.normal(0, 2, n_real)]
    lower = [(complex(rng.normal(0, 2), -rng.uniform(0.2, 2.0)), np.array([complex(*rng.normal(size=2))]))
             for _ in range(n_lower)]
    psi = None
    if lower:
        pn, pd = _poly.assemble(lower)
        psi = RationalFunction(tuple(pn), tuple(pd))
    m, _ = min_im_psi(psi)
    c = -m + delta
    num, den = _poly.assemble(parts + lower) if parts or lower else (np.zeros(1), np.ones(1))
    poly = np.array([b + 1j * c, a])
    num = P.polyadd(num, P.polymul(poly, den))
    return RationalFunction(tuple(num), tuple(den)), c, m
